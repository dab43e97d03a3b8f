"""Initialize rbmvec package."""

__version__ = "0.1.0"
__description__ = "Item clustering with adapted RBM supervectors and agglomerative clustering"

from rbmvec.main import app

__all__ = ["app", "__version__"]
