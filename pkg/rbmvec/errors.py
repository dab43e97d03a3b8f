"""Exception hierarchy shared by every stage of the pipeline."""

from typing import Optional


class RbmVecError(Exception):
    """Base class for pipeline errors.

    ``exit_code`` is what the CLI returns when the error escapes a command;
    ``module`` prefixes the message so the failing stage is obvious.
    """

    exit_code: int = 1
    module: str = "rbmvec"

    def __init__(self, message: str, *, module: Optional[str] = None):
        super().__init__(message)
        if module is not None:
            self.module = module

    def __str__(self) -> str:
        message = self.args[0] if self.args else ""
        return f"[{self.module}] {message}"


# Usage / configuration (exit 2)
class ConfigError(RbmVecError):
    exit_code = 2


class InvalidConfig(ConfigError):
    module = "baselines"


class InvalidStop(ConfigError):
    module = "clustering"


# Data / format (exit 3)
class DataError(RbmVecError):
    exit_code = 3
    module = "features"


class EmptyInput(DataError):
    pass


class ShapeError(DataError):
    pass


class FormatError(DataError):
    """Unparseable input file; carries the line number or byte offset."""

    def __init__(
        self,
        message: str,
        *,
        path: Optional[str] = None,
        line: Optional[int] = None,
        offset: Optional[int] = None,
        module: Optional[str] = None,
    ):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message, module=module)
        self.path = path
        self.line = line
        self.offset = offset


class ItemMismatch(DataError, KeyError):
    module = "metrics"


# Numeric (exit 4)
class NumericError(RbmVecError):
    exit_code = 4


class DegenerateVector(NumericError):
    module = "clustering"

    def __init__(self, message: str, *, item_id: Optional[str] = None):
        super().__init__(message)
        self.item_id = item_id


class MatrixError(NumericError):
    module = "clustering"
