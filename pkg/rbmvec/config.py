"""Configuration models for training, baselines and the full pipeline."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from rbmvec.errors import ConfigError


class FeatureFormat(str, Enum):
    """On-disk feature file formats."""
    CSV = "csv"
    BINARY = "binary"


class TrainConfig(BaseModel):
    """Hyperparameters for one CD training run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epochs: int = Field(200, ge=0)
    learning_rate: float = Field(0.0005, gt=0)
    weight_decay: float = Field(0.0002, ge=0)
    batch_size: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    cd_steps: int = Field(1, ge=1)
    hidden_units: int = Field(400, ge=1)
    init_std: float = Field(0.01, ge=0)

    @classmethod
    def urbm_defaults(cls, **overrides: Any) -> "TrainConfig":
        """Universal-model settings: 200 epochs, lr 5e-4, wd 2e-4, batch 100."""
        values = dict(epochs=200, learning_rate=0.0005, weight_decay=0.0002, batch_size=100)
        values.update(overrides)
        return cls(**values)

    @classmethod
    def adapt_defaults(cls, **overrides: Any) -> "TrainConfig":
        """Per-item adaptation settings: 200 epochs, lr 5e-3, wd 2e-6, batch 64."""
        values = dict(epochs=200, learning_rate=0.005, weight_decay=0.000002, batch_size=64)
        values.update(overrides)
        return cls(**values)


class KMeansConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(..., ge=1)
    max_iters: int = Field(300, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    tol: float = Field(1e-6, ge=0)


class Linkage(str, Enum):
    SINGLE = "single"
    AVERAGE = "average"


class PipelineConfig(BaseModel):
    """Everything one end-to-end run needs.

    Exactly one stop rule (``threshold``, ``num_clusters`` or
    ``sweep``) must be set.
    """

    model_config = ConfigDict(extra="forbid")

    train_features: Optional[Path] = None
    test_features: Path
    labels: Optional[Path] = None
    output_dir: Path = Path("outputs")
    feature_format: FeatureFormat = FeatureFormat.CSV

    urbm: TrainConfig = Field(default_factory=TrainConfig.urbm_defaults)
    adapt: TrainConfig = Field(default_factory=TrainConfig.adapt_defaults)

    linkage: Linkage = Linkage.AVERAGE
    size_weighted: bool = False
    threshold: Optional[float] = None
    num_clusters: Optional[int] = Field(None, ge=1)
    sweep: Optional[List[float]] = None

    center: bool = True
    refit_mvn_on_test: bool = False
    evaluate: bool = False
    baseline: bool = False
    seed: int = Field(0, ge=0, lt=2**64)
    threads: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _one_stop_rule(self) -> "PipelineConfig":
        given = [x is not None for x in (self.threshold, self.num_clusters, self.sweep)]
        if sum(given) != 1:
            raise ValueError("exactly one of threshold, num_clusters or sweep must be set")
        if self.sweep is not None and not self.sweep:
            raise ValueError("sweep needs at least one threshold")
        return self

    @model_validator(mode="after")
    def _propagate_seed(self) -> "PipelineConfig":
        # one seed drives every random stream
        if self.urbm.seed != self.seed:
            self.urbm = self.urbm.model_copy(update={"seed": self.seed})
        if self.adapt.seed != self.seed:
            self.adapt = self.adapt.model_copy(update={"seed": self.seed})
        return self

    @property
    def train_path(self) -> Path:
        return self.train_features or self.test_features

    @classmethod
    def from_flat(cls, values: Mapping[str, Any]) -> "PipelineConfig":
        """Build from a flat mapping where ``urbm_*``/``adapt_*`` keys feed the TrainConfigs."""
        top: Dict[str, Any] = {}
        urbm: Dict[str, Any] = {}
        adapt: Dict[str, Any] = {}
        for key, value in values.items():
            if value is None:
                continue
            if key.startswith("urbm_"):
                urbm[key[len("urbm_"):]] = value
            elif key.startswith("adapt_"):
                adapt[key[len("adapt_"):]] = value
            else:
                top[key] = value
        # hidden_units is shared: adaptation keeps the URBM's shape
        if "hidden_units" in top:
            urbm.setdefault("hidden_units", top["hidden_units"])
            adapt.setdefault("hidden_units", top.pop("hidden_units"))
        try:
            return cls(
                urbm=TrainConfig.urbm_defaults(**urbm),
                adapt=TrainConfig.adapt_defaults(**adapt),
                **top,
            )
        except ValidationError as exc:
            raise ConfigError(_summarize(exc), module="cli") from exc

    def to_flat(self) -> Dict[str, Any]:
        """Inverse of :meth:`from_flat`; unset optional values are left out."""
        values = self.model_dump(mode="json", exclude={"urbm", "adapt"})
        values["hidden_units"] = self.urbm.hidden_units
        for stage in ("urbm", "adapt"):
            dumped = getattr(self, stage).model_dump(mode="json", exclude={"seed", "hidden_units"})
            values.update({f"{stage}_{k}": v for k, v in dumped.items()})
        return {k: v for k, v in values.items() if v is not None}


def _summarize(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err["loc"]) or "config"
        parts.append(f"{where}: {err['msg']}")
    return "; ".join(parts)
