"""Sweep configuration, loadable from JSON or TOML."""
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields

from ..errors import ValidationError
from ..model import NOISE_KINDS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

ESTIMATORS = ("gpm", "eig", "projected-eig")
SIGMA_MODES = ("relative", "absolute")


def sigma_scale(n):
    """``sqrt(n / log n)`` (natural log), the unit for relative noise levels."""
    return math.sqrt(n / math.log(n))


@dataclass
class ExperimentConfig:
    """One Monte Carlo sweep.

    ``sigma_mode="relative"`` means each entry of ``sigma_values`` is a
    multiplier of ``sqrt(n / log n)``; ``"absolute"`` uses the values as is.
    """

    n_values: list
    sigma_values: list
    sigma_mode: str = "relative"
    noise_kind: str = "complex-gaussian"
    trials_per_cell: int = 10
    base_seed: int = 0
    estimator_set: list = field(default_factory=lambda: ["gpm"])
    aux_m_count: int = 0
    output_dir: str = "sweep-out"
    workers: int = 1
    gpm_max_iter: int | None = None
    certify: bool = True
    record_wallclock: bool = False
    plots: bool = True

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        self.sigma_values = [float(s) for s in self.sigma_values]
        self.estimator_set = list(self.estimator_set)
        if not self.n_values or not self.sigma_values:
            raise ValidationError("n_values and sigma_values must be non-empty")
        if any(n < 2 for n in self.n_values):
            raise ValidationError("every n must be >= 2")
        if any(not (s >= 0 and math.isfinite(s)) for s in self.sigma_values):
            raise ValidationError("sigma values must be finite and >= 0")
        if self.sigma_mode not in SIGMA_MODES:
            raise ValidationError(f"sigma_mode must be one of {SIGMA_MODES}")
        if self.noise_kind not in NOISE_KINDS:
            raise ValidationError(f"noise_kind must be one of {NOISE_KINDS}")
        if int(self.trials_per_cell) < 1:
            raise ValidationError("trials_per_cell must be >= 1")
        self.trials_per_cell = int(self.trials_per_cell)
        if not self.estimator_set or any(e not in ESTIMATORS for e in self.estimator_set):
            raise ValidationError(f"estimator_set must be a non-empty subset of {ESTIMATORS}")
        if int(self.aux_m_count) < 0 or int(self.workers) < 1:
            raise ValidationError("aux_m_count must be >= 0 and workers >= 1")
        self.aux_m_count = int(self.aux_m_count)
        self.workers = int(self.workers)

    def sigma_for(self, n, value):
        return value * sigma_scale(n) if self.sigma_mode == "relative" else value

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown config keys: {unknown}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ValidationError(str(exc)) from None

    @classmethod
    def from_file(cls, path):
        path = str(path)
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            if path.endswith(".toml"):
                data = tomllib.loads(raw.decode())
            else:
                data = json.loads(raw)
        except (ValueError, tomllib.TOMLDecodeError) as exc:
            raise ValidationError(f"cannot parse {path}: {exc}") from None
        return cls.from_dict(data)
