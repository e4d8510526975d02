"""Configuration handling."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from rdapprox.constants import DEFAULT_DELTA, DEFAULT_MAX_ITERATIONS, MODES, MODE_ADAPTIVE
from rdapprox.errors import ParameterError


@dataclass(frozen=True)
class RdConfig:
    delta: float = DEFAULT_DELTA  # Bisection precision for alpha*
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    grid_points: int = 200
    grid_spacing: str = "log"  # log or linear
    grid_floor_ratio: float = 1e-4  # Smallest D of a log grid relative to tr(Sigma)
    bits: bool = False

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if self.max_iterations < 1:
            raise ParameterError("max_iterations must be at least 1")
        if self.grid_points < 1:
            raise ParameterError("grid_points must be at least 1")
        if self.grid_spacing not in ("log", "linear"):
            raise ParameterError(f"unknown grid spacing {self.grid_spacing!r}")
        if not 0 < self.grid_floor_ratio < 1:
            raise ParameterError("grid_floor_ratio must lie in (0, 1)")


@dataclass(frozen=True)
class PcaConfig:
    dim: Optional[int] = None
    ratio: Optional[float] = None
    centered: bool = True
    sweep: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.dim is not None and self.ratio is not None:
            raise ParameterError("give either a PCA dim or a PCA ratio, not both")
        if self.ratio is not None and not 0 < self.ratio <= 1:
            raise ParameterError(f"PCA ratio must lie in (0, 1], got {self.ratio}")
        if self.dim is not None and self.dim < 1:
            raise ParameterError(f"PCA dim must be positive, got {self.dim}")

    @property
    def enabled(self) -> bool:
        return self.dim is not None or self.ratio is not None


@dataclass(frozen=True)
class TrainConfig:
    epsilon_sq: float = 0.5  # Distortion budget
    eta: float = 0.5  # Step size
    lambda_u: float = 500.0  # Softmax uniformity at test time
    delta: float = DEFAULT_DELTA
    layer_count: int = 100
    mode: str = MODE_ADAPTIVE  # ar or fixed
    ns_energy_threshold: float = 0.95
    ns_rank: int = 0  # 0 = truncate by energy

    def __post_init__(self) -> None:
        if not 0 < self.epsilon_sq <= 1:
            raise ParameterError(f"epsilon_sq must lie in (0, 1], got {self.epsilon_sq}")
        if not self.eta > 0:
            raise ParameterError(f"eta must be positive, got {self.eta}")
        if not self.lambda_u > 0:
            raise ParameterError(f"lambda_u must be positive, got {self.lambda_u}")
        if not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if self.layer_count < 0:
            raise ParameterError("layer_count must be non-negative")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 < self.ns_energy_threshold <= 1:
            raise ParameterError("ns_energy_threshold must lie in (0, 1]")
        if self.ns_rank < 0:
            raise ParameterError("ns_rank must be non-negative")


@dataclass(frozen=True)
class SyntheticConfig:
    class_count: int = 3
    dim: int = 20
    subspace_dim: int = 2
    train_per_class: int = 100
    test_per_class: int = 100
    noise: float = 0.05
    seed: int = 0
    orthogonal: bool = True

    def __post_init__(self) -> None:
        if self.class_count < 1 or self.dim < 1:
            raise ParameterError("synthetic class_count and dim must be positive")
        if not 1 <= self.subspace_dim <= self.dim:
            raise ParameterError(f"subspace_dim must lie in [1, {self.dim}]")
        if self.train_per_class < 1 or self.test_per_class < 0:
            raise ParameterError("train_per_class must be positive, test_per_class >= 0")
        if self.noise < 0:
            raise ParameterError(f"noise must be non-negative, got {self.noise}")


@dataclass(frozen=True)
class InputConfig:
    eigenvalues: Optional[Tuple[float, ...]] = None
    cov: Optional[str] = None
    data: Optional[str] = None
    labels: Optional[str] = None
    test_data: Optional[str] = None
    test_labels: Optional[str] = None
    model: Optional[str] = None
    synthetic: bool = False
    random_spectra: int = 0
    similarity: bool = False
    eps2_sweep: Tuple[float, ...] = (0.3, 0.5, 0.7)
    depth_sweep: bool = False  # NS accuracy after every layer
    pca_ratio_sweep: Tuple[float, ...] = ()  # Cumulative variance ratios P to compare over

    def __post_init__(self) -> None:
        bad = [p for p in self.pca_ratio_sweep if not 0 < p <= 1]
        if bad:
            raise ParameterError(f"PCA ratios must lie in (0, 1], got {bad}")


@dataclass(frozen=True)
class OutputConfig:
    root_dir: str = "results"
    out: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    rd: RdConfig = RdConfig()
    pca: PcaConfig = PcaConfig()
    train: TrainConfig = TrainConfig()
    synthetic: SyntheticConfig = SyntheticConfig()
    inputs: InputConfig = field(default_factory=InputConfig)
    output: OutputConfig = OutputConfig()


DEFAULT_CONFIG_PATH = Path("rdapprox.toml")

_SECTIONS = {
    "rd": RdConfig,
    "pca": PcaConfig,
    "train": TrainConfig,
    "synthetic": SyntheticConfig,
    "inputs": InputConfig,
    "output": OutputConfig,
}


def _deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        elif value is not None:
            merged[key] = value
    return merged


def config_to_dict(config: RunConfig) -> Dict[str, Any]:
    return asdict(config)


def _build_section(name: str, values: Mapping[str, Any]) -> Any:
    cls = _SECTIONS[name]
    known = cls.__dataclass_fields__
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ParameterError(f"unknown keys in [{name}]: {', '.join(unknown)}")
    # TOML arrays arrive as lists; frozen sections store tuples
    cleaned = {
        key: tuple(value) if isinstance(value, list) else value for key, value in values.items()
    }
    return cls(**cleaned)


def load_config(
    path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read the TOML file (if present) and apply command-line overrides on top."""
    path = path or DEFAULT_CONFIG_PATH
    base = config_to_dict(RunConfig())
    if path.exists():
        data = tomllib.loads(path.read_text(encoding="utf-8"))
        merged = _deep_merge(base, data)
    else:
        merged = base
    if overrides:
        merged = _deep_merge(merged, overrides)
    unknown = sorted(set(merged) - set(_SECTIONS))
    if unknown:
        raise ParameterError(f"unknown config sections: {', '.join(unknown)}")
    sections = {name: _build_section(name, merged.get(name, {})) for name in _SECTIONS}
    return RunConfig(**sections)


def parse_float_list(text: str) -> Tuple[float, ...]:
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError as exc:
            raise ParameterError(f"not a number: {token!r}") from exc
        if not math.isfinite(value):
            raise ParameterError(f"non-finite value: {token!r}")
        values.append(value)
    if not values:
        raise ParameterError("empty number list")
    return tuple(values)
