"""Experiment configuration: a flat TOML table with typed validation."""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, fields

from ..errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("walk", "couple", "contract", "coalesce", "partition", "mixing", "coupon", "smallvals")

# keys that never change results; left out of the config echo
_RUNTIME_KEYS = ("workers", "output_dir")


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment run.

    Time grids, edge counts and phase lengths left unset get
    per-experiment defaults scaled with ``n log n``.
    """

    kind: str = "contract"
    n: int = 10
    replicas: int = 1000
    seed: int = 0
    chunk_size: int = 1000
    steps: int | None = None
    t_grid: list = field(default_factory=list)
    edges: int | None = None
    t_phase1: int | None = None
    t_phase2: int | None = None
    n_grid: list = field(default_factory=list)
    a: float = 8.0
    b: float = 3.0
    epsilon: float = 1.0
    c_exp: float = 2.0
    t1_factor: float = 0.4
    start: str = "worst"
    l1_start: float = 1e-8
    min_sq: float = 1e-3
    bins: int = 360
    alpha: float = 1e-3
    stop_early: bool = False
    per_replica: bool = False
    workers: int = 1
    output_dir: str = "results"

    def __post_init__(self):
        validate(self)

    def echo(self) -> dict:
        d = asdict(self)
        for k in _RUNTIME_KEYS:
            d.pop(k)
        return d

    def replace(self, **changes) -> "ExperimentConfig":
        d = asdict(self)
        d.update(changes)
        return ExperimentConfig(**d)


_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _check_type(key, value):
    spec = _TYPES[key]
    if spec == "int":
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif spec == "int | None":
        ok = value is None or (isinstance(value, int) and not isinstance(value, bool))
    elif spec == "float":
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif spec == "bool":
        ok = isinstance(value, bool)
    elif spec == "str":
        ok = isinstance(value, str)
    elif spec == "list":
        ok = isinstance(value, list) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in value)
    else:  # pragma: no cover
        ok = True
    if not ok:
        raise ConfigError(f"{key}: expected {spec}, got {value!r}", key=key)


def validate(cfg: ExperimentConfig):
    for f in fields(cfg):
        _check_type(f.name, getattr(cfg, f.name))
    if cfg.kind not in KINDS:
        raise ConfigError(f"kind: unknown experiment {cfg.kind!r}", key="kind")
    if cfg.n < 2:
        raise ConfigError("n: dimension must be at least 2", key="n")
    if cfg.replicas < 1:
        raise ConfigError("replicas: must be at least 1", key="replicas")
    if cfg.chunk_size < 1:
        raise ConfigError("chunk_size: must be at least 1", key="chunk_size")
    if cfg.workers < 1:
        raise ConfigError("workers: must be at least 1", key="workers")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed: must fit in 64 bits", key="seed")
    for key in ("t_grid", "n_grid"):
        if any(v < 0 for v in getattr(cfg, key)):
            raise ConfigError(f"{key}: entries must be non-negative", key=key)
    if any(v < 2 for v in cfg.n_grid):
        raise ConfigError("n_grid: dimensions must be at least 2", key="n_grid")
    for key in ("steps", "edges", "t_phase1", "t_phase2"):
        v = getattr(cfg, key)
        if v is not None and v < 0:
            raise ConfigError(f"{key}: must be non-negative", key=key)
    if cfg.start not in ("worst", "random", "e1"):
        raise ConfigError("start: one of 'worst', 'random', 'e1'", key="start")
    if cfg.bins < 1:
        raise ConfigError("bins: must be positive", key="bins")
    if not 0.0 < cfg.alpha < 1.0:
        raise ConfigError("alpha: must lie in (0, 1)", key="alpha")


def load_config(path, **overrides) -> ExperimentConfig:
    """Read a flat TOML file; ``overrides`` (non-None values) win."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(raw, **overrides)


def config_from_dict(raw: dict, **overrides) -> ExperimentConfig:
    data = dict(raw)
    for k, v in overrides.items():
        if v is not None:
            data[k] = v
    for k, v in data.items():
        if k not in _TYPES:
            raise ConfigError(f"{k}: unknown configuration key", key=k)
        if isinstance(v, dict):
            raise ConfigError(f"{k}: nested tables are not allowed", key=k)
    return ExperimentConfig(**data)


def nlogn(n: int) -> float:
    return n * math.log(n)
