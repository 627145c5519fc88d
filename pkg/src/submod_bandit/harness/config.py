"""Experiment configuration: an INI file plus ``section.key=value`` overrides.

Example::

    [dataset]
    kind = synthetic          ; or: csv (with relevance = ..., ratings = ...)
    n = 60
    d = 5
    users = 500
    seed = 0

    [algorithms]
    tags = lintg, lintg_h, tg

    [sweep]
    param = kappa             ; kappa | epsilon | d
    values = 2, 4, 6, 8, 10

    [fixed]
    kappa = 10
    epsilon = 0.1
    delta = 0.1
    alpha = 0.2
    lambda = auto
    r_override =
    noise = auto              ; auto | user_mixture | gaussian
    sigma = 0.1
    sample_cap = 100000000

    [run]
    trials = 10
    seed = 0
    output_dir = results
    workers = 1
    record_wallclock = false

    [algorithm.lintg]         ; optional per-algorithm overrides
    alpha = 0.1
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..algorithms import ALGORITHMS
from ..errors import ConfigError

SWEEP_PARAMS = ("kappa", "epsilon", "d")
DEFAULT_TRIALS = 10


@dataclass
class DatasetSpec:
    kind: str = "synthetic"
    n: int = 60
    d: int = 5
    users: int = 500
    seed: int = 0
    relevance: Optional[str] = None
    ratings: Optional[str] = None
    pair_cut: float = 0.4
    rating_cut: float = 0.2


@dataclass
class ExperimentConfig:
    dataset: DatasetSpec
    algorithms: list
    sweep_param: str
    sweep_values: list
    kappa: int = 10
    epsilon: float = 0.1
    delta: float = 0.1
    alpha: float = 0.2
    lam: Optional[float] = None
    r_override: Optional[float] = None
    noise: str = "auto"
    sigma: float = 0.1
    sample_cap: int = 10**8
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    output_dir: str = "results"
    workers: int = 1
    record_wallclock: bool = False
    per_algorithm: dict = field(default_factory=dict)

    def params_at(self, sweep_value) -> dict:
        p = {"kappa": self.kappa, "epsilon": self.epsilon, "delta": self.delta,
             "alpha": self.alpha, "lam": self.lam}
        if self.sweep_param in p:
            p[self.sweep_param] = sweep_value
        return p


def _split(text: str) -> list:
    return [t.strip() for t in text.replace("\n", ",").split(",") if t.strip()]


def _opt_float(text: str):
    text = text.strip()
    return None if text in ("", "auto", "none") else float(text)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def apply_overrides(parser: configparser.ConfigParser, overrides) -> None:
    for item in overrides or ():
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        lhs, value = item.split("=", 1)
        section, key = lhs.strip().rsplit(".", 1)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key.strip(), value.strip())


def parse_config(text: str, overrides=None, base_dir: Path = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as err:
        raise ConfigError(str(err)) from None
    apply_overrides(parser, overrides)
    try:
        return _build(parser, base_dir)
    except (KeyError, ValueError, configparser.Error) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(str(err)) from None


def load_config(path, overrides=None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return parse_config(text, overrides, base_dir=path.parent)


def _build(p: configparser.ConfigParser, base_dir: Optional[Path]) -> ExperimentConfig:
    ds = p["dataset"] if p.has_section("dataset") else {}
    kind = ds.get("kind", "synthetic").strip()
    if kind not in ("synthetic", "csv"):
        raise ConfigError(f"dataset.kind must be synthetic or csv, got {kind!r}")

    def _path(key):
        v = ds.get(key)
        if v is None:
            return None
        v = Path(v.strip())
        return str(v if v.is_absolute() or base_dir is None else base_dir / v)

    dataset = DatasetSpec(kind=kind, n=int(ds.get("n", 60)), d=int(ds.get("d", 5)),
                          users=int(ds.get("users", 500)), seed=int(ds.get("seed", 0)),
                          relevance=_path("relevance"), ratings=_path("ratings"),
                          pair_cut=float(ds.get("pair_cut", 0.4)),
                          rating_cut=float(ds.get("rating_cut", 0.2)))
    if kind == "csv" and not (dataset.relevance and dataset.ratings):
        raise ConfigError("csv datasets need dataset.relevance and dataset.ratings")

    if not p.has_section("algorithms"):
        raise ConfigError("missing [algorithms] section")
    tags = _split(p["algorithms"].get("tags", ""))
    if not tags:
        raise ConfigError("algorithms.tags is empty")
    unknown = [t for t in tags if t not in ALGORITHMS]
    if unknown:
        raise ConfigError(f"unknown algorithm tags {unknown}; known: {sorted(ALGORITHMS)}")
    if len(set(tags)) != len(tags):
        raise ConfigError("duplicate algorithm tags")

    if not p.has_section("sweep"):
        raise ConfigError("missing [sweep] section")
    sw = p["sweep"]
    param = sw.get("param", "").strip()
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"sweep.param must be one of {SWEEP_PARAMS} (exactly one axis), got {param!r}")
    cast = float if param == "epsilon" else int
    values = [cast(v) for v in _split(sw.get("values", ""))]
    if not values:
        raise ConfigError("sweep.values is empty")

    fx = p["fixed"] if p.has_section("fixed") else {}
    run = p["run"] if p.has_section("run") else {}
    cfg = ExperimentConfig(
        dataset=dataset, algorithms=tags, sweep_param=param, sweep_values=values,
        kappa=int(fx.get("kappa", 10)), epsilon=float(fx.get("epsilon", 0.1)),
        delta=float(fx.get("delta", 0.1)), alpha=float(fx.get("alpha", 0.2)),
        lam=_opt_float(fx.get("lambda", "auto")), r_override=_opt_float(fx.get("r_override", "")),
        noise=fx.get("noise", "auto").strip(), sigma=float(fx.get("sigma", 0.1)),
        sample_cap=int(float(fx.get("sample_cap", 1e8))),
        trials=int(run.get("trials", DEFAULT_TRIALS)), seed=int(run.get("seed", 0)),
        output_dir=run.get("output_dir", "results").strip(), workers=int(run.get("workers", 1)),
        record_wallclock=_bool(run.get("record_wallclock", "false")),
    )
    for section in p.sections():
        if section.startswith("algorithm."):
            tag = section.split(".", 1)[1]
            if tag not in tags:
                raise ConfigError(f"[{section}] refers to an algorithm not in algorithms.tags")
            cfg.per_algorithm[tag] = {k: float(v) for k, v in p[section].items()}
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if not 0 < cfg.delta < 1:
        raise ConfigError("fixed.delta must be in (0, 1)")
    if not 0 < cfg.alpha < 1:
        raise ConfigError("fixed.alpha must be in (0, 1)")
    if cfg.epsilon <= 0 or cfg.kappa < 1 or cfg.trials < 1:
        raise ConfigError("epsilon, kappa and trials must be positive")
    if cfg.noise not in ("auto", "user_mixture", "gaussian"):
        raise ConfigError("fixed.noise must be auto, user_mixture or gaussian")
    if cfg.sweep_param == "epsilon" and min(cfg.sweep_values) <= 0:
        raise ConfigError("epsilon sweep values must be positive")
    if cfg.sweep_param in ("kappa", "d") and min(cfg.sweep_values) < 1:
        raise ConfigError(f"{cfg.sweep_param} sweep values must be >= 1")
