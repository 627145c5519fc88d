"""Run an experiment configuration cell by cell and persist the results table."""

from __future__ import annotations

import csv
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..algorithms import ALGORITHMS
from ..errors import BudgetExhaustedError
from ..oracle import NoisyOracle
from .config import ExperimentConfig
from .data import (build_user_weights, filter_topics_by_correlation, load_ratings_csv,
                   load_relevance_csv, synthesize_dataset)
from .plotting import emit_charts

log = logging.getLogger(__name__)

RESULTS_HEADER = ["algorithm", "sweep_param", "sweep_value", "seed", "total_samples",
                  "exact_value", "solution", "wallclock_ms", "status"]
THREADS_ENV = "SUBMOD_BANDIT_THREADS"
_PER_ALGORITHM_KEYS = {"alpha": "alpha", "epsilon": "epsilon", "delta": "delta",
                       "lambda": "lam", "lam": "lam", "eps_cmp": "eps_cmp"}


@dataclass
class TrialRecord:
    algorithm: str
    sweep_param: str
    sweep_value: float
    seed: int
    total_samples: int
    exact_value: float
    solution: list
    wallclock_ms: float
    status: str = "ok"


def cell_seed(config_seed: int, cell_index: int) -> int:
    """32-bit seed hashed from the config seed and the cell index."""
    return int(np.random.SeedSequence([int(config_seed), int(cell_index)]).generate_state(1)[0])


def load_instance(cfg: ExperimentConfig, d: int = None):
    """``(CoverageModel, W)`` for the configured dataset, optionally with ``d`` topics."""
    ds = cfg.dataset
    if ds.kind == "synthetic":
        return synthesize_dataset(ds.n, d or ds.d, ds.users, ds.seed)
    model = load_relevance_csv(ds.relevance)
    ratings = load_ratings_csv(ds.ratings)
    topics = filter_topics_by_correlation(model, ratings, ds.pair_cut, ds.rating_cut)
    want = d or ds.d
    if want:
        topics = topics[:want]
    model = model.subset_topics(topics)
    W, _, _, _ = build_user_weights(model, ratings)
    return model, W


def make_oracle(cfg: ExperimentConfig, model, W, seed: int) -> NoisyOracle:
    mode = cfg.noise if cfg.noise != "auto" else ("user_mixture" if W is not None else "gaussian")
    if mode == "gaussian":
        w = W.mean(axis=0) if W is not None else np.full(model.d, 1.0 / model.d)
        return NoisyOracle(w, sigma=cfg.sigma, R=cfg.r_override, seed=seed)
    oracle = NoisyOracle(user_weights=W, R=0.0, seed=seed)
    # every query is a coverage marginal gain, bounded componentwise by the element's relevance row
    oracle.R = cfg.r_override if cfg.r_override is not None else oracle.effective_R(envelope=model.relevance)
    return oracle


def _cells(cfg: ExperimentConfig):
    """(algorithm, sweep_index, sweep_value, trial, seed) in output row order."""
    out = []
    for s_idx, value in enumerate(cfg.sweep_values):
        for trial in range(cfg.trials):
            seed = cell_seed(cfg.seed, s_idx * cfg.trials + trial)
            for alg in cfg.algorithms:
                out.append((alg, s_idx, value, trial, seed))
    order = {a: i for i, a in enumerate(cfg.algorithms)}
    out.sort(key=lambda c: (order[c[0]], c[2], c[3]))
    return out


def run_cell(cfg: ExperimentConfig, alg: str, value, seed: int, instance) -> TrialRecord:
    model, W = instance
    runner, fixed, accepted = ALGORITHMS[alg]
    params = cfg.params_at(value)
    kwargs = {k: params[k] for k in accepted if params.get(k) is not None}
    for key, v in cfg.per_algorithm.get(alg, {}).items():
        if key in _PER_ALGORITHM_KEYS:
            kwargs[_PER_ALGORITHM_KEYS[key]] = v
    kwargs.update(fixed)
    oracle = make_oracle(cfg, model, W, seed)
    start = time.perf_counter()
    status = "ok"
    try:
        result = runner(model, oracle, sample_cap=cfg.sample_cap, **kwargs)
    except BudgetExhaustedError as err:
        result = err.partial
        status = "budget_exhausted"
    except Exception as err:  # recorded in-row; the sweep continues
        log.exception("cell %s/%s/%s failed", alg, value, seed)
        return TrialRecord(alg, cfg.sweep_param, value, seed, oracle.ledger.total, float("nan"), [],
                           (time.perf_counter() - start) * 1e3,
                           f"error: {type(err).__name__}: {err}".replace("\n", " "))
    assert result.total_samples == oracle.ledger.total
    return TrialRecord(alg, cfg.sweep_param, value, seed, result.total_samples, result.exact_value,
                       result.solution, (time.perf_counter() - start) * 1e3, status)


def _worker_count(cfg: ExperimentConfig) -> int:
    workers = max(1, cfg.workers)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        workers = min(workers, max(1, int(cap)))
    return workers


def _run_group(cfg, value, cells):
    instance = load_instance(cfg, d=int(value) if cfg.sweep_param == "d" else None)
    return [run_cell(cfg, alg, value, seed, instance) for alg, _, _, _, seed in cells]


def run_sweep(cfg: ExperimentConfig) -> list:
    """Every (algorithm x sweep value x trial) cell, in output row order."""
    cells = _cells(cfg)
    groups: dict = {}
    for c in cells:
        groups.setdefault(c[1], []).append(c)
    workers = _worker_count(cfg)
    if workers == 1:
        results = [_run_group(cfg, cfg.sweep_values[s], groups[s]) for s in sorted(groups)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_group, cfg, cfg.sweep_values[s], groups[s]) for s in sorted(groups)]
            results = [f.result() for f in futures]
    by_cell = {}
    for group, recs in zip(sorted(groups), results):
        for c, rec in zip(groups[group], recs):
            by_cell[c] = rec
    return [by_cell[c] for c in cells]


def _fmt_value(v) -> str:
    f = float(v)
    return str(int(f)) if f.is_integer() else repr(f)


def emit_csv(records, path, record_wallclock: bool = False) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        for r in records:
            w.writerow([r.algorithm, r.sweep_param, _fmt_value(r.sweep_value), r.seed, r.total_samples,
                        "" if np.isnan(r.exact_value) else repr(float(r.exact_value)),
                        ";".join(str(x) for x in r.solution),
                        f"{r.wallclock_ms:.3f}" if record_wallclock else "", r.status])


def emit_timings(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "sweep_value", "seed", "wallclock_ms"])
        for r in records:
            w.writerow([r.algorithm, _fmt_value(r.sweep_value), r.seed, f"{r.wallclock_ms:.3f}"])


def read_results_csv(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULTS_HEADER:
            raise ValueError(f"{path}: unexpected results header {reader.fieldnames}")
        return list(reader)


def emit_chart(rows, out_dir, sweep_param: str = None) -> list:
    rows = [asdict(r) if isinstance(r, TrialRecord) else r for r in rows]
    return emit_charts(rows, out_dir, sweep_param)


def run_experiment(cfg: ExperimentConfig, output_dir=None) -> tuple:
    """Run, write ``results.csv``, ``timings.csv`` and charts; return ``(records, output_dir)``."""
    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = run_sweep(cfg)
    emit_csv(records, out / "results.csv", cfg.record_wallclock)
    emit_timings(records, out / "timings.csv")
    emit_chart(records, out, cfg.sweep_param)
    return records, out
