"""Acceptance gate: one test per criterion, each summarized as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary block at the end
of the session lists every criterion and its measured value.
"""

import math

import numpy as np
import pytest

from conftest import random_instance
from oracles import bfs_l1_minimum
from submod_bandit.algorithms import (brute_force_opt, max_threshold_rounds, run_exact_greedy,
                                      run_exact_threshold, run_lg, run_lintg)
from submod_bandit.allocation import ArmPool, l1_min_representation, ratio_lp
from submod_bandit.estimator import RlsState, default_lambda
from submod_bandit.harness.config import parse_config
from submod_bandit.harness.sweep import run_experiment, run_sweep
from submod_bandit.linalg import SpdMatrix
from submod_bandit.oracle import NoisyOracle

SEEDS = range(100)
N, D, KAPPA, SIGMA, DELTA, EPS, ALPHA = 8, 3, 3, 0.05, 0.1, 0.05, 0.2
# binomial slack on the failure fraction over 100 independent seeds
FAIL_LIMIT = DELTA + 3 * math.sqrt(DELTA * (1 - DELTA) / 100)

MOVIE60 = """
[dataset]
kind = synthetic
n = 60
d = 5
users = 500
seed = 0

[algorithms]
tags = lintg, lintg_h, tg

[sweep]
param = kappa
values = 10

[fixed]
kappa = 10
epsilon = 0.1
delta = 0.1
alpha = 0.2

[run]
trials = 10
seed = 0
"""


def _mark(record_property, label):
    record_property("criterion", label)
    print()
    return lambda detail: record_property("detail", detail)


@pytest.fixture(scope="module")
def approx_instances():
    out = []
    for seed in SEEDS:
        model, w = random_instance(seed, n=N, d=D)
        out.append((seed, model, w, brute_force_opt(model, w, KAPPA)[1]))
    return out


def test_c01_lg_approximation(record_property, approx_instances):
    detail = _mark(record_property, "1. LG approximation guarantee")
    fails = 0
    for seed, model, w, opt in approx_instances:
        res = run_lg(model, NoisyOracle(w, sigma=SIGMA, seed=seed), KAPPA, EPS, DELTA)
        fails += res.exact_value < (1 - 1 / math.e) * opt - EPS
    frac = fails / len(approx_instances)
    detail(f"failure fraction {frac:.3f} (limit {FAIL_LIMIT:.3f})")
    assert frac <= FAIL_LIMIT


def test_c02_lintg_approximation(record_property, approx_instances):
    detail = _mark(record_property, "2. LinTG approximation guarantee and evaluation bound")
    fails, worst_eval = 0, 0
    eval_bound = N * max_threshold_rounds(KAPPA, ALPHA)
    for seed, model, w, opt in approx_instances:
        res = run_lintg(model, NoisyOracle(w, sigma=SIGMA, seed=seed), KAPPA, EPS, DELTA, alpha=ALPHA)
        fails += res.exact_value < (1 - 1 / math.e - ALPHA) * opt - 2 * EPS
        worst_eval = max(worst_eval, res.evaluations)
    frac = fails / len(approx_instances)
    detail(f"failure fraction {frac:.3f} (limit {FAIL_LIMIT:.3f}); "
           f"max evaluations {worst_eval} (bound {eval_bound})")
    assert frac <= FAIL_LIMIT
    assert worst_eval <= eval_bound


@pytest.fixture(scope="module")
def coverage_runs():
    """1000 least-squares runs (d=3, 200 random arms); per-run anytime coverage and det-bound slack."""
    d, T, sigma, delta, runs = 3, 200, 0.1, 0.1, 1000
    lam = default_lambda(sigma, 1.0, delta)
    rng = np.random.default_rng(20240601)
    covered_fail, det_worst = 0, -np.inf
    for _ in range(runs):
        w = rng.dirichlet(np.ones(d)) * rng.uniform(0.2, 1.0)
        X = rng.uniform(0, 1, size=(T, d))
        noise = sigma * rng.standard_normal(T)
        st = RlsState(d, lam, delta, R=sigma, S_bound=1.0)
        L2 = 0.0
        failed = False
        for t in range(T):
            st.absorb(X[t], float(X[t] @ w + noise[t]))
            err = st.w_hat - w
            # ||err||_A <= C_t implies |y.err| <= C_t ||y||_{A^-1} for every direction y
            if math.sqrt(err @ st.A.entries @ err) > st.confidence_radius_adaptive():
                failed = True
            L2 = max(L2, float(X[t] @ X[t]))
            bound = d * math.log(lam + (t + 1) * L2 / d)
            sign, logdet = np.linalg.slogdet(st.A.entries)
            det_worst = max(det_worst, logdet - bound)
        covered_fail += failed
    return covered_fail / runs, det_worst


def test_c03_confidence_coverage(record_property, coverage_runs):
    detail = _mark(record_property, "3. Confidence ellipsoid coverage")
    frac, _ = coverage_runs
    detail(f"failure fraction {frac:.3f} (limit 0.130)")
    assert frac <= 0.1 + 0.03


def test_c04_determinant_bound(record_property, coverage_runs):
    detail = _mark(record_property, "4. Determinant bound")
    _, worst = coverage_runs
    # worst log(det / bound); the relative tolerance 1e-9 is log(1 + 1e-9)
    detail(f"max log(det/bound) {worst:.3e}")
    assert worst <= math.log1p(1e-9)


def test_c05_woodbury(record_property):
    detail = _mark(record_property, "5. Sherman-Morrison inverse accuracy")
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 11))
        A = SpdMatrix.ridge(d, float(rng.uniform(0.1, 2.0)))
        for _ in range(int(rng.integers(1, 60))):
            A.rank_one_update(rng.normal(size=d))
        worst = max(worst, float(np.max(np.abs(A.inverse - np.linalg.inv(A.entries)))))
    detail(f"max abs error {worst:.2e} (limit 1e-8)")
    assert worst <= 1e-8


def test_c06_lp_oracle(record_property):
    detail = _mark(record_property, "6. LP allocation vs basic-solution enumeration")
    rng = np.random.default_rng(6)
    worst = 0.0
    for case in range(500):
        m, d = int(rng.integers(1, 7)), int(rng.integers(1, 4))
        X = rng.normal(size=(m, d))
        if case % 5 == 0 and m > 1:
            X[-1] = 2.0 * X[0]  # parallel arms
        y = X.T @ rng.normal(size=m)
        _, rho = l1_min_representation(X, y)
        worst = max(worst, abs(rho - bfs_l1_minimum(X, y)))
    pool = ArmPool(2)
    pool.add("e1", [1.0, 0.0])
    pool.add("e2", [0.0, 1.0])
    ratio = ratio_lp(pool, [1.0, -1.0])
    detail(f"max |rho - rho_bfs| {worst:.2e}; e1/e2 p={ratio.p.tolist()} rho={ratio.rho}")
    assert worst <= 1e-8
    assert ratio.p.tolist() == [0.5, 0.5] and ratio.rho == 2.0


def test_c07_noiseless_degeneration(record_property):
    detail = _mark(record_property, "7. Noiseless runs equal exact greedy / threshold greedy")
    kappa, eps = 5, 0.05
    lg_bad, tg_bad = [], []
    for seed in range(50):
        model, w = random_instance(1000 + seed, n=20, d=3)
        lg = run_lg(model, NoisyOracle(w, sigma=0.0, seed=seed), kappa, eps, DELTA)
        if set(lg.solution) != set(run_exact_greedy(model, w, kappa).solution):
            lg_bad.append(seed)
        lt = run_lintg(model, NoisyOracle(w, sigma=0.0, seed=seed), kappa, eps, DELTA, alpha=ALPHA)
        ref = run_exact_threshold(model, w, kappa, ALPHA, slack=eps / kappa)
        if set(lt.solution) != set(ref.solution):
            tg_bad.append(seed)
    detail(f"LG mismatches {len(lg_bad)}/50, LinTG mismatches {len(tg_bad)}/50")
    assert not lg_bad and not tg_bad


def test_c08_sample_efficiency(record_property):
    detail = _mark(record_property, "8. LinTG and LinTG-H use at least 2x fewer samples than TG")
    recs = run_sweep(parse_config(MOVIE60))
    mean = {a: np.mean([r.total_samples for r in recs if r.algorithm == a])
            for a in ("lintg", "lintg_h", "tg")}
    assert all(r.status == "ok" for r in recs)
    detail(f"means lintg={mean['lintg']:.0f} lintg_h={mean['lintg_h']:.0f} tg={mean['tg']:.0f}; "
           f"ratios {mean['tg'] / mean['lintg']:.1f}x, {mean['tg'] / mean['lintg_h']:.1f}x")
    assert 2 * mean["lintg"] <= mean["tg"]
    assert 2 * mean["lintg_h"] <= mean["tg"]


def test_c09_d_scaling(record_property):
    detail = _mark(record_property, "9. LinTG-H samples non-decreasing in d")
    cfg = parse_config(MOVIE60, ["dataset.n=500", "algorithms.tags=lintg_h",
                                 "sweep.param=d", "sweep.values=3, 5, 10"])
    recs = run_sweep(cfg)
    means = [np.mean([r.total_samples for r in recs if r.sweep_value == d]) for d in (3, 5, 10)]
    detail("means " + ", ".join(f"d={d}: {m:.0f}" for d, m in zip((3, 5, 10), means)))
    assert all(r.status == "ok" for r in recs)
    assert means[0] <= means[1] <= means[2]


def test_c10_reproducibility(record_property, tmp_path):
    detail = _mark(record_property, "10. Byte-identical results CSV on repeated runs")
    cfg = parse_config(MOVIE60, ["algorithms.tags=lg, lintg, lintg_h, tg, expgreedy",
                                 "sweep.values=2, 4", "run.trials=2"])
    _, a = run_experiment(cfg, tmp_path / "a")
    _, b = run_experiment(cfg, tmp_path / "b")
    same = (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()
    rows = len((a / "results.csv").read_text().splitlines()) - 1
    detail(f"{rows} rows, identical={same}")
    assert same
