"""Linear threshold greedy (LinTG) and its current-arm-only variant (LinTG-H)."""

from __future__ import annotations

import math

import numpy as np

from ..allocation import ArmPool, ratio_current_only, ratio_lp, select_arm
from ..coverage import CoverageModel
from ..errors import BudgetExhaustedError, InvalidArgumentError
from ..estimator import RlsState, default_lambda
from ..oracle import NoisyOracle
from .base import DEFAULT_SAMPLE_CAP, RunResult, RunTracker, check_common, threshold_schedule

RATIO_KINDS = ("lp_optimal", "current_only")


def singleton_sample_size(R: float, epsilon: float, n: int, delta: float) -> int:
    """Per-element sample count for the singleton phase, ``(2R^2/eps^2) log(6n/delta)``, at least 1."""
    return max(1, math.ceil(2.0 * R * R / (epsilon * epsilon) * math.log(6.0 * n / delta)))


def run_lintg(model: CoverageModel, oracle: NoisyOracle, kappa: int, epsilon: float, delta: float,
              alpha: float, lam: float = None, ratio_kind: str = "lp_optimal",
              eps_cmp: float = None, R: float = None,
              sample_cap: int = DEFAULT_SAMPLE_CAP) -> RunResult:
    """Threshold greedy whose above/below-threshold tests are answered by a shared linear estimator.

    Every evaluated marginal-gain vector joins the arm pool.  With ``lp_optimal`` the
    samples for a test are spread over the pool according to the minimum-L1
    representation of the tested vector; with ``current_only`` only the tested
    vector itself is sampled.
    """
    check_common(kappa, epsilon, delta)
    if ratio_kind not in RATIO_KINDS:
        raise InvalidArgumentError(f"ratio_kind must be one of {RATIO_KINDS}")
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must be in (0, 1), got {alpha!r}")
    R = oracle.R if R is None else float(R)
    lam = default_lambda(R, oracle.S_bound, delta) if lam is None else float(lam)
    eps_cmp = epsilon / kappa if eps_cmp is None else float(eps_cmp)
    tag = "lintg" if ratio_kind == "lp_optimal" else "lintg_h"
    run = RunTracker(tag, model, oracle, sample_cap, kappa=kappa, epsilon=epsilon, delta=delta,
                     alpha=alpha, lam=lam, R=R, ratio_kind=ratio_kind, eps_cmp=eps_cmp)
    n, G = model.n, model.relevance
    state = RlsState(model.d, lam, delta, R, oracle.S_bound)
    pool = ArmPool(model.d, capacity=4 * n)
    sol = model.empty_state()
    n0 = singleton_sample_size(R, epsilon, n, delta)
    run.evaluations = 0

    try:
        f_hat = np.empty(n)
        for a in range(n):
            run.check(n0)
            rewards = oracle.sample_many(G[a], n0, key=(0, a))
            total = float(rewards.sum())
            f_hat[a] = total / n0
            state.absorb_repeated(G[a], n0, total)
            pool.add((0, a), G[a], count=n0)
        run.end_init()
        g = float(f_hat.max())

        for thr in threshold_schedule(g, kappa, alpha):
            run.begin_round()
            for a in range(n):
                if len(sol) >= kappa:
                    break
                if a in sol:
                    continue
                run.evaluations += 1
                key = (run.evaluations, a)
                x = model.marginal_gain_vector(sol, a)
                run.check()
                state.absorb(x, oracle.sample(x, key))
                m = pool.add(key, x, count=1)
                ratio = ratio_lp(pool, x, current=m) if ratio_kind == "lp_optimal" else ratio_current_only(pool, m)
                while True:
                    est = float(x @ state.w_hat)
                    beta = state.single_width(x)
                    if est - beta >= thr - eps_cmp:
                        model.add_element(sol, a)
                        break
                    if est + beta <= thr + eps_cmp:
                        break
                    k = select_arm(pool, ratio)
                    run.check()
                    xk = pool.features[k]
                    state.absorb(xk, oracle.sample(xk, pool.keys[k]))
                    pool.counts[k] += 1
            run.end_round()
    except BudgetExhaustedError as err:
        raise run.partial(err, sol.members)
    return run.result(sol.members)


def run_lintg_h(model, oracle, kappa, epsilon, delta, alpha, **kwargs) -> RunResult:
    return run_lintg(model, oracle, kappa, epsilon, delta, alpha, ratio_kind="current_only", **kwargs)
