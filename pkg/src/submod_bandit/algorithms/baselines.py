"""Baselines that ignore the linear structure: repeated-sampling threshold greedy and ExpGreedy.

ExpGreedy's per-round subroutine is a CLUCB-style best-arm search over the
current marginal gains, with Hoeffding radii
``R sqrt(2 log(4 n t^2 kappa / delta) / T_a)``; it is a standard reconstruction
rather than a line-by-line port of the cited algorithm.
"""

from __future__ import annotations

import math

import numpy as np

from ..coverage import CoverageModel
from ..errors import BudgetExhaustedError, InvalidArgumentError
from ..oracle import NoisyOracle
from .base import DEFAULT_SAMPLE_CAP, RunResult, RunTracker, check_common, threshold_schedule
from .lintg import singleton_sample_size


def comparison_sample_size(R: float, eps_cmp: float, delta: float, n: int, kappa: int, alpha: float) -> int:
    """Hoeffding count so one threshold comparison is eps_cmp-accurate at level delta'.

    ``delta' = delta / (n * ceil(log(kappa/alpha)/alpha) + n)`` splits the failure
    probability over every comparison plus the singleton phase.
    """
    budget = n * math.ceil(math.log(kappa / alpha) / alpha) + n
    delta_p = delta / budget
    return max(1, math.ceil(2.0 * R * R / (eps_cmp * eps_cmp) * math.log(2.0 / delta_p)))


def run_tg_baseline(model: CoverageModel, oracle: NoisyOracle, kappa: int, epsilon: float, delta: float,
                    alpha: float, eps_cmp: float = None, R: float = None,
                    samples_per_comparison: int = None, sample_cap: int = DEFAULT_SAMPLE_CAP) -> RunResult:
    check_common(kappa, epsilon, delta)
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must be in (0, 1), got {alpha!r}")
    R = oracle.R if R is None else float(R)
    eps_cmp = epsilon / kappa if eps_cmp is None else float(eps_cmp)
    n, G = model.n, model.relevance
    if samples_per_comparison is None:
        N = comparison_sample_size(R, eps_cmp, delta, n, kappa, alpha)
        n0 = singleton_sample_size(R, epsilon, n, delta)
    else:
        N = n0 = int(samples_per_comparison)
    run = RunTracker("tg", model, oracle, sample_cap, kappa=kappa, epsilon=epsilon, delta=delta,
                     alpha=alpha, R=R, eps_cmp=eps_cmp, samples_per_comparison=N)
    sol = model.empty_state()
    run.evaluations = 0
    try:
        f_hat = np.empty(n)
        for a in range(n):
            run.check(n0)
            f_hat[a] = oracle.sample_many(G[a], n0, key=(0, a)).mean()
        run.end_init()
        for thr in threshold_schedule(float(f_hat.max()), kappa, alpha):
            run.begin_round()
            for a in range(n):
                if len(sol) >= kappa:
                    break
                if a in sol:
                    continue
                run.evaluations += 1
                run.check(N)
                x = model.marginal_gain_vector(sol, a)
                if oracle.sample_many(x, N, key=(run.evaluations, a)).mean() >= thr:
                    model.add_element(sol, a)
            run.end_round()
    except BudgetExhaustedError as err:
        raise run.partial(err, sol.members)
    return run.result(sol.members)


def run_expgreedy_baseline(model: CoverageModel, oracle: NoisyOracle, kappa: int, epsilon: float,
                           delta: float, R: float = None,
                           sample_cap: int = DEFAULT_SAMPLE_CAP) -> RunResult:
    check_common(kappa, epsilon, delta)
    R = oracle.R if R is None else float(R)
    n = model.n
    run = RunTracker("expgreedy", model, oracle, sample_cap, kappa=kappa, epsilon=epsilon,
                     delta=delta, R=R)
    sol = model.empty_state()
    slack = epsilon / kappa
    log_const = math.log(4.0 * n * kappa / delta)
    try:
        for rnd in range(kappa):
            cand = [a for a in range(n) if a not in sol]
            if not cand:
                break
            run.begin_round()
            X = model.marginal_gain_matrix(sol, cand)
            k = len(cand)
            sums = np.empty(k)
            for idx in range(k):
                run.check()
                sums[idx] = oracle.sample(X[idx], (rnd, cand[idx]))
            T = np.ones(k)
            t = k
            while k > 1:
                mu = sums / T
                rad = R * np.sqrt(2.0 * (log_const + 2.0 * math.log(t)) / T)
                h = int(np.argmax(mu))
                ucb = mu + rad
                ucb[h] = -np.inf
                c = int(np.argmax(ucb))
                if ucb[c] <= mu[h] - rad[h] + slack:
                    break
                pick = h if rad[h] > rad[c] or (rad[h] == rad[c] and h < c) else c
                run.check()
                sums[pick] += oracle.sample(X[pick], (rnd, cand[pick]))
                T[pick] += 1
                t += 1
            best = int(np.argmax(sums / T))
            model.add_element(sol, cand[best])
            run.end_round()
    except BudgetExhaustedError as err:
        raise run.partial(err, sol.members)
    return run.result(sol.members)
