"""Exact-oracle references used as test oracles."""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from ..coverage import CoverageModel
from ..errors import InvalidArgumentError
from .base import RunResult, threshold_schedule

BRUTE_FORCE_CAP = 10**6


def _result(tag, model, w, solution, **config) -> RunResult:
    return RunResult(tag, list(solution), model.exact_objective(w, solution), 0, config=config)


def run_exact_greedy(model: CoverageModel, w_true, kappa: int) -> RunResult:
    w = np.asarray(w_true, dtype=float)
    state = model.empty_state()
    for _ in range(min(kappa, model.n)):
        cand = [a for a in range(model.n) if a not in state]
        gains = model.marginal_gain_matrix(state, cand) @ w
        model.add_element(state, cand[int(np.argmax(gains))])
    return _result("exact_greedy", model, w, state.members, kappa=kappa)


def run_exact_threshold(model: CoverageModel, w_true, kappa: int, alpha: float,
                        slack: float = 0.0) -> RunResult:
    """Threshold greedy; adds ``a`` when its gain is at least ``threshold - slack``."""
    w = np.asarray(w_true, dtype=float)
    g = float(np.max(model.relevance @ w))
    state = model.empty_state()
    evaluations = 0
    for thr in threshold_schedule(g, kappa, alpha):
        for a in range(model.n):
            if len(state) >= kappa:
                break
            if a in state:
                continue
            evaluations += 1
            if float(model.marginal_gain_vector(state, a) @ w) >= thr - slack:
                model.add_element(state, a)
    res = _result("exact_threshold", model, w, state.members, kappa=kappa, alpha=alpha, slack=slack)
    res.evaluations = evaluations
    return res


def brute_force_opt(model: CoverageModel, w_true, kappa: int, chunk: int = 20000):
    """Best set of size at most ``kappa`` by enumeration; returns ``(sorted set, value)``."""
    w = np.asarray(w_true, dtype=float)
    k_max = min(kappa, model.n)
    total = sum(comb(model.n, k) for k in range(k_max + 1))
    if total > BRUTE_FORCE_CAP:
        raise InvalidArgumentError(f"{total} subsets exceeds the enumeration cap {BRUTE_FORCE_CAP}")
    one_minus = 1.0 - model.relevance
    best_set, best_val = (), 0.0
    for k in range(1, k_max + 1):
        it = combinations(range(model.n), k)
        while True:
            block = np.array(list(_take(it, chunk)), dtype=int)
            if block.size == 0:
                break
            vals = (1.0 - np.prod(one_minus[block], axis=1)) @ w
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best_set = float(vals[i]), tuple(block[i])
    return sorted(int(x) for x in best_set), best_val


def _take(it, k):
    for _, item in zip(range(k), it):
        yield item
