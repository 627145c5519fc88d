"""Greedy with a static (reward-independent) sampling design per round (LBSS)."""

from __future__ import annotations

import numpy as np

from ..coverage import CoverageModel
from ..errors import BudgetExhaustedError
from ..estimator import static_radius
from ..linalg import SpdMatrix
from ..oracle import NoisyOracle
from .base import DEFAULT_SAMPLE_CAP, RunResult, RunTracker, check_common

DEFAULT_LAMBDA_STATIC = 1e-8


def _pair_differences(F: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(F.shape[0], k=1)
    return F[i] - F[j]


def next_design_point(A: SpdMatrix, F: np.ndarray, diffs: np.ndarray) -> int:
    """``argmin_x max_{x', x''} ||F_x' - F_x''||^2`` under ``(A + F_x F_x^T)^{-1}``."""
    if diffs.shape[0] == 0:
        return 0
    base = np.einsum("ij,jk,ik->i", diffs, A.inverse, diffs)
    U = F @ A.inverse                      # rows: A^{-1} F_x
    denom = 1.0 + np.einsum("ij,ij->i", U, F)
    proj = diffs @ U.T                      # (pairs, candidates)
    worst = (base[:, None] - proj * proj / denom[None, :]).max(axis=0)
    return int(np.argmin(worst))


def run_lbss(model: CoverageModel, oracle: NoisyOracle, kappa: int, epsilon: float, delta: float,
             lambda_static: float = DEFAULT_LAMBDA_STATIC, R: float = None,
             sample_cap: int = DEFAULT_SAMPLE_CAP) -> RunResult:
    """Each round starts a fresh least-squares design and stops on the static-radius test.

    The design matrix starts at ``lambda_static * I`` so it is invertible from the
    first step.  The stopping test is only consulted once the sampled vectors span
    every candidate marginal gain; before that the tiny ridge, not the data,
    decides the estimate in unexplored directions.
    """
    check_common(kappa, epsilon, delta)
    R = oracle.R if R is None else float(R)
    n = model.n
    run = RunTracker("lbss", model, oracle, sample_cap, kappa=kappa, epsilon=epsilon, delta=delta,
                     lambda_static=lambda_static, R=R)
    sol = model.empty_state()
    slack = epsilon / kappa
    try:
        for rnd in range(kappa):
            cand = [a for a in range(n) if a not in sol]
            if not cand:
                break
            run.begin_round()
            F = model.marginal_gain_matrix(sol, cand)
            diffs = _pair_differences(F)
            full_rank = np.linalg.matrix_rank(F)
            A = SpdMatrix.ridge(model.d, lambda_static)
            b = np.zeros(model.d)
            sampled: set = set()
            spanned = full_rank == 0
            t = 0
            chosen = 0
            while True:
                x_idx = next_design_point(A, F, diffs)
                run.check()
                r = oracle.sample(F[x_idx], (rnd, cand[x_idx]))
                A.rank_one_update(F[x_idx])
                b += r * F[x_idx]
                t += 1
                if x_idx not in sampled:
                    sampled.add(x_idx)
                    spanned = np.linalg.matrix_rank(F[sorted(sampled)]) == full_rank
                if not spanned and len(cand) > 1:
                    continue
                w_hat = A.inverse @ b
                est = F @ w_hat
                D_t = static_radius(t, kappa, n, delta, R)
                gaps = est[:, None] - est[None, :] + slack
                # ||F_x - F_x'||_{A^{-1}} for all pairs
                AF = F @ A.inverse
                sq = (np.einsum("ij,ij->i", AF, F)[:, None] + np.einsum("ij,ij->i", AF, F)[None, :]
                      - 2.0 * AF @ F.T)
                widths = D_t * np.sqrt(np.maximum(sq, 0.0))
                ok = np.flatnonzero(np.all(widths <= gaps, axis=1))
                if ok.size:
                    chosen = int(ok[0])
                    break
            model.add_element(sol, cand[chosen])
            run.end_round()
    except BudgetExhaustedError as err:
        raise run.partial(err, sol.members)
    return run.result(sol.members)
