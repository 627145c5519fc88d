"""Linear greedy: kappa rounds of linear best-arm identification with sample reuse."""

from __future__ import annotations

import numpy as np

from ..allocation import ArmPool, ratio_lp, ratio_pairwise_half, select_arm
from ..coverage import CoverageModel
from ..errors import BudgetExhaustedError, InvalidArgumentError
from ..estimator import RlsState, default_lambda
from ..oracle import NoisyOracle
from .base import DEFAULT_SAMPLE_CAP, RunResult, RunTracker, check_common

RATIO_KINDS = ("lp_optimal", "pairwise_half")


def run_lg(model: CoverageModel, oracle: NoisyOracle, kappa: int, epsilon: float, delta: float,
           lam: float = None, ratio_kind: str = "lp_optimal", R: float = None,
           sample_cap: int = DEFAULT_SAMPLE_CAP) -> RunResult:
    """Greedy selection where each round identifies an (epsilon/kappa)-best marginal gain.

    One estimator (A, b) is shared by all rounds, and the arm pool keeps every past
    round's marginal-gain vectors, so later rounds may sample earlier arms.  A round
    ends once the gap bound ``B(t)`` drops to ``epsilon / kappa``.
    """
    check_common(kappa, epsilon, delta)
    if ratio_kind not in RATIO_KINDS:
        raise InvalidArgumentError(f"ratio_kind must be one of {RATIO_KINDS}")
    R = oracle.R if R is None else float(R)
    lam = default_lambda(R, oracle.S_bound, delta) if lam is None else float(lam)
    tag = "lg" if ratio_kind == "lp_optimal" else "lg_half"
    run = RunTracker(tag, model, oracle, sample_cap, kappa=kappa, epsilon=epsilon, delta=delta,
                     lam=lam, R=R, ratio_kind=ratio_kind)
    state = RlsState(model.d, lam, delta, R, oracle.S_bound)
    pool = ArmPool(model.d, capacity=model.n * min(kappa, model.n))
    sol = model.empty_state()
    stop_gap = epsilon / kappa
    lp_cache: dict = {}

    try:
        for rnd in range(kappa):
            cand = [a for a in range(model.n) if a not in sol]
            if not cand:
                break
            run.begin_round()
            X = model.marginal_gain_matrix(sol, cand)
            arm = np.empty(len(cand), dtype=int)
            for k, (a, x) in enumerate(zip(cand, X)):
                run.check()
                key = (rnd, a)
                state.absorb(x, oracle.sample(x, key))
                arm[k] = pool.add(key, x, count=1)

            while True:
                est = X @ state.w_hat
                i = int(np.argmax(est))
                widths = state.confidence_radius_adaptive() * state.A.quad_norms(X - X[i])
                ucb = est - est[i] + widths
                j = int(np.argmax(ucb))
                if ucb[j] <= stop_gap:
                    break
                if ratio_kind == "pairwise_half":
                    ratio = ratio_pairwise_half(pool, arm[i], arm[j])
                else:
                    ratio = lp_cache.get((rnd, i, j))
                    if ratio is None:
                        ratio = lp_cache[(rnd, i, j)] = ratio_lp(pool, X[i] - X[j], current=arm[i])
                k = select_arm(pool, ratio)
                run.check()
                x = pool.features[k]
                state.absorb(x, oracle.sample(x, pool.keys[k]))
                pool.counts[k] += 1

            model.add_element(sol, cand[i])
            run.end_round()
    except BudgetExhaustedError as err:
        raise run.partial(err, sol.members)
    return run.result(sol.members)
