from .base import RunResult, max_threshold_rounds, threshold_schedule
from .baselines import run_expgreedy_baseline, run_tg_baseline
from .exact import brute_force_opt, run_exact_greedy, run_exact_threshold
from .lbss import run_lbss
from .lg import run_lg
from .lintg import run_lintg, run_lintg_h

# tag -> (runner, fixed kwargs, parameters it accepts from an experiment config)
ALGORITHMS = {
    "lg": (run_lg, {"ratio_kind": "lp_optimal"}, ("kappa", "epsilon", "delta", "lam")),
    "lg_half": (run_lg, {"ratio_kind": "pairwise_half"}, ("kappa", "epsilon", "delta", "lam")),
    "lintg": (run_lintg, {"ratio_kind": "lp_optimal"}, ("kappa", "epsilon", "delta", "alpha", "lam")),
    "lintg_h": (run_lintg, {"ratio_kind": "current_only"}, ("kappa", "epsilon", "delta", "alpha", "lam")),
    "lbss": (run_lbss, {}, ("kappa", "epsilon", "delta")),
    "tg": (run_tg_baseline, {}, ("kappa", "epsilon", "delta", "alpha")),
    "expgreedy": (run_expgreedy_baseline, {}, ("kappa", "epsilon", "delta")),
}

__all__ = [
    "ALGORITHMS", "RunResult", "brute_force_opt", "max_threshold_rounds", "run_exact_greedy",
    "run_exact_threshold", "run_expgreedy_baseline", "run_lbss", "run_lg", "run_lintg",
    "run_lintg_h", "run_tg_baseline", "threshold_schedule",
]
