from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..coverage import CoverageModel
from ..errors import BudgetExhaustedError, InvalidArgumentError
from ..oracle import NoisyOracle

DEFAULT_SAMPLE_CAP = 10**8


@dataclass
class RunResult:
    algorithm: str
    solution: list
    exact_value: float
    total_samples: int
    per_round_samples: list = field(default_factory=list)
    init_samples: int = 0
    wallclock: float = 0.0
    config: dict = field(default_factory=dict)
    evaluations: Optional[int] = None
    status: str = "ok"


class RunTracker:
    """Shared bookkeeping for one run: sample cap, round accounting, timing."""

    def __init__(self, tag: str, model: CoverageModel, oracle: NoisyOracle,
                 sample_cap: int = DEFAULT_SAMPLE_CAP, **config):
        if model.d != oracle.d:
            raise InvalidArgumentError(f"model has d={model.d} but oracle has d={oracle.d}")
        self.tag = tag
        self.model = model
        self.oracle = oracle
        self.cap = int(sample_cap)
        self.config = config
        self.start_total = oracle.ledger.total
        self.start_time = time.perf_counter()
        self.per_round: list = []
        self.init_samples = 0
        self._round_start = self.start_total
        self.evaluations = None

    @property
    def used(self) -> int:
        return self.oracle.ledger.total - self.start_total

    def check(self, k: int = 1) -> None:
        if self.used + k > self.cap:
            raise BudgetExhaustedError(f"{self.tag}: sample cap {self.cap} exceeded")

    def begin_round(self) -> None:
        self._round_start = self.oracle.ledger.total

    def end_round(self) -> None:
        self.per_round.append(self.oracle.ledger.total - self._round_start)

    def end_init(self) -> None:
        self.init_samples = self.used

    def result(self, solution, status: str = "ok") -> RunResult:
        solution = [int(x) for x in solution]
        return RunResult(
            algorithm=self.tag,
            solution=solution,
            exact_value=self.model.exact_objective(self.oracle.w_true, solution),
            total_samples=self.used,
            per_round_samples=list(self.per_round),
            init_samples=self.init_samples,
            wallclock=time.perf_counter() - self.start_time,
            config=dict(self.config),
            evaluations=self.evaluations,
            status=status,
        )

    def partial(self, err: BudgetExhaustedError, solution) -> BudgetExhaustedError:
        # the unfinished round's samples still count
        if self.oracle.ledger.total > self._round_start:
            self.end_round()
        err.partial = self.result(solution, status="budget_exhausted")
        return err


def check_common(kappa, epsilon, delta) -> None:
    if int(kappa) != kappa or kappa < 1:
        raise InvalidArgumentError(f"kappa must be a positive integer, got {kappa!r}")
    if not epsilon > 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon!r}")
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta!r}")


def threshold_schedule(g: float, kappa: int, alpha: float):
    """Thresholds ``g, (1-alpha) g, ...`` while strictly above ``alpha g / kappa``."""
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must be in (0, 1), got {alpha!r}")
    out = []
    w = g
    floor = alpha * g / kappa
    while w > floor:
        out.append(w)
        w = (1.0 - alpha) * w
    return out


def max_threshold_rounds(kappa: int, alpha: float) -> int:
    """``floor(log_{1/(1-alpha)}(kappa/alpha)) + 1``."""
    return int(np.floor(np.log(kappa / alpha) / np.log(1.0 / (1.0 - alpha)))) + 1
