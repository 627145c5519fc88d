"""Regularized least squares with self-normalized confidence radii."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError
from .linalg import SpdMatrix

# Used when the noise scale is zero and the usual default would be lambda = 0.
LAMBDA_FLOOR = 1e-8


def default_lambda(R: float, S_bound: float, delta: float) -> float:
    """``min(1, 2 R^2 / S^2 * log(1/delta))``, floored at ``LAMBDA_FLOOR``."""
    if S_bound <= 0:
        return 1.0
    lam = min(1.0, 2.0 * R * R / (S_bound * S_bound) * math.log(1.0 / delta))
    return max(lam, LAMBDA_FLOOR)


class RlsState:
    """Running ``A = lam I + sum x x^T``, ``b = sum r x`` and ``log det A``."""

    def __init__(self, d: int, lam: float, delta: float, R: float, S_bound: float = 1.0):
        if not 0 < delta < 1:
            raise InvalidArgumentError(f"delta must be in (0, 1), got {delta!r}")
        if R < 0 or S_bound < 0:
            raise InvalidArgumentError("R and S_bound must be nonnegative")
        self.A = SpdMatrix.ridge(d, lam)
        self.d = int(d)
        self.lam = float(lam)
        self.delta = float(delta)
        self.R = float(R)
        self.S_bound = float(S_bound)
        self.b = np.zeros(self.d)
        self.t = 0
        self.log_det_A = self.d * math.log(self.lam)
        self._w_hat = np.zeros(self.d)

    def absorb(self, x, r: float) -> "RlsState":
        """Add one observation ``(x, r)``."""
        return self.absorb_repeated(x, 1, r)

    def absorb_repeated(self, x, count: int, reward_sum: float) -> "RlsState":
        """Add ``count`` observations of the same feature ``x`` whose rewards sum to ``reward_sum``."""
        x = np.asarray(x, dtype=float)
        if not (np.all(np.isfinite(x)) and math.isfinite(reward_sum)):
            raise InvalidArgumentError("non-finite observation")
        if count < 1:
            raise InvalidArgumentError("count must be positive")
        ratio = self.A.rank_one_update(x, scale=float(count))
        self.b += reward_sum * x
        self.t += int(count)
        self.log_det_A += math.log(ratio)
        self._w_hat = None
        return self

    @property
    def w_hat(self) -> np.ndarray:
        if self._w_hat is None:
            self._w_hat = self.A.inverse @ self.b
        return self._w_hat

    def _radius(self, log_factor: float, delta: float) -> float:
        inner = 0.5 * self.log_det_A - 0.5 * self.d * math.log(self.lam) + log_factor - math.log(delta)
        return self.R * math.sqrt(2.0 * max(inner, 0.0)) + math.sqrt(self.lam) * self.S_bound

    def confidence_radius_adaptive(self) -> float:
        """``C_t = R sqrt(2 log(det(A)^1/2 det(lam I)^-1/2 / delta)) + sqrt(lam) S``."""
        return self._radius(0.0, self.delta)

    def pairwise_width(self, y_i, y_j) -> float:
        diff = np.asarray(y_j, dtype=float) - np.asarray(y_i, dtype=float)
        return self.confidence_radius_adaptive() * self.A.quad_norm(diff)

    def single_width(self, y, delta_override: float = None) -> float:
        """Threshold-test width: the adaptive radius with ``2/delta`` inside the log, times ``||y||_{A^-1}``."""
        delta = self.delta if delta_override is None else delta_override
        return self._radius(math.log(2.0), delta) * self.A.quad_norm(y)

    def single_radius(self, delta_override: float = None) -> float:
        delta = self.delta if delta_override is None else delta_override
        return self._radius(math.log(2.0), delta)


def static_radius(t: int, kappa: int, n: int, delta: float, R: float) -> float:
    """``D_t = R sqrt(2 log(pi^2 t^2 kappa n^2 / (3 delta)))`` for fixed-design least squares."""
    if t < 1:
        raise InvalidArgumentError("static radius needs t >= 1")
    arg = math.pi ** 2 * t * t * kappa * n * n / (3.0 * delta)
    return R * math.sqrt(2.0 * max(math.log(arg), 0.0))


def absorb(state: RlsState, x, r: float) -> RlsState:
    return state.absorb(x, r)


def confidence_radius_adaptive(state: RlsState) -> float:
    return state.confidence_radius_adaptive()


def pairwise_width(state: RlsState, y_i, y_j) -> float:
    return state.pairwise_width(y_i, y_j)


def single_width(state: RlsState, y, delta_override: float = None) -> float:
    return state.single_width(y, delta_override)
