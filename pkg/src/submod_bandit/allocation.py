"""Sample-allocation ratios over a pool of arms.

The LP-optimal ratio for shrinking ``||y||_{A^{-1}}`` comes from the minimum-L1
representation of ``y`` in the arm features::

    min sum_a |w_a|   s.t.   y = sum_a w_a x_a,      p_a = |w_a| / sum |w|

The LP is solved with a dense two-phase tableau simplex on the split
``w = w+ - w-`` using Bland's rule, which cannot cycle.  Among several optimal
vertices the first one reached is returned, so the ratio is deterministic but
not unique in general.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

import numpy as np

from .errors import InfeasibleTargetError, InvalidArgumentError

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-10
_SUPPORT_TOL = 1e-12
_MAX_PIVOTS = 200_000


class ArmPool:
    """Growing list of keyed arm features with per-arm sample counts."""

    def __init__(self, d: int, capacity: int = 64):
        self.d = int(d)
        self._features = np.empty((max(capacity, 1), self.d))
        self.counts = np.zeros(max(capacity, 1), dtype=np.int64)
        self.keys: list = []
        self._index: dict = {}

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def features(self) -> np.ndarray:
        return self._features[: len(self.keys)]

    @property
    def T(self) -> np.ndarray:
        return self.counts[: len(self.keys)]

    def add(self, key: Hashable, feature, count: int = 0) -> int:
        if key in self._index:
            raise InvalidArgumentError(f"duplicate arm key {key!r}")
        feature = np.asarray(feature, dtype=float)
        if feature.shape != (self.d,):
            raise InvalidArgumentError(f"arm feature must have length {self.d}")
        m = len(self.keys)
        if m == self._features.shape[0]:
            self._features = np.concatenate([self._features, np.empty_like(self._features)])
            self.counts = np.concatenate([self.counts, np.zeros_like(self.counts)])
        self._features[m] = feature
        self.counts[m] = count
        self.keys.append(key)
        self._index[key] = m
        return m

    def index_of(self, key: Hashable) -> int:
        return self._index[key]


@dataclass
class AllocationRatio:
    p: np.ndarray
    kind: str
    rho: Optional[float] = None

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.support = np.flatnonzero(self.p > _SUPPORT_TOL)
        self.p_support = self.p[self.support]


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _run_simplex(T: np.ndarray, basis: list, n_cols: int) -> None:
    """Minimize with Bland's rule; last row of ``T`` holds reduced costs and -objective.

    Both objectives solved here are bounded below, so an improving column with no
    positive entry can only be round-off; such columns are passed over.
    """
    for _ in range(_MAX_PIVOTS):
        reduced = T[-1, :n_cols]
        for col in np.flatnonzero(reduced < -_COST_TOL):
            column = T[:-1, col]
            rows = np.flatnonzero(column > _PIVOT_TOL)
            if rows.size:
                break
        else:
            return
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + _PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, row, int(col))
        basis[row] = int(col)
    raise RuntimeError("simplex pivot limit reached")


def solve_standard_form(M: np.ndarray, y: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Minimize ``c.z`` s.t. ``M z = y``, ``z >= 0`` (``c >= 0``); return an optimal vertex."""
    M = np.array(M, dtype=float)
    y = np.array(y, dtype=float)
    k, n = M.shape
    flip = y < 0
    M[flip] *= -1
    y[flip] *= -1

    # phase I: artificials n..n+k-1
    T = np.zeros((k + 1, n + k + 1))
    T[:k, :n] = M
    T[:k, n:n + k] = np.eye(k)
    T[:k, -1] = y
    T[-1, :n] = -M.sum(axis=0)
    T[-1, -1] = -y.sum()
    basis = list(range(n, n + k))
    _run_simplex(T, basis, n + k)
    scale = max(1.0, float(np.abs(y).max(initial=0.0)))
    if -T[-1, -1] > 1e-9 * scale:
        raise InfeasibleTargetError("target is not representable by the arm features")

    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for r in range(k):
        if basis[r] >= n:
            cand = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
            if cand.size:
                col = int(cand[0])
                _pivot(T, r, col)
                basis[r] = col
                keep.append(r)
        else:
            keep.append(r)
    rows = keep
    T2 = np.zeros((len(rows) + 1, n + 1))
    T2[:-1, :n] = T[rows, :n]
    T2[:-1, -1] = T[rows, -1]
    basis2 = [basis[r] for r in rows]
    cb = c[basis2]
    T2[-1, :n] = c - cb @ T2[:-1, :n]
    T2[-1, -1] = -cb @ T2[:-1, -1]
    _run_simplex(T2, basis2, n)

    z = np.zeros(n)
    for r, j in enumerate(basis2):
        z[j] = max(T2[r, -1], 0.0)
    return z


def _features_of(pool) -> np.ndarray:
    return pool.features if isinstance(pool, ArmPool) else np.atleast_2d(np.asarray(pool, dtype=float))


def l1_min_representation(pool, target) -> tuple[np.ndarray, float]:
    """Minimum-L1 coefficients ``w`` with ``target = sum_a w_a x_a``; returns ``(w, rho)``."""
    X = _features_of(pool)
    y = np.asarray(target, dtype=float)
    m, d = X.shape
    if y.shape != (d,):
        raise InvalidArgumentError(f"target must have length {d}")
    if m == 0:
        raise InfeasibleTargetError("empty arm pool")
    norm = float(np.linalg.norm(y))
    if norm == 0.0:
        return np.zeros(m), 0.0
    fit, *_ = np.linalg.lstsq(X.T, y, rcond=None)
    if np.linalg.norm(X.T @ fit - y) > 1e-6 * norm:
        raise InfeasibleTargetError("target lies outside the span of the arm features")
    M = np.hstack([X.T, -X.T])
    z = solve_standard_form(M, y, np.ones(2 * m))
    w = z[:m] - z[m:]
    return w, float(np.abs(w).sum())


def ratio_current_only(pool, current: int) -> AllocationRatio:
    m = len(_features_of(pool))
    p = np.zeros(m)
    p[current] = 1.0
    return AllocationRatio(p, "current_only")


def ratio_lp(pool, target, current: int = None) -> AllocationRatio:
    """LP-optimal ratio; a zero target falls back to sampling ``current`` only (default: last arm)."""
    w, rho = l1_min_representation(pool, target)
    if rho == 0.0:
        ratio = ratio_current_only(pool, len(w) - 1 if current is None else current)
        ratio.rho = 0.0
        return ratio
    return AllocationRatio(np.abs(w) / rho, "lp_optimal", rho)


def ratio_pairwise_half(pool, i: int, j: int) -> AllocationRatio:
    if i == j:
        raise InvalidArgumentError("pairwise ratio needs two distinct arms")
    p = np.zeros(len(_features_of(pool)))
    p[i] = p[j] = 0.5
    return AllocationRatio(p, "pairwise_half")


def select_arm(pool: ArmPool, ratio: AllocationRatio) -> int:
    """``argmin_{p_a > 0} T_a / p_a``; ties go to the smallest arm index."""
    if ratio.support.size == 0:
        raise InvalidArgumentError("allocation ratio has empty support")
    scores = pool.counts[ratio.support] / ratio.p_support
    return int(ratio.support[int(np.argmin(scores))])
