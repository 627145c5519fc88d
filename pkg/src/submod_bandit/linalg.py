"""Dense symmetric positive-definite matrices with an incrementally maintained inverse.

The design matrix of a regularized least-squares estimator starts at ``lam * I``
and only ever receives rank-1 additions ``x x^T``.  Its inverse is kept current
with the Sherman-Morrison identity, so each update costs O(d^2) and no inversion
happens in the sampling loops.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError

# Rejection threshold for 1 + x^T A^{-1} x.
_DENOM_FLOOR = 1e-14


class SpdMatrix:
    """A d x d SPD matrix ``entries`` together with ``inverse`` (its maintained inverse)."""

    __slots__ = ("dim", "entries", "inverse")

    def __init__(self, entries: np.ndarray, inverse: np.ndarray):
        self.entries = entries
        self.inverse = inverse
        self.dim = entries.shape[0]

    @classmethod
    def ridge(cls, dim: int, lam: float) -> "SpdMatrix":
        """Return ``lam * I`` of size ``dim``."""
        if int(dim) != dim or dim < 1:
            raise InvalidArgumentError(f"dim must be a positive integer, got {dim!r}")
        if not (np.isfinite(lam) and lam > 0):
            raise InvalidArgumentError(f"lambda must be positive, got {lam!r}")
        dim = int(dim)
        return cls(np.eye(dim) * float(lam), np.eye(dim) / float(lam))

    def copy(self) -> "SpdMatrix":
        return SpdMatrix(self.entries.copy(), self.inverse.copy())

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InvalidArgumentError(f"expected vector of length {self.dim}, got shape {x.shape}")
        return x

    def rank_one_update(self, x, scale: float = 1.0) -> float:
        """Add ``scale * x x^T`` in place and return ``1 + scale * x^T A_old^{-1} x``.

        The returned factor is the determinant ratio det(A_new) / det(A_old).
        """
        x = self._check(x)
        ax = self.inverse @ x
        q = float(x @ ax)
        denom = 1.0 + scale * q
        if denom < _DENOM_FLOOR:
            raise InvalidArgumentError("rank-1 update is numerically degenerate")
        self.entries += scale * np.outer(x, x)
        self.inverse -= (scale / denom) * np.outer(ax, ax)
        # keep both symmetric against round-off drift
        self.inverse = 0.5 * (self.inverse + self.inverse.T)
        return denom

    def quad_norm(self, y) -> float:
        """``sqrt(y^T A^{-1} y)``."""
        y = self._check(y)
        return float(np.sqrt(max(float(y @ self.inverse @ y), 0.0)))

    def quad_norms(self, ys: np.ndarray) -> np.ndarray:
        """Row-wise ``||y||_{A^{-1}}`` for a stack of vectors."""
        ys = np.asarray(ys, dtype=float)
        q = np.einsum("ij,jk,ik->i", ys, self.inverse, ys)
        return np.sqrt(np.maximum(q, 0.0))

    def inverse_error(self) -> float:
        """Max-abs gap between the maintained inverse and a fresh dense inverse."""
        return float(np.max(np.abs(self.inverse - np.linalg.inv(self.entries))))

    def recompute_inverse(self) -> None:
        self.inverse = np.linalg.inv(self.entries)
        self.inverse = 0.5 * (self.inverse + self.inverse.T)


def new_ridge(dim: int, lam: float) -> SpdMatrix:
    return SpdMatrix.ridge(dim, lam)


def rank_one_update(A: SpdMatrix, x) -> SpdMatrix:
    """Functional form: return a copy of ``A`` with ``x x^T`` added."""
    out = A.copy()
    out.rank_one_update(x)
    return out


def quad_norm(A: SpdMatrix, y) -> float:
    return A.quad_norm(y)
