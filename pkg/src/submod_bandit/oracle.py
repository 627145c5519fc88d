"""Simulated noisy marginal-gain oracle.

Two noise modes are supported:

``gaussian``
    reward = x . w_true + N(0, sigma^2).
``user_mixture``
    draw a user row ``a`` uniformly from ``W`` and return ``W[a] . x`` exactly;
    ``w_true`` is the row mean of ``W``.

Randomness comes from a Philox (counter-based) bit generator seeded through a
``numpy.random.SeedSequence``; independent trials use ``SeedSequence.spawn`` or
distinct entropy tuples so streams never overlap.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Optional

import numpy as np

from .errors import InvalidArgumentError


def make_rng(seed) -> np.random.Generator:
    """Philox generator from an int, a tuple of ints, or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


class SampleLedger:
    """Monotone sample counter with per-arm counts."""

    def __init__(self):
        self.total = 0
        self.per_arm = Counter()

    def record(self, key: Hashable, k: int = 1) -> None:
        self.total += k
        self.per_arm[key] += k

    def consistent(self) -> bool:
        return self.total == sum(self.per_arm.values())


class NoisyOracle:
    def __init__(self, w_true=None, *, sigma: float = None, user_weights=None,
                 R: Optional[float] = None, S_bound: float = 1.0, seed=0):
        if (sigma is None) == (user_weights is None):
            raise InvalidArgumentError("give exactly one of sigma (gaussian) or user_weights (user_mixture)")
        if user_weights is not None:
            W = np.array(user_weights, dtype=float)
            if W.ndim != 2 or W.shape[0] < 1:
                raise InvalidArgumentError("user_weights must be a non-empty 2-D array")
            self.mode = "user_mixture"
            self.user_weights = W
            self.sigma = 0.0
            mean = W.mean(axis=0)
            if w_true is not None and not np.allclose(w_true, mean, atol=1e-12):
                raise InvalidArgumentError("in user_mixture mode w_true must equal the row mean of W")
            self.w_true = mean
        else:
            if w_true is None:
                raise InvalidArgumentError("gaussian mode needs w_true")
            if not (np.isfinite(sigma) and sigma >= 0):
                raise InvalidArgumentError(f"sigma must be >= 0, got {sigma!r}")
            self.mode = "gaussian"
            self.user_weights = None
            self.sigma = float(sigma)
            self.w_true = np.array(w_true, dtype=float)
        if self.w_true.ndim != 1 or np.any(self.w_true < 0):
            raise InvalidArgumentError("w_true must be a nonnegative vector")
        self.d = self.w_true.shape[0]
        if self.user_weights is not None and self.user_weights.shape[1] != self.d:
            raise InvalidArgumentError("user_weights width does not match w_true")
        self.S_bound = float(S_bound)
        if np.linalg.norm(self.w_true) > self.S_bound * (1 + 1e-12):
            raise InvalidArgumentError(f"||w_true|| exceeds S_bound={S_bound}")
        self.seed = seed
        self.rng = make_rng(seed)
        self.ledger = SampleLedger()
        self.R = float(R) if R is not None else self.effective_R()

    def __repr__(self) -> str:
        return f"NoisyOracle(mode={self.mode!r}, d={self.d}, R={self.R:.4g})"

    def _vector(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise InvalidArgumentError(f"query vector must have length {self.d}, got shape {x.shape}")
        return x

    def sample(self, x, key: Hashable = None) -> float:
        """One noisy reward for feature ``x``; charged to arm ``key``."""
        x = self._vector(x)
        self.ledger.record(key)
        if self.mode == "gaussian":
            return float(x @ self.w_true) + self.sigma * float(self.rng.standard_normal())
        a = int(self.rng.integers(self.user_weights.shape[0]))
        return float(self.user_weights[a] @ x)

    def sample_many(self, x, k: int, key: Hashable = None) -> np.ndarray:
        """``k`` i.i.d. rewards for ``x`` (same stream semantics as repeated ``sample``)."""
        x = self._vector(x)
        k = int(k)
        if k < 0:
            raise InvalidArgumentError("k must be nonnegative")
        self.ledger.record(key, k)
        if self.mode == "gaussian":
            return float(x @ self.w_true) + self.sigma * self.rng.standard_normal(k)
        a = self.rng.integers(self.user_weights.shape[0], size=k)
        return (self.user_weights @ x)[a]

    def effective_R(self, probes=None, envelope=None) -> float:
        """Sub-Gaussian scale of the noise.

        Gaussian mode returns sigma.  In user-mixture mode each reward is a bounded
        variable, and a variable confined to an interval of width ``h`` is
        ``h/2``-sub-Gaussian:

        * ``probes`` (rows are query vectors): max over probes of the spread of
          user rewards, halved;
        * ``envelope`` (rows are nonnegative componentwise upper bounds on every
          query the caller will make, with all user weights nonnegative): every
          reward lies in ``[0, max_a W[a] . env]``, so half of that is valid;
        * neither: ``max row sum * sqrt(d) / 2``.
        """
        if self.mode == "gaussian":
            return self.sigma
        W = self.user_weights
        if probes is not None:
            vals = np.atleast_2d(np.asarray(probes, dtype=float)) @ W.T
            return float(np.max(vals.max(axis=1) - vals.min(axis=1)) / 2.0)
        if envelope is not None:
            if np.any(W < 0):
                raise InvalidArgumentError("envelope bound needs nonnegative user weights")
            vals = np.atleast_2d(np.asarray(envelope, dtype=float)) @ W.T
            return float(vals.max() / 2.0) if W.shape[0] > 1 else 0.0
        if W.shape[0] == 1:
            return 0.0
        return float(np.max(np.abs(W).sum(axis=1)) * np.sqrt(self.d) / 2.0)


def sample(oracle: NoisyOracle, x, key: Hashable = None) -> float:
    return oracle.sample(x, key)


def effective_R(oracle: NoisyOracle, probes=None) -> float:
    return oracle.effective_R(probes)
