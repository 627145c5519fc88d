"""Probabilistic coverage basis functions.

Each topic ``i`` gets a basis function ``F_i(S) = 1 - prod_{x in S} (1 - G[x, i])``.
Adding ``x`` to ``S`` raises ``F_i`` by ``G[x, i] * prod_{x' in S} (1 - G[x', i])``,
so a solution only needs to carry the per-topic residual products to answer
marginal-gain queries in O(d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

import numpy as np

from .errors import InvalidArgumentError

# Residuals below this are rebuilt from scratch to avoid underflow drift.
_UNDERFLOW = 1e-300


class SubmodularBasis(Protocol):
    """What the algorithms need from a family of d monotone submodular functions."""

    n: int
    d: int

    def empty_state(self) -> "SolutionState": ...

    def marginal_gain_vector(self, state: "SolutionState", x: int) -> np.ndarray: ...

    def marginal_gain_matrix(self, state: "SolutionState", elements: Sequence[int]) -> np.ndarray: ...

    def add_element(self, state: "SolutionState", x: int) -> "SolutionState": ...

    def basis_values(self, S: Iterable[int]) -> np.ndarray: ...


@dataclass
class SolutionState:
    members: list = field(default_factory=list)
    residual: np.ndarray = None

    def __contains__(self, x) -> bool:
        return x in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    def __post_init__(self):
        self._member_set = set(self.members)

    def copy(self) -> "SolutionState":
        return SolutionState(list(self.members), self.residual.copy())


class CoverageModel:
    """Relevance matrix ``G`` (n elements x d topics, entries in [0, 1])."""

    def __init__(self, relevance, element_ids=None, topic_ids=None):
        G = np.array(relevance, dtype=float)
        if G.ndim != 2 or G.shape[0] < 1 or G.shape[1] < 1:
            raise InvalidArgumentError(f"relevance must be a non-empty 2-D array, got shape {G.shape}")
        if not np.all(np.isfinite(G)) or G.min() < 0.0 or G.max() > 1.0:
            raise InvalidArgumentError("relevance entries must lie in [0, 1]")
        G.setflags(write=False)
        self.relevance = G
        self.n, self.d = G.shape
        self.element_ids = list(element_ids) if element_ids is not None else list(range(self.n))
        self.topic_ids = list(topic_ids) if topic_ids is not None else list(range(self.d))
        if len(self.element_ids) != self.n or len(self.topic_ids) != self.d:
            raise InvalidArgumentError("id lists do not match relevance shape")

    def __repr__(self) -> str:
        return f"CoverageModel(n={self.n}, d={self.d})"

    def subset_topics(self, topics: Sequence[int]) -> "CoverageModel":
        topics = list(topics)
        return CoverageModel(self.relevance[:, topics], self.element_ids,
                             [self.topic_ids[i] for i in topics])

    def _element(self, x) -> int:
        if int(x) != x or not 0 <= x < self.n:
            raise InvalidArgumentError(f"element {x!r} out of range [0, {self.n})")
        return int(x)

    def empty_state(self) -> SolutionState:
        return SolutionState([], np.ones(self.d))

    def basis_value(self, state: SolutionState, i: int) -> float:
        if int(i) != i or not 0 <= i < self.d:
            raise InvalidArgumentError(f"topic index {i!r} out of range [0, {self.d})")
        return 1.0 - float(state.residual[int(i)])

    def marginal_gain_vector(self, state: SolutionState, x: int) -> np.ndarray:
        x = self._element(x)
        if x in state:
            raise InvalidArgumentError(f"element {x} is already in the solution")
        return self.relevance[x] * state.residual

    def marginal_gain_matrix(self, state: SolutionState, elements: Sequence[int]) -> np.ndarray:
        """Stack of marginal-gain vectors; no membership check (callers pass non-members)."""
        return self.relevance[np.asarray(elements, dtype=int)] * state.residual

    def add_element(self, state: SolutionState, x: int) -> SolutionState:
        """Add ``x`` in place and return ``state``."""
        x = self._element(x)
        if x in state:
            raise InvalidArgumentError(f"element {x} is already in the solution")
        state.members.append(x)
        state._member_set.add(x)
        state.residual = state.residual * (1.0 - self.relevance[x])
        tiny = (state.residual > 0) & (state.residual < _UNDERFLOW)
        if np.any(tiny):
            state.residual = self.residual_of(state.members)
        return state

    def residual_of(self, S: Iterable[int]) -> np.ndarray:
        idx = np.fromiter((self._element(x) for x in S), dtype=int)
        return np.prod(1.0 - self.relevance[idx], axis=0) if idx.size else np.ones(self.d)

    def state_of(self, S: Iterable[int]) -> SolutionState:
        state = self.empty_state()
        for x in S:
            self.add_element(state, x)
        return state

    def basis_values(self, S: Iterable[int]) -> np.ndarray:
        """``F(S)`` as a length-d vector, by direct products."""
        return 1.0 - self.residual_of(set(S))

    def exact_objective(self, w, S: Iterable[int]) -> float:
        """``sum_i w_i F_i(S)`` from scratch (no cached residuals)."""
        w = np.asarray(w, dtype=float)
        if w.shape != (self.d,):
            raise InvalidArgumentError(f"weights must have length {self.d}")
        if np.any(w < 0):
            raise InvalidArgumentError("weights must be nonnegative")
        return float(self.basis_values(S) @ w)


def basis_value(model: CoverageModel, state: SolutionState, i: int) -> float:
    return model.basis_value(state, i)


def marginal_gain_vector(model: CoverageModel, state: SolutionState, x: int) -> np.ndarray:
    return model.marginal_gain_vector(state, x)


def add_element(state: SolutionState, model: CoverageModel, x: int) -> SolutionState:
    return model.add_element(state, x)


def exact_objective(model: CoverageModel, w, S: Iterable[int]) -> float:
    return model.exact_objective(w, S)
