"""Cardinality-constrained maximization of linear combinations of submodular functions
under noisy bandit feedback."""

from .coverage import CoverageModel, SolutionState
from .estimator import RlsState, static_radius
from .linalg import SpdMatrix
from .oracle import NoisyOracle

__version__ = "0.1.0"
