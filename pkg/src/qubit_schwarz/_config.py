from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InvalidSamplingPlan

#: Set to ``numpy`` to bypass the numba kernels (also used when numba is missing).
BACKEND_ENV = "QUBIT_SCHWARZ_BACKEND"


def requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {value!r}")
    return value


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances referenced by every verdict in the package."""

    hermiticity: float = 1e-10  # relative to the matrix norm
    eigen_residual: float = 1e-9
    closed_margin: float = 1e-9
    oracle_margin: float = 1e-6
    structural: float = 1e-12  # special-form pattern detection
    unital: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SamplingPlan:
    """Grid size and refinement budget for the numerical oracles.

    ``seed`` only drives the optional refinement restarts; the base grid is
    a fixed deterministic point set.
    """

    grid_points: int = 4096
    refine_iters: int = 200
    seed: int = 0
    restarts: int = 0

    def __post_init__(self):
        if int(self.grid_points) != self.grid_points or self.grid_points < 16:
            raise InvalidSamplingPlan(f"grid_points must be an integer >= 16, got {self.grid_points}")
        if int(self.refine_iters) != self.refine_iters or self.refine_iters < 0:
            raise InvalidSamplingPlan(f"refine_iters must be >= 0, got {self.refine_iters}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSamplingPlan(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.restarts < 0:
            raise InvalidSamplingPlan(f"restarts must be >= 0, got {self.restarts}")


DEFAULT_PLAN = SamplingPlan()
