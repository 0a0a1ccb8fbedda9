"""Bloch-vector dynamics ``dr/dt = -G r + c`` and the semigroup maps ``exp(t L)``.

Everything here works in the lab (Pauli) frame, ``rho = (1 + r . s) / 2``.
"""
from __future__ import annotations

import numpy as np

from ._config import DEFAULT_TOLERANCES, Tolerances
from .errors import NegativeTime
from .generators import GeneratorSpec, lab_bloch_affine, pauli_transfer_matrix, superoperator
from .linalg import as_finite, expm
from .maps import QubitMap


def _check_time(t):
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    if t < 0.0:
        raise NegativeTime(f"t must be >= 0, got {t}")
    return t


def _augmented(spec: GeneratorSpec) -> np.ndarray:
    g, c = lab_bloch_affine(spec)
    aug = np.zeros((4, 4))
    aug[:3, :3] = -g
    aug[:3, 3] = c
    return aug


def propagate(spec: GeneratorSpec, r0, t: float) -> np.ndarray:
    """Bloch vector at time ``t`` from the exact affine exponential."""
    t = _check_time(t)
    r0 = as_finite(r0, dtype=float, name="r0")
    prop = expm(_augmented(spec), t)
    return prop[:3, :3] @ r0 + prop[:3, 3]


def propagators(spec: GeneratorSpec, times):
    """Affine maps ``r -> A_t r + b_t`` for each time, as arrays ``(n, 3, 3)`` and ``(n, 3)``."""
    times = as_finite(times, dtype=float, name="times")
    if np.any(times < 0):
        raise NegativeTime("times must be >= 0")
    aug = _augmented(spec)
    props = np.array([expm(aug, t) for t in times])
    return props[:, :3, :3], props[:, :3, 3]


def trajectory(spec: GeneratorSpec, r0, times) -> np.ndarray:
    """Rows ``r(t)`` for each entry of ``times`` (each propagated from ``t = 0``)."""
    r0 = as_finite(r0, dtype=float, name="r0")
    a, b = propagators(spec, times)
    return a @ r0 + b


def semigroup_map(spec: GeneratorSpec, t: float) -> QubitMap:
    """Schroedinger-picture map ``exp(t L)``."""
    t = _check_time(t)
    ptm = pauli_transfer_matrix(superoperator(spec)).real
    return QubitMap.from_ptm(expm(ptm, t), name=f"exp({t} L)")


def stationary_state(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES):
    """Unique fixed point ``G r = c`` or ``None`` when ``G`` is singular."""
    g, c = lab_bloch_affine(spec)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= tol.eigen_residual * max(s[0], 1.0):
        return None
    return np.linalg.solve(g, c)
