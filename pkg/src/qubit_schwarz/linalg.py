"""Small-matrix kernel: Pauli algebra, eigenvalues of 2x2/3x3/4x4 matrices, exponentials.

Matrices are plain numpy arrays. Inputs containing NaN or Inf are rejected
by :func:`as_finite` at the boundary of every public constructor.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import scipy.linalg

from ._config import DEFAULT_TOLERANCES, Tolerances
from .errors import ConvergenceFailure, NonFiniteInput, NonHermitianInput

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
for _m in (IDENTITY2,) + _PAULIS:
    _m.setflags(write=False)

# |0><1| and |1><0| in the sigma_z eigenbasis (|0> has eigenvalue +1)
RAISING = np.array([[0, 1], [0, 0]], dtype=complex)
LOWERING = np.array([[0, 0], [1, 0]], dtype=complex)
RAISING.setflags(write=False)
LOWERING.setflags(write=False)


def pauli_basis():
    """Return ``(sigma_1, sigma_2, sigma_3)``; arrays are read-only."""
    return _PAULIS


def as_finite(a, dtype=complex, name="input"):
    arr = np.array(a, dtype=dtype)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``tr(A^dagger B)``."""
    return complex(np.vdot(np.asarray(a), np.asarray(b)))


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(m, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    m = np.asarray(m)
    scale = max(np.linalg.norm(m), 1.0)
    return bool(np.linalg.norm(m - dagger(m)) <= tol.hermiticity * scale)


def require_hermitian(m, tol: Tolerances = DEFAULT_TOLERANCES, name="matrix"):
    m = as_finite(m, name=name)
    norm = np.linalg.norm(m)
    if np.linalg.norm(m - dagger(m)) > tol.hermiticity * max(norm, 1.0):
        raise NonHermitianInput(f"{name} is not Hermitian")
    return m


def pauli_coordinates(x):
    """Coefficients ``(c0, c1, c2, c3)`` with ``X = c0*1 + sum_k c_k sigma_k``."""
    x = np.asarray(x, dtype=complex)
    return np.array([0.5 * np.trace(p @ x) for p in (IDENTITY2,) + _PAULIS])


def from_pauli_coordinates(c):
    c = np.asarray(c, dtype=complex)
    return c[0] * IDENTITY2 + c[1] * SIGMA_X + c[2] * SIGMA_Y + c[3] * SIGMA_Z


def eig_hermitian2(m):
    """Closed-form ascending eigenvalues of a 2x2 Hermitian matrix."""
    a = m[0, 0].real
    d = m[1, 1].real
    half_gap = math.hypot(0.5 * (a - d), abs(m[0, 1]))
    mean = 0.5 * (a + d)
    return np.array([mean - half_gap, mean + half_gap])


def eig_hermitian(m, tol: Tolerances = DEFAULT_TOLERANCES, return_vectors=False):
    """Ascending real eigenvalues of a 2x2 or 3x3 Hermitian matrix.

    Raises NonHermitianInput when ``||M - M^dagger|| > tol.hermiticity * ||M||``.
    """
    m = require_hermitian(m, tol)
    if m.shape not in ((2, 2), (3, 3)):
        raise ValueError(f"expected a 2x2 or 3x3 matrix, got shape {m.shape}")
    m = 0.5 * (m + dagger(m))
    if return_vectors:
        return np.linalg.eigh(m)
    if m.shape == (2, 2):
        return eig_hermitian2(m)
    return np.linalg.eigvalsh(m)


def _sort_eigenvalues(values):
    values = np.asarray(values, dtype=complex)
    # round the real part so conjugate partners differing in the last ulp sort as ties
    key_re = np.round(values.real, 12)
    order = np.lexsort((-values.imag, -key_re))
    return values[order]


def cubic_roots(b, c, d):
    """Roots of the monic real cubic ``x^3 + b x^2 + c x + d`` in closed form.

    Returns ``None`` when the discriminant is too close to zero for the
    trigonometric/Cardano formulas to be trusted (repeated roots).
    """
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = -(4.0 * p**3 + 27.0 * q * q)
    scale = max(4.0 * abs(p) ** 3, 27.0 * q * q)
    if scale == 0.0 or abs(disc) <= 1e-10 * scale:
        return None
    shift = -b / 3.0
    if disc > 0:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r)
        phi = math.acos(max(-1.0, min(1.0, arg)))
        roots = [shift + r * math.cos((phi - 2.0 * math.pi * k) / 3.0) for k in range(3)]
        return np.array(roots, dtype=complex)
    s = math.sqrt(q * q / 4.0 + p**3 / 27.0)
    u = math.copysign(abs(-q / 2.0 + s) ** (1.0 / 3.0), -q / 2.0 + s)
    v = math.copysign(abs(-q / 2.0 - s) ** (1.0 / 3.0), -q / 2.0 - s)
    real = shift + u + v
    pair = complex(shift - 0.5 * (u + v), 0.5 * math.sqrt(3.0) * (u - v))
    return np.array([real, pair, pair.conjugate()], dtype=complex)


def _newton_polish(root, b, c, d, steps=2):
    z = root
    for _ in range(steps):
        f = ((z + b) * z + c) * z + d
        df = (3.0 * z + 2.0 * b) * z + c
        if df == 0:
            break
        step = f / df
        if not cmath.isfinite(step):
            break
        z = z - step
    return z


def char_poly_coefficients(m):
    """``(b, c, d)`` of ``det(x 1 - M) = x^3 + b x^2 + c x + d`` for a 3x3 matrix."""
    m = np.asarray(m)
    tr = np.trace(m)
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return -tr, minors, -det


def _char_residual(m, lam):
    return abs(np.linalg.det(lam * np.eye(m.shape[0]) - m))


def eig_general(m, tol: Tolerances = DEFAULT_TOLERANCES):
    """Eigenvalues of a real 3x3 or complex 4x4 matrix, sorted by descending real part.

    Real 3x3 input goes through the closed-form cubic; near-degenerate
    spectra fall back to a QR eigensolver on the matrix itself.
    """
    m = as_finite(m, dtype=complex if np.iscomplexobj(m) else float, name="matrix")
    if m.shape not in ((3, 3), (4, 4)):
        raise ValueError(f"expected a 3x3 or 4x4 matrix, got shape {m.shape}")
    norm = np.linalg.norm(m, 2)
    roots = None
    if m.shape == (3, 3) and not np.iscomplexobj(m):
        b, c, d = (float(v) for v in char_poly_coefficients(m))
        roots = cubic_roots(b, c, d)
        if roots is not None:
            polished = _newton_polish(complex(roots[1]), b, c, d)
            if roots[1].imag != 0.0:
                roots = np.array([_newton_polish(complex(roots[0]), b, c, d).real, polished, polished.conjugate()])
            else:
                roots = np.array([_newton_polish(complex(r), b, c, d).real for r in roots], dtype=complex)
            bound = tol.eigen_residual * max(norm, 1e-300) ** 3
            if any(_char_residual(m, r) > bound for r in roots):
                roots = None
    if roots is None:
        try:
            roots = np.linalg.eigvals(m)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
        if not np.iscomplexobj(m) and m.shape == (3, 3):
            roots = _enforce_conjugate_pairs(roots)
    return _sort_eigenvalues(roots)


def _enforce_conjugate_pairs(roots):
    roots = np.asarray(roots, dtype=complex)
    real_idx = [i for i, r in enumerate(roots) if r.imag == 0.0]
    if len(real_idx) == 3:
        return roots.real.astype(complex)
    if len(real_idx) == 1:
        pair = [r for r in roots if r.imag > 0.0]
        if len(pair) == 1:
            return np.array([roots[real_idx[0]].real, pair[0], pair[0].conjugate()])
    return roots


def expm(m, t=1.0):
    """Matrix exponential ``exp(t M)`` (scaling-and-squaring Pade)."""
    m = as_finite(m, dtype=complex if np.iscomplexobj(m) else float, name="matrix")
    return scipy.linalg.expm(float(t) * m)
