"""Relaxation rates and the universal bounds ``Gamma_k <= Gamma / alpha``.

``alpha`` is 1 for positive, 3/2 for Schwarz and 2 for completely positive
semigroups; any value in ``[1, 2]`` is accepted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidAlpha, PreconditionViolated, UnsupportedForm
from .generators import GeneratorSpec, PhaseCovariant, canonical_form, damping_matrix
from .linalg import as_finite, char_poly_coefficients, eig_general

ALPHA_POSITIVE = 1.0
ALPHA_SCHWARZ = 1.5
ALPHA_CP = 2.0


@dataclass(frozen=True)
class RelaxationRates:
    """Rates in descending order with co-indexed oscillation frequencies."""

    gamma: tuple
    omegas: tuple
    total: float

    @property
    def max(self) -> float:
        return self.gamma[0]


def rates_from_eigenvalues(eigs) -> RelaxationRates:
    eigs = np.asarray(eigs, dtype=complex)
    order = np.lexsort((-eigs.imag, -np.round(eigs.real, 12)))
    eigs = eigs[order]
    gamma = tuple(float(v) for v in eigs.real)
    return RelaxationRates(gamma, tuple(float(v) for v in eigs.imag), float(sum(gamma)))


def relaxation_rates(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> RelaxationRates:
    return rates_from_eigenvalues(eig_general(canonical_form(spec, tol).G, tol))


def _check_alpha(alpha):
    alpha = float(alpha)
    if not 1.0 <= alpha <= 2.0:
        raise InvalidAlpha(f"alpha must lie in [1, 2], got {alpha}")
    return alpha


def alpha_bound(rates: RelaxationRates, alpha: float) -> float:
    """Signed slack ``Gamma / alpha - Gamma_max``; the bound holds iff it is >= 0."""
    alpha = _check_alpha(alpha)
    return rates.total / alpha - rates.max


def critical_alpha(rates: RelaxationRates) -> float:
    """Largest ``alpha`` with ``Gamma_max <= Gamma / alpha`` (``inf`` if ``Gamma_max <= 0``)."""
    if rates.max <= 0:
        return float("inf")
    return rates.total / rates.max


def char_poly_criterion(g, alpha: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``f(tr G / alpha)`` with ``f(x) = det(x 1 - G)``.

    Only defined when every eigenvalue of ``G`` has non-negative real part.
    """
    alpha = _check_alpha(alpha)
    g = as_finite(g, dtype=float, name="G")
    eigs = eig_general(g, tol)
    scale = max(np.linalg.norm(g, 2), 1.0)
    if np.any(eigs.real < -tol.eigen_residual * scale):
        raise PreconditionViolated("G has an eigenvalue with negative real part")
    b, c, d = char_poly_coefficients(g)
    x = np.trace(g) / alpha
    return float(((x + b) * x + c) * x + d)


def g_inequalities(g) -> np.ndarray:
    """``(2(g2+g3)-g1, 2(g3+g1)-g2, 2(g1+g2)-g3)``; all non-negative for Schwarz semigroups."""
    g1, g2, g3 = as_finite(g, dtype=float, name="g")
    return np.array([2 * (g2 + g3) - g1, 2 * (g3 + g1) - g2, 2 * (g1 + g2) - g3])


def f_expansion_check(g, h) -> float:
    """Factorised form of ``(27/64) f(3 tr G / 2)`` for ``G = G(g, h)``.

    Equals ``A1 A2 A3 + 9/4 sum_k h_k^2 A_k`` with ``A`` the
    :func:`g_inequalities` margins, so non-negative ``A`` forces the
    Schwarz bound.
    """
    a = g_inequalities(g)
    h = as_finite(h, dtype=float, name="h")
    return float(a[0] * a[1] * a[2] + 2.25 * np.dot(h * h, a))


def f_expansion_reference(g, h) -> float:
    """``(27/64) * char_poly_criterion(G(g, h), 3/2)`` evaluated directly."""
    big_g = damping_matrix(np.asarray(g, float), np.asarray(h, float))
    b, c, d = char_poly_coefficients(big_g)
    x = np.trace(big_g) / 1.5
    return float(27.0 / 64.0 * (((x + b) * x + c) * x + d))


@dataclass(frozen=True)
class TLCheck:
    gamma_t: float
    gamma_l: float
    margin_2tl: float  # 2 Gamma_T - Gamma_L (CP)
    margin_4tl: float  # 4 Gamma_T - Gamma_L (Schwarz)
    margin_23: float  # 2/3 Gamma - max(Gamma_T, Gamma_L)


def tl_check(spec: GeneratorSpec) -> TLCheck:
    tag = spec.tag
    if not isinstance(tag, PhaseCovariant):
        raise UnsupportedForm("transversal/longitudinal rates need a phase-covariant generator")
    gt = 0.5 * (tag.gamma_plus + tag.gamma_minus) + 2.0 * tag.gamma_z
    gl = tag.gamma_plus + tag.gamma_minus
    total = 2.0 * gt + gl
    return TLCheck(gt, gl, 2.0 * gt - gl, 4.0 * gt - gl, 2.0 / 3.0 * total - max(gt, gl))
