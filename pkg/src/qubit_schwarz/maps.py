"""Unital qubit maps: spectra, spectral alpha-constraints, Markovianity bounds, examples."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._config import DEFAULT_PLAN, DEFAULT_TOLERANCES, SamplingPlan, Tolerances
from .classification import ClassVerdict, _oracle, schwarz_oracle
from .constraints import _check_alpha
from .errors import DomainError, NotUnital, PreconditionViolated
from .generators import pauli_transfer_matrix, superop_from_ptm
from .linalg import IDENTITY2, SIGMA_Z, as_finite
from .search import minimize_on_sphere, oracle_grid

_MATRIX_UNITS = [np.eye(4, dtype=complex)[k].reshape(2, 2) for k in range(4)]


@dataclass(frozen=True, eq=False)
class QubitMap:
    """Linear map on 2x2 matrices stored as a 4x4 superoperator on row-major vec(X)."""

    superop: np.ndarray
    name: str = ""

    def __post_init__(self):
        s = as_finite(self.superop, name="superoperator")
        if s.shape != (4, 4):
            raise ValueError(f"superoperator must be 4x4, got {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "superop", s)

    @classmethod
    def from_function(cls, fn, name=""):
        cols = [np.asarray(fn(e), dtype=complex).reshape(4) for e in _MATRIX_UNITS]
        return cls(np.array(cols).T, name)

    @classmethod
    def from_ptm(cls, ptm, name=""):
        return cls(superop_from_ptm(ptm), name)

    def __call__(self, x):
        return (self.superop @ np.asarray(x, dtype=complex).reshape(4)).reshape(2, 2)

    @property
    def ptm(self) -> np.ndarray:
        """Matrix in the normalised Pauli basis ``(1, s1, s2, s3)/sqrt(2)``."""
        return pauli_transfer_matrix(self.superop)

    def dual(self) -> "QubitMap":
        return QubitMap(self.superop.conj().T, f"{self.name}^dual" if self.name else "")

    def is_unital(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return bool(np.abs(self(IDENTITY2) - IDENTITY2).max() <= tol.unital)

    def is_hermiticity_preserving(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return bool(np.abs(self.ptm.imag).max() <= tol.hermiticity * max(np.abs(self.ptm).max(), 1.0))


# ---------------------------------------------------------------------------
# example maps
# ---------------------------------------------------------------------------

def transposition() -> QubitMap:
    return QubitMap.from_function(lambda x: x.T, "transposition")


def transposition_deformation(p: float) -> QubitMap:
    """``T_p(X) = p/2 tr(X) 1 + (1 - p) X^T``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return QubitMap.from_function(lambda x: 0.5 * p * np.trace(x) * IDENTITY2 + (1.0 - p) * x.T, f"T_p(p={p})")


def reduction() -> QubitMap:
    """``R(X) = tr(X) 1 - X``."""
    return QubitMap.from_function(lambda x: np.trace(x) * IDENTITY2 - x, "reduction")


def dephasing() -> QubitMap:
    """Dephasing in the s_z eigenbasis, ``(s_z X s_z + X) / 2``."""
    return QubitMap.from_function(lambda x: 0.5 * (SIGMA_Z @ x @ SIGMA_Z + x), "dephasing")


def psi_a(a: float) -> QubitMap:
    """``Psi_a(X) = tr(X) 1 - a Delta(X)``; maps the identity to ``(2 - a) 1``."""
    deph = dephasing()
    return QubitMap.from_function(lambda x: np.trace(x) * IDENTITY2 - a * deph(x), f"Psi_a(a={a})")


def unitary_phase(phi: float) -> QubitMap:
    """Conjugation by ``|0><0| + e^{i phi}|1><1|``."""
    u = np.diag([1.0, cmath.exp(1j * phi)])
    return QubitMap.from_function(lambda x: u @ x @ u.conj().T, f"unitary(phi={phi})")


def psi_generator(a: float) -> np.ndarray:
    """Superoperator of the self-dual generator ``Psi_a - (2 - a) id``."""
    return psi_a(a).superop - (2.0 - a) * np.eye(4)


EXAMPLES = {
    "transposition": lambda p=None: transposition(),
    "transposition_deformation": lambda p=0.5: transposition_deformation(p),
    "reduction": lambda p=None: reduction(),
    "dephasing": lambda p=None: dephasing(),
    "psi_a": lambda p=1.5: psi_a(p),
    "unitary_phase": lambda p=0.0: unitary_phase(p),
}


# ---------------------------------------------------------------------------
# spectra and spectral constraints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapSpectrum:
    """Eigenvalue 1 removed; the other three sorted by descending real part."""

    lambdas: tuple
    x: tuple
    y: tuple

    @classmethod
    def from_eigenvalues(cls, lambdas):
        lam = np.asarray(lambdas, dtype=complex)
        order = np.lexsort((-lam.imag, -np.round(lam.real, 12)))
        lam = lam[order]
        return cls(tuple(complex(v) for v in lam), tuple(float(v) for v in lam.real), tuple(float(v) for v in lam.imag))

    @property
    def determinant(self) -> complex:
        return self.lambdas[0] * self.lambdas[1] * self.lambdas[2]


def map_spectrum(phi: QubitMap, tol: Tolerances = DEFAULT_TOLERANCES) -> MapSpectrum:
    eigs = np.linalg.eigvals(phi.superop)
    k = int(np.argmin(np.abs(eigs - 1.0)))
    if abs(eigs[k] - 1.0) > tol.unital:
        raise NotUnital("no eigenvalue within tolerance of 1")
    rest = np.delete(eigs, k)
    # Hermiticity-preserving maps have conjugation-closed spectra; snap tiny imaginary noise
    rest = np.where(np.abs(rest.imag) <= 1e-13, rest.real, rest)
    return MapSpectrum.from_eigenvalues(rest)


def spectral_alpha_constraint(x, alpha: float) -> float:
    """Margin ``(alpha-1)(1+x3) - 2(alpha-2) - x1 - x2`` for descending real parts ``x``."""
    alpha = _check_alpha(alpha)
    x1, x2, x3 = (float(v) for v in x)
    if x2 - x1 > 1e-12 or x3 - x2 > 1e-12:
        raise DomainError("real parts must be sorted in descending order")
    return (alpha - 1.0) * (1.0 + x3) - 2.0 * (alpha - 2.0) - x1 - x2


@dataclass(frozen=True)
class MarkovBound:
    determinant: float
    margins: tuple  # |lambda_k| - det^(1/alpha)
    pauli_margins: tuple | None  # lambda_k^(alpha-1) - lambda_i lambda_j, (k = 3, 1, 2)

    @property
    def holds(self) -> bool:
        values = list(self.margins) + list(self.pauli_margins or ())
        return all(v >= -DEFAULT_TOLERANCES.closed_margin for v in values)


def markov_spectral_bound(spectrum: MapSpectrum, alpha: float, tol: Tolerances = DEFAULT_TOLERANCES) -> MarkovBound:
    """Necessary spectral conditions for ``Phi = exp(L)`` with an alpha-positive semigroup."""
    alpha = _check_alpha(alpha)
    det = spectrum.determinant
    if abs(det.imag) > tol.eigen_residual or det.real <= 0.0:
        raise PreconditionViolated("determinant must be real and positive")
    det = det.real
    floor = det ** (1.0 / alpha)
    margins = tuple(abs(lam) - floor for lam in spectrum.lambdas)
    pauli = None
    lam = spectrum.lambdas
    if all(abs(v.imag) <= tol.eigen_residual and v.real > 0 for v in lam):
        l1, l2, l3 = (v.real for v in lam)
        pauli = (
            l3 ** (alpha - 1.0) - l1 * l2,
            l1 ** (alpha - 1.0) - l2 * l3,
            l2 ** (alpha - 1.0) - l3 * l1,
        )
    return MarkovBound(det, margins, pauli)


# ---------------------------------------------------------------------------
# Schwarz checks on maps
# ---------------------------------------------------------------------------

def schwarz_map_defect(phi: QubitMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    px = phi(x)
    return phi(x.conj().T @ x) - px.conj().T @ px


def schwarz_map_check(phi: QubitMap, plan: SamplingPlan = DEFAULT_PLAN,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """Minimise lambda_min(Phi(X^+X) - Phi(X)^+Phi(X)) over all unit-norm X.

    ``X`` proportional to the identity always gives zero, so maps that pass
    report a margin of (numerically) zero and status MARGINAL.
    """
    if not phi.is_unital(tol):
        raise NotUnital(f"map {phi.name or ''} is not unital")
    s = _kernels.prepare_superop(phi.superop)
    grid = oracle_grid(plan.grid_points, "full")
    values = _kernels.map_defect_min_eig(s, _kernels.full_from_params(grid))
    res = minimize_on_sphere(lambda v: _kernels.map_objective(s, v), grid, values, plan)
    witness = _kernels.full_from_params(res.point).reshape(2, 2)
    return _oracle(res.value, tol, witness=witness, grid_minimum=res.grid_value, evaluations=res.evaluations)


def psi_generator_check(a: float, plan: SamplingPlan = DEFAULT_PLAN,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """Schwarz oracle for the semigroup generated by ``Psi_a - (2 - a) id``."""
    return schwarz_oracle(psi_generator(a), plan, tol)


def generator_defect(dual_superop, x) -> np.ndarray:
    """Schwarz defect ``L(X^+X) - L(X^+)X - X^+L(X)`` of a Heisenberg-picture generator superoperator."""
    lop = np.asarray(dual_superop, dtype=complex)
    x = np.asarray(x, dtype=complex)
    xd = x.conj().T

    def apply(m):
        return (lop @ m.reshape(4)).reshape(2, 2)

    return apply(xd @ x) - apply(xd) @ x - xd @ apply(x)


def psi_slice_defect(a: float, z: complex, z1: complex, z2: complex) -> np.ndarray:
    """Defect of ``Psi_a - (2 - a) id`` at the traceless ``X = [[z, z1], [z2, -z]]``."""
    x = np.array([[z, z1], [z2, -z]], dtype=complex)
    return generator_defect(psi_generator(a), x)


def bisect_psi_boundary(lo: float = 1.0, hi: float = 2.0, iters: int = 30,
                        plan: SamplingPlan = DEFAULT_PLAN, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Locate the ``a`` where :func:`psi_generator_check` stops holding."""
    if not psi_generator_check(lo, plan, tol).holds or psi_generator_check(hi, plan, tol).holds:
        raise PreconditionViolated("bisection interval does not bracket the Schwarz boundary")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if psi_generator_check(mid, plan, tol).holds:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def spectral_margins(phi: QubitMap, alphas=(1.0, 1.5, 2.0)) -> dict:
    spec = map_spectrum(phi)
    return {float(a): spectral_alpha_constraint(spec.x, a) for a in alphas}
