"""Qubit GKLS generators in Kossakowski form and their canonical decomposition.

A generator is

    L(rho) = -i[H, rho] + sum_ij C_ij (s_i rho s_j - 1/2 {s_j s_i, rho}),

with ``H = sum_k h_k s_k`` and a Hermitian 3x3 matrix ``C``.  Pauli and
phase-covariant generators are recognised structurally so that the
closed-form criteria can be applied to them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._config import DEFAULT_TOLERANCES, Tolerances
from .linalg import IDENTITY2, as_finite, pauli_basis, require_hermitian

_SIGMAS = pauli_basis()
_BASIS4 = (IDENTITY2,) + _SIGMAS


@dataclass(frozen=True)
class General:
    name = "general"


@dataclass(frozen=True)
class Pauli:
    """``L(rho) = 1/2 sum_k gamma_k (s_k rho s_k - rho)``."""

    gammas: tuple

    name = "pauli"


@dataclass(frozen=True)
class PhaseCovariant:
    omega: float
    gamma_plus: float
    gamma_minus: float
    gamma_z: float

    name = "phase_covariant"


Tag = Union[General, Pauli, PhaseCovariant]


@dataclass(frozen=True, eq=False)
class GeneratorSpec:
    kossakowski: np.ndarray
    hamiltonian: np.ndarray
    tag: Tag = field(default_factory=General)

    def __post_init__(self):
        c = np.array(self.kossakowski, dtype=complex)
        h = np.array(self.hamiltonian, dtype=float)
        c.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "kossakowski", c)
        object.__setattr__(self, "hamiltonian", h)

    @property
    def form(self) -> str:
        return self.tag.name

    def superop(self) -> np.ndarray:
        return superoperator(self)

    def dual_superop(self) -> np.ndarray:
        return dual_superoperator(self)

    def __add__(self, other: "GeneratorSpec") -> "GeneratorSpec":
        return build_general(self.kossakowski + other.kossakowski, self.hamiltonian + other.hamiltonian)


def _hamiltonian_matrix(h):
    return sum(h[k] * _SIGMAS[k] for k in range(3))


def build_general(c, h=(0.0, 0.0, 0.0), tol: Tolerances = DEFAULT_TOLERANCES) -> GeneratorSpec:
    """Validate ``(C, h)`` and tag the generator with its special form if it has one."""
    c = require_hermitian(as_finite(c, name="C"), tol, name="C")
    if c.shape != (3, 3):
        raise ValueError(f"C must be 3x3, got {c.shape}")
    h = as_finite(h, dtype=float, name="h")
    if h.shape != (3,):
        raise ValueError(f"h must have 3 components, got {h.shape}")
    c = 0.5 * (c + c.conj().T)
    return GeneratorSpec(c, h, _detect_tag(c, h, tol.structural))


def _detect_tag(c, h, eps):
    scale = max(np.abs(c).max(), np.abs(h).max(), 1.0)
    small = lambda x: abs(x) <= eps * scale  # noqa: E731
    offdiag_zero = all(small(c[i, j]) for i in range(3) for j in range(3) if i != j)
    diag_real = all(small(c[k, k].imag) for k in range(3))
    if offdiag_zero and diag_real and all(small(v) for v in h):
        return Pauli(tuple(float(2.0 * c[k, k].real) for k in range(3)))
    if (
        diag_real
        and small(c[0, 0] - c[1, 1])
        and small(c[0, 1].real)
        and all(small(c[i, 2]) and small(c[2, i]) for i in range(2))
        and small(h[0])
        and small(h[1])
    ):
        total = 4.0 * c[0, 0].real
        delta = -4.0 * c[0, 1].imag
        return PhaseCovariant(
            omega=float(2.0 * h[2]),
            gamma_plus=float(0.5 * (total + delta)),
            gamma_minus=float(0.5 * (total - delta)),
            gamma_z=float(c[2, 2].real),
        )
    return General()


def pauli(gamma1, gamma2, gamma3) -> GeneratorSpec:
    gammas = as_finite([gamma1, gamma2, gamma3], dtype=float, name="gamma")
    return GeneratorSpec(np.diag(0.5 * gammas).astype(complex), np.zeros(3), Pauli(tuple(map(float, gammas))))


def phase_covariant(omega, gamma_plus, gamma_minus, gamma_z) -> GeneratorSpec:
    """Generator with Hamiltonian ``omega/2 s_z``, pumping ``gamma_plus`` into |0>,
    decay ``gamma_minus`` into |1> and dephasing ``gamma_z``."""
    omega, gp, gm, gz = as_finite([omega, gamma_plus, gamma_minus, gamma_z], dtype=float, name="parameters")
    c = np.zeros((3, 3), dtype=complex)
    c[0, 0] = c[1, 1] = (gp + gm) / 4.0
    c[0, 1] = -1j * (gp - gm) / 4.0
    c[1, 0] = 1j * (gp - gm) / 4.0
    c[2, 2] = gz
    return GeneratorSpec(c, np.array([0.0, 0.0, omega / 2.0]), PhaseCovariant(float(omega), float(gp), float(gm), float(gz)))


# ---------------------------------------------------------------------------
# superoperators (row-major vectorisation: vec(A X B) = (A kron B^T) vec(X))
# ---------------------------------------------------------------------------

def _dissipator_k(c):
    return sum(c[i, j] * _SIGMAS[j] @ _SIGMAS[i] for i in range(3) for j in range(3))


def superoperator(spec: GeneratorSpec) -> np.ndarray:
    """4x4 matrix of the Schroedinger-picture generator on row-major vec(rho)."""
    c = spec.kossakowski
    eye = IDENTITY2
    ham = _hamiltonian_matrix(spec.hamiltonian)
    k = _dissipator_k(c)
    out = -1j * (np.kron(ham, eye) - np.kron(eye, ham.T))
    for i in range(3):
        for j in range(3):
            out = out + c[i, j] * np.kron(_SIGMAS[i], _SIGMAS[j].T)
    out = out - 0.5 * (np.kron(k, eye) + np.kron(eye, k.T))
    return out


def dual_superoperator(spec: GeneratorSpec) -> np.ndarray:
    """4x4 matrix of the Heisenberg-picture generator (noise operators conjugated)."""
    c = spec.kossakowski
    eye = IDENTITY2
    ham = _hamiltonian_matrix(spec.hamiltonian)
    k = _dissipator_k(c)
    out = 1j * (np.kron(ham, eye) - np.kron(eye, ham.T))
    for i in range(3):
        for j in range(3):
            out = out + c[i, j] * np.kron(_SIGMAS[j], _SIGMAS[i].T)
    out = out - 0.5 * (np.kron(k, eye) + np.kron(eye, k.T))
    return out


def apply(spec: GeneratorSpec, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return (superoperator(spec) @ rho.reshape(4)).reshape(2, 2)


def apply_dual(spec: GeneratorSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return (dual_superoperator(spec) @ x.reshape(4)).reshape(2, 2)


def pauli_transfer_matrix(superop) -> np.ndarray:
    """Superoperator in the normalised Pauli basis ``(1, s1, s2, s3)/sqrt(2)``.

    Real for Hermiticity-preserving maps; returned as complex in general.
    """
    basis = np.array([b.reshape(4) for b in _BASIS4]).T / np.sqrt(2.0)
    return basis.conj().T @ superop @ basis


def superop_from_ptm(ptm) -> np.ndarray:
    basis = np.array([b.reshape(4) for b in _BASIS4]).T / np.sqrt(2.0)
    return basis @ np.asarray(ptm, dtype=complex) @ basis.conj().T


# ---------------------------------------------------------------------------
# canonical (O, g, a, h) form
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Rotated frame ``F_a = sum_i O_ia s_i`` in which ``Re C`` is diagonal.

    ``G`` and ``c`` are the damping matrix and drift of the Bloch equation
    ``dr/dt = -G r + c`` in that frame.
    """

    O: np.ndarray
    g: np.ndarray
    a: np.ndarray
    h: np.ndarray
    G: np.ndarray
    c: np.ndarray

    def frame(self):
        return tuple(sum(self.O[i, k] * _SIGMAS[i] for i in range(3)) for k in range(3))

    def kossakowski(self) -> np.ndarray:
        """Reassemble ``C = O (D + i A~) O^T``."""
        g1, g2, g3 = self.g
        a1, a2, a3 = self.a
        ct = np.array([
            [g2 + g3 - g1, -1j * a3, 1j * a2],
            [1j * a3, g3 + g1 - g2, -1j * a1],
            [-1j * a2, 1j * a1, g1 + g2 - g3],
        ])
        return self.O @ ct @ self.O.T


def damping_matrix(g, h) -> np.ndarray:
    g1, g2, g3 = g
    h1, h2, h3 = h
    return 2.0 * np.array([
        [2 * g1, h3, -h2],
        [-h3, 2 * g2, h1],
        [h2, -h1, 2 * g3],
    ])


def _orthogonal_frame(s, eps):
    scale = max(np.abs(s).max(), 1.0)
    off = s - np.diag(np.diag(s))
    if np.abs(off).max() <= eps * scale:
        # already diagonal: keep the Pauli axes so special forms stay readable
        return np.eye(3), np.diag(s).copy()
    w, v = np.linalg.eigh(s)
    for k in range(3):
        j = int(np.argmax(np.abs(v[:, k])))
        if v[j, k] < 0:
            v[:, k] = -v[:, k]
    if np.linalg.det(v) < 0:
        v[:, 2] = -v[:, 2]
    return v, w


def canonical_form(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> CanonicalForm:
    c = spec.kossakowski
    s = c.real
    a_mat = c.imag
    o, d = _orthogonal_frame(0.5 * (s + s.T), tol.structural)
    d_total = d.sum()
    g = 0.5 * (d_total - d)
    at = o.T @ (0.5 * (a_mat - a_mat.T)) @ o
    a = np.array([at[2, 1], at[0, 2], at[1, 0]])
    h = o.T @ spec.hamiltonian
    big_g = damping_matrix(g, h)
    for arr in (o, g, a, h, big_g):
        arr.setflags(write=False)
    c_vec = 4.0 * a
    c_vec.setflags(write=False)
    return CanonicalForm(O=o, g=g, a=a, h=h, G=big_g, c=c_vec)


def bloch_affine(spec: GeneratorSpec):
    """``(G, c)`` of ``dr/dt = -G r + c`` in the canonical F-frame."""
    cf = canonical_form(spec)
    return cf.G, cf.c


def lab_bloch_affine(spec: GeneratorSpec):
    """``(G, c)`` in the Pauli frame: the canonical data rotated back by ``O``."""
    cf = canonical_form(spec)
    return cf.O @ cf.G @ cf.O.T, cf.O @ cf.c


def ptm_bloch_affine(spec: GeneratorSpec):
    """``(G, c)`` in the Pauli frame read off the generator's action directly.

    ``G_ij = -1/2 tr(s_i L(s_j))`` and ``c_i = 1/2 tr(s_i L(1))``.
    """
    ptm = pauli_transfer_matrix(superoperator(spec)).real
    return -ptm[1:, 1:].copy(), ptm[1:, 0].copy()
