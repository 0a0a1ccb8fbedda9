"""Positive / Schwarz / completely positive classification of qubit generators.

Closed-form criteria exist for the Pauli and phase-covariant families; the
numerical oracles work for any generator and never look at the tag.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._config import DEFAULT_PLAN, DEFAULT_TOLERANCES, SamplingPlan, Tolerances
from .errors import UnsupportedForm
from .generators import (
    GeneratorSpec,
    Pauli,
    PhaseCovariant,
    apply_dual,
    dual_superoperator,
    lab_bloch_affine,
)
from .linalg import LOWERING, RAISING, SIGMA_X, SIGMA_Z, eig_hermitian, eig_hermitian2, pauli_basis
from .search import minimize_on_circle, minimize_on_sphere, oracle_grid


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    MARGINAL = "marginal"
    UNDETERMINED = "undetermined"


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC_ORACLE = "numeric_oracle"


@dataclass(frozen=True, eq=False)
class ClassVerdict:
    status: Status
    margin: float
    method: Method
    witness: np.ndarray | None = None
    detail: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """True for HOLDS and MARGINAL (the inequality is satisfied within tolerance)."""
        return self.status in (Status.HOLDS, Status.MARGINAL)


def _status(margin, band):
    if abs(margin) <= band:
        return Status.MARGINAL
    return Status.HOLDS if margin > 0 else Status.FAILS


def _closed(margin, tol, witness=None, **detail):
    return ClassVerdict(_status(margin, tol.closed_margin), float(margin), Method.CLOSED_FORM, witness, detail)


def _oracle(margin, tol, witness=None, **detail):
    return ClassVerdict(_status(margin, tol.oracle_margin), float(margin), Method.NUMERIC_ORACLE, witness, detail)


# ---------------------------------------------------------------------------
# complete positivity
# ---------------------------------------------------------------------------

def check_cp(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """CP semigroup iff the Kossakowski matrix is positive semidefinite."""
    w, v = eig_hermitian(spec.kossakowski, tol, return_vectors=True)
    return _closed(w[0], tol, witness=v[:, 0])


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

def check_positive_closed(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    tag = spec.tag
    if isinstance(tag, Pauli):
        g1, g2, g3 = tag.gammas
        rates = np.array([g2 + g3, g3 + g1, g1 + g2])
        k = int(np.argmin(rates))
        return _closed(rates[k], tol, witness=np.eye(3)[k], rates=rates.tolist())
    if isinstance(tag, PhaseCovariant):
        gp, gm, gz = tag.gamma_plus, tag.gamma_minus, tag.gamma_z
        mixed = math.sqrt(max(gp * gm, 0.0)) + 2.0 * gz
        margin = min(gp, gm, mixed)
        # witness: minimiser of tr[Q L(P) Q] = g- u^2 + g+ v^2 + 4 gz u v over u + v = 1,
        # with u = |<0|psi>|^2 for the Bloch direction (2 sqrt(uv), 0, u - v)
        denom = gp + gm - 4.0 * gz
        candidates = [0.0, 1.0]
        if denom > 0:
            candidates.append(min(max((gp - 2.0 * gz) / denom, 0.0), 1.0))
        u = min(candidates, key=lambda u: gm * u * u + gp * (1 - u) ** 2 + 4 * gz * u * (1 - u))
        witness = np.array([2.0 * math.sqrt(u * (1 - u)), 0.0, 2.0 * u - 1.0])
        return _closed(margin, tol, witness=witness)
    raise UnsupportedForm("closed-form positivity needs a Pauli or phase-covariant generator")


def positivity_objective(spec: GeneratorSpec):
    """Batch evaluator of tr[Q L(P) Q] over Bloch directions of P."""
    g, c = lab_bloch_affine(spec)
    g = _kernels.prepare_real(g)
    c = _kernels.prepare_real(c)
    return g, c


def check_positive_numeric(spec: GeneratorSpec, plan: SamplingPlan = DEFAULT_PLAN,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """Minimise tr[Q L(P) Q] over pure states P (Q = 1 - P) on a Bloch-sphere grid."""
    g, c = positivity_objective(spec)
    grid = oracle_grid(plan.grid_points, "bloch")
    values = _kernels.bloch_quadratic(g, c, grid)
    res = minimize_on_sphere(lambda v: _kernels.bloch_objective(g, c, v), grid, values, plan)
    return _oracle(res.value, tol, witness=res.point, grid_minimum=res.grid_value, evaluations=res.evaluations)


# ---------------------------------------------------------------------------
# Schwarz property
# ---------------------------------------------------------------------------

def schwarz_defect(spec: GeneratorSpec, x) -> np.ndarray:
    """``L'(X^+X) - L'(X^+)X - X^+L'(X)`` for the Heisenberg-picture generator ``L'``."""
    x = np.asarray(x, dtype=complex)
    xd = x.conj().T
    return apply_dual(spec, xd @ x) - apply_dual(spec, xd) @ x - xd @ apply_dual(spec, x)


def axis_raising(axis: int) -> np.ndarray:
    """|f0><f1| for the eigenbasis of Pauli ``axis`` (0, 1, 2), i.e. (s_i + i s_j)/2."""
    s = pauli_basis()
    i, j = (axis + 1) % 3, (axis + 2) % 3
    return 0.5 * (s[i] + 1j * s[j])


def check_schwarz_closed(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    tag = spec.tag
    if isinstance(tag, PhaseCovariant):
        gp, gm, gz = tag.gamma_plus, tag.gamma_minus, tag.gamma_z
        # X = |0><1| gives diag(g-, g- + 4gz); X = |1><0| gives diag(g+ + 4gz, g+)
        conditions = {
            "gamma_plus": (gp, LOWERING),
            "gamma_minus": (gm, RAISING),
            "gamma_plus_4gamma_z": (gp + 4 * gz, LOWERING),
            "gamma_minus_4gamma_z": (gm + 4 * gz, RAISING),
        }
        name = min(conditions, key=lambda k: conditions[k][0])
        margin, witness = conditions[name]
        return _closed(margin, tol, witness=np.array(witness), binding=name)
    if isinstance(tag, Pauli):
        return _pauli_schwarz(np.array(tag.gammas, dtype=float), tol)
    raise UnsupportedForm("closed-form Schwarz criterion needs a Pauli or phase-covariant generator")


def _pauli_schwarz(gammas, tol):
    # X = raising operator of axis k gives defect diag(g_i + g_j, g_i + g_j + 4 g_k) / 2
    necessary = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        pair = gammas[i] + gammas[j]
        necessary.append((0.5 * min(pair, pair + 4 * gammas[k]), k))
    nec_margin, nec_axis = min(necessary)
    witness = axis_raising(nec_axis)
    if nec_margin < -tol.closed_margin:
        return _closed(nec_margin, tol, witness=witness, criterion="necessary")
    if np.all(gammas >= 0):
        return _closed(nec_margin, tol, witness=witness, criterion="completely_positive")
    k = int(np.argmin(gammas))
    others = [gammas[(k + 1) % 3], gammas[(k + 2) % 3]]
    sufficient = min(o + 2 * gammas[k] for o in others)
    if sufficient >= -tol.closed_margin:
        return _closed(min(nec_margin, sufficient), tol, witness=witness, criterion="sufficient")
    return ClassVerdict(Status.UNDETERMINED, float(sufficient), Method.CLOSED_FORM, witness,
                        {"criterion": "gap", "necessary_margin": float(nec_margin)})


def schwarz_oracle(dual_superop, plan: SamplingPlan = DEFAULT_PLAN, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """Minimise lambda_min of the Schwarz defect of a dual generator over traceless unit X.

    ``dual_superop`` is the 4x4 Heisenberg-picture generator on row-major
    vec(X).  The witness is returned as a 2x2 matrix.
    """
    s = _kernels.prepare_superop(dual_superop)
    grid = oracle_grid(plan.grid_points, "traceless")
    values = _kernels.gen_defect_min_eig(s, _kernels.traceless_from_params(grid))
    res = minimize_on_sphere(lambda v: _kernels.gen_objective(s, v), grid, values, plan)
    witness = _kernels.traceless_from_params(res.point).reshape(2, 2)
    return _oracle(res.value, tol, witness=witness, grid_minimum=res.grid_value, evaluations=res.evaluations)


def check_schwarz_numeric(spec: GeneratorSpec, plan: SamplingPlan = DEFAULT_PLAN,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    return schwarz_oracle(spec.dual_superop(), plan, tol)


# ---------------------------------------------------------------------------
# Kadison-type generation condition for phase-covariant generators
# ---------------------------------------------------------------------------

def kadison_matrix(spec: GeneratorSpec, x: float, z: float) -> np.ndarray:
    """``L'(X^2) - {X, L'(X)}`` at ``X = x s_x + z s_z``."""
    return _kadison_from_dual(dual_superoperator(spec), x, z)


def _kadison_from_dual(lop, x, z):
    xm = x * SIGMA_X + z * SIGMA_Z
    lx = (lop @ xm.reshape(4)).reshape(2, 2)
    return (lop @ (xm @ xm).reshape(4)).reshape(2, 2) - (xm @ lx + lx @ xm)


def kadison_quartic(gamma_plus, gamma_minus, gamma_z):
    """``(a, b, c)`` with ``det M = a t^4 + b t^2 + c`` along ``X = s_x + t s_z``,
    and the discriminant ``b^2 - 4ac`` in factored form."""
    gp, gm, gz = gamma_plus, gamma_minus, gamma_z
    a = 16.0 * gm * gp
    b = 16.0 * (gm * gp + (gm + gp) * gz)
    c = (gp + gm + 4.0 * gz) ** 2
    disc = -64.0 * (gm - gp) ** 2 * (gm * gp - 4.0 * gz * gz)
    return a, b, c, disc


def check_kadison_phase_cov(spec: GeneratorSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassVerdict:
    """Scan the Kadison condition over the ``x s_x + z s_z`` slice of Hermitian X.

    The slice suffices by phase covariance; scale invariance reduces it to
    the unit circle.  The quartic-discriminant analysis is reported in
    ``detail`` alongside the scan.
    """
    tag = spec.tag
    if not isinstance(tag, PhaseCovariant):
        raise UnsupportedForm("Kadison check needs a phase-covariant generator")

    lop = dual_superoperator(spec)

    def lam_min(theta):
        return float(eig_hermitian2(_kadison_from_dual(lop, math.cos(theta), math.sin(theta)))[0])

    margin, theta = minimize_on_circle(lam_min)
    a, b, c, disc = kadison_quartic(tag.gamma_plus, tag.gamma_minus, tag.gamma_z)
    # det M >= 0 for all t iff a, c >= 0 and (b >= 0 or b^2 - 4ac <= 0)
    if a == 0.0:
        det_nonneg = b >= 0 and c >= 0
    else:
        det_nonneg = a > 0 and c >= 0 and (b >= 0 or disc <= 0)
    witness = np.array([math.cos(theta), math.sin(theta)])
    return _oracle(margin, tol, witness=witness, a=a, b=b, c=c, discriminant=disc,
                   determinant_nonnegative=bool(det_nonneg))
