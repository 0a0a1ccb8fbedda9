import numpy as np
import pytest

import qubit_schwarz as qs
from qubit_schwarz import maps
from qubit_schwarz.classification import Status
from qubit_schwarz.errors import DomainError, InvalidAlpha, NotUnital, PreconditionViolated

from .conftest import same_multiset

S1, S2, S3 = qs.pauli_basis()
E01 = np.array([[0, 1], [0, 0]], dtype=complex)
PLAN = qs.SamplingPlan(grid_points=2048)


def test_map_spectrum_examples():
    phi = 0.9
    s = qs.map_spectrum(qs.unitary_phase(phi))
    assert same_multiset(s.lambdas, [1, np.exp(1j * phi), np.exp(-1j * phi)], 1e-12)
    assert s.x == pytest.approx((1, np.cos(phi), np.cos(phi)))
    assert qs.map_spectrum(qs.reduction()).x == pytest.approx((-1, -1, -1))
    assert qs.map_spectrum(maps.QubitMap(np.eye(4))).x == pytest.approx((1, 1, 1))


def test_map_spectrum_requires_unit_eigenvalue():
    with pytest.raises(NotUnital):
        qs.map_spectrum(maps.QubitMap(0.5 * np.eye(4)))


def test_example_maps_structure():
    for name, factory in maps.EXAMPLES.items():
        m = factory()
        assert m.is_hermiticity_preserving(), name
        if name != "psi_a":
            assert m.is_unital(), name
            assert max(abs(v) for v in qs.map_spectrum(m).lambdas) <= 1 + 1e-12
    for a in (0.5, 1.5, 2.0):
        assert np.allclose(qs.psi_a(a)(np.eye(2)), (2 - a) * np.eye(2))
    d = qs.dephasing()
    assert np.allclose(d(S1), 0) and np.allclose(d(S3), S3)
    with pytest.raises(DomainError):
        qs.transposition_deformation(1.2)


def test_qubit_map_dual_and_ptm():
    t = qs.transposition_deformation(0.3)
    assert np.allclose(np.diag(t.ptm.real), [1, 0.7, -0.7, 0.7])
    x = np.array([[1, 2j], [3, 4]])
    y = np.array([[0.5, 1], [-1j, 2]])
    assert np.trace(t.dual()(x).conj().T @ y) == pytest.approx(np.trace(x.conj().T @ t(y)))
    assert np.allclose(maps.QubitMap.from_ptm(t.ptm).superop, t.superop)


def test_transposition_deformation_spectrum():
    for p in np.linspace(0, 1, 11):
        s = qs.map_spectrum(qs.transposition_deformation(p))
        assert s.x == pytest.approx((1 - p, 1 - p, -(1 - p)), abs=1e-12)


def test_spectral_alpha_constraint_examples():
    assert qs.spectral_alpha_constraint((1, 1, -1), 1.5) == pytest.approx(-1)
    assert qs.spectral_alpha_constraint((-1, -1, -1), 1.5) == pytest.approx(3)
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = np.sort(rng.uniform(-1, 1, 3))[::-1]
        assert qs.spectral_alpha_constraint(x, 1) >= 0
    with pytest.raises(InvalidAlpha):
        qs.spectral_alpha_constraint((1, 1, 1), 3)


def test_spectral_constraint_matches_rate_bound():
    rng = np.random.default_rng(4)
    for _ in range(200):
        x = np.sort(rng.uniform(-1, 1, 3))[::-1]
        rates = qs.RelaxationRates(tuple(1 - x[::-1]), (0, 0, 0), float(np.sum(1 - x)))
        for alpha in (1, 1.25, 1.5, 2):
            a = qs.spectral_alpha_constraint(x, alpha)
            b = qs.alpha_bound(rates, alpha)
            assert a == pytest.approx(alpha * b, abs=1e-12)


def test_markov_bound_examples():
    iso = maps.MapSpectrum.from_eigenvalues([np.exp(-1)] * 3)
    b = qs.markov_spectral_bound(iso, 2)
    assert b.holds and b.determinant == pytest.approx(np.exp(-3))
    s = maps.MapSpectrum.from_eigenvalues([0.9, 0.9, 0.4])
    b = qs.markov_spectral_bound(s, 1.5)
    assert not b.holds
    assert min(b.pauli_margins) == pytest.approx(np.sqrt(0.4) - 0.81)
    assert qs.markov_spectral_bound(s, 1).holds
    with pytest.raises(PreconditionViolated):
        qs.markov_spectral_bound(qs.map_spectrum(qs.transposition_deformation(0.2)), 1.5)


def test_semigroup_maps_satisfy_markov_bound():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 40:
        if rng.random() < 0.5:
            spec = qs.pauli(*rng.uniform(-0.6, 1.5, 3))
        else:
            spec = qs.phase_covariant(rng.normal(), *rng.uniform(0, 1.5, 2), rng.uniform(-0.3, 0.5))
        if not qs.check_schwarz_closed(spec).holds:
            continue
        s = qs.map_spectrum(qs.semigroup_map(spec, rng.uniform(0.1, 2)))
        b = qs.markov_spectral_bound(s, 1.5)
        assert min(b.margins) >= -1e-9
        if qs.check_cp(spec).holds:
            assert min(qs.markov_spectral_bound(s, 2).margins) >= -1e-9
        checked += 1


def test_reduction_witness():
    r = qs.reduction()
    x = E01
    assert np.allclose(r(x @ x.conj().T), np.diag([0, 1]))
    assert np.allclose(r(x) @ r(x.conj().T), np.diag([1, 0]))
    v = qs.schwarz_map_check(r, PLAN)
    assert v.status is Status.FAILS and v.margin <= -1 + 1e-9


def test_schwarz_map_check_examples():
    assert qs.schwarz_map_check(qs.transposition_deformation(0.45), PLAN).status is Status.FAILS
    assert qs.schwarz_map_check(qs.transposition_deformation(0.55), PLAN).holds
    for phi in (0.0, 1.0, 4.0):
        assert qs.schwarz_map_check(qs.unitary_phase(phi), PLAN).holds
    with pytest.raises(NotUnital):
        qs.schwarz_map_check(qs.psi_a(0.5))


def test_psi_generator_examples():
    m = maps.psi_slice_defect(1.5, 0, 1, 0)
    assert np.allclose(m, np.diag([1, 0]))
    assert qs.psi_generator_check(1.0).status is Status.HOLDS
    v = qs.psi_generator_check(1.6)
    assert v.status is Status.FAILS
    w = v.witness / np.linalg.norm(v.witness)
    assert max(abs(w[0, 1]), abs(w[1, 0])) == pytest.approx(1, abs=1e-3)


def test_psi_composition_identity():
    # Pauli generator with gamma = (g, g, -g/2) equals g (Psi_{3/2} - id/2)
    g = 0.8
    lhs = qs.pauli(g, g, -g / 2).dual_superop()
    rhs = g * (qs.psi_a(1.5).superop - 0.5 * np.eye(4))
    assert np.allclose(lhs, rhs, atol=1e-12)
    # sum_k s_k X s_k + X = 2 tr(X) 1 on a basis of 2x2 matrices
    for k in range(4):
        x = np.eye(4)[k].reshape(2, 2)
        assert np.allclose(sum(s @ x @ s for s in qs.pauli_basis()) + x, 2 * np.trace(x) * np.eye(2), atol=1e-12)
