import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import qubit_schwarz as qs
from qubit_schwarz import constraints as cons
from qubit_schwarz.errors import InvalidAlpha, PreconditionViolated, UnsupportedForm
from qubit_schwarz.generators import damping_matrix

from .conftest import random_general

coord = st.floats(-3, 3, allow_nan=False, allow_subnormal=False)


def test_relaxation_rates_examples():
    r = qs.relaxation_rates(qs.pauli(1, 1, 0))
    assert r.gamma == pytest.approx((2, 1, 1)) and r.total == pytest.approx(4)
    r = qs.relaxation_rates(qs.phase_covariant(3, 1, 1, 0))
    assert r.gamma == pytest.approx((2, 1, 1))
    assert r.omegas == pytest.approx((0, 3, -3))
    r = qs.relaxation_rates(qs.build_general(np.zeros((3, 3))))
    assert r.gamma == (0, 0, 0)


def test_rates_invariants(rng):
    for _ in range(50):
        spec = random_general(rng)
        r = qs.relaxation_rates(spec)
        assert r.total == pytest.approx(sum(r.gamma), abs=1e-12)
        assert r.total == pytest.approx(np.trace(qs.canonical_form(spec).G), abs=1e-9)
        assert list(r.gamma) == sorted(r.gamma, reverse=True)


def test_alpha_bound_saturation():
    assert qs.alpha_bound(qs.relaxation_rates(qs.pauli(1, 1, -1)), 1) == pytest.approx(0, abs=1e-12)
    assert qs.alpha_bound(qs.relaxation_rates(qs.pauli(1, 1, -0.5)), 1.5) == pytest.approx(0, abs=1e-12)
    assert qs.alpha_bound(qs.relaxation_rates(qs.pauli(1, 1, 0)), 2) == pytest.approx(0, abs=1e-12)
    assert qs.critical_alpha(qs.relaxation_rates(qs.pauli(1, 1, -0.5))) == pytest.approx(1.5)


@pytest.mark.parametrize("alpha", [0.99, 2.01, np.nan])
def test_invalid_alpha(alpha):
    with pytest.raises(InvalidAlpha):
        qs.alpha_bound(qs.relaxation_rates(qs.pauli(1, 1, 1)), alpha)


def test_char_poly_criterion_examples():
    assert qs.char_poly_criterion(np.diag([2, 0.5, 0.5]), 1.5) == pytest.approx(0, abs=1e-12)
    g = damping_matrix([0.25, 0.25, 0.5], [0, 0, 2.5])  # Gamma_T = 1, Gamma_L = 2, omega = 5
    assert qs.char_poly_criterion(g, 2) == pytest.approx(0, abs=1e-10)
    assert qs.char_poly_criterion(np.eye(3), 2) == pytest.approx(1 / 8)
    with pytest.raises(PreconditionViolated):
        qs.char_poly_criterion(np.diag([1.0, 1.0, -1.0]), 1.5)


def test_g_inequalities_examples():
    g = qs.canonical_form(qs.pauli(1, 1, -0.5)).g
    assert np.allclose(g, [1 / 8, 1 / 8, 1 / 2])
    assert qs.g_inequalities(g)[2] == pytest.approx(0)
    assert np.allclose(qs.g_inequalities([1, 1, 1]), [3, 3, 3])
    assert qs.g_inequalities([5, 1, 1])[0] == pytest.approx(-1)


def test_f_expansion_examples():
    assert qs.f_expansion_check([1, 1, 1], [0, 0, 0]) == pytest.approx(27)
    assert cons.f_expansion_reference([1, 1, 1], [0, 0, 0]) == pytest.approx(27)
    # g = (5, 1, 1): margins (-1, 11, 11)
    assert qs.f_expansion_check([5, 1, 1], [0, 0, 0]) == pytest.approx(-121)
    assert cons.f_expansion_reference([5, 1, 1], [0, 0, 0]) == pytest.approx(-121)


@given(arrays(np.float64, 3, elements=coord), arrays(np.float64, 3, elements=coord))
def test_f_expansion_identity(g, h):
    lhs = qs.f_expansion_check(g, h)
    rhs = cons.f_expansion_reference(g, h)
    scale = max(1.0, np.abs(g).max() ** 3, (np.abs(h).max() ** 2) * np.abs(g).max())
    assert lhs == pytest.approx(rhs, abs=1e-9 * scale)


def test_f_expansion_monotone_in_h():
    g = [1.0, 0.8, 1.2]
    values = [qs.f_expansion_check(g, [0, t, 0]) for t in (0, 0.5, 1, 2)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_tl_check_examples():
    t = qs.tl_check(qs.phase_covariant(0, 1, 1, 0))
    assert (t.gamma_t, t.gamma_l, t.margin_2tl) == pytest.approx((1, 2, 0))
    t = qs.tl_check(qs.phase_covariant(0, 1, 1, -0.25))
    assert (t.gamma_t, t.margin_4tl, t.margin_23) == pytest.approx((0.5, 0, 0))
    t = qs.tl_check(qs.phase_covariant(0, 0, 0, 1))
    assert t.gamma_t == 2 and t.gamma_l == 0
    assert min(t.margin_2tl, t.margin_4tl, t.margin_23) > 0
    with pytest.raises(UnsupportedForm):
        qs.tl_check(qs.pauli(1, 1, 1))


def test_tl_rates_match_spectrum(rng):
    for _ in range(20):
        omega, gp, gm, gz = rng.normal(), *rng.uniform(0, 2, 2), rng.uniform(-0.2, 1)
        spec = qs.phase_covariant(omega, gp, gm, gz)
        t = qs.tl_check(spec)
        r = qs.relaxation_rates(spec)
        assert sorted(r.gamma) == pytest.approx(sorted([t.gamma_t, t.gamma_t, t.gamma_l]))


def test_char_poly_sign_matches_bound(rng):
    for _ in range(500):
        g = rng.normal(size=(3, 3))
        g = g - min(0, np.linalg.eigvals(g).real.min()) * np.eye(3)
        rates = cons.rates_from_eigenvalues(qs.eig_general(g))
        for alpha in (1, 1.5, 2):
            margin = qs.alpha_bound(rates, alpha)
            if abs(margin) > 1e-7:
                assert (qs.char_poly_criterion(g, alpha) >= 0) == (margin >= 0)


def test_class_bounds_for_tagged_specs(rng):
    for _ in range(300):
        if rng.random() < 0.5:
            spec = qs.pauli(*rng.uniform(-0.8, 1.5, size=3))
        else:
            spec = qs.phase_covariant(rng.normal(), *rng.uniform(0, 1.5, size=2), rng.uniform(-0.5, 0.5))
        rates = qs.relaxation_rates(spec)
        if qs.check_schwarz_closed(spec).status in (qs.Status.HOLDS, qs.Status.MARGINAL):
            assert np.all(qs.g_inequalities(qs.canonical_form(spec).g) >= -1e-6)
            assert qs.alpha_bound(rates, 1.5) >= -1e-6
            if spec.form == "pauli":
                g1, g2, g3 = rates.gamma
                assert g2 + g3 >= 0.5 * g1 - 1e-9
        if qs.check_cp(spec).holds:
            assert qs.alpha_bound(rates, 2) >= -1e-9
        if qs.check_positive_closed(spec).holds:
            assert qs.alpha_bound(rates, 1) >= -1e-9
            assert min(rates.gamma) >= -1e-9
