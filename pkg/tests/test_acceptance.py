"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run standalone with ``python -m tests.test_acceptance`` or through pytest,
which repeats the status lines in its terminal summary.
"""
import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq, minimize_scalar
from scipy.spatial.transform import Rotation

import qubit_schwarz as qs
from qubit_schwarz.classification import Status
from qubit_schwarz.constraints import g_inequalities
from qubit_schwarz.linalg import SIGMA_X, SIGMA_Z, eig_general

from . import acceptance_log

N_LARGE = 10_000
N_MEDIUM = 1_000
ALPHAS = (1.0, 1.25, 1.5, 1.75, 2.0)
GRID = qs.SamplingPlan(grid_points=4096)
FINE_GRID = qs.SamplingPlan(grid_points=8192)

pytestmark = pytest.mark.acceptance


def _hermitian(rng, n=3):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def _wishart(rng, rank=3):
    w = rng.normal(size=(3, rank)) + 1j * rng.normal(size=(3, rank))
    return w @ w.conj().T / 6.0


def _schwarz_candidate(rng):
    """A CP Kossakowski matrix pushed outside the PSD cone by a random amount.

    Purely random Hermitian C almost never generates a Schwarz semigroup, so
    most draws are perturbations of a Wishart matrix. A fifth are unconstrained
    and a fifth are rotated Pauli generators close to the saturating edge.
    """
    h = rng.normal(size=3) * rng.uniform(0.0, 2.0)
    u = rng.uniform()
    if u < 0.2:
        return qs.build_general(0.5 * _hermitian(rng), h)
    if u < 0.4:
        g1, g2 = rng.uniform(0.0, 1.0, size=2)
        g3 = -rng.uniform(0.0, 1.05) * (g1 + g2) / 4.0
        o = Rotation.random(random_state=rng).as_matrix()
        return qs.build_general(o @ np.diag([g1, g2, g3]) @ o.T, h * rng.uniform(0.0, 0.2))
    b = _wishart(rng)
    n = _hermitian(rng)
    t = 3.0 * rng.uniform() * np.linalg.eigvalsh(b)[0] / max(np.linalg.eigvalsh(n)[-1], 1e-3)
    return qs.build_general(b - t * n, h)


def _warm_up():
    # compile the numba kernels outside the timed regions
    qs.check_schwarz_numeric(qs.pauli(1, 1, 0), qs.SamplingPlan(grid_points=64))
    qs.check_positive_numeric(qs.pauli(1, 1, 0), qs.SamplingPlan(grid_points=64))
    qs.schwarz_map_check(qs.dephasing(), qs.SamplingPlan(grid_points=64))


def _min_eig(m):
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


# ---------------------------------------------------------------------------


def test_ac01_saturation_triple():
    start = time.perf_counter()
    cases = [((1, 1, -1), (2, 0, 0), 1.0), ((1, 1, -0.5), (2, 0.5, 0.5), 1.5), ((1, 1, 0), (2, 1, 1), 2.0)]
    rate_err = margin_err = 0.0
    for gamma, expected, alpha in cases:
        rates = qs.relaxation_rates(qs.pauli(*gamma))
        rate_err = max(rate_err, float(np.max(np.abs(np.array(rates.gamma) - expected))))
        margin_err = max(margin_err, abs(qs.alpha_bound(rates, alpha)))
    elapsed = time.perf_counter() - start
    ok = rate_err <= 1e-12 and margin_err <= 1e-12 and elapsed < 1.0
    acceptance_log.record(1, ok, f"saturation triple: rate err {rate_err:.1e}, margin err {margin_err:.1e}, "
                                 f"{elapsed:.3f} s")
    assert ok


def test_ac02_schwarz_bound_sweep():
    _warm_up()
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    accepted = not_cp = 0
    worst_bound = worst_g = math.inf
    for _ in range(N_LARGE):
        spec = _schwarz_candidate(rng)
        if not qs.check_schwarz_numeric(spec, GRID).holds:
            continue
        accepted += 1
        not_cp += not qs.check_cp(spec).holds
        rates = qs.relaxation_rates(spec)
        worst_bound = min(worst_bound, 2.0 / 3.0 * rates.total + 1e-6 - rates.max)
        worst_g = min(worst_g, float(g_inequalities(qs.canonical_form(spec).g).min()) + 1e-6)
    elapsed = time.perf_counter() - start
    ok = accepted > 0 and worst_bound >= 0 and worst_g >= 0 and elapsed < 300
    acceptance_log.record(2, ok, f"Schwarz bound: {accepted}/{N_LARGE} accepted ({not_cp} not CP), "
                                 f"min slack {worst_bound:.2e}, min g-slack {worst_g:.2e}, {elapsed:.1f} s")
    assert ok


def test_ac03_cp_bound():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst = math.inf
    for _ in range(N_LARGE):
        spec = qs.build_general(_wishart(rng, rank=int(rng.integers(1, 4))), rng.normal(size=3))
        rates = qs.relaxation_rates(spec)
        worst = min(worst, 0.5 * rates.total + 1e-9 - rates.max)
    elapsed = time.perf_counter() - start
    ok = worst >= 0 and elapsed < 30
    acceptance_log.record(3, ok, f"CP bound over {N_LARGE} Wishart specs: min slack {worst:.2e}, {elapsed:.1f} s")
    assert ok


def _random_nonnegative_g(rng):
    if rng.uniform() < 0.5:
        # damping matrix of a positive-semidefinite rate profile: PSD symmetric part
        return qs.damping_matrix(rng.exponential(size=3), rng.normal(size=3))
    a = rng.normal(size=(3, 3))
    shift = -np.linalg.eigvals(a).real.min()
    if rng.uniform() < 0.5:
        shift += rng.exponential()
    return a + shift * np.eye(3)


def test_ac04_char_poly_equivalence():
    rng = np.random.default_rng(4)
    start = time.perf_counter()
    checked = skipped = disagreements = 0
    for _ in range(N_LARGE):
        g = _random_nonnegative_g(rng)
        rates = qs.rates_from_eigenvalues(eig_general(g))
        for alpha in ALPHAS:
            margin = qs.alpha_bound(rates, alpha)
            if abs(margin) <= 1e-7:
                skipped += 1
                continue
            f = qs.char_poly_criterion(g, alpha)
            checked += 1
            disagreements += (f >= 0) != (margin >= 0)
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 30
    acceptance_log.record(4, ok, f"f(trG/alpha) sign: {disagreements} disagreements in {checked} cases "
                                 f"({skipped} in band), {elapsed:.1f} s")
    assert ok


def test_ac05_closed_form_vs_oracle():
    _warm_up()
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    n = draws = 0
    schwarz_bad = pos_bad = schwarz_fail = pos_fail = 0
    while n < N_MEDIUM:
        draws += 1
        spec = qs.phase_covariant(rng.normal(), rng.uniform(-0.3, 1.5), rng.uniform(-0.3, 1.5),
                                  rng.uniform(-0.6, 0.4))
        s_closed = qs.check_schwarz_closed(spec)
        p_closed = qs.check_positive_closed(spec)
        if abs(s_closed.margin) <= 1e-3 or abs(p_closed.margin) <= 1e-3:
            continue
        n += 1
        schwarz_fail += not s_closed.holds
        pos_fail += not p_closed.holds
        schwarz_bad += s_closed.holds != qs.check_schwarz_numeric(spec, GRID).holds
        pos_bad += p_closed.holds != qs.check_positive_numeric(spec, GRID).holds
    elapsed = time.perf_counter() - start
    ok = schwarz_bad == 0 and pos_bad == 0 and elapsed < 300
    acceptance_log.record(5, ok, f"closed vs oracle on {n} phase-covariant specs: Schwarz {schwarz_bad} "
                                 f"mismatches ({schwarz_fail} fail), positivity {pos_bad} mismatches "
                                 f"({pos_fail} fail), {elapsed:.1f} s")
    assert ok


def test_ac06_psi_boundary():
    _warm_up()
    below, above = qs.psi_generator_check(1.49), qs.psi_generator_check(1.51)
    boundary = qs.bisect_psi_boundary()
    slice_err = 0.0
    for a in np.linspace(1.0, 2.0, 21):
        lam = np.linalg.eigvalsh(qs.psi_slice_defect(a, 0.0, 0.0, 1.0))
        slice_err = max(slice_err, abs(lam[0] - (3.0 - 2.0 * a)))
    ok = below.holds and not above.holds and abs(boundary - 1.5) <= 1e-3 and slice_err <= 1e-9
    acceptance_log.record(6, ok, f"Psi_a boundary at a = {boundary:.6f}, slice eigenvalue err {slice_err:.1e}")
    assert ok


def _direct_quartic_min(spec, a, b):
    """Minimise det M along X = s_x + t s_z by bounded Brent search."""
    dual = qs.QubitMap(qs.generators.dual_superoperator(spec))

    def det(t):
        x = SIGMA_X + t * SIGMA_Z
        lx = dual(x)
        return float(np.linalg.det(dual(x @ x) - x @ lx - lx @ x).real)

    t_hi = 2.0 * math.sqrt(max(-b, 0.0) / (2.0 * a)) + 1.0
    ts = np.linspace(0.0, t_hi, 401)
    k = int(np.argmin([det(t) for t in ts]))
    res = minimize_scalar(det, bounds=(ts[max(k - 1, 0)], ts[min(k + 1, 400)]), method="bounded",
                          options={"xatol": 1e-12})
    return min(res.fun, det(0.0))


def test_ac07_kadison_equivalence():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    checked = mismatches = quartic_checked = 0
    disc_err = quartic_err = 0.0
    for _ in range(N_MEDIUM):
        gp, gm, gz = rng.uniform(-0.5, 2.0), rng.uniform(-0.5, 2.0), rng.uniform(-1.0, 1.0)
        spec = qs.phase_covariant(rng.normal(), gp, gm, gz)
        kad = qs.check_kadison_phase_cov(spec)
        pos = qs.check_positive_closed(spec)
        if abs(pos.margin) > 1e-6:
            checked += 1
            mismatches += kad.holds != pos.holds
        a, b, c, disc = qs.kadison_quartic(gp, gm, gz)
        disc_err = max(disc_err, abs(disc - (b * b - 4 * a * c)) / max(1.0, b * b))
        if a > 1e-3:
            # interior minimum c - b^2/(4a) = -disc/(4a) when b < 0, else the value at t = 0
            closed = -disc / (4.0 * a) if b < 0 else c
            direct = _direct_quartic_min(spec, a, b)
            quartic_err = max(quartic_err, abs(direct - closed) / max(1.0, abs(closed)))
            quartic_checked += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and disc_err <= 1e-6 and quartic_err <= 1e-6
    acceptance_log.record(7, ok, f"Kadison vs positivity: {mismatches}/{checked} mismatches; discriminant "
                                 f"err {disc_err:.1e}, quartic minimum err {quartic_err:.1e} "
                                 f"({quartic_checked} cases), {elapsed:.1f} s")
    assert ok


def _tp_margin(p, alpha):
    return qs.spectral_alpha_constraint(qs.map_spectrum(qs.transposition_deformation(p)).x, alpha)


def test_ac08_transposition_thresholds():
    _warm_up()
    fails = qs.schwarz_map_check(qs.transposition_deformation(0.45), FINE_GRID)
    holds = qs.schwarz_map_check(qs.transposition_deformation(0.55), FINE_GRID)
    spec_err = 0.0
    for p in np.linspace(0.0, 1.0, 11):
        lam = qs.map_spectrum(qs.transposition_deformation(p)).lambdas
        spec_err = max(spec_err, float(np.max(np.abs(np.array(lam) - [1 - p, 1 - p, -(1 - p)]))))
    p15 = brentq(_tp_margin, 0.0, 1.0, args=(1.5,), xtol=1e-14)
    p2 = brentq(_tp_margin, 0.0, 1.0, args=(2.0,), xtol=1e-14)
    ok = (fails.status is Status.FAILS and holds.holds and spec_err <= 1e-12
          and abs(p15 - 0.4) <= 1e-9 and abs(p2 - 2.0 / 3.0) <= 1e-9)
    acceptance_log.record(8, ok, f"T_p: p=0.45 {fails.status.name} ({fails.margin:.3e}), p=0.55 "
                                 f"{holds.status.name}; crossings {p15:.12f}, {p2:.12f}")
    assert ok


def test_ac09_reduction_map():
    _warm_up()
    phi = qs.reduction()
    verdict = qs.schwarz_map_check(phi)
    x = verdict.witness / np.linalg.norm(verdict.witness)
    lam = _min_eig(qs.schwarz_map_defect(phi, x))
    spectral = qs.spectral_alpha_constraint(qs.map_spectrum(phi).x, 1.5)
    ok = verdict.status is Status.FAILS and lam <= -1 + 1e-9 and spectral >= 0
    acceptance_log.record(9, ok, f"reduction: {verdict.status.name}, witness defect lambda_min {lam:.12f}, "
                                 f"spectral margin {spectral:.3f}")
    assert ok


def _positive_specs(rng, count):
    specs = []
    while len(specs) < count:
        spec = _schwarz_candidate(rng)
        if qs.check_positive_numeric(spec, GRID).status is Status.HOLDS:
            specs.append(spec)
    return specs


def _random_pure_states(rng, count):
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _tl_fit(spec, times):
    tl = qs.tl_check(spec)
    a, b = qs.propagators(spec, times)
    perp = a @ np.array([1.0, 0.0, 0.0]) + b
    gamma_t = -np.polyfit(times, np.log(np.hypot(perp[:, 0], perp[:, 1])), 1)[0]
    z_star = b[-1, 2] if tl.gamma_l == 0 else qs.stationary_state(spec)[2]
    r0 = np.array([0.0, 0.0, -1.0 if z_star > 0 else 1.0])
    z = (a @ r0 + b)[:, 2]
    gamma_l = -np.polyfit(times, np.log(np.abs(z - z_star)), 1)[0]
    return (abs(gamma_t - tl.gamma_t) / tl.gamma_t, abs(gamma_l - tl.gamma_l) / tl.gamma_l)


def test_ac10_dynamics():
    _warm_up()
    rng = np.random.default_rng(10)
    start = time.perf_counter()
    times = np.linspace(0.0, 20.0, 401)
    specs = _positive_specs(rng, 100)
    not_cp = sum(not qs.check_cp(s).holds for s in specs)
    worst_norm = 0.0
    for spec in specs:
        a, b = qs.propagators(spec, times)
        r = np.einsum("tij,sj->tsi", a, _random_pure_states(rng, 20)) + b[:, None, :]
        worst_norm = max(worst_norm, float(np.linalg.norm(r, axis=2).max()))

    fit_err = 0.0
    fit_times = np.linspace(0.0, 5.0, 51)
    n_fits = 0
    while n_fits < 50:
        gp, gm = rng.uniform(0.05, 1.5, size=2)
        spec = qs.phase_covariant(rng.normal(), gp, gm, rng.uniform(-0.5 * math.sqrt(gp * gm), 0.5))
        if not qs.check_positive_closed(spec).holds:
            continue
        fit_err = max(fit_err, *_tl_fit(spec, fit_times))
        n_fits += 1
    elapsed = time.perf_counter() - start
    ok = worst_norm <= 1 + 1e-6 and fit_err <= 1e-6
    acceptance_log.record(10, ok, f"dynamics: max |r_t| {worst_norm:.9f} over 100 positive specs "
                                  f"({not_cp} not CP) x 20 states; T/L fit rel err {fit_err:.1e}, {elapsed:.1f} s")
    assert ok


def test_ac11_tl_inequalities():
    gpm = np.linspace(-0.5, 2.0, 41)
    gzs = np.linspace(-0.6, 0.6, 49)
    schwarz_pts = cp_pts = 0
    worst_4tl = worst_2tl = math.inf
    equality_off_boundary = 0.0
    for gp in gpm:
        for gm in gpm:
            for gz in gzs:
                spec = qs.phase_covariant(0.3, gp, gm, gz)
                if not qs.check_schwarz_closed(spec).holds:
                    continue
                schwarz_pts += 1
                tl = qs.tl_check(spec)
                worst_4tl = min(worst_4tl, tl.margin_4tl + 1e-9)
                if abs(tl.margin_4tl) <= 1e-9:
                    # saturation only where both gamma_pm + 4 gamma_z vanish
                    equality_off_boundary = max(equality_off_boundary, abs(gp + 4 * gz), abs(gm + 4 * gz))
                if qs.check_cp(spec).holds:
                    cp_pts += 1
                    worst_2tl = min(worst_2tl, tl.margin_2tl + 1e-9)
    boundary_err = 0.0
    for gz in np.linspace(-0.5, 0.0, 51):
        spec = qs.phase_covariant(0.3, -4 * gz, -4 * gz, gz)
        boundary_err = max(boundary_err, abs(qs.tl_check(spec).margin_4tl))
        assert qs.check_schwarz_closed(spec).holds
    ok = (worst_4tl >= 0 and worst_2tl >= 0 and boundary_err <= 1e-12 and equality_off_boundary <= 1e-9
          and schwarz_pts > 0 and cp_pts > 0)
    acceptance_log.record(11, ok, f"TL: 4G_T >= G_L on {schwarz_pts} Schwarz points (slack {worst_4tl:.2e}), "
                                  f"equality err {boundary_err:.1e}; 2G_T >= G_L on {cp_pts} CP points")
    assert ok


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                pass
