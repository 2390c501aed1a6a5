import numpy as np
import pytest

from spinwave import (LatticeSpec, StabilityError, critical_g2, critical_g2_numeric,
                      critical_g_equal, dispersion, dispersion_value, energy_gap,
                      gap_scaling_exponent, phase_boundary_cases, zone_minimum)

from conftest import params_at

SQRT2 = np.sqrt(2.0)
ON_SITE = 2.25e6  # omega (omega + 4 kappa N) at the reference parameters


def test_dispersion_decoupled_flat():
    rng = np.random.default_rng(0)
    p = params_at(0.0)
    for kx, ky in rng.uniform(-np.pi, np.pi, size=(20, 2)):
        assert dispersion(p, kx, ky).v_k == pytest.approx(ON_SITE, rel=1e-15)


def test_dispersion_vanishes_at_critical_corner():
    gc = critical_g_equal(params_at(0.0))
    v = dispersion(params_at(gc), np.pi, np.pi).v_k
    assert abs(v) < 1e-6 * ON_SITE


def test_dispersion_gap_identity_value():
    # v(pi,pi) at g = 1.5 equals omega N (4 - sqrt2)(g_c - g) = 7.5e5 (sqrt2 - 1)
    v = dispersion(params_at(1.5), np.pi, np.pi).v_k
    assert v == pytest.approx(7.5e5 * (SQRT2 - 1.0), rel=1e-12)


def test_dispersion_inversion_symmetry():
    rng = np.random.default_rng(1)
    p = params_at(1.1, g2=0.7)
    for kx, ky in rng.uniform(-np.pi, np.pi, size=(20, 2)):
        assert dispersion_value(p, kx, ky) == pytest.approx(
            float(dispersion_value(p, -kx, -ky)), rel=1e-14)


def test_energy_gap_decoupled():
    assert energy_gap(params_at(0.0), LatticeSpec.infinite_lattice()) == pytest.approx(1500.0)
    assert energy_gap(params_at(0.0), LatticeSpec.periodic(7)) == pytest.approx(1500.0)


def test_gap_squared_linear_in_g():
    gc = critical_g_equal(params_at(0.0))
    pref = 500.0 * 1000 * (4.0 - SQRT2)
    for g in np.linspace(0.1, 0.999 * gc, 15):
        gap = energy_gap(params_at(g), LatticeSpec.infinite_lattice())
        assert gap ** 2 == pytest.approx(pref * (gc - g), rel=1e-8)


def test_gap_monotone_decreasing():
    gc = critical_g_equal(params_at(0.0))
    gaps = [energy_gap(params_at(g), LatticeSpec.infinite_lattice())
            for g in np.linspace(0.0, 0.99 * gc, 25)]
    assert np.all(np.diff(gaps) < 0)


def test_finite_gap_above_infinite_and_converging():
    # odd grids miss (pi, pi), so the finite gap sits above the infinite one
    p = params_at(1.5)
    inf_gap = energy_gap(p, LatticeSpec.infinite_lattice())
    diffs = []
    for M in (11, 21, 41):
        fin = energy_gap(p, LatticeSpec.periodic(M))
        assert fin >= inf_gap
        diffs.append(fin - inf_gap)
    assert diffs[0] > diffs[1] > diffs[2]


def test_gap_beyond_critical_raises():
    gc = critical_g_equal(params_at(0.0))
    with pytest.raises(StabilityError, match="critical"):
        energy_gap(params_at(1.05 * gc), LatticeSpec.infinite_lattice())


def test_critical_g_equal_reference_values():
    assert round(critical_g_equal(params_at(0.0)), 5) == 1.74028
    # omega -> 0 limit tends to 4 kappa / (4 - sqrt2) = 4 (4 + sqrt2) / 14
    tiny = params_at(0.0, omega=1e-8)
    assert critical_g_equal(tiny) == pytest.approx(4.0 * (4.0 + SQRT2) / 14.0, abs=1e-9)
    big_n = params_at(0.0, n_atoms=10 ** 9)
    assert critical_g_equal(big_n) == pytest.approx(4.0 / (4.0 - SQRT2), rel=1e-6)


def test_phase_boundary_case_formulas():
    p = params_at(0.0)
    below, degenerate, above = phase_boundary_cases(p, 0.0)
    # arithmetic of the three closed forms at g1 = 0
    assert below == pytest.approx(4.5 / (2.0 - SQRT2), rel=1e-14)
    assert below == pytest.approx(7.68198, abs=1e-5)
    assert degenerate == pytest.approx(2.25, rel=1e-14)
    assert above == pytest.approx(4.5 / (2.0 + SQRT2), rel=1e-14)


def test_phase_boundary_continuity_at_switch():
    # at g1 = 2.25 / sqrt2 the adjacent case formulas meet the middle one
    p = params_at(0.0)
    g1_star = 2.25 / SQRT2
    below, degenerate, above = phase_boundary_cases(p, g1_star)
    assert below == pytest.approx(2.25, abs=1e-9)
    assert above == pytest.approx(2.25, abs=1e-9)
    assert degenerate == pytest.approx(2.25, rel=1e-14)


def test_critical_g2_selects_consistent_case():
    p = params_at(0.0)
    point = critical_g2(p, 0.0)
    # only vertical + diagonal coupling: the minimum sits at (0, pi) and the
    # "above" closed form is the self-consistent one
    assert point.branch == "above"
    assert point.g2_closed_form == pytest.approx(4.5 / (2.0 + SQRT2), rel=1e-14)
    assert abs(point.g2_closed_form - point.g2_numeric) < 1e-6
    assert point.min_wavevector == (0.0, np.pi)
    high = critical_g2(p, 2.5)
    assert high.branch == "below"
    assert high.min_wavevector == (np.pi, np.pi)


def test_closed_form_matches_bisection_on_grid():
    p = params_at(0.0)
    for g1 in np.linspace(0.0, 3.0, 7):
        point = critical_g2(p, float(g1))
        assert abs(point.g2_closed_form - point.g2_numeric) < 1e-6


def test_boundary_continues_negative_beyond_horizontal_critical():
    # g1 alone closes the gap at g1 = 2.25; past that the boundary lies at
    # negative g2 and both routes must still agree on it
    p = params_at(0.0)
    point = critical_g2(p, 2.5)
    assert point.g2_closed_form == pytest.approx((4.0 - 5.0 + 0.5) / (2.0 - SQRT2), rel=1e-12)
    assert point.g2_closed_form < 0
    assert abs(point.g2_closed_form - point.g2_numeric) < 1e-6


def test_bisection_root_is_marginal():
    p = params_at(0.0)
    root = critical_g2_numeric(p, 1.0)
    just_below = params_at(1.0, g2=root - 1e-6)
    just_above = params_at(1.0, g2=root + 1e-6)
    assert zone_minimum(just_below)[0] > 0
    assert zone_minimum(just_above)[0] < 0


def test_zone_minimum_on_corner_set():
    rng = np.random.default_rng(7)
    k = np.linspace(-np.pi, np.pi, 81)
    KX, KY = np.meshgrid(k, k, indexing="ij")
    for _ in range(25):
        p = params_at(float(rng.uniform(0, 3)), g2=float(rng.uniform(0, 3)))
        vmin, kmin = zone_minimum(p)
        grid_min = float(np.min(dispersion_value(p, KX, KY)))
        assert vmin <= grid_min + 1e-9 * abs(grid_min) + 1e-9


def test_gap_scaling_asymptotic_window():
    gc = critical_g_equal(params_at(0.0))
    fit = gap_scaling_exponent(params_at(0.0), (0.9 * gc, 0.999 * gc), 20)
    assert fit.exponent == pytest.approx(0.5, abs=0.005)
    assert fit.prefactor == pytest.approx(np.sqrt(500.0 * 1000 * (4.0 - SQRT2)), rel=1e-3)


def test_gap_scaling_wide_window_still_half():
    # the squared gap is exactly linear in (g_c - g) on the equal-coupling
    # line, so the fitted exponent is 1/2 on any window below g_c
    gc = critical_g_equal(params_at(0.0))
    fit = gap_scaling_exponent(params_at(0.0), (0.1 * gc, 0.5 * gc), 12)
    assert fit.exponent == pytest.approx(0.5, abs=1e-6)


def test_gap_scaling_window_validation():
    gc = critical_g_equal(params_at(0.0))
    with pytest.raises(ValueError, match="critical"):
        gap_scaling_exponent(params_at(0.0), (0.9 * gc, 1.01 * gc), 5)
    with pytest.raises(ValueError, match="2 samples"):
        gap_scaling_exponent(params_at(0.0), (0.5 * gc, 0.9 * gc), 1)
