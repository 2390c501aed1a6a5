import numpy as np
import pytest

from spinwave import (LatticeSpec, QuadratureConvergenceError, QuadratureSpec,
                      StabilityError, build_potential, covariance_dense,
                      covariance_infinite, covariance_pbc_fft, critical_g_equal,
                      dispersion_value, excitation_density)

from conftest import full_matrices, params_at


def test_dense_decoupled_closed_form():
    cov = covariance_dense(build_potential(LatticeSpec.open_boundary(3), params_at(0.0)))
    assert np.allclose(cov.Q, np.eye(9) / 3000.0, rtol=1e-13, atol=0)
    assert np.allclose(cov.P, 750.0 * np.eye(9), rtol=1e-13, atol=0)


def test_dense_purity_identity():
    cov = covariance_dense(build_potential(LatticeSpec.periodic(4), params_at(1.25)))
    eigs = np.linalg.eigvals(4.0 * cov.Q @ cov.P)
    assert np.max(np.abs(eigs - 1.0)) < 1e-10


def test_dense_matches_fft_periodic(paper_params):
    spec = LatticeSpec.periodic(6)
    cov = covariance_dense(build_potential(spec, paper_params))
    table = covariance_pbc_fft(spec, paper_params)
    Qf, Pf = full_matrices(table, 6)
    assert np.max(np.abs(cov.Q - Qf)) < 1e-10
    assert np.max(np.abs(cov.P - Pf)) < 1e-10


def test_fft_onsite_equals_dense_diagonal(paper_params):
    spec = LatticeSpec.periodic(6)
    cov = covariance_dense(build_potential(spec, paper_params))
    table = covariance_pbc_fft(spec, paper_params)
    assert table.qq_at(0, 0) == pytest.approx(cov.Q[0, 0], rel=1e-12)
    assert table.pp_at(0, 0) == pytest.approx(cov.P[0, 0], rel=1e-12)


def test_fft_decoupled_no_correlations():
    table = covariance_pbc_fft(LatticeSpec.periodic(8), params_at(0.0))
    assert table.qq_at(0, 0) == pytest.approx(1.0 / 3000.0, rel=1e-13)
    assert abs(table.qq_at(1, 0)) < 1e-18
    assert abs(table.pp_at(3, 2)) < 1e-9  # pp scale is 750


def test_fft_sum_rule(paper_params):
    # summing <q_0 q_r> over the torus leaves only the k = 0 mode
    M = 8
    table = covariance_pbc_fft(LatticeSpec.periodic(M), paper_params)
    total = float(np.sum(table.qq))
    v0 = float(dispersion_value(paper_params, 0.0, 0.0))
    assert total == pytest.approx(0.5 * v0 ** -0.5, rel=1e-10)


def test_infinite_matches_fft_at_large_m():
    p = params_at(1.25)
    table_inf = covariance_infinite(p, [(i, j) for i in range(4) for j in range(4)])
    table_fft = covariance_pbc_fft(LatticeSpec.periodic(160), p)
    for dx in range(4):
        for dy in range(4):
            a, b = table_inf.qq_at(dx, dy), table_fft.qq_at(dx, dy)
            assert abs(a - b) <= 1e-8 * max(abs(a), abs(b))
            a, b = table_inf.pp_at(dx, dy), table_fft.pp_at(dx, dy)
            assert abs(a - b) <= 1e-8 * max(abs(a), abs(b))


def test_infinite_decoupled_closed_form():
    table = covariance_infinite(params_at(0.0), [(0, 0), (1, 0)])
    assert table.qq_at(0, 0) == pytest.approx(1.0 / 3000.0, rel=1e-12)
    assert abs(table.qq_at(1, 0)) < 1e-18


def test_infinite_near_critical_converges_at_default_tol():
    gc = critical_g_equal(params_at(0.0))
    table = covariance_infinite(params_at(gc * (1.0 - 1e-4)), [(0, 0), (1, 0)])
    assert table.qq_at(0, 0) == pytest.approx(5.257723859600e-4, rel=1e-9)


def test_infinite_nonconvergence_error_carries_estimates():
    gc = critical_g_equal(params_at(0.0))
    quad = QuadratureSpec(base_points=64, rel_tol=1e-10, max_doublings=3)
    with pytest.raises(QuadratureConvergenceError) as err:
        covariance_infinite(params_at(gc * (1.0 - 1e-9)), [(0, 0)], quad=quad)
    assert err.value.last[0].shape == (1, 1)
    assert err.value.previous[0].shape == (1, 1)


def test_near_critical_guard_refuses():
    gc = critical_g_equal(params_at(0.0))
    with pytest.raises(StabilityError, match="criticality"):
        covariance_infinite(params_at(gc * (1.0 - 1e-13)), [(0, 0)])


def test_beyond_critical_raises_everywhere():
    gc = critical_g_equal(params_at(0.0))
    hot = params_at(1.05 * gc)
    with pytest.raises(StabilityError):
        covariance_pbc_fft(LatticeSpec.periodic(40), hot)
    with pytest.raises(StabilityError):
        covariance_dense(build_potential(LatticeSpec.periodic(40), hot))
    with pytest.raises(StabilityError):
        covariance_infinite(hot, [(0, 0)])


def test_engine_agreement_grid():
    worst = 0.0
    for M in (4, 5, 6, 8):
        for g in (0.5, 1.25, 1.7):
            spec = LatticeSpec.periodic(M)
            p = params_at(g)
            cov = covariance_dense(build_potential(spec, p))
            Qf, Pf = full_matrices(covariance_pbc_fft(spec, p), M)
            worst = max(worst, float(np.max(np.abs(cov.Q - Qf))),
                        float(np.max(np.abs(cov.P - Pf))))
    assert worst < 1e-10


def test_positivity_cholesky():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g1, g2 = rng.uniform(0.0, 1.2, size=2)
        p = params_at(float(g1), g2=float(g2))
        cov = covariance_dense(build_potential(LatticeSpec.periodic(4), p))
        np.linalg.cholesky(cov.Q)
        np.linalg.cholesky(cov.P)


def test_pure_state_via_fft_table(paper_params):
    Q, P = full_matrices(covariance_pbc_fft(LatticeSpec.periodic(5), paper_params), 5)
    eigs = np.linalg.eigvals(4.0 * Q @ P)
    assert np.max(np.abs(eigs - 1.0)) < 1e-9


def test_nearest_correlation_grows_toward_critical():
    vals = []
    for g in (0.5, 1.0, 1.4, 1.7):
        table = covariance_infinite(params_at(g), [(1, 0)])
        vals.append(abs(table.qq_at(1, 0)))
    assert np.all(np.diff(vals) > 0)


def test_finite_size_error_shrinks_with_m():
    # at g = 1.72 the correlation length is a few sites, so halving is visible
    p = params_at(1.72)
    ref = covariance_infinite(p, [(1, 0)]).qq_at(1, 0)
    diffs = [abs(covariance_pbc_fft(LatticeSpec.periodic(M), p).qq_at(1, 0) - ref)
             for M in (10, 20, 40)]
    assert diffs[1] < 0.5 * diffs[0]
    assert diffs[2] < 0.5 * diffs[1]
    # at g = 1.25 the correlation length is under a site: M = 40 is converged
    p = params_at(1.25)
    ref = covariance_infinite(p, [(1, 0)]).qq_at(1, 0)
    assert abs(covariance_pbc_fft(LatticeSpec.periodic(40), p).qq_at(1, 0) - ref) < 1e-12


def test_table_missing_displacement_named():
    table = covariance_infinite(params_at(1.0), [(i, j) for i in range(3) for j in range(3)])
    with pytest.raises(ValueError, match=r"\(5, 0\)"):
        table.qq_at(5, 0)


def test_excitation_density_values(paper_params):
    spec = LatticeSpec.periodic(12)
    assert excitation_density(params_at(0.0), spec) == pytest.approx(1.0 / 3000.0, rel=1e-12)
    assert excitation_density(paper_params, spec) < 1e-2
    assert excitation_density(paper_params, LatticeSpec.infinite_lattice()) < 1e-2


def test_excitation_density_bounded_at_criticality_but_grows_on_finite_lattice():
    gc = critical_g_equal(params_at(0.0))
    near = params_at(gc * (1.0 - 1e-6))
    quad = QuadratureSpec(rel_tol=1e-6)
    # integrable 2D cone: the infinite-lattice density stays small even here
    assert excitation_density(near, LatticeSpec.infinite_lattice(), quad=quad) < 1e-2
    # an even-sided finite lattice has a discrete soft mode that dominates
    spec = LatticeSpec.periodic(80)
    nearer = params_at(gc * (1.0 - 1e-11))
    assert excitation_density(nearer, spec) > excitation_density(params_at(1.5), spec)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(base_points=8)
    with pytest.raises(ValueError):
        QuadratureSpec(max_doublings=0)
