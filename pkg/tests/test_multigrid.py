import numpy as np
import pytest

import conftest as shared
from dofde import (
    MgmCase,
    CaseTag,
    StoppingRule,
    build_hierarchy,
    build_restriction,
    case_alpha,
    case_beta,
    case_delta,
    case_finest_only,
    case_gamma,
    gauss_seidel_sweep,
    tgm,
    vcycle,
)


def laplacian_dense(n):
    return (
        np.diag(np.full(n, 2.0))
        - np.diag(np.ones(n - 1), 1)
        - np.diag(np.ones(n - 1), -1)
    )


def two_level(n):
    return build_hierarchy(
        np.asarray(shared.dense_scaled(n)), coarsest_threshold=(n - 1) // 2
    )


def full_depth(n):
    return build_hierarchy(np.asarray(shared.dense_scaled(n)))


class TestRestriction:
    def test_smallest(self):
        R = build_restriction(3)
        np.testing.assert_array_equal(R.toarray(), [[1.0, 2.0, 1.0]])

    def test_stencil_placement(self):
        R = build_restriction(7).toarray()
        assert R.shape == (3, 7)
        expected = np.zeros((3, 7))
        for i in range(3):
            expected[i, 2 * i : 2 * i + 3] = [1.0, 2.0, 1.0]
        np.testing.assert_array_equal(R, expected)

    def test_constant_vector(self):
        R = build_restriction(15)
        np.testing.assert_allclose(R @ np.full(15, 3.0), np.full(7, 12.0))

    def test_even_size_rejected(self):
        with pytest.raises(ValueError):
            build_restriction(8)


class TestHierarchy:
    def test_galerkin_triple_product(self):
        A = laplacian_dense(7)
        h = build_hierarchy(A, coarsest_threshold=3)
        R = h.restrictions[0].toarray()
        np.testing.assert_allclose(h.matrices[1], R @ A @ R.T, atol=1e-13)
        coarse = h.matrices[1]
        assert np.all(np.diag(coarse) > 0)
        # tridiagonal: nothing beyond the first off-diagonal
        assert abs(coarse[0, 2]) < 1e-14

    def test_threshold_stops_after_one_coarsening(self):
        h = build_hierarchy(np.asarray(shared.dense_scaled(31)), coarsest_threshold=15)
        assert h.depth == 2
        assert [m.shape[0] for m in h.matrices] == [31, 15]

    def test_every_level_symmetric(self):
        h = full_depth(63)
        for M in h.matrices:
            assert np.abs(M - M.T).max() < 1e-13

    def test_size_validation(self):
        with pytest.raises(ValueError):
            build_hierarchy(np.eye(6))
        with pytest.raises(ValueError):
            build_hierarchy(np.eye(9))

    def test_galerkin_consistency(self):
        # at the exact solution the restricted residual vanishes
        n = 31
        A = np.asarray(shared.dense_scaled(n))
        h = two_level(n)
        b = np.ones(n)
        x_star = np.linalg.solve(A, b)
        coarse_residual = h.restrictions[0] @ (b - A @ x_star)
        assert np.abs(coarse_residual).max() < 1e-12


class TestGaussSeidel:
    def test_diagonal_system_one_sweep(self):
        A = np.diag([2.0, 4.0, 8.0])
        b = np.array([2.0, 8.0, 32.0])
        x = gauss_seidel_sweep(A, np.zeros(3), b, sweeps=1)
        np.testing.assert_allclose(x, [1.0, 2.0, 4.0], atol=1e-14)

    def test_hand_worked_two_by_two(self):
        A = np.array([[2.0, 1.0], [1.0, 3.0]])
        b = np.array([1.0, 2.0])
        x = gauss_seidel_sweep(A, np.zeros(2), b, sweeps=1)
        np.testing.assert_allclose(x, [0.5, 0.5], atol=1e-14)

    def test_energy_error_non_increasing(self):
        rng = np.random.default_rng(77)
        M = rng.standard_normal((12, 12))
        A = M @ M.T + 12 * np.eye(12)
        b = rng.standard_normal(12)
        x_ref = np.linalg.solve(A, b)
        x = np.zeros(12)
        prev = np.inf
        for _ in range(5):
            x = gauss_seidel_sweep(A, x, b, sweeps=1)
            e = x - x_ref
            energy = float(e @ (A @ e))
            assert energy <= prev * (1 + 1e-12)
            prev = energy

    def test_zero_diagonal_rejected(self):
        A = np.array([[0.0, 1.0], [1.0, 2.0]])
        with pytest.raises(ValueError):
            gauss_seidel_sweep(A, np.zeros(2), np.ones(2))


class TestCaseConfigs:
    def test_factories(self):
        assert case_alpha().tag is CaseTag.ALPHA
        assert case_gamma().nu_pre == 1
        assert case_gamma(2).nu_pre == 2
        assert case_delta().nu_post == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            MgmCase(CaseTag.ALPHA, -1, 1)
        with pytest.raises(ValueError):
            MgmCase(CaseTag.ALPHA, 0, 0)
        with pytest.raises(ValueError):
            case_gamma(3)


class TestSolvers:
    def test_exact_smoother_converges_immediately(self):
        # on the pure stencil matrix the Laplacian smoother is exact
        n = 15
        A = laplacian_dense(n)
        h = build_hierarchy(A, coarsest_threshold=7)
        report = tgm(h, case_gamma(), np.ones(n))
        assert report.converged
        assert report.iterations == 1

    def test_alpha_count_smallest_size(self):
        report = vcycle(full_depth(31), case_alpha(), np.ones(31))
        assert report.converged
        assert 8 <= report.iterations <= 10

    def test_gamma_count_midrange(self):
        report = vcycle(full_depth(511), case_gamma(), np.ones(511))
        assert 2 <= report.iterations <= 4

    def test_delta_count(self):
        for n in (63, 127):
            report = vcycle(full_depth(n), case_delta(), np.ones(n))
            assert 1 <= report.iterations <= 3

    def test_beta_two_grid_count(self):
        report = tgm(two_level(63), case_beta(), np.ones(63))
        assert 3 <= report.iterations <= 5

    def test_finest_only_count(self):
        report = vcycle(full_depth(127), case_finest_only(), np.ones(127))
        assert 2 <= report.iterations <= 4

    def test_two_grid_matches_vcycle_counts(self):
        n = 63
        for case in (case_alpha(), case_beta(), case_gamma(), case_delta()):
            t = tgm(two_level(n), case, np.ones(n))
            v = vcycle(full_depth(n), case, np.ones(n))
            assert t.iterations == v.iterations

    def test_h_independence(self):
        for factory in (case_beta, case_gamma, case_delta):
            counts = [
                vcycle(full_depth(n), factory(), np.ones(n)).iterations
                for n in (31, 63, 127, 255)
            ]
            assert max(counts) - min(counts) <= 2

    def test_residuals_decrease_monotonically(self):
        n = 63
        for factory in (case_alpha, case_beta, case_gamma, case_delta):
            report = vcycle(full_depth(n), factory(), np.ones(n))
            hist = report.residual_history
            assert np.all(np.diff(hist) < 0)

    def test_two_grid_needs_two_levels(self):
        h = full_depth(63)
        assert h.depth > 2
        with pytest.raises(ValueError):
            tgm(h, case_alpha(), np.ones(63))

    def test_max_iterations_unconverged(self):
        report = vcycle(
            full_depth(31), case_alpha(), np.ones(31), stop=StoppingRule(max_iterations=2)
        )
        assert not report.converged
        assert report.iterations == 2

    def test_zero_rhs(self):
        report = vcycle(full_depth(31), case_alpha(), np.zeros(31))
        assert report.converged and report.iterations == 0
