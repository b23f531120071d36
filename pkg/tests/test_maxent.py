import math

import numpy as np
import pytest
from scipy.optimize import brentq

from coherent_access.distributions import DiscreteDistribution, ExponentSeries, normalize
from coherent_access.errors import ConvergenceError, InfeasibleMomentsError
from coherent_access.maxent import (
    MomentConstraints,
    central_moments,
    crosscheck_series,
    gibbs_entropy,
    maxent_distribution,
    moment_jacobian,
    moments,
    moments_at,
    solve_multipliers,
)


def test_moments_examples():
    assert moments(DiscreteDistribution.point_mass(2.0), 2) == [2.0, 4.0]
    assert moments(DiscreteDistribution([0, 2], [0.5, 0.5]), 2) == [1.0, 2.0]
    e = np.array([0.0, 1.0, 2.0])
    w = np.exp(-e)
    gibbs = DiscreteDistribution(e, w / w.sum())
    expected = (math.exp(-1) + 2 * math.exp(-2)) / (1 + math.exp(-1) + math.exp(-2))
    assert moments(gibbs, 1) == pytest.approx([expected], rel=1e-14)


def test_central_moments():
    d = DiscreteDistribution([0, 2], [0.5, 0.5])
    assert central_moments(d, 3) == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)


def test_two_level_recovers_ln2():
    sol = solve_multipliers(MomentConstraints((1 / 3,), (0.0, 1.0)))
    assert sol.betas[0] == pytest.approx(math.log(2), abs=1e-10)
    assert sol.residual <= 1e-10
    assert sol.distribution.probabilities == pytest.approx([2 / 3, 1 / 3], abs=1e-10)


@pytest.mark.parametrize("mean", [0.05, 0.2, 0.5, 0.8, 0.95])
def test_single_moment_is_gibbs_inversion(mean):
    sol = solve_multipliers(MomentConstraints((mean,), (0.0, 1.0)))
    assert sol.betas[0] == pytest.approx(math.log((1 - mean) / mean), abs=1e-10)


def test_symmetric_grid_forces_zero_odd_multiplier():
    # p(+-1) = e^{-b2}/(1 + 2 e^{-b2}); solve <E^2> = 0.5 with a bracketing root finder
    def second_moment(b2):
        w = math.exp(-b2)
        return 2 * w / (1 + 2 * w) - 0.5

    b2 = brentq(second_moment, -10, 10, xtol=1e-15)
    sol = solve_multipliers(MomentConstraints((0.0, 0.5), (-1.0, 0.0, 1.0)))
    assert sol.betas[0] == pytest.approx(0.0, abs=1e-10)
    assert sol.betas[1] == pytest.approx(b2, abs=1e-9)
    assert b2 == pytest.approx(math.log(2), abs=1e-12)


def test_symmetric_grid_uniform_second_moment():
    sol = solve_multipliers(MomentConstraints((0.0, 2 / 3), (-1.0, 0.0, 1.0)))
    assert sol.betas == pytest.approx((0.0, 0.0), abs=1e-10)


def test_uniform_targets_give_uniform():
    grid = (0.0, 1.0, 2.0)
    uniform = DiscreteDistribution.uniform(grid)
    sol = solve_multipliers(MomentConstraints(tuple(moments(uniform, 2)), grid))
    assert sol.residual <= 1e-10
    assert sol.distribution.probabilities == pytest.approx([1 / 3] * 3, abs=1e-10)


def test_recovers_known_multipliers_on_scaled_grid():
    grid = np.linspace(0, 50, 11)
    betas = (0.1, -0.002, 1e-5)
    target = moments(maxent_distribution(betas, grid), 3)
    sol = solve_multipliers(MomentConstraints(tuple(target), tuple(grid)))
    assert sol.betas == pytest.approx(betas, rel=1e-6)


@pytest.mark.parametrize(
    "targets,grid,order",
    [((1.0,), (0.0, 1.0), 1), ((-0.1,), (0.0, 1.0), 1), ((0.5, 0.6), (0.0, 0.5, 1.0), 2)],
)
def test_infeasible_targets_identify_bound(targets, grid, order):
    with pytest.raises(InfeasibleMomentsError) as info:
        solve_multipliers(MomentConstraints(targets, grid))
    assert info.value.order == order


def test_constraint_validation():
    with pytest.raises(ValueError):
        MomentConstraints((), (0.0, 1.0))
    with pytest.raises(ValueError):
        MomentConstraints((0.5, 0.4), (0.0, 1.0))
    with pytest.raises(ValueError):
        MomentConstraints((0.1,) * 7, tuple(range(10)))


def test_non_convergence_carries_residual():
    with pytest.raises(ConvergenceError) as info:
        solve_multipliers(MomentConstraints((0.01,), (0.0, 1.0)), max_iter=1)
    assert info.value.residual > 1e-10
    assert info.value.iterations == 1


def test_jacobian_matches_central_differences():
    rng = np.random.default_rng(1234)
    grid = np.linspace(-1, 2, 7)
    for _ in range(20):
        b = rng.uniform(-1, 1, size=3)
        J = moment_jacobian(b, grid)
        h = 1e-5
        fd = np.empty_like(J)
        for k in range(3):
            d = np.zeros(3)
            d[k] = h
            fd[:, k] = (moments_at(b + d, grid) - moments_at(b - d, grid)) / (2 * h)
        assert np.linalg.norm(J - fd) <= 1e-6 * np.linalg.norm(J)


def test_trace_is_reproducible():
    c = MomentConstraints((0.7, 1.1), (0.0, 0.5, 1.0, 1.5, 2.0))
    a = solve_multipliers(c)
    b = solve_multipliers(c)
    assert a.trace == b.trace
    assert a.betas == b.betas
    assert len(a.trace) == a.iterations + 1


def _feasible_perturbations(p, grid, m, count, rng):
    """Distributions with the same first m moments as p, by sampling along the
    null space of the moment/normalization matrix and rejecting negatives."""
    A = np.vstack([np.ones_like(grid)] + [grid**n for n in range(1, m + 1)])
    _, _, vt = np.linalg.svd(A)
    null = vt[A.shape[0]:]
    out = []
    while len(out) < count:
        q = p + null.T @ rng.normal(scale=0.2, size=null.shape[0])
        if np.all(q >= 0):
            out.append(q / q.sum())
    return out


@pytest.mark.parametrize("targets", [(0.8,), (0.8, 1.2), (1.1, 1.9, 3.6)])
def test_solution_maximizes_entropy(targets):
    grid = np.linspace(0, 2, 6)
    c = MomentConstraints(targets, tuple(grid))
    sol = solve_multipliers(c)
    h_star = gibbs_entropy(sol.distribution)
    rng = np.random.default_rng(42)
    for q in _feasible_perturbations(sol.distribution.probabilities, grid, c.order, 200, rng):
        d = DiscreteDistribution(grid, q)
        assert np.max(np.abs(np.array(moments(d, c.order)) - targets)) <= 1e-9
        assert gibbs_entropy(d) <= h_star + 1e-9


def test_crosscheck_exact_mapping():
    grid = tuple(np.linspace(0, 2, 5))
    sol = solve_multipliers(MomentConstraints((0.7,), grid))
    assert crosscheck_series(sol, ExponentSeries(sol.betas[0])) <= 1e-12

    target = moments(maxent_distribution((1.0, 0.2), grid), 2)
    sol2 = solve_multipliers(MomentConstraints(tuple(target), grid))
    mapped = ExponentSeries.from_multipliers(sol2.betas)
    assert mapped.alphas[0] == pytest.approx(sol2.betas[1] / sol2.betas[0] ** 2)
    assert crosscheck_series(sol2, mapped) <= 1e-12


def test_crosscheck_detects_mismatch_and_order():
    grid = tuple(np.linspace(0, 2, 5))
    target = moments(maxent_distribution((1.0, 0.2), grid), 2)
    sol = solve_multipliers(MomentConstraints(tuple(target), grid))
    wrong = ExponentSeries(sol.betas[0], (0.5,))
    assert crosscheck_series(sol, wrong) > 1e-3
    with pytest.raises(ValueError):
        crosscheck_series(sol, ExponentSeries(sol.betas[0]))


def test_distribution_matches_normalized_exponential():
    grid = (0.0, 0.4, 1.0, 1.7)
    sol = solve_multipliers(MomentConstraints((0.6, 0.7), grid))
    series = ExponentSeries.from_multipliers(sol.betas)
    np.testing.assert_allclose(
        sol.distribution.probabilities, normalize(grid, series).probabilities, atol=1e-13
    )
