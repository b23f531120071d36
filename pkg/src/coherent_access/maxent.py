"""Moment-constrained maximum entropy on a finite energy grid.

Maximizing ``-sum p log p`` subject to raw moments ``<E^n> = t_n`` (n = 1..m)
gives ``p_j ∝ exp(-sum_n beta_n E_j^n)``. The multipliers are found by Newton's
method on the dual

    F(beta) = log Z(beta) + sum_n beta_n t_n,

whose gradient is ``t - <E^n>`` and whose Hessian is the moment covariance
``Cov(E^n, E^k)``. Energies are rescaled to unit range internally so the
powers stay well conditioned; multipliers are reported in the caller's units.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .distributions import DiscreteDistribution, ExponentSeries, normalize
from .errors import ConvergenceError, InfeasibleMomentsError

__all__ = [
    "MAX_ORDER",
    "MomentConstraints",
    "MultiplierSolution",
    "moments",
    "central_moments",
    "gibbs_entropy",
    "maxent_distribution",
    "moments_at",
    "moment_jacobian",
    "solve_multipliers",
    "crosscheck_series",
]

_log = logging.getLogger(__name__)

#: Highest moment order accepted; beyond this the power basis is too ill-conditioned.
MAX_ORDER = 6


@dataclass(frozen=True)
class MomentConstraints:
    """Targets ``<E^n>`` for ``n = 1..len(targets)`` on a fixed grid."""

    targets: tuple[float, ...]
    grid: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(float(t) for t in self.targets))
        object.__setattr__(self, "grid", tuple(float(e) for e in self.grid))
        m = len(self.targets)
        if m < 1:
            raise ValueError("need at least one moment target")
        if m > MAX_ORDER:
            raise ValueError(f"moment order {m} exceeds supported maximum {MAX_ORDER}")
        if len(set(self.grid)) <= m:
            raise ValueError(
                f"grid needs more than {m} distinct energies to identify {m} multipliers"
            )

    @property
    def order(self) -> int:
        return len(self.targets)

    def check_feasible(self):
        """Raise InfeasibleMomentsError unless the targets are interior to the
        set of moment vectors attainable on the grid.

        Each ``<E^n>`` is first compared with the range of ``E^n`` over the
        grid, then with its attainable range given the lower-order targets
        (two small linear programs). Targets on a boundary are rejected too,
        since the multipliers diverge there.
        """
        e = np.asarray(self.grid)
        for n, t in enumerate(self.targets, start=1):
            powers = e**n
            lo, hi = float(powers.min()), float(powers.max())
            if t <= lo:
                raise InfeasibleMomentsError(n, t, ("min", lo))
            if t >= hi:
                raise InfeasibleMomentsError(n, t, ("max", hi))
        scale = float(np.max(np.abs(e))) or 1.0
        x = e / scale
        for n in range(2, self.order + 1):
            a_eq = np.vstack([np.ones_like(x)] + [x**k for k in range(1, n)])
            b_eq = np.array([1.0] + [self.targets[k - 1] / scale**k for k in range(1, n)])
            lo, hi = _conditional_range(x**n, a_eq, b_eq)
            t = self.targets[n - 1] / scale**n
            slack = 1e-12 * max(1.0, hi - lo)
            if t <= lo + slack:
                raise InfeasibleMomentsError(n, self.targets[n - 1], ("min", lo * scale**n))
            if t >= hi - slack:
                raise InfeasibleMomentsError(n, self.targets[n - 1], ("max", hi * scale**n))


def _conditional_range(objective, a_eq, b_eq):
    """Min and max of ``objective @ p`` over probability vectors with ``a_eq @ p = b_eq``."""
    bounds = [(0, None)] * objective.size
    low = linprog(objective, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    high = linprog(-objective, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if low.status != 0 or high.status != 0:
        return float("inf"), float("-inf")
    return float(low.fun), float(-high.fun)


@dataclass(frozen=True)
class MultiplierSolution:
    betas: tuple[float, ...]
    distribution: DiscreteDistribution
    residual: float
    iterations: int
    trace: tuple[float, ...] = field(default=(), repr=False)


def moments(dist: DiscreteDistribution, m: int) -> list[float]:
    """Raw moments ``sum_j p_j E_j^n`` for ``n = 1..m``."""
    e, p = dist.energies, dist.probabilities
    return [float(np.dot(p, e**n)) for n in range(1, m + 1)]


def central_moments(dist: DiscreteDistribution, m: int) -> list[float]:
    """Moments about the mean, ``<(E - <E>)^n>`` for ``n = 1..m``."""
    e, p = dist.energies, dist.probabilities
    mean = float(np.dot(p, e))
    return [float(np.dot(p, (e - mean) ** n)) for n in range(1, m + 1)]


def gibbs_entropy(dist: DiscreteDistribution) -> float:
    """``-sum p ln p`` with ``0 ln 0 = 0``."""
    p = dist.probabilities[dist.probabilities > 0]
    return float(-np.sum(p * np.log(p)))


def _powers(grid, m):
    e = np.asarray(grid, dtype=float)
    return np.vstack([e**n for n in range(1, m + 1)])


def _probabilities(betas, powers):
    lw = -(np.asarray(betas, dtype=float) @ powers)
    w = np.exp(lw - lw.max())
    return w / w.sum()


def maxent_distribution(betas: Sequence[float], grid: Sequence[float]) -> DiscreteDistribution:
    """``p_j ∝ exp(-sum_n betas[n-1] E_j^n)`` on ``grid``."""
    powers = _powers(grid, len(betas))
    return DiscreteDistribution(np.asarray(grid, dtype=float), _probabilities(betas, powers))


def moments_at(betas: Sequence[float], grid: Sequence[float]) -> np.ndarray:
    """Raw moments ``<E^n>``, n = 1..len(betas), of the MaxEnt family at ``betas``."""
    powers = _powers(grid, len(betas))
    return powers @ _probabilities(betas, powers)


def moment_jacobian(betas: Sequence[float], grid: Sequence[float]) -> np.ndarray:
    """``d<E^n>/d beta_k = -Cov(E^n, E^k)``."""
    powers = _powers(grid, len(betas))
    p = _probabilities(betas, powers)
    centered = powers - (powers @ p)[:, None]
    return -(centered * p) @ centered.T


def solve_multipliers(
    c: MomentConstraints, tol: float = 1e-10, max_iter: int = 200
) -> MultiplierSolution:
    """Find ``beta_1..beta_m`` whose MaxEnt distribution matches ``c.targets``.

    Damped Newton from ``beta = 0``: a full step is tried first and halved
    while it does not reduce the Euclidean moment residual. Convergence is
    declared when ``max_n |<E^n> - t_n| <= tol`` in the caller's units; one
    further full step is then kept if it does not raise the residual.

    Raises
    ------
    InfeasibleMomentsError
        A target lies on or outside the range of ``E^n`` over the grid.
    ConvergenceError
        ``max_iter`` iterations were used, or no step reduced the residual.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    c.check_feasible()
    m = c.order
    grid = np.asarray(c.grid)
    scale = float(np.max(np.abs(grid))) or 1.0
    orders = np.arange(1, m + 1)
    unit = scale**orders
    powers = _powers(grid / scale, m)
    targets = np.asarray(c.targets)
    scaled_targets = targets / unit

    def state(b):
        p = _probabilities(b, powers)
        mom = powers @ p
        err = (mom - scaled_targets) * unit
        return p, mom, err

    def newton_step(p, mom):
        centered = powers - mom[:, None]
        cov = (centered * p) @ centered.T
        try:
            return np.linalg.solve(cov, mom - scaled_targets)
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(cov, mom - scaled_targets, rcond=None)[0]

    b = np.zeros(m)
    p, mom, err = state(b)
    resid = float(np.max(np.abs(err)))
    trace = [resid]
    it = 0
    while resid > tol:
        if it >= max_iter:
            raise ConvergenceError("moment solve did not converge", resid, it)
        it += 1
        step = newton_step(p, mom)
        merit = float(np.linalg.norm(err))
        t = 1.0
        for _ in range(60):
            trial = b + t * step
            p_t, mom_t, err_t = state(trial)
            if np.all(np.isfinite(err_t)) and float(np.linalg.norm(err_t)) < merit:
                break
            t *= 0.5
        else:
            raise ConvergenceError("line search failed to reduce the residual", resid, it)
        b, p, mom, err = trial, p_t, mom_t, err_t
        resid = float(np.max(np.abs(err)))
        trace.append(resid)
        _log.debug("iter %d step %.3g residual %.3e", it, t, resid)

    # one undamped step past tol pins the multipliers down to roughly tol**2
    if resid > 0:
        trial = b + newton_step(p, mom)
        p_t, mom_t, err_t = state(trial)
        if np.all(np.isfinite(err_t)) and float(np.max(np.abs(err_t))) <= resid:
            b, p, err = trial, p_t, err_t
            resid = float(np.max(np.abs(err)))
            it += 1
            trace.append(resid)

    betas = tuple(float(x) for x in b / unit)
    return MultiplierSolution(
        betas=betas,
        distribution=DiscreteDistribution(grid, p),
        residual=resid,
        iterations=it,
        trace=tuple(trace),
    )


def crosscheck_series(sol: MultiplierSolution, series: ExponentSeries) -> float:
    """Largest probability gap between a MaxEnt solution and a series distribution.

    The series must have the same order as the solution. Mapping
    ``alpha_(n-1) = beta_n / beta**n`` (see ``ExponentSeries.from_multipliers``)
    makes the two distributions identical.
    """
    if series.order != len(sol.betas):
        raise ValueError(
            f"series order {series.order} does not match {len(sol.betas)} multipliers"
        )
    other = normalize(sol.distribution.energies, series)
    return float(np.max(np.abs(sol.distribution.probabilities - other.probabilities)))
