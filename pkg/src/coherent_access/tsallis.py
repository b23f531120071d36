"""q-exponential weights, Tsallis entropy and the log-series bridge.

Writing ``x = beta*E`` and ``r = (1 - q) x``, the q-exponential

    [1 - r]**(1/(1-q)) = exp(log(1 - r) / (1 - q))

has exponent ``-(1/(1-q)) * sum_n r**n / n = -sum_n c_n x**n`` with
``c_1 = 1`` and ``c_n = (1-q)**(n-1) / n``. Feeding those coefficients into a
corrected Boltzmann exponent therefore reproduces the q-exponential inside
``|r| < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DiscreteDistribution, ExponentSeries
from .errors import DomainError

__all__ = [
    "QParams",
    "q_series_coefficient",
    "q_series_exponent",
    "series_from_q",
    "q_exponential_weight",
    "q_exponential_clamped",
    "series_weight",
    "series_vs_q_residual",
    "tsallis_entropy",
    "q_expectation",
    "nonadditivity_gap",
]


@dataclass(frozen=True)
class QParams:
    q: float
    beta: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.q):
            raise ValueError("q must be finite")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k!r}")


def q_series_coefficient(n: int, q: float) -> float:
    """Coefficient of ``(beta*E)**n`` in the q-exponential's exponent."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1.0
    return (1.0 - q) ** (n - 1) / n


def q_series_exponent(x: float, q: float, order: int) -> float:
    """Truncated exponent ``sum_{n<=order} c_n x**n`` (Horner)."""
    acc = 0.0
    for n in range(order, 0, -1):
        acc = acc * x + q_series_coefficient(n, q)
    return acc * x


def series_from_q(q: float, beta: float, order: int) -> ExponentSeries:
    """ExponentSeries carrying the q-exponential coefficients up to ``order``."""
    return ExponentSeries(beta, tuple(q_series_coefficient(n, q) for n in range(2, order + 1)))


def q_exponential_weight(E: float, p: QParams) -> float:
    """Unnormalized q-distribution weight ``[1 - (1-q) beta E]**(1/(1-q))``.

    Raises DomainError where the bracket is not positive (the q-distribution
    cutoff); ``q == 1`` returns ``exp(-beta E)``.
    """
    x = p.beta * E
    if p.q == 1:
        return math.exp(-x)
    r = (1.0 - p.q) * x
    if not r < 1:
        raise DomainError(f"1 - (1-q) beta E = {1 - r!r} is outside the support")
    return math.exp(math.log1p(-r) / (1.0 - p.q))


def q_exponential_clamped(E: float, p: QParams) -> float:
    """Like :func:`q_exponential_weight` but 0 beyond the cutoff when ``q < 1``.

    Intended for plotting only. For ``q > 1`` a nonpositive bracket has no
    finite continuation and still raises.
    """
    if p.q < 1 and (1.0 - p.q) * p.beta * E >= 1:
        return 0.0
    return q_exponential_weight(E, p)


def series_weight(E: float, p: QParams, order: int) -> float:
    return math.exp(-q_series_exponent(p.beta * E, p.q, order))


def series_vs_q_residual(E: float, p: QParams, order: int) -> float:
    """``|exp(-truncated series) - q-exponential|`` at ``beta*E``.

    Requires ``|(1-q) beta E| < 1``, where the log series converges.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    r = (1.0 - p.q) * p.beta * E
    if not abs(r) < 1:
        raise DomainError(f"|(1-q) beta E| = {abs(r)!r} is outside the series convergence domain")
    return abs(series_weight(E, p, order) - q_exponential_weight(E, p))


def tsallis_entropy(dist: DiscreteDistribution, p: QParams) -> float:
    """``k (1 - sum p_j**q) / (q - 1)``; Shannon ``-k sum p ln p`` at ``q == 1``.

    Zero-probability states are dropped. Each term is written as
    ``p * expm1((q-1) ln p)`` so the expression stays accurate close to q = 1.
    """
    pj = dist.probabilities[dist.probabilities > 0]
    logp = np.log(pj)
    if p.q == 1:
        return float(-p.k * np.sum(pj * logp))
    d = p.q - 1.0
    return float(-p.k * math.fsum(pj * np.expm1(d * logp)) / d)


def q_expectation(dist: DiscreteDistribution, p: QParams) -> float:
    """Escort mean ``sum p_j**q E_j / sum p_j**q``."""
    mask = dist.probabilities > 0
    e = dist.energies[mask]
    pj = dist.probabilities[mask]
    if p.q == 1:
        return float(np.dot(pj, e))
    w = pj**p.q
    return float(np.dot(w, e) / w.sum())


def nonadditivity_gap(
    distA: DiscreteDistribution, distB: DiscreteDistribution, p: QParams
) -> float:
    """``S_q(A x B) - S_q(A) - S_q(B)`` for independent subsystems.

    Analytically equal to ``(1 - q) S_q(A) S_q(B) / k``.
    """
    joint = distA.product(distB)
    return tsallis_entropy(joint, p) - tsallis_entropy(distA, p) - tsallis_entropy(distB, p)
