"""Corrected exponents, occupation laws and partition functions on finite spectra.

Out of equilibrium the dimensionless exponent ``eps = beta * E`` is replaced by a
power series

    eps* = eps + alpha_1 eps**2 + alpha_2 eps**3 + ... + alpha_m eps**(m+1)

whose constant term is 0 and linear coefficient is 1, so that ``eps* -> eps``
when every ``alpha`` vanishes. The occupation of a coherent state and the
Boltzmann weight are then the usual expressions evaluated at ``eps*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "ExponentSeries",
    "DiscreteDistribution",
    "epsilon_star",
    "modified_bose_einstein",
    "first_order_bose_einstein",
    "is_perturbative",
    "modified_boltzmann_weight",
    "log_weights",
    "partition_function",
    "normalize",
    "factorization_residual",
]

PROBABILITY_TOL = 1e-12


@dataclass(frozen=True)
class ExponentSeries:
    """Inverse temperature plus correction coefficients of the exponent.

    ``alphas[i]`` multiplies ``(beta*E)**(i + 2)``. An empty ``alphas`` is the
    equilibrium Boltzmann exponent.
    """

    beta: float
    alphas: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta!r}")

    @property
    def order(self) -> int:
        """Highest power of ``beta*E`` in the exponent."""
        return len(self.alphas) + 1

    @property
    def coefficients(self) -> tuple[float, ...]:
        """Coefficients ``c_1..c_order`` of ``(beta*E)**n``, with ``c_1 = 1``."""
        return (1.0, *self.alphas)

    @property
    def is_equilibrium(self) -> bool:
        return all(a == 0 for a in self.alphas)

    def multipliers(self) -> tuple[float, ...]:
        """Equivalent coefficients of ``E**n``: ``beta_n = c_n * beta**n``."""
        return tuple(c * self.beta**n for n, c in enumerate(self.coefficients, start=1))

    @classmethod
    def from_multipliers(cls, betas: Sequence[float]) -> "ExponentSeries":
        """Inverse of :meth:`multipliers`; the linear multiplier becomes ``beta``."""
        beta = float(betas[0])
        return cls(beta, tuple(b / beta**n for n, b in enumerate(betas[1:], start=2)))


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probabilities ``p_j`` on a finite energy grid ``E_j``."""

    energies: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float).reshape(-1)
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if e.size == 0 or e.size != p.size:
            raise ValueError("energies and probabilities must be nonempty and equal length")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(math.fsum(p) - 1.0) > PROBABILITY_TOL:
            raise ValueError(f"probabilities sum to {math.fsum(p)!r}, not 1")
        e.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "probabilities", p)

    def __len__(self):
        return self.energies.size

    def __repr__(self):
        return (
            f"DiscreteDistribution(energies={self.energies.tolist()}, "
            f"probabilities={self.probabilities.tolist()})"
        )

    @classmethod
    def uniform(cls, energies) -> "DiscreteDistribution":
        e = np.asarray(energies, dtype=float)
        return cls(e, np.full(e.size, 1.0 / e.size))

    @classmethod
    def point_mass(cls, energy: float) -> "DiscreteDistribution":
        return cls([energy], [1.0])

    def product(self, other: "DiscreteDistribution") -> "DiscreteDistribution":
        """Joint distribution of two independent subsystems; energies add."""
        e = np.add.outer(self.energies, other.energies).ravel()
        p = np.multiply.outer(self.probabilities, other.probabilities).ravel()
        return DiscreteDistribution(e, p / p.sum())


def epsilon_star(eps: float, series: ExponentSeries) -> float:
    """Corrected exponent ``eps + sum_i alphas[i] * eps**(i+2)`` (Horner form)."""
    acc = 0.0
    for c in reversed(series.coefficients):
        acc = acc * eps + c
    return acc * eps


def modified_bose_einstein(eps_star: float) -> float:
    """Mean occupation per coherent state, ``N*/G = 1 / (exp(eps*) - 1)``."""
    if not eps_star > 0:
        raise DomainError(f"occupation diverges or turns negative for eps* = {eps_star!r} <= 0")
    return 1.0 / math.expm1(eps_star)


def first_order_bose_einstein(beta_e: float, alpha1: float) -> float:
    """Occupation with only the quadratic correction, ``1/(exp(x + alpha1 x^2) - 1)``."""
    return modified_bose_einstein(beta_e + alpha1 * beta_e**2)


def is_perturbative(beta_e: float, alpha1: float) -> bool:
    """True where the first-order exponent is still increasing in ``beta*E``."""
    return 1.0 + 2.0 * alpha1 * beta_e > 0


def modified_boltzmann_weight(E: float, series: ExponentSeries) -> float:
    """Unnormalized weight ``exp(-eps*(beta*E))``.

    Raises OverflowError when the weight is not representable as a double.
    """
    exponent = -epsilon_star(series.beta * E, series)
    try:
        return math.exp(exponent)
    except OverflowError:
        raise OverflowError(f"weight exp({exponent!r}) overflows at E={E!r}") from None


def log_weights(energies, series: ExponentSeries) -> np.ndarray:
    """Vector of ``-eps*(beta*E_j)``."""
    x = series.beta * np.asarray(energies, dtype=float)
    acc = np.zeros_like(x)
    for c in reversed(series.coefficients):
        acc = acc * x + c
    return -acc * x


def partition_function(energies: Sequence[float], series: ExponentSeries) -> float:
    """``Z = sum_j exp(-eps*(beta*E_j))`` over a nonempty spectrum."""
    if len(energies) == 0:
        raise ValueError("spectrum must contain at least one energy")
    return math.fsum(modified_boltzmann_weight(E, series) for E in energies)


def normalize(energies: Sequence[float], series: ExponentSeries) -> DiscreteDistribution:
    """Normalized corrected Boltzmann distribution on ``energies``.

    Weights are shifted by their maximum log before exponentiating, which gives
    the same probabilities as ``w_j / Z`` without overflowing on wide spectra.
    """
    if len(energies) == 0:
        raise ValueError("spectrum must contain at least one energy")
    lw = log_weights(energies, series)
    w = np.exp(lw - lw.max())
    return DiscreteDistribution(np.asarray(energies, dtype=float), w / w.sum())


def factorization_residual(EA: float, EB: float, series: ExponentSeries) -> float:
    """``|w(EA+EB) - w(EA) w(EB)|`` for the unnormalized corrected weight.

    Zero for a pure exponential; any nonzero correction coefficient breaks
    the product rule in the energy variable.
    """
    w = modified_boltzmann_weight
    return abs(w(EA + EB, series) - w(EA, series) * w(EB, series))
