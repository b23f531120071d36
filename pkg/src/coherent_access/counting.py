"""Exact microstate counting with and without coherent access.

A level with ``g`` sublevels normally offers ``g`` single-particle states. Under
coherent access a particle may instead occupy any nonempty subset of those
sublevels as one effective state, so the level offers ``G = 2**g - 1`` states.
Bosonic placement of ``n`` identical particles into ``G`` states is the usual
stars-and-bars count ``(G + n - 1)! / ((G - 1)! n!)``.

All counts are Python ``int`` values and therefore exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "MAX_ENUMERATION",
    "LevelSpec",
    "MacrostateSpec",
    "binomial",
    "coherent_degeneracy",
    "coherent_excess",
    "microstate_count",
    "enumerate_coherent_sequences",
    "coherent_subsets",
    "format_sequence",
    "macrostate_weight",
    "compositions",
    "total_omega",
    "distinguishable_count",
]

#: Largest number of occupation maps ``enumerate_coherent_sequences`` will build.
MAX_ENUMERATION = 200_000


def _check_count(name: str, value: int, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k); zero when ``k > n``."""
    _check_count("n", n, 0)
    _check_count("k", k, 0)
    return math.comb(n, k)


def coherent_degeneracy(g: int) -> int:
    """Number of nonempty subsets of ``g`` sublevels, ``sum_k C(g, k) = 2**g - 1``."""
    _check_count("g", g, 1)
    return (1 << g) - 1


def coherent_excess(g: int) -> int:
    """Extra states from multi-sublevel access, ``G - g``. Zero iff ``g == 1``."""
    return coherent_degeneracy(g) - g


def microstate_count(G: int, n: int) -> int:
    """Ways to place ``n`` identical particles in ``G`` states.

    Parameters
    ----------
    G : int
        Number of effective single-particle states (``>= 1``).
    n : int
        Number of particles.

    Returns
    -------
    int
        ``(G + n - 1)! / ((G - 1)! n!)``, exact.
    """
    _check_count("G", G, 1)
    _check_count("n", n, 0)
    return math.comb(G + n - 1, n)


def distinguishable_count(G: int, n: int) -> int:
    """Ways to assign ``n`` labelled particles to ``G`` states, ``G**n``.

    This is the ordinary Maxwell-Boltzmann extension of the bosonic count; it
    is provided for comparison and is not part of the coherent-access scheme.
    """
    _check_count("G", G, 1)
    _check_count("n", n, 0)
    return G**n


def coherent_subsets(g: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of sublevels ``1..g`` ordered by size, then lexicographically."""
    _check_count("g", g, 1)
    labels = range(1, g + 1)
    return [c for size in labels for c in itertools.combinations(labels, size)]


def enumerate_coherent_sequences(g: int, n: int) -> list[dict[tuple[int, ...], int]]:
    """Every distinct way to put ``n`` identical particles on coherent subsets.

    Each result maps a sublevel subset such as ``(1, 2)`` to the number of
    particles coherently occupying exactly that subset; unoccupied subsets
    are omitted. Keys follow :func:`coherent_subsets` order and the list
    itself is in lexicographic order of the underlying multisets, so the
    output is deterministic.

    Enumeration is refused when the closed-form count exceeds
    :data:`MAX_ENUMERATION` (about 2e5 maps; comfortably covers g <= 4, n <= 6).
    """
    _check_count("g", g, 1)
    _check_count("n", n, 0)
    expected = microstate_count(coherent_degeneracy(g), n)
    if expected > MAX_ENUMERATION:
        raise ValueError(
            f"enumeration for g={g}, n={n} would produce {expected} maps "
            f"(limit {MAX_ENUMERATION})"
        )
    subsets = coherent_subsets(g)
    maps = []
    for combo in itertools.combinations_with_replacement(range(len(subsets)), n):
        occupation: dict[tuple[int, ...], int] = {}
        for idx in combo:
            occupation[subsets[idx]] = occupation.get(subsets[idx], 0) + 1
        maps.append(occupation)
    return maps


def format_sequence(occupation: dict[tuple[int, ...], int], g: int) -> str:
    """Render an occupation map in bracket notation, e.g. ``(1)a(2)(12)a``.

    Every subset is written as its sublevel labels in parentheses followed by
    one ``a`` per particle occupying it. Labels are concatenated digits, so
    the notation is only unambiguous for ``g <= 9``.
    """
    return "".join(
        "(" + "".join(map(str, s)) + ")" + "a" * occupation.get(s, 0)
        for s in coherent_subsets(g)
    )


@dataclass(frozen=True)
class LevelSpec:
    """One energy level: ``g`` sublevels holding ``occupancy`` particles."""

    g: int
    occupancy: int = 0

    def __post_init__(self):
        _check_count("g", self.g, 1)
        _check_count("occupancy", self.occupancy, 0)

    @property
    def G(self) -> int:
        return coherent_degeneracy(self.g)

    @property
    def L(self) -> int:
        return coherent_excess(self.g)


@dataclass(frozen=True)
class MacrostateSpec:
    """An ordered, nonempty collection of occupied levels."""

    levels: tuple[LevelSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise ValueError("a macrostate needs at least one level")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "MacrostateSpec":
        """Build from ``(g, occupancy)`` pairs."""
        return cls(tuple(LevelSpec(g, n) for g, n in pairs))

    @property
    def total_particles(self) -> int:
        return sum(level.occupancy for level in self.levels)


def macrostate_weight(m: MacrostateSpec, coherent: bool = True) -> int:
    """Number of microstates compatible with the occupancies of ``m``.

    With ``coherent=False`` the sublevel count ``g`` is used in place of ``G``,
    giving the standard bosonic weight.
    """
    return math.prod(
        microstate_count(level.G if coherent else level.g, level.occupancy)
        for level in m.levels
    )


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of ``parts`` nonnegative ints summing to ``n``."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first, *rest)


def total_omega(levels: Sequence[int | LevelSpec], n_total: int, coherent: bool = True) -> int:
    """Total microstate count summed over every macrostate with ``n_total`` particles.

    ``levels`` gives the sublevel count of each level (ints, or LevelSpec whose
    occupancy is ignored). The sum is taken explicitly over compositions of
    ``n_total``; it agrees with ``microstate_count(sum(G_j), n_total)``.
    """
    if not levels:
        raise ValueError("levels must be nonempty")
    _check_count("n_total", n_total, 0)
    gs = [lv.g if isinstance(lv, LevelSpec) else lv for lv in levels]
    return sum(
        macrostate_weight(MacrostateSpec.from_pairs(zip(gs, occ)), coherent=coherent)
        for occ in compositions(n_total, len(gs))
    )
