"""Vague-set memberships built from frequency counts, and threshold pruning.

A vague value carries a true-membership ``t`` and a false-membership ``f``
with ``t + f <= 1``; the remainder ``h = 1 - t - f`` is hesitation. Pages
and pairs are scored by the midpoint of the interval ``[t, 1 - f]``.

Level 1 partitions the cluster's sessions per page: sessions where the page
leads somewhere (``t``), sessions where it only appears last (``h``) and
sessions without it (``f``). Level 2 partitions the occurrences of the
antecedent page: followed by the consequent (``t``), followed by something
else (``f``), or session-final (``h``).

Memberships are exact fractions, so ``t + f + h == 1`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, TypeVar

from pagepredict._num import in_unit_interval
from pagepredict.markov import Level1Stats, PairStats

K = TypeVar("K", bound=Hashable)

DEFAULT_ALPHA1 = 0.2
DEFAULT_ALPHA2 = 0.2


@dataclass(frozen=True)
class VagueValue:
    t: Fraction
    f: Fraction

    def __post_init__(self):
        if self.t < 0 or self.f < 0 or self.t + self.f > 1:
            raise ValueError(f"invalid vague value t={self.t}, f={self.f}")

    @property
    def h(self) -> Fraction:
        return 1 - self.t - self.f

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.t, 1 - self.f


def vague_level1(level1: Level1Stats, page: int) -> VagueValue:
    n = level1.n_sessions
    if n <= 0:
        raise ValueError("level-1 stats cover no sessions")
    c = level1.get(page)
    return VagueValue(
        t=Fraction(c.sess_nonterminal, n),
        f=Fraction(n - c.sess_nonterminal - c.sess_terminal_only, n),
    )


def vague_level2(level1: Level1Stats, pairs: PairStats, a: int, b: int) -> VagueValue:
    c = level1.get(a)
    if c.occ <= 0:
        raise ValueError(f"page {a} never occurs")
    n_ab = pairs.count(a, b)
    return VagueValue(t=Fraction(n_ab, c.occ), f=Fraction(c.occ_followed - n_ab, c.occ))


def vague_score(v: VagueValue):
    """Midpoint of the vague interval, ``(t + 1 - f) / 2``."""
    return (v.t + 1 - v.f) / 2


def prune(items: Mapping[K, VagueValue], alpha: float | Fraction) -> set[K]:
    """Keys whose score is at least ``alpha``; anything strictly below is pruned."""
    alpha = in_unit_interval(alpha)
    return {k for k, v in items.items() if vague_score(v) >= alpha}


def level1_values(level1: Level1Stats) -> dict[int, VagueValue]:
    return {p: vague_level1(level1, p) for p in level1.pages}


def level2_values(level1: Level1Stats, pairs: PairStats) -> dict[tuple[int, int], VagueValue]:
    return {(a, b): vague_level2(level1, pairs, a, b) for a, b in pairs}
