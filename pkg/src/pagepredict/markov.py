"""Single-page (level 1) and adjacent page-pair (level 2) frequency counts.

All counts are exact integers; probabilities are derived on demand.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection, Iterable, NamedTuple, Sequence

from pagepredict.sessions import Session


class UndefinedStateError(ValueError):
    """Transition probability requested from a page with no observed successor."""


class PageCounts(NamedTuple):
    occ: int = 0
    occ_followed: int = 0
    occ_terminal: int = 0
    sess_nonterminal: int = 0
    sess_terminal_only: int = 0


_EMPTY = PageCounts()


@dataclass
class Level1Stats:
    n_sessions: int
    n_transitions: int
    pages: dict[int, PageCounts] = field(default_factory=dict)

    def get(self, page: int) -> PageCounts:
        return self.pages.get(page, _EMPTY)

    def occ(self, page: int) -> int:
        return self.get(page).occ

    def occ_followed(self, page: int) -> int:
        return self.get(page).occ_followed

    def occ_terminal(self, page: int) -> int:
        return self.get(page).occ_terminal


@dataclass
class PairStats:
    counts: dict[tuple[int, int], int] = field(default_factory=dict)

    def count(self, a: int, b: int) -> int:
        return self.counts.get((a, b), 0)

    def successors(self, a: int) -> dict[int, int]:
        return {b: c for (x, b), c in self.counts.items() if x == a}

    def restrict(self, keep: Collection[tuple[int, int]]) -> PairStats:
        return PairStats({k: c for k, c in self.counts.items() if k in keep})

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(sorted(self.counts))


def page_sequence(s: Session | Sequence[int]) -> Sequence[int]:
    return s.pages if isinstance(s, Session) else s


def count_level1(sessions: Iterable[Session | Sequence[int]]) -> Level1Stats:
    occ: Counter[int] = Counter()
    terminal: Counter[int] = Counter()
    sess_nonterminal: Counter[int] = Counter()
    sess_terminal_only: Counter[int] = Counter()
    n_sessions = n_transitions = 0

    for s in sessions:
        pages = page_sequence(s)
        if not pages:
            raise ValueError("empty session")
        n_sessions += 1
        n_transitions += len(pages) - 1
        occ.update(pages)
        last = pages[-1]
        terminal[last] += 1
        inner = set(pages[:-1])
        sess_nonterminal.update(inner)
        if last not in inner:
            sess_terminal_only[last] += 1

    stats = {
        p: PageCounts(
            occ=occ[p],
            occ_followed=occ[p] - terminal[p],
            occ_terminal=terminal[p],
            sess_nonterminal=sess_nonterminal[p],
            sess_terminal_only=sess_terminal_only[p],
        )
        for p in sorted(occ)
    }
    return Level1Stats(n_sessions, n_transitions, stats)


def count_level2(
    sessions: Iterable[Session | Sequence[int]], survivors: Collection[int] | None = None
) -> PairStats:
    """Count adjacent pairs whose both ends are level-1 survivors.

    A pruned page breaks the chain: ``[A, X, B]`` with ``X`` pruned yields no
    pair at all, never a bridged ``(A, B)``. ``survivors=None`` keeps every page.
    """
    counts: defaultdict[tuple[int, int], int] = defaultdict(int)
    for s in sessions:
        pages = page_sequence(s)
        for a, b in zip(pages, pages[1:]):
            if survivors is None or (a in survivors and b in survivors):
                counts[a, b] += 1
    return PairStats(dict(sorted(counts.items())))


def transition_prob(pairs: PairStats, level1: Level1Stats, a: int, b: int) -> Fraction:
    followed = level1.occ_followed(a)
    if followed == 0:
        raise UndefinedStateError(f"page {a} has no observed successor")
    return Fraction(pairs.count(a, b), followed)
