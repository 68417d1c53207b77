"""Leader clustering of sessions by page-set overlap, and working-cluster selection."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from pagepredict._num import in_unit_interval
from pagepredict.sessions import Session

DEFAULT_THRESHOLD = 0.3


@dataclass
class SessionCluster:
    cluster_id: int
    members: list[int]
    page_weights: dict[int, Fraction] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)


def session_similarity(a: Session, b: Session) -> Fraction:
    """Jaccard similarity of the two sessions' distinct page sets."""
    pa, pb = set(a.pages), set(b.pages)
    return Fraction(len(pa & pb), len(pa | pb))


def _page_weights(sessions: Sequence[Session], members: list[int]) -> dict[int, Fraction]:
    counts: Counter[int] = Counter()
    for i in members:
        counts.update(set(sessions[i].pages))
    n = len(members)
    return {page: Fraction(c, n) for page, c in sorted(counts.items())}


def cluster_sessions(sessions: Sequence[Session], threshold: float | Fraction = DEFAULT_THRESHOLD) -> list[SessionCluster]:
    """Single-pass leader clustering.

    Sessions are scanned in order; each joins the first cluster whose leader
    (first member) has similarity >= ``threshold``, otherwise it founds a new
    cluster.
    """
    threshold = in_unit_interval(threshold)
    members: list[list[int]] = []
    leaders: list[frozenset[int]] = []
    for i, s in enumerate(sessions):
        pages = frozenset(s.pages)
        for c, leader in enumerate(leaders):
            if Fraction(len(leader & pages), len(leader | pages)) >= threshold:
                members[c].append(i)
                break
        else:
            leaders.append(pages)
            members.append([i])
    return [
        SessionCluster(cid, m, _page_weights(sessions, m)) for cid, m in enumerate(members)
    ]


def single_cluster(sessions: Sequence[Session]) -> list[SessionCluster]:
    """All sessions in one cluster (clustering disabled)."""
    if not sessions:
        return []
    m = list(range(len(sessions)))
    return [SessionCluster(0, m, _page_weights(sessions, m))]


def select_cluster(clusters: Sequence[SessionCluster], context: Iterable[int] = ()) -> SessionCluster:
    """Pick the cluster whose page weights best cover ``context``.

    Score is the sum of the cluster's weights over the context pages; ties go
    to the lower cluster id. Without context the largest cluster wins.
    """
    if not clusters:
        raise ValueError("no clusters to select from")
    context = set(context)
    if not context:
        return min(clusters, key=lambda c: (-len(c.members), c.cluster_id))
    return min(
        clusters,
        key=lambda c: (-sum(c.page_weights.get(p, 0) for p in context), c.cluster_id),
    )
