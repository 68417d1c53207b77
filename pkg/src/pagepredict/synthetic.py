"""Synthetic click streams drawn from a planted first-order Markov chain.

Each page has one dominant successor, fixed by a random single cycle over
all pages (Sattolo's algorithm), taken with probability ``dominant_prob``;
otherwise the next page is uniform over the remaining ``n_pages - 1`` pages,
the current page included. ``dominant_prob > 1 / n_pages`` therefore makes
the dominant successor the strict argmax, and an order-1 predictor that
always guesses it is right with probability ``dominant_prob``.

Draw order from a single :class:`SplitMix64` stream: the cycle first, then
per session its start page (Zipf over page index), its length
(``2 + Geometric``, mean ``session_len_mean``) and its transitions.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from itertools import accumulate
from pathlib import Path
from typing import Sequence

from pagepredict.ingest import PageCatalog
from pagepredict.rng import SplitMix64
from pagepredict.sessions import Session

_BASE_TIME = datetime(2014, 1, 1, tzinfo=timezone.utc)
_VISIT_GAP = timedelta(minutes=1)


@dataclass(frozen=True)
class SyntheticSpec:
    n_pages: int = 20
    dominant_prob: float = 0.6
    n_sessions: int = 1000
    session_len_mean: float = 8.0
    zipf_exponent: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_pages < 2:
            raise ValueError("n_pages must be >= 2")
        if not 1 / self.n_pages < self.dominant_prob <= 1:
            raise ValueError("dominant_prob must lie in (1/n_pages, 1]")
        if self.n_sessions < 0:
            raise ValueError("n_sessions must be non-negative")
        if self.session_len_mean < 2:
            raise ValueError("session_len_mean must be >= 2")
        if self.zipf_exponent < 0:
            raise ValueError("zipf_exponent must be non-negative")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _planted_cycle(rng: SplitMix64, n: int) -> list[int]:
    succ = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i)
        succ[i], succ[j] = succ[j], succ[i]
    return succ


def planted_successors(spec: SyntheticSpec) -> list[int]:
    """Dominant successor of every page for this spec."""
    return _planted_cycle(SplitMix64(spec.seed), spec.n_pages)


def synthetic_catalog(n_pages: int) -> PageCatalog:
    return PageCatalog(f"/p{i}.html" for i in range(n_pages))


def _user_ip(i: int) -> str:
    return f"10.{(i >> 16) & 255}.{(i >> 8) & 255}.{i & 255}"


def generate_synthetic_log(spec: SyntheticSpec) -> list[Session]:
    rng = SplitMix64(spec.seed)
    n = spec.n_pages
    succ = _planted_cycle(rng, n)
    cum = list(accumulate((i + 1) ** -spec.zipf_exponent for i in range(n)))
    stop = 1 / (spec.session_len_mean - 1)

    sessions = []
    for i in range(spec.n_sessions):
        page = min(bisect.bisect_right(cum, rng.random() * cum[-1]), n - 1)
        length = 2
        while rng.random() >= stop:
            length += 1
        pages = [page]
        for _ in range(length - 1):
            dom = succ[page]
            if rng.random() < spec.dominant_prob:
                page = dom
            else:
                other = rng.below(n - 1)
                page = other if other < dom else other + 1
            pages.append(page)
        start = _BASE_TIME + i * timedelta(hours=1)
        sessions.append(Session(_user_ip(i), tuple(pages), start, start + (length - 1) * _VISIT_GAP))
    return sessions


def dominant_transition_rate(spec: SyntheticSpec, sessions: Sequence[Session]) -> float:
    succ = planted_successors(spec)
    total = dominant = 0
    for s in sessions:
        for a, b in zip(s.pages, s.pages[1:]):
            total += 1
            dominant += succ[a] == b
    return dominant / total if total else 0.0


def write_sessions_csv(sessions: Sequence[Session], catalog: PageCatalog, path: str | Path) -> None:
    """Write sessions as seven-column CSV log rows, one minute between visits.

    Re-reading the file collapses consecutive repeats (self transitions), as
    the sessionizer does for any log.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for s in sessions:
            for step, page in enumerate(s.pages):
                ts = s.start + step * _VISIT_GAP
                w.writerow(
                    [s.user_ip, "", catalog.url_of(page), "", "", ts.strftime("%Y-%m-%d"), ts.strftime("%H:%M:%S")]
                )
