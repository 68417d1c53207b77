"""Train/test splitting, prediction scoring and prefetch-cache simulation.

Accuracy counts hits over attempted (non-abstaining) predictions;
applicability counts attempts over opportunities. The two are always
reported together.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import asdict, dataclass
from typing import Sequence, TypeVar

from pagepredict._num import as_fraction
from pagepredict.markov import page_sequence
from pagepredict.model import PredictionModel, predict_next, predict_topk
from pagepredict.rng import SplitMix64
from pagepredict.sessions import Session

T = TypeVar("T")


@dataclass(frozen=True)
class EvalReport:
    opportunities: int = 0
    attempted: int = 0
    hits: int = 0
    cache_size: int = 1
    cache_hits: int = 0
    cache_accesses: int = 0
    pages_before: int = 0
    pages_after: int = 0
    pairs_before: int = 0
    pairs_after: int = 0
    rules: int = 0

    @property
    def accuracy(self) -> float:
        return self.hits / self.attempted if self.attempted else 0.0

    @property
    def applicability(self) -> float:
        return self.attempted / self.opportunities if self.opportunities else 0.0

    @property
    def cache_hit_rate(self) -> float:
        return self.cache_hits / self.cache_accesses if self.cache_accesses else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            accuracy=self.accuracy,
            applicability=self.applicability,
            cache_hit_rate=self.cache_hit_rate,
        )
        return d

    def format_text(self) -> str:
        return "\n".join(
            [
                f"opportunities   {self.opportunities}",
                f"attempted       {self.attempted}",
                f"hits            {self.hits}",
                f"accuracy        {self.accuracy:.6f}",
                f"applicability   {self.applicability:.6f}",
                f"cache_size      {self.cache_size}",
                f"cache_hits      {self.cache_hits}",
                f"cache_accesses  {self.cache_accesses}",
                f"cache_hit_rate  {self.cache_hit_rate:.6f}",
                f"pages           {self.pages_before} -> {self.pages_after}",
                f"pairs           {self.pairs_before} -> {self.pairs_after}",
                f"rules           {self.rules}",
            ]
        )


def split_sessions(
    sessions: Sequence[T], train_fraction: float = 0.8, seed: int = 0
) -> tuple[list[T], list[T]]:
    """Seeded shuffle, then the first ``ceil(fraction * n)`` sessions train.

    The test side is never empty: if the ceiling would take everything, the
    last shuffled session goes to test.
    """
    if not sessions:
        raise ValueError("nothing to split")
    frac = as_fraction(train_fraction)
    if not 0 < frac <= 1:
        raise ValueError("train_fraction must lie in (0, 1]")
    order = list(range(len(sessions)))
    SplitMix64(seed).shuffle(order)
    n_train = min(math.ceil(frac * len(sessions)), len(sessions) - 1)
    return [sessions[i] for i in order[:n_train]], [sessions[i] for i in order[n_train:]]


def simulate_prefetch_cache(
    model: PredictionModel, sessions: Sequence[Session | Sequence[int]], k: int = 1
) -> tuple[int, int, float]:
    """Replay sessions against a prefetch-only cache of ``k`` pages.

    After each visit the top-``k`` predictions are inserted (oldest entries
    evicted first); the next visit hits iff its page is cached. A visit with
    no prediction at all empties the cache. Nothing is cached on demand and
    each session starts cold.
    """
    if k < 1:
        raise ValueError("cache size must be >= 1")
    hits = accesses = 0
    for s in sessions:
        pages = page_sequence(s)
        cache: OrderedDict[int, None] = OrderedDict()
        for cur, nxt in zip(pages, pages[1:]):
            predicted = predict_topk(model, cur, k)
            if not predicted:
                cache.clear()
            for p in predicted:
                cache[p] = None
                cache.move_to_end(p)
            while len(cache) > k:
                cache.popitem(last=False)
            accesses += 1
            hits += nxt in cache
    return hits, accesses, hits / accesses if accesses else 0.0


def evaluate(
    model: PredictionModel, sessions: Sequence[Session | Sequence[int]], cache_size: int = 1
) -> EvalReport:
    opportunities = attempted = hits = 0
    for s in sessions:
        pages = page_sequence(s)
        for cur, nxt in zip(pages, pages[1:]):
            opportunities += 1
            guess = predict_next(model, cur)
            if guess is not None:
                attempted += 1
                hits += guess == nxt
    cache_hits, cache_accesses, _ = simulate_prefetch_cache(model, sessions, cache_size)
    return EvalReport(
        opportunities=opportunities,
        attempted=attempted,
        hits=hits,
        cache_size=cache_size,
        cache_hits=cache_hits,
        cache_accesses=cache_accesses,
        pages_before=len(model.level1.pages),
        pages_after=len(model.level1_survivors),
        pairs_before=len(model.pairs),
        pairs_after=len(model.level2_survivors),
        rules=len(model.rules),
    )
