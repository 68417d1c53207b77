"""End-to-end composition: logs -> sessions -> working cluster -> pruned model."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Sequence

from pagepredict._num import as_fraction, in_unit_interval
from pagepredict.cluster import DEFAULT_THRESHOLD, cluster_sessions, select_cluster, single_cluster
from pagepredict.ingest import (
    PageCatalog,
    filter_records,
    intern_pages,
    normalize_records,
    normalize_url,
    read_log,
)
from pagepredict.markov import count_level1, count_level2
from pagepredict.model import PredictionModel, mine_rules
from pagepredict.sessions import DEFAULT_MAX_LEN, Session, build_sessions
from pagepredict.vague import DEFAULT_ALPHA1, DEFAULT_ALPHA2, level1_values, level2_values, prune

log = logging.getLogger(__name__)

_T0 = datetime(1970, 1, 1, tzinfo=timezone.utc)


class NoDataError(RuntimeError):
    """Nothing left to analyse after filtration."""


@dataclass(frozen=True)
class TrainConfig:
    session_timeout: float = 30.0  # minutes
    max_session_len: int = DEFAULT_MAX_LEN
    cluster_threshold: float = DEFAULT_THRESHOLD
    no_cluster: bool = False
    alpha1: float = DEFAULT_ALPHA1
    alpha2: float = DEFAULT_ALPHA2
    min_support: float = 0.0
    min_confidence: float = 0.0
    fallback_popular: bool = False
    context: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.session_timeout <= 0:
            raise ValueError("session_timeout must be positive")
        if self.max_session_len < 1:
            raise ValueError("max_session_len must be >= 1")
        for name in ("cluster_threshold", "alpha1", "alpha2", "min_support", "min_confidence"):
            in_unit_interval(getattr(self, name))
        object.__setattr__(self, "context", tuple(self.context))

    @property
    def timeout(self) -> timedelta:
        return timedelta(minutes=self.session_timeout)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["context"] = list(self.context)
        return d


def load_sessions(
    paths: Iterable[str | Path],
    fmt: str = "clf",
    header: bool = False,
    config: TrainConfig | None = None,
    catalog: PageCatalog | None = None,
) -> tuple[PageCatalog, list[Session]]:
    """Parse, normalize, filter, intern and sessionize one or more log files.

    Passing an existing ``catalog`` extends it, so test logs share the
    training id space.
    """
    config = config or TrainConfig()
    records = []
    for path in paths:
        records.extend(read_log(path, fmt, header))
    n_raw = len(records)
    records = filter_records(normalize_records(records))
    log.info("filtration kept %d of %d records", len(records), n_raw)
    if catalog is None:
        catalog, ids = intern_pages(records)
    else:
        ids = [catalog.add(r.url) for r in records]
    sessions = build_sessions(records, ids, config.timeout, config.max_session_len)
    return catalog, sessions


def train_model(
    sessions: Sequence[Session | Sequence[int]],
    catalog: PageCatalog,
    config: TrainConfig | None = None,
) -> PredictionModel:
    config = config or TrainConfig()
    sessions = [s if isinstance(s, Session) else _anon_session(s) for s in sessions]
    if not sessions:
        raise NoDataError("no data: no sessions left after filtration")

    if config.no_cluster:
        clusters = single_cluster(sessions)
    else:
        clusters = cluster_sessions(sessions, config.cluster_threshold)
    context = {catalog.id_of(normalize_url(u)) for u in config.context} - {None}
    chosen = select_cluster(clusters, context)
    work = [sessions[i] for i in chosen.members]
    log.info("%d clusters; working cluster %d holds %d sessions", len(clusters), chosen.cluster_id, len(work))

    level1 = count_level1(work)
    survivors1 = prune(level1_values(level1), as_fraction(config.alpha1))
    pairs = count_level2(work, survivors1)
    survivors2 = prune(level2_values(level1, pairs), as_fraction(config.alpha2))
    rules = mine_rules(pairs.restrict(survivors2), level1, config.min_support, config.min_confidence)
    return PredictionModel(catalog, level1, pairs, survivors1, survivors2, tuple(rules), config.to_dict())


def model_summary(model: PredictionModel) -> dict[str, int]:
    return {
        "sessions": model.level1.n_sessions,
        "transitions": model.level1.n_transitions,
        "pages_before": len(model.level1.pages),
        "pages_after": len(model.level1_survivors),
        "pairs_before": len(model.pairs),
        "pairs_after": len(model.level2_survivors),
        "rules": len(model.rules),
    }


def _anon_session(pages: Sequence[int]) -> Session:
    return Session("-", tuple(pages), _T0, _T0)
