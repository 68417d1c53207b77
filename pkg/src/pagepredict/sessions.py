"""Timeout-based sessionization of per-user click streams."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Sequence

from pagepredict.ingest import LogRecord

DEFAULT_TIMEOUT = timedelta(minutes=30)
DEFAULT_MAX_LEN = 100
# Single-page sessions are kept: they still count towards level-1 evidence.
KEEP_SINGLE_PAGE_SESSIONS = True


@dataclass(frozen=True)
class Session:
    user_ip: str
    pages: tuple[int, ...]
    start: datetime
    end: datetime

    def __post_init__(self):
        if not self.pages:
            raise ValueError("session must contain at least one page")
        if self.start > self.end:
            raise ValueError("session start after end")

    def __len__(self) -> int:
        return len(self.pages)


def build_sessions(
    records: Sequence[LogRecord],
    ids: Sequence[int],
    timeout: timedelta = DEFAULT_TIMEOUT,
    max_len: int = DEFAULT_MAX_LEN,
) -> list[Session]:
    """Split each user's visits into sessions.

    A new session starts when the gap to the previous visit exceeds
    ``timeout`` or when appending a page would make the session longer than
    ``max_len``. Consecutive repeats of the same page (reloads) collapse into
    one visit but still extend the session's activity window. Output is
    ordered by ``(user_ip, start)``.
    """
    if len(records) != len(ids):
        raise ValueError("records and ids must be parallel sequences")
    if timeout <= timedelta(0):
        raise ValueError("timeout must be positive")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")

    by_user: dict[str, list[tuple[datetime, int]]] = defaultdict(list)
    for rec, page in zip(records, ids):
        by_user[rec.user_ip].append((rec.timestamp, page))

    sessions = []
    for user in sorted(by_user):
        visits = sorted(by_user[user], key=lambda v: v[0])  # stable on ties
        pages: list[int] = []
        start = last = visits[0][0]
        for ts, page in visits:
            if pages and ts - last > timeout:
                sessions.append(Session(user, tuple(pages), start, last))
                pages, start = [], ts
            if pages and pages[-1] == page:
                last = ts
                continue
            if len(pages) == max_len:
                sessions.append(Session(user, tuple(pages), start, last))
                pages, start = [], ts
            pages.append(page)
            last = ts
        sessions.append(Session(user, tuple(pages), start, last))

    if not KEEP_SINGLE_PAGE_SESSIONS:
        sessions = [s for s in sessions if len(s) > 1]
    return sessions
