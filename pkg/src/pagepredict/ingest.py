"""Log parsing, URL normalization and record-level filtering.

Two input formats are accepted:

* NCSA Common Log Format (CLF), optionally with the combined-format
  referrer/agent tail, which is ignored.
* A seven-column CSV: ``user_ip, server_ip, url, domain, target_ip, date,
  time`` with ``date`` as ``YYYY-MM-DD`` and ``time`` as ``HH:MM:SS`` (UTC).
"""

from __future__ import annotations

import csv
import io
import posixpath
import re
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "ASSET_EXTENSIONS",
    "CSV_COLUMNS",
    "LogRecord",
    "PageCatalog",
    "ParseError",
    "filter_records",
    "format_csv_record",
    "intern_pages",
    "normalize_records",
    "normalize_url",
    "parse_clf_line",
    "parse_csv_record",
    "read_log",
]

ASSET_EXTENSIONS = frozenset(
    {".png", ".jpg", ".jpeg", ".gif", ".ico", ".css", ".js", ".svg", ".woff", ".map"}
)

CSV_COLUMNS = ("user_ip", "server_ip", "url", "domain", "target_ip", "date", "time")

_MONTHS = {
    name: i
    for i, name in enumerate(
        ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"], 1
    )
}

_CLF_RE = re.compile(
    r'^(?P<host>\S+) (?P<ident>\S+) (?P<user>\S+) \[(?P<ts>[^\]]+)\] '
    r'"(?P<request>(?:[^"\\]|\\.)*)" (?P<status>\d{3}|-) (?P<bytes>\d+|-)(?:\s.*)?$'
)
_CLF_TS_RE = re.compile(
    r"^(\d{2})/([A-Za-z]{3})/(\d{4}):(\d{2}):(\d{2}):(\d{2}) ([+-])(\d{2})(\d{2})$"
)
_SCHEME_RE = re.compile(r"^[a-zA-Z][a-zA-Z0-9+.-]*://")


class ParseError(ValueError):
    """A log line or CSV row could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.message = message
        self.lineno = lineno
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.source is not None and self.lineno is not None:
            where = f"{self.source}:{self.lineno}: "
        elif self.lineno is not None:
            where = f"line {self.lineno}: "
        elif self.source is not None:
            where = f"{self.source}: "
        return where + self.message


@dataclass(frozen=True)
class LogRecord:
    """One web access event.

    ``status``, ``bytes`` and ``method`` only come from CLF input and are used
    for filtering; CSV input leaves them as ``None``.
    """

    user_ip: str
    url: str
    timestamp: datetime
    server_ip: str | None = None
    domain: str | None = None
    target_ip: str | None = None
    status: int | None = None
    bytes: int | None = None
    method: str | None = None

    def __post_init__(self):
        if not self.user_ip:
            raise ValueError("user_ip must be non-empty")
        if not self.url:
            raise ValueError("url must be non-empty")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        if self.timestamp.utcoffset() != timedelta(0):
            object.__setattr__(self, "timestamp", self.timestamp.astimezone(timezone.utc))
        if self.status is not None and not 100 <= self.status <= 599:
            raise ValueError(f"status {self.status} outside [100, 599]")
        if self.bytes is not None and self.bytes < 0:
            raise ValueError("bytes must be non-negative")


def _opt(value: str) -> str | None:
    value = value.strip()
    return None if value in ("", "-") else value


def _parse_clf_timestamp(text: str) -> datetime:
    m = _CLF_TS_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad timestamp {text!r}")
    day, mon, year, hh, mm, ss, sign, oh, om = m.groups()
    month = _MONTHS.get(mon.lower())
    if month is None:
        raise ValueError(f"bad month {mon!r}")
    offset = timedelta(hours=int(oh), minutes=int(om))
    if sign == "-":
        offset = -offset
    local = datetime(int(year), month, int(day), int(hh), int(mm), int(ss), tzinfo=timezone(offset))
    return local.astimezone(timezone.utc)


def parse_clf_line(line: str, lineno: int | None = None) -> LogRecord:
    """Parse one Common Log Format line.

    The URL is returned raw (not normalized). Fields written as ``-`` become
    ``None``.
    """
    m = _CLF_RE.match(line.strip())
    if not m:
        raise ParseError("malformed CLF line", lineno)
    try:
        ts = _parse_clf_timestamp(m["ts"])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None

    parts = m["request"].split()
    if len(parts) not in (2, 3):
        raise ParseError(f"malformed request {m['request']!r}", lineno)
    method, url = parts[0], parts[1]

    status = None if m["status"] == "-" else int(m["status"])
    size = None if m["bytes"] == "-" else int(m["bytes"])
    try:
        return LogRecord(
            user_ip=m["host"], url=url, timestamp=ts, status=status, bytes=size, method=method.upper()
        )
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_csv_record(row: Sequence[str], lineno: int | None = None) -> LogRecord:
    """Build a record from the seven CSV columns (see :data:`CSV_COLUMNS`)."""
    if len(row) != len(CSV_COLUMNS):
        raise ParseError(f"expected {len(CSV_COLUMNS)} fields, got {len(row)}", lineno)
    user_ip, server_ip, url, domain, target_ip, date, time = (f.strip() for f in row)
    try:
        ts = datetime.strptime(f"{date} {time}", "%Y-%m-%d %H:%M:%S").replace(tzinfo=timezone.utc)
    except ValueError:
        raise ParseError(f"bad date/time {date!r} {time!r}", lineno) from None
    try:
        return LogRecord(
            user_ip=user_ip,
            url=url,
            timestamp=ts,
            server_ip=_opt(server_ip),
            domain=_opt(domain),
            target_ip=_opt(target_ip),
        )
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def format_csv_record(record: LogRecord) -> list[str]:
    """Inverse of :func:`parse_csv_record` (status, bytes and method are dropped)."""
    ts = record.timestamp.astimezone(timezone.utc)
    return [
        record.user_ip,
        record.server_ip or "",
        record.url,
        record.domain or "",
        record.target_ip or "",
        ts.strftime("%Y-%m-%d"),
        ts.strftime("%H:%M:%S"),
    ]


def _remove_dot_segments(path: str) -> str:
    segments = path.split("/")[1:]
    out: list[str] = []
    for seg in segments:
        if seg == "..":
            if out:
                out.pop()
        elif seg not in (".", ""):
            out.append(seg)
    if not out:
        return "/"
    trailing = segments[-1] in ("", ".", "..")
    return "/" + "/".join(out) + ("/" if trailing else "")


def normalize_url(raw: str) -> str:
    """Canonical page path: lowercased, no query or fragment, dot segments resolved.

    Absolute URLs (``http://host/path``) are reduced to their path. Empty and
    duplicate slashes are collapsed, a trailing slash is kept.

    >>> normalize_url("/Index.HTML?q=1#top")
    '/index.html'
    >>> normalize_url("/a/../b.html")
    '/b.html'
    """
    url = raw.strip()
    m = _SCHEME_RE.match(url)
    if m:
        rest = url[m.end():]
        slash = rest.find("/")
        url = rest[slash:] if slash >= 0 else "/"
    for sep in ("#", "?"):
        url = url.split(sep, 1)[0]
    url = url.lower()
    if not url.startswith("/"):
        url = "/" + url
    return _remove_dot_segments(url)


def normalize_records(records: Iterable[LogRecord]) -> list[LogRecord]:
    return [replace(r, url=normalize_url(r.url)) for r in records]


def _is_asset(url: str) -> bool:
    path = normalize_url(url)
    name = path.rsplit("/", 1)[-1]
    return posixpath.splitext(name)[1] in ASSET_EXTENSIONS


def filter_records(records: Iterable[LogRecord]) -> list[LogRecord]:
    """Drop static assets, non-2xx/3xx responses and non-GET requests.

    Survivor order is preserved. Records without a status or method (CSV
    input) are only subject to the asset check.
    """
    kept = []
    for r in records:
        if r.status is not None and not 200 <= r.status < 400:
            continue
        if r.method is not None and r.method != "GET":
            continue
        if _is_asset(r.url):
            continue
        kept.append(r)
    return kept


class PageCatalog:
    """Bijection between normalized URLs and dense integer page ids.

    Ids are handed out in first-seen order, so iteration order is
    deterministic for a given input order.
    """

    def __init__(self, urls: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._urls: list[str] = []
        for url in urls:
            if url in self._ids:
                raise ValueError(f"duplicate url in catalog: {url!r}")
            self.add(url)

    def add(self, url: str) -> int:
        page = self._ids.get(url)
        if page is None:
            page = len(self._urls)
            self._ids[url] = page
            self._urls.append(url)
        return page

    def id_of(self, url: str) -> int | None:
        return self._ids.get(url)

    def url_of(self, page: int) -> str:
        return self._urls[page]

    @property
    def urls(self) -> list[str]:
        return list(self._urls)

    def __len__(self) -> int:
        return len(self._urls)

    def __iter__(self) -> Iterator[str]:
        return iter(self._urls)

    def __contains__(self, url: object) -> bool:
        return url in self._ids

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PageCatalog):
            return NotImplemented
        return self._urls == other._urls

    def __repr__(self) -> str:
        return f"PageCatalog({self._urls!r})"


def intern_pages(records: Iterable[LogRecord]) -> tuple[PageCatalog, list[int]]:
    """Assign page ids to record URLs in first-seen order."""
    catalog = PageCatalog()
    ids = [catalog.add(r.url) for r in records]
    return catalog, ids


def _iter_csv(text: str, source: str, header: bool) -> Iterator[LogRecord]:
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        lineno = reader.line_num
        if header and lineno == 1:
            continue
        if not row or all(not f.strip() for f in row):
            continue
        try:
            yield parse_csv_record(row, lineno)
        except ParseError as exc:
            exc.source = source
            raise


def _iter_clf(text: str, source: str) -> Iterator[LogRecord]:
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            yield parse_clf_line(line, lineno)
        except ParseError as exc:
            exc.source = source
            raise


def read_log(path: str | Path, fmt: str = "clf", header: bool = False) -> list[LogRecord]:
    """Read every record from a CLF or CSV file, in file order.

    Raises :class:`ParseError` with ``path:line`` context on the first bad line.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8", errors="replace")
    if fmt == "clf":
        return list(_iter_clf(text, str(path)))
    if fmt == "csv":
        return list(_iter_csv(text, str(path), header))
    raise ValueError(f"unknown log format {fmt!r}")
