from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from pagepredict.ingest import PageCatalog
from pagepredict.pipeline import TrainConfig, train_model
from pagepredict.sessions import Session

A, B, C = 0, 1, 2
D0_PAGES = [(A, B, C), (A, B), (A, C)]
T0 = datetime(2014, 1, 5, 10, 0, tzinfo=timezone.utc)


def make_sessions(page_lists, user_prefix="10.0.0."):
    out = []
    for i, pages in enumerate(page_lists):
        start = T0 + timedelta(hours=i)
        out.append(Session(f"{user_prefix}{i + 1}", tuple(pages), start, start + timedelta(minutes=len(pages) - 1)))
    return out


def d0_csv_text() -> str:
    rows = []
    for i, pages in enumerate(D0_PAGES):
        for step, page in enumerate(pages):
            ts = T0 + timedelta(minutes=step)
            rows.append(f"10.0.0.{i + 1},10.0.0.254,/{'abc'[page]},example.com,93.1.2.3,"
                        f"{ts:%Y-%m-%d},{ts:%H:%M:%S}")
    return "\n".join(rows) + "\n"


@pytest.fixture
def d0_sessions():
    return make_sessions(D0_PAGES)


@pytest.fixture
def d0_catalog():
    return PageCatalog(["/a", "/b", "/c"])


@pytest.fixture
def d0_model(d0_sessions, d0_catalog):
    return train_model(d0_sessions, d0_catalog, TrainConfig(alpha1=0.4, alpha2=0.4))


@pytest.fixture
def d0_csv(tmp_path):
    path = tmp_path / "d0.csv"
    path.write_text(d0_csv_text())
    return path


# -- acceptance summary: one PASS/FAIL line per criterion --------------------

_acceptance: list[tuple[str, str, list]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance.append((name, report.outcome.upper(), report.user_properties))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, outcome, props in _acceptance:
        tr.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")
        for key, value in props:
            tr.write_line(f"      {key}: {value}")
