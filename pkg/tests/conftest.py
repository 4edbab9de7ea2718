from __future__ import annotations

import functools

import pytest

from modestab import data
from modestab.cli import run_region


@functools.lru_cache(maxsize=None)
def region_certificate(region: str):
    """Certificates are expensive (S4 takes about a minute); share them across tests."""
    return run_region(region, None)


@pytest.fixture(scope="session")
def bundle():
    return data.ingest()


@pytest.fixture(scope="session")
def certs():
    return region_certificate


CRITERIA: dict = {}


def record(k: int, ok: bool, detail: str) -> None:
    CRITERIA[k] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
