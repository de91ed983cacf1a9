from __future__ import annotations

import pytest

from realdcp import flats

_POSETS: dict[str, flats.EvenPoset] = {}


def poset(spec: str) -> flats.EvenPoset:
    """Enumerate once per session; later requests reuse the result."""
    if spec not in _POSETS:
        _POSETS[spec] = flats.even_poset_for(spec)
    return _POSETS[spec]


@pytest.fixture(scope="session")
def get_poset():
    return poset


# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {note}")
