import functools
import re
from pathlib import Path

import pytest

from ws_spectra.config import PRESETS
from ws_spectra.oracle import solve_spectrum

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def benchmark_cfg():
    return PRESETS["table1"]


@pytest.fixture(scope="session")
def fig3_cfg():
    return PRESETS["fig3"]


@functools.lru_cache(maxsize=None)
def benchmark_spectrum(variant: str):
    cfg = PRESETS["table1"]
    return tuple(solve_spectrum(cfg.params, cfg.mass, cfg.unit_system, 6, variant))


@pytest.fixture(scope="session")
def exact_spectrum():
    return benchmark_spectrum("exact")


@pytest.fixture(scope="session")
def pekeris_spectrum():
    return benchmark_spectrum("pekeris")


@functools.lru_cache(maxsize=None)
def published_rows() -> dict[str, tuple[float, float]]:
    """Reference table parsed straight from the source document."""
    text = (ROOT / "paper.md").read_text(encoding="utf-8")
    rows = re.findall(r"^(\d[spdfgh]) & (-?\d+\.\d+) & (-?\d+\.\d+) \\\\", text, re.M)
    return {lab: (float(a), float(b)) for lab, a, b in rows}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
