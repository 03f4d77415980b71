import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cy4fold import A1, A2  # noqa: E402
from cy4fold.search import enumerate_involutions  # noqa: E402


@pytest.fixture
def a1():
    return A1


@pytest.fixture
def a2():
    return A2


@pytest.fixture(scope="session")
def bound1_admissible():
    return list(enumerate_involutions(1))


@pytest.fixture(scope="session")
def bound1_involutions():
    """All bound-1 matrices with A^2 = I and det -1 (any trace)."""
    return list(enumerate_involutions(1, surface_only=False))


@pytest.fixture(scope="session")
def brute_bound1():
    from oracles import brute_force_involutions

    return brute_force_involutions(1)


def _cli_search(tmp_dir, workers):
    import json
    import subprocess
    import time

    out = tmp_dir / f"bound1_w{workers}.jsonl"
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "cy4fold", "search", "--bound", "1", "--out", str(out), "--workers", str(workers)],
        capture_output=True,
        text=True,
        check=False,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    return {"path": out, "summary": json.loads(proc.stdout), "elapsed": elapsed}


@pytest.fixture(scope="session")
def search_w8(tmp_path_factory):
    """Full bound-1 search through the CLI with 8 workers."""
    return _cli_search(tmp_path_factory.mktemp("search"), 8)


@pytest.fixture(scope="session")
def search_w1(tmp_path_factory):
    return _cli_search(tmp_path_factory.mktemp("search"), 1)


ACCEPTANCE_RESULTS: dict[int, tuple[str, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        verdict, title, elapsed = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {verdict:4}  {title}  ({elapsed:.2f} s)")
