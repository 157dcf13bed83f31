"""Acceptance criteria c1..c11, one test each.

Every check runs in a freshly spawned interpreter so that caches warmed by
other tests do not flatter its runtime.  Each test prints a single
[PASS]/[FAIL] line; the lines are repeated in the terminal summary.

Run standalone with ``python3 tests/test_acceptance.py``.
"""

import multiprocessing as mp
import sys

import pytest

from wittkit import checks

SEED = 20240607
LINES = []


def _call(name, seed):
    return checks.BY_NAME[name](seed=seed)


def run_fresh(name, seed=SEED):
    ctx = mp.get_context("spawn")
    with ctx.Pool(1) as pool:
        return pool.apply(_call, (name, seed))


NAMES = list(checks.BY_NAME)


@pytest.mark.parametrize("name", NAMES, ids=[checks.BY_NAME[n].key for n in NAMES])
def test_criterion(name):
    r = run_fresh(name)
    line = r.line()
    LINES.append(line)
    print(line)
    assert r.ok, f"{r.key} failed: {r.details}"
    assert r.elapsed < r.limit, f"{r.key} took {r.elapsed:.1f}s, limit {r.limit}s"


if __name__ == "__main__":
    failed = 0
    for name in NAMES:
        r = run_fresh(name)
        print(r.line(), flush=True)
        failed += not r.passed
    sys.exit(1 if failed else 0)
