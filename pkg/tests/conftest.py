import itertools

import numpy as np
import pytest

from hsbm.core import Hypergraph, PartitionVector

ACCEPTANCE = []


@pytest.fixture
def record():
    """Collect one (criterion, ok, detail) line for the acceptance summary."""
    def _record(criterion, ok, detail=""):
        ACCEPTANCE.append((criterion, bool(ok), detail))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")


def random_hypergraph(rng, n, k, density=0.3):
    sets = list(itertools.combinations(range(1, n + 1), k))
    keep = rng.random(len(sets)) < density
    return Hypergraph(n, k, frozenset(s for s, b in zip(sets, keep) if b))


def random_partition(rng, n):
    return PartitionVector(rng.permutation(np.repeat([1, -1], n // 2)))


def planted(n):
    return PartitionVector([1] * (n // 2) + [-1] * (n // 2))
