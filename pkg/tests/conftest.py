import math
import random
import sys

import pytest

from formanvr.complex import graph_filtration


def random_graph_filtration(rng: random.Random, n: int, p: float, d_max: int, cofaces=True):
    """Erdos-Renyi graph with distinct random edge weights, as a clique filtration."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    weights = rng.sample(range(1, 10 * len(pairs) + 10), len(pairs))
    edges = {e: w / 10 for e, w in zip(pairs, weights)}
    return graph_filtration(n, edges, d_max, cofaces=cofaces)


@pytest.fixture
def py_rng():
    return random.Random(12345)


def brute_cliques(dist, max_size, cutoff=math.inf):
    from itertools import combinations
    m = len(dist)
    out = {}
    for k in range(1, max_size + 1):
        for sub in combinations(range(m), k):
            w = max((dist[u][v] for u, v in combinations(sub, 2)), default=0.0)
            if w <= cutoff:
                out[sub] = w
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
