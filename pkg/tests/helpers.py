"""Shared generators for randomized tests."""

import numpy as np

from clustertest.graph import build_graph


def random_signed_graph(rng, max_n=10, max_d=4):
    """Random bounded-degree signed graph via random port pairings."""
    n = int(rng.integers(2, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    edges = []
    used_pairs = set()
    free = {v: list(range(d)) for v in range(n)}
    attempts = int(rng.integers(0, n * d + 1))
    for _ in range(attempts):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u == v or not free[u] or not free[v]:
            continue
        pair = (min(u, v), max(u, v))
        if pair in used_pairs:
            continue
        used_pairs.add(pair)
        sign = "+" if rng.random() < 0.5 else "-"
        pu = free[u].pop()
        pv = free[v].pop()
        edges.append((u, v, sign, pu, pv))
    return build_graph(n, d, edges)


def random_clusterable_graph(rng, n=None, d=6, n_components=None):
    """Random clusterable graph: positive edges inside components, negative
    across; spanning trees keep each component positively connected."""
    if n is None:
        n = int(rng.integers(4, 40))
    if n_components is None:
        n_components = int(rng.integers(1, max(2, n // 3)))
    comp = [int(rng.integers(n_components)) for _ in range(n)]
    members = {}
    for v, c in enumerate(comp):
        members.setdefault(c, []).append(v)
    free = {v: list(range(d)) for v in range(n)}
    used_pairs = set()
    edges = []

    def try_add(u, v, sign):
        if u == v or not free[u] or not free[v]:
            return False
        pair = (min(u, v), max(u, v))
        if pair in used_pairs:
            return False
        used_pairs.add(pair)
        edges.append((u, v, sign, free[u].pop(), free[v].pop()))
        return True

    for group in members.values():
        order = [group[int(i)] for i in rng.permutation(len(group))]
        for i in range(1, len(order)):
            try_add(order[i], order[int(rng.integers(i))], "+")
    for _ in range(2 * n):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if comp[u] == comp[v]:
            try_add(u, v, "+")
        else:
            try_add(u, v, "-")
    return build_graph(n, d, edges), comp


def rng_for(test_seed):
    return np.random.default_rng(test_seed)
