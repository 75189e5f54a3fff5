"""Brute-force ground truth for clusterability.

Everything here is exact and deliberately slow: these oracles validate the
probabilistic components at desk scale. A signed graph is clusterable iff its
vertices partition into components with all intra-component edges positive
and all inter-component edges negative, which holds iff no cycle carries
exactly one negative edge.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from .errors import WorkBudgetExceeded
from .graph import SignedGraph


@dataclass(frozen=True)
class ClusterWitness:
    """Component assignment with positive edges inside and negative across."""

    assignment: tuple


@dataclass(frozen=True)
class BadCycle:
    """Closed vertex sequence (first == last) with exactly one negative edge.

    ``negative_position`` is the index m such that the edge from vertices[m]
    to vertices[m+1] is the negative one.
    """

    vertices: tuple
    negative_position: int


def _positive_components(g):
    """Union-find roots over the positive-edge subgraph."""
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, sign, _, _ in g.edges():
        if sign > 0:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
    return [find(v) for v in range(g.n_vertices)]


def is_clusterable(g) -> Optional[ClusterWitness]:
    """Witness iff clusterable: components of the positive subgraph, checked
    against every negative edge. Isolated vertices form singleton components."""
    roots = _positive_components(g)
    for u, v, sign, _, _ in g.edges():
        if sign < 0 and roots[u] == roots[v]:
            return None
    compact = {}
    assignment = []
    for v in range(g.n_vertices):
        assignment.append(compact.setdefault(roots[v], len(compact)))
    return ClusterWitness(tuple(assignment))


def find_bad_cycle(g) -> Optional[BadCycle]:
    """Search, per negative edge (u, v), for a positive-only path u -> v."""
    for u, v, sign, _, _ in g.edges():
        if sign >= 0:
            continue
        path = _positive_path(g, u, v)
        if path is not None:
            return BadCycle(tuple(path) + (u,), len(path) - 1)
    return None


def _positive_path(g, src, dst):
    prev = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for entry in g._ports[x]:
            if entry is None or entry[1] < 0:
                continue
            y = entry[0]
            if y not in prev:
                prev[y] = x
                queue.append(y)
    if dst not in prev:
        return None
    path = []
    x = dst
    while x is not None:
        path.append(x)
        x = prev[x]
    path.reverse()
    return path


def check_witness(g, witness) -> bool:
    """Re-check a ClusterWitness directly against every edge."""
    a = witness.assignment
    if len(a) != g.n_vertices:
        return False
    for u, v, sign, _, _ in g.edges():
        if sign > 0 and a[u] != a[v]:
            return False
        if sign < 0 and a[u] == a[v]:
            return False
    return True


def check_bad_cycle(g, cycle) -> bool:
    """Re-check a BadCycle: closed trail, adjacent steps, one negative edge."""
    vs = cycle.vertices
    if len(vs) < 4 or vs[0] != vs[-1]:
        return False
    if len(set(vs[:-1])) != len(vs) - 1:
        return False
    negatives = 0
    for m in range(len(vs) - 1):
        sign = _edge_sign(g, vs[m], vs[m + 1])
        if sign is None:
            return False
        if sign < 0:
            if m != cycle.negative_position:
                return False
            negatives += 1
    return negatives == 1


def _edge_sign(g, u, v):
    for entry in g._ports[u]:
        if entry is not None and entry[0] == v:
            return entry[1]
    return None


def _without_edges(g, removed):
    """Copy of g with the given edges (as (u, v, sign, pu, pv)) deleted."""
    ports = [list(row) for row in g._ports]
    for u, v, _, pu, pv in removed:
        ports[u][pu] = None
        ports[v][pv] = None
    return SignedGraph(g.n_vertices, g.degree_bound, ports)


def distance_to_clusterable(g, k_max, work_budget=2_000_000) -> Optional[int]:
    """Minimum number of edge deletions that make g clusterable, if <= k_max.

    Returns the exact distance, or None certifying distance > k_max. Deletions
    are searched in deterministic edge order, subset sizes ascending. Raises
    WorkBudgetExceeded when the subset count alone would exceed the budget.
    """
    edge_list = sorted(g.edges())
    total = sum(comb(len(edge_list), k) for k in range(k_max + 1))
    if total > work_budget:
        raise WorkBudgetExceeded(
            f"{total} deletion subsets exceed work budget {work_budget}"
        )
    for k in range(k_max + 1):
        for subset in combinations(edge_list, k):
            if is_clusterable(_without_edges(g, subset)) is not None:
                return k
    return None
