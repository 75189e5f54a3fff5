"""Samplers and validators for the two hard instance families.

Both families are 6-regular signed graphs on N vertices (N a multiple of 10,
N >= 30) whose vertices carry labels 0..9, exactly N/10 per label. Edges come
in three layers, each a disjoint union of directed cycles that step labels by
a fixed permutation; an edge from u to v in a layer with port pair (k, k+1)
occupies port k at u (the tail) and port k+1 at v (the head).

Family 1 (non-clusterable, far from clusterable w.h.p.):
  * arc layer: a single Hamiltonian cycle stepping labels by +1,
    positive, ports 1/2;
  * second layer: cycle union for ``SIGMA_CONNECT``, positive, ports 3/4;
  * third layer: cycle union for ``SIGMA_NEGATIVE``, negative, ports 5/6.

Family 2 (always clusterable):
  * within_label layer: per-label cycle unions, positive, ports 1/2;
  * step2 layer: cycle unions over even labels (0 2 4 6 8) and odd labels
    (1 3 5 7 9), positive, ports 3/4;
  * hamiltonian layer: a single Hamiltonian cycle stepping labels by +1,
    negative, ports 5/6.

Per-vertex port signatures (sign and label offset per port) are identical in
the two families, so they cannot be told apart by local inspection alone.
"""

import json
from dataclasses import dataclass
from typing import Optional

from . import seeding
from .errors import BadN, NotInSupport, TooFewVertices, UnevenLabelCounts
from .graph import SignedGraph, build_graph, parse_graph, serialize_graph


@dataclass(frozen=True)
class LabelPermutation:
    """Cyclic permutation on a subset of the labels 0..9."""

    cycle: tuple

    def __post_init__(self):
        if len(set(self.cycle)) != len(self.cycle):
            raise ValueError("cycle entries must be distinct")

    @property
    def support(self):
        return self.cycle

    def apply(self, label):
        try:
            pos = self.cycle.index(label)
        except ValueError:
            raise NotInSupport(f"label {label} not in {self.cycle}") from None
        return self.cycle[(pos + 1) % len(self.cycle)]

    def invert(self, label):
        try:
            pos = self.cycle.index(label)
        except ValueError:
            raise NotInSupport(f"label {label} not in {self.cycle}") from None
        return self.cycle[(pos - 1) % len(self.cycle)]


SIGMA_ARC = LabelPermutation((0, 1, 2, 3, 4, 5, 6, 7, 8, 9))
SIGMA_CONNECT = LabelPermutation((2, 4, 6, 0, 8, 1, 3, 7, 9, 5))
SIGMA_NEGATIVE = LabelPermutation((1, 6, 3, 8, 5, 0, 7, 2, 9, 4))
SIGMA_EVEN_STEP = LabelPermutation((0, 2, 4, 6, 8))
SIGMA_ODD_STEP = LabelPermutation((1, 3, 5, 7, 9))


def _label_pairs(sigma):
    return {frozenset((p, sigma.apply(p))) for p in sigma.support}


# The three layers of each family must generate disjoint unordered label
# pairs, otherwise parallel edges across layers could occur.
assert not _label_pairs(SIGMA_ARC) & _label_pairs(SIGMA_CONNECT)
assert not _label_pairs(SIGMA_ARC) & _label_pairs(SIGMA_NEGATIVE)
assert not _label_pairs(SIGMA_CONNECT) & _label_pairs(SIGMA_NEGATIVE)
assert not (_label_pairs(SIGMA_EVEN_STEP) | _label_pairs(SIGMA_ODD_STEP)) & _label_pairs(SIGMA_ARC)


def port_rules(family):
    """Per-port (label map, mirror port, sign) table, ports 1-based.

    Querying port i of a label-p vertex must reach a vertex labeled
    rule[i][0](p), whose mirror port is rule[i][1], across an edge of sign
    rule[i][2]. Both families share the same sign and mirror structure.
    """
    if family == 1:
        return {
            1: (SIGMA_ARC.apply, 2, 1),
            2: (SIGMA_ARC.invert, 1, 1),
            3: (SIGMA_CONNECT.apply, 4, 1),
            4: (SIGMA_CONNECT.invert, 3, 1),
            5: (SIGMA_NEGATIVE.apply, 6, -1),
            6: (SIGMA_NEGATIVE.invert, 5, -1),
        }
    if family == 2:
        return {
            1: (lambda p: p, 2, 1),
            2: (lambda p: p, 1, 1),
            3: (lambda p: (p + 2) % 10, 4, 1),
            4: (lambda p: (p - 2) % 10, 3, 1),
            5: (SIGMA_ARC.apply, 6, -1),
            6: (SIGMA_ARC.invert, 5, -1),
        }
    raise ValueError(f"family must be 1 or 2, got {family}")


# layer name -> (tail port, sign); the mirror port is tail + 1.
LAYER_TABLE = {
    1: (("arc", 1, 1), ("second", 3, 1), ("third", 5, -1)),
    2: (("within_label", 1, 1), ("step2", 3, 1), ("hamiltonian", 5, -1)),
}


@dataclass(frozen=True)
class FamilyInstance:
    """A sampled family member plus its construction provenance."""

    graph: SignedGraph
    labels: tuple
    family: int
    seed: Optional[int]
    layers: dict  # layer name -> list of (tail, head) vertex pairs

    @property
    def n_vertices(self):
        return self.graph.n_vertices


def sample_cycle_union(vertices_by_label, sigma, ports, sign, rng):
    """Uniform union of label-stepping cycles covering the given vertices.

    ``vertices_by_label`` maps each label in sigma's support to its vertex
    list; all classes must have equal size >= 3. ``ports`` is the 1-based
    (tail, head) port pair. Returns build_graph edge tuples.

    For multi-label permutations the union is a tuple of independent uniform
    bijections between consecutive label classes. For a single-label
    permutation it is a uniform permutation of the class resampled until it
    has no cycle shorter than 3 (a 1-cycle would be a self-loop, a 2-cycle a
    parallel edge pair).
    """
    counts = {p: len(vertices_by_label[p]) for p in sigma.support}
    size = counts[sigma.support[0]]
    if any(c != size for c in counts.values()):
        raise UnevenLabelCounts(f"class sizes {counts} differ")
    if size < 3:
        raise TooFewVertices(f"class size {size} cannot support simple cycles")
    tail_port, head_port = ports[0] - 1, ports[1] - 1
    edges = []
    if len(sigma.support) == 1:
        members = list(vertices_by_label[sigma.support[0]])
        perm = _permutation_without_short_cycles(size, rng)
        for i, j in enumerate(perm):
            edges.append((members[i], members[j], sign, tail_port, head_port))
    else:
        for p in sigma.support:
            tails = list(vertices_by_label[p])
            heads = list(vertices_by_label[sigma.apply(p)])
            order = rng.permutation(size)
            for i in range(size):
                edges.append((tails[i], heads[order[i]], sign, tail_port, head_port))
    return edges


def _permutation_without_short_cycles(size, rng):
    while True:
        perm = rng.permutation(size)
        ok = True
        for i in range(size):
            j = perm[i]
            if j == i or perm[j] == i:
                ok = False
                break
        if ok:
            return perm


def _check_n(n):
    if n % 10 != 0 or n < 30:
        raise BadN(f"N must be a multiple of 10 and at least 30, got {n}")


def _sample_hamiltonian(n, rng):
    """Uniform label-cyclic Hamiltonian cycle: position x holds label x mod 10.

    Returns (ordering, labels): ordering[x] is the vertex at position x.
    """
    ordering = [int(v) for v in rng.permutation(n)]
    labels = [0] * n
    for x, v in enumerate(ordering):
        labels[v] = x % 10
    return ordering, labels


def _classes(labels):
    by_label = {p: [] for p in range(10)}
    for v, p in enumerate(labels):
        by_label[p].append(v)
    return by_label


def gen_g1(n, seed) -> FamilyInstance:
    """Uniform family-1 member: arc Hamiltonian (+, ports 1/2), connecting
    cycle union (+, ports 3/4), negative cycle union (-, ports 5/6)."""
    _check_n(n)
    rng = seeding.spawn(seed, seeding.STREAM_FAMILY_GEN, 1, n)
    ordering, labels = _sample_hamiltonian(n, rng)
    by_label = _classes(labels)
    arc = [(ordering[x], ordering[(x + 1) % n], 1, 0, 1) for x in range(n)]
    second = sample_cycle_union(by_label, SIGMA_CONNECT, (3, 4), 1, rng)
    third = sample_cycle_union(by_label, SIGMA_NEGATIVE, (5, 6), -1, rng)
    graph = build_graph(n, 6, arc + second + third)
    layers = {
        "arc": [(e[0], e[1]) for e in arc],
        "second": [(e[0], e[1]) for e in second],
        "third": [(e[0], e[1]) for e in third],
    }
    return FamilyInstance(graph, tuple(labels), 1, seed, layers)


def gen_g2(n, seed) -> FamilyInstance:
    """Uniform family-2 member: within-label cycle unions (+, ports 1/2),
    even/odd step-two unions (+, ports 3/4), negative Hamiltonian (ports 5/6)."""
    _check_n(n)
    rng = seeding.spawn(seed, seeding.STREAM_FAMILY_GEN, 2, n)
    ordering, labels = _sample_hamiltonian(n, rng)
    by_label = _classes(labels)
    within = []
    for s in range(10):
        within += sample_cycle_union(
            {s: by_label[s]}, LabelPermutation((s,)), (1, 2), 1, rng
        )
    step2 = sample_cycle_union(by_label, SIGMA_EVEN_STEP, (3, 4), 1, rng)
    step2 += sample_cycle_union(by_label, SIGMA_ODD_STEP, (3, 4), 1, rng)
    ham = [(ordering[x], ordering[(x + 1) % n], -1, 4, 5) for x in range(n)]
    graph = build_graph(n, 6, within + step2 + ham)
    layers = {
        "within_label": [(e[0], e[1]) for e in within],
        "step2": [(e[0], e[1]) for e in step2],
        "hamiltonian": [(e[0], e[1]) for e in ham],
    }
    return FamilyInstance(graph, tuple(labels), 2, seed, layers)


def generate(family, n, seed) -> FamilyInstance:
    if family == 1:
        return gen_g1(n, seed)
    if family == 2:
        return gen_g2(n, seed)
    raise ValueError(f"family must be 1 or 2, got {family}")


def _layer_cycles(edge_list):
    """Decompose a layer's (tail, head) edges into its directed cycles."""
    succ = {}
    for u, v in edge_list:
        succ[u] = v
    cycles = []
    seen = set()
    for start in succ:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = succ[start]
        while x != start and x in succ and x not in seen:
            cycle.append(x)
            seen.add(x)
            x = succ.get(x)
        cycles.append(cycle)
    return cycles


def validate_family_membership(instance) -> list:
    """All family invariants; returns a list of human-readable violations.

    Checks label quotas, full port occupancy, the per-port sign/label/mirror
    table, layer provenance consistency, and the per-layer cycle structure
    (single Hamiltonian cycle on the arc layer, no short within-label cycles).
    """
    g = instance.graph
    labels = instance.labels
    n = g.n_vertices
    violations = []

    if n % 10 != 0 or n < 30:
        violations.append(f"N={n} is not a multiple of 10 at least 30")
        return violations
    if len(labels) != n:
        violations.append(f"{len(labels)} labels for {n} vertices")
        return violations

    quota = n // 10
    for p in range(10):
        count = sum(1 for q in labels if q == p)
        if count != quota:
            violations.append(f"label {p}: {count} vertices, expected {quota}")

    if g.degree_bound != 6:
        violations.append(f"degree bound {g.degree_bound}, expected 6")
        return violations

    rules = port_rules(instance.family)
    for v in range(n):
        for i in range(1, 7):
            entry = g.port(v, i - 1)
            if entry is None:
                violations.append(f"vertex {v}: port {i} empty")
                continue
            u, sign, back = entry
            label_map, mirror, want_sign = rules[i]
            if back != mirror - 1:
                violations.append(f"vertex {v} port {i}: mirror port {back + 1}, expected {mirror}")
            if sign != want_sign:
                violations.append(f"vertex {v} port {i}: sign {sign}, expected {want_sign}")
            try:
                expected_label = label_map(labels[v])
            except NotInSupport:
                expected_label = None
            if expected_label is None or labels[u] != expected_label:
                violations.append(
                    f"vertex {v} port {i}: neighbor label {labels[u]}, expected {expected_label}"
                )

    layer_names = {name for name, _, _ in LAYER_TABLE[instance.family]}
    if set(instance.layers) != layer_names:
        violations.append(f"layer names {sorted(instance.layers)}, expected {sorted(layer_names)}")
        return violations

    for name, tail_port, sign in LAYER_TABLE[instance.family]:
        edge_list = instance.layers[name]
        out_seen = set()
        for u, v in edge_list:
            if u in out_seen:
                violations.append(f"layer {name}: vertex {u} has two outgoing edges")
            out_seen.add(u)
            entry = g.port(u, tail_port - 1)
            if entry is None or entry[0] != v or entry[1] != sign:
                violations.append(f"layer {name}: edge ({u},{v}) not on port {tail_port}")
        cycles = _layer_cycles(edge_list)
        if any(len(c) < 3 for c in cycles):
            violations.append(f"layer {name}: cycle shorter than 3")
        if name in ("arc", "hamiltonian"):
            if len(cycles) != 1 or len(edge_list) != n:
                violations.append(f"layer {name}: expected one Hamiltonian cycle")

    return violations


def save_instance(instance, path):
    """Write the graph file plus a metadata sidecar next to it."""
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(instance.graph))
    sidecar = {
        "labels": list(instance.labels),
        "layers": {k: [list(e) for e in v] for k, v in instance.layers.items()},
        "family": instance.family,
        "seed": instance.seed,
    }
    with open(sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, separators=(",", ":"))
        fh.write("\n")


def sidecar_path(path):
    path = str(path)
    return (path[: -len(".json")] if path.endswith(".json") else path) + ".meta.json"


def load_instance(path) -> FamilyInstance:
    with open(path, "r", encoding="utf-8") as fh:
        graph = parse_graph(fh.read())
    with open(sidecar_path(path), "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    return FamilyInstance(
        graph,
        tuple(meta["labels"]),
        meta["family"],
        meta["seed"],
        {k: [tuple(e) for e in v] for k, v in meta["layers"].items()},
    )
