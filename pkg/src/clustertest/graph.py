"""Bounded-degree signed graphs and the counting port-query oracle.

A signed graph is stored as one port table per vertex: ``ports[v][i]`` is
either ``None`` (empty port) or a triple ``(u, sign, back)`` meaning vertex
``v``'s port ``i`` holds an edge to ``u`` with the given sign, mirrored at
``u``'s port ``back``. Signs are the integers ``+1`` / ``-1`` in memory and
``"+"`` / ``"-"`` on disk.

Ports are 0-based internally and 1-based on every external surface (the
query interface and the file format); the offset is applied exactly once at
each boundary.
"""

import json
from enum import Enum
from typing import NamedTuple, Optional

from .errors import (
    DuplicateEdge,
    FormatError,
    IdOutOfRange,
    PortConflict,
    SelfLoop,
)


class Sign(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


_SIGN_TO_INT = {Sign.POSITIVE: 1, Sign.NEGATIVE: -1, "+": 1, "-": -1, 1: 1, -1: -1}
_INT_TO_SIGN = {1: Sign.POSITIVE, -1: Sign.NEGATIVE}


class Neighbor(NamedTuple):
    to: int
    sign: Sign


class SignedGraph:
    """Immutable signed graph with per-vertex port tables.

    Instances should be created through :func:`build_graph` or
    :func:`parse_graph`, which establish the invariants (port symmetry, no
    self-loops, no parallel edges, matching mirror signs).
    """

    __slots__ = ("n_vertices", "degree_bound", "_ports")

    def __init__(self, n_vertices, degree_bound, ports):
        self.n_vertices = n_vertices
        self.degree_bound = degree_bound
        self._ports = ports

    def port(self, v, i):
        """Entry at 0-based port ``i`` of ``v``: ``(to, sign, back)`` or None."""
        return self._ports[v][i]

    def oracle_answer(self, v, i):
        # Internal oracle protocol shared with the lazy processes (0-based port).
        return self._ports[v][i]

    def degree(self, v):
        return sum(1 for e in self._ports[v] if e is not None)

    def edges(self):
        """Yield each edge once as (u, v, sign, port_u, port_v), 0-based ports."""
        for v in range(self.n_vertices):
            for i, entry in enumerate(self._ports[v]):
                if entry is None:
                    continue
                u, sign, back = entry
                if (v, i) < (u, back):
                    yield (v, u, sign, i, back)

    def n_edges(self):
        return sum(1 for _ in self.edges())

    def check_invariants(self):
        """Full-scan check of symmetry, signs, and simplicity; raises on violation."""
        seen_pairs = set()
        for v in range(self.n_vertices):
            if len(self._ports[v]) != self.degree_bound:
                raise FormatError(f"vertex {v}: port table length != degree bound")
            for i, entry in enumerate(self._ports[v]):
                if entry is None:
                    continue
                u, sign, back = entry
                if u == v:
                    raise SelfLoop(f"vertex {v} port {i}")
                if not (0 <= u < self.n_vertices):
                    raise IdOutOfRange(f"vertex {v} port {i} points at {u}")
                mirror = self._ports[u][back]
                if mirror is None or mirror[0] != v or mirror[2] != i:
                    raise PortConflict(f"asymmetric entry at vertex {v} port {i}")
                if mirror[1] != sign:
                    raise PortConflict(f"sign mismatch on edge ({v},{u})")
                if (v, i) < (u, back):
                    pair = (min(v, u), max(v, u))
                    if pair in seen_pairs:
                        raise DuplicateEdge(f"parallel edge between {pair[0]} and {pair[1]}")
                    seen_pairs.add(pair)

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (
            self.n_vertices == other.n_vertices
            and self.degree_bound == other.degree_bound
            and self._ports == other._ports
        )


def build_graph(n_vertices, degree_bound, edge_list):
    """Assemble a SignedGraph from (u, v, sign, port_u, port_v) tuples.

    Ports here are 0-based; signs may be Sign values, "+"/"-", or +1/-1.
    Raises IdOutOfRange / SelfLoop / PortConflict / DuplicateEdge naming the
    offending edge.
    """
    ports = [[None] * degree_bound for _ in range(n_vertices)]
    seen_pairs = set()
    for edge in edge_list:
        u, v, sign, pu, pv = edge
        s = _SIGN_TO_INT.get(sign)
        if s is None:
            raise FormatError(f"edge {edge!r}: bad sign {sign!r}")
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise IdOutOfRange(f"edge {edge!r}: vertex id out of range")
        if u == v:
            raise SelfLoop(f"edge {edge!r}")
        if not (0 <= pu < degree_bound and 0 <= pv < degree_bound):
            raise IdOutOfRange(f"edge {edge!r}: port out of range")
        pair = (min(u, v), max(u, v))
        if pair in seen_pairs:
            raise DuplicateEdge(f"edge {edge!r}")
        if ports[u][pu] is not None:
            raise PortConflict(f"edge {edge!r}: port {pu} of vertex {u} already used")
        if ports[v][pv] is not None:
            raise PortConflict(f"edge {edge!r}: port {pv} of vertex {v} already used")
        seen_pairs.add(pair)
        ports[u][pu] = (v, s, pv)
        ports[v][pv] = (u, s, pu)
    return SignedGraph(n_vertices, degree_bound, ports)


class QuerySession:
    """Counting oracle view over a SignedGraph or a lazy process.

    ``queries_used`` is a monotone counter of answered oracle calls; an empty
    port answers with the error symbol (``None``) and still consumes one
    query, so probing empty ports is never free.

    Sessions are single-owner: never share one across concurrent trials.
    """

    __slots__ = ("target", "d", "n_vertices", "queries_used", "_graph_ports")

    def __init__(self, target):
        self.target = target
        self.d = target.degree_bound
        self.n_vertices = target.n_vertices
        self.queries_used = 0
        # Fast path for plain graphs: skip a method dispatch per probe.
        self._graph_ports = target._ports if isinstance(target, SignedGraph) else None

    def neighbor_query(self, v, i) -> Optional[Neighbor]:
        """Answer the 1-based port query (v, i); None is the error symbol."""
        if not (0 <= v < self.n_vertices):
            raise IdOutOfRange(f"vertex {v}")
        if not (1 <= i <= self.d):
            raise IdOutOfRange(f"port {i}")
        ans = self.probe(v, i - 1)
        if ans is None:
            return None
        return Neighbor(ans[0], _INT_TO_SIGN[ans[1]])

    def probe(self, v, i):
        """0-based unchecked hot path; returns (to, sign, back) or None."""
        self.queries_used += 1
        gp = self._graph_ports
        if gp is not None:
            return gp[v][i]
        return self.target.oracle_answer(v, i)


def serialize_graph(g) -> str:
    """Render a graph in the JSON file format (1-based mirror ports)."""
    adjacency = []
    for v in range(g.n_vertices):
        row = []
        for entry in g._ports[v]:
            if entry is None:
                row.append(None)
            else:
                u, sign, back = entry
                row.append({"to": u, "sign": _INT_TO_SIGN[sign].value, "back": back + 1})
        adjacency.append(row)
    doc = {"n": g.n_vertices, "d": g.degree_bound, "adjacency": adjacency}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def parse_graph(text) -> SignedGraph:
    """Parse the JSON file format; inverse of serialize_graph.

    Raises FormatError with a field locus for malformed documents, and the
    build_graph error family for invariant violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    for key in ("n", "d", "adjacency"):
        if key not in doc:
            raise FormatError(f"top level: missing field {key!r}")
    n, d, adjacency = doc["n"], doc["d"], doc["adjacency"]
    if not (isinstance(n, int) and n >= 0 and isinstance(d, int) and d >= 0):
        raise FormatError("fields 'n' and 'd' must be nonnegative integers")
    if not isinstance(adjacency, list) or len(adjacency) != n:
        raise FormatError(f"adjacency: expected {n} rows")
    ports = [[None] * d for _ in range(n)]
    for v, row in enumerate(adjacency):
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"adjacency[{v}]: expected {d} entries")
        for i, entry in enumerate(row):
            if entry is None:
                continue
            locus = f"adjacency[{v}][{i}]"
            if not isinstance(entry, dict):
                raise FormatError(f"{locus}: expected object or null")
            for key in ("to", "sign", "back"):
                if key not in entry:
                    raise FormatError(f"{locus}: missing field {key!r}")
            u, sign_str, back = entry["to"], entry["sign"], entry["back"]
            if not isinstance(u, int) or not (0 <= u < n):
                raise IdOutOfRange(f"{locus}: vertex {u}")
            if sign_str not in ("+", "-"):
                raise FormatError(f"{locus}: sign must be '+' or '-'")
            if not isinstance(back, int) or not (1 <= back <= d):
                raise IdOutOfRange(f"{locus}: back port {back}")
            if u == v:
                raise SelfLoop(f"{locus}")
            ports[v][i] = (u, _SIGN_TO_INT[sign_str], back - 1)
    g = SignedGraph(n, d, ports)
    g.check_invariants()
    return g
