"""Lazy adversary oracles that build a uniform family member on the fly.

A ``ProcessState`` answers bounded-degree port queries exactly as a graph
sampled uniformly from family 1 or family 2 would, while only materializing
the queried part. For each unanswered query (v, i) the port-rule table gives
the partner label p', mirror port i' and sign; the answer is an
already-seen vertex drawn uniformly from the open-port set X(p', i') with
probability |X| / (quota - n_p' + |X|), and otherwise a uniformly chosen
never-seen vertex that gets labeled p'. Vertices whose choice would be
inconsistent with any family member (the vertex itself, or a vertex already
adjacent to v, which can only happen on family 2's within-label ports) are
excluded from the open-port set, matching the true conditional distribution.

``complete`` extends any reachable state to a full family member, uniform
over all members consistent with the history, which is how the samplers are
validated against the direct generators.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import seeding
from .errors import ConfigError, IdOutOfRange, InfeasibleHistory
from .families import (
    SIGMA_CONNECT,
    SIGMA_EVEN_STEP,
    SIGMA_NEGATIVE,
    SIGMA_ODD_STEP,
    FamilyInstance,
    port_rules,
    validate_family_membership,
)
from .graph import build_graph

_MAX_EMBED_ATTEMPTS = 200_000


class ProcessState:
    """Adaptive oracle over an implicit uniform family member.

    Strictly single-owner and sequential; plug into a QuerySession for query
    counting. ``transcript`` records every query (repeats included) while
    ``edges`` holds the e-dge set of the query-answer history.
    """

    def __init__(self, family, n, rng):
        if n % 10 != 0 or n < 30:
            raise ConfigError(f"N must be a multiple of 10 and at least 30, got {n}")
        self.family = family
        self.n_vertices = n
        self.degree_bound = 6
        self.quota = n // 10
        self.rng = rng
        self.rules = port_rules(family)
        self.labels = {}                    # vertex -> label, insertion ordered
        self.n_label = [0] * 10
        self.open_ports = {(p, i): set() for p in range(10) for i in range(1, 7)}
        self.edges = {}                     # (v, 1-based port) -> (u, sign)
        self.adjacent = set()               # frozenset({u, v}) per history edge
        self.transcript = []                # (v, i, answer, sign) per query

    # -- oracle interface ---------------------------------------------------

    def oracle_answer(self, v, i0):
        """QuerySession protocol: 0-based port, returns (u, sign, back)."""
        u, sign = self.answer(v, i0 + 1)
        return (u, sign, self.rules[i0 + 1][1] - 1)

    def answer(self, v, port):
        """Answer the 1-based port query (v, port), extending the history."""
        if not (0 <= v < self.n_vertices):
            raise IdOutOfRange(f"vertex {v}")
        if not (1 <= port <= 6):
            raise IdOutOfRange(f"port {port}")
        if v not in self.labels:
            self._label_fresh_query_vertex(v)
        known = self.edges.get((v, port))
        if known is not None:
            self.transcript.append((v, port, known[0], known[1]))
            return known

        label_map, mirror, sign = self.rules[port]
        p_bar = label_map(self.labels[v])
        eligible = [
            u
            for u in sorted(self.open_ports[(p_bar, mirror)])
            if u != v and frozenset((u, v)) not in self.adjacent
        ]
        fresh = self.quota - self.n_label[p_bar]
        total = len(eligible) + fresh
        assert total > 0, "label class exhausted; history inconsistent"
        r = int(self.rng.integers(total))
        if r < len(eligible):
            u = eligible[r]
        else:
            u = self._fresh_vertex()
            self._label_vertex(u, p_bar)

        self.edges[(v, port)] = (u, sign)
        self.edges[(u, mirror)] = (v, sign)
        self.open_ports[(self.labels[v], port)].discard(v)
        self.open_ports[(p_bar, mirror)].discard(u)
        self.adjacent.add(frozenset((u, v)))
        self.transcript.append((v, port, u, sign))
        return (u, sign)

    # -- internals ----------------------------------------------------------

    def _label_fresh_query_vertex(self, v):
        # label p with probability (quota - n_p) / (N - total labeled)
        remaining = self.n_vertices - len(self.labels)
        r = int(self.rng.integers(remaining))
        acc = 0
        for p in range(10):
            acc += self.quota - self.n_label[p]
            if r < acc:
                self._label_vertex(v, p)
                return
        raise AssertionError("label quotas exhausted")

    def _label_vertex(self, v, p):
        self.labels[v] = p
        self.n_label[p] += 1
        for i in range(1, 7):
            self.open_ports[(p, i)].add(v)

    def _fresh_vertex(self):
        while True:
            u = int(self.rng.integers(self.n_vertices))
            if u not in self.labels:
                return u


# -- completion to a full family member --------------------------------------


def complete(state) -> FamilyInstance:
    """Extend the history to a full family member, uniformly.

    The Hamiltonian layer is embedded by assigning vertices to cycle
    positions (position x carries label x mod 10), rejection-sampled until
    every history edge of that layer sits on consecutive positions; the
    remaining layers are uniform bijections (or within-label permutations
    free of short cycles) pinned on the history edges. History edges on
    non-Hamiltonian ports never constrain the position embedding, which the
    final full validation re-asserts.
    """
    n = state.n_vertices
    rng = state.rng
    ham_port = 1 if state.family == 1 else 5
    ham_sign = 1 if state.family == 1 else -1

    pins = {
        v: u for (v, port), (u, _s) in state.edges.items() if port == ham_port
    }
    position, ordering = _embed_hamiltonian(state, pins, rng)
    labels = tuple(position[v] % 10 for v in range(n))
    by_label = {p: [] for p in range(10)}
    for v in range(n):
        by_label[labels[v]].append(v)

    ham_edges = [(ordering[x], ordering[(x + 1) % n], ham_sign, ham_port - 1, ham_port)
                 for x in range(n)]

    def layer_pins(port):
        return {v: u for (v, p), (u, _s) in state.edges.items() if p == port}

    edges = list(ham_edges)
    layers = {}
    if state.family == 1:
        second = _pinned_bijection_union(by_label, SIGMA_CONNECT, layer_pins(3), rng)
        third = _pinned_bijection_union(by_label, SIGMA_NEGATIVE, layer_pins(5), rng)
        edges += [(u, v, 1, 2, 3) for u, v in second]
        edges += [(u, v, -1, 4, 5) for u, v in third]
        layers = {
            "arc": [(e[0], e[1]) for e in ham_edges],
            "second": second,
            "third": third,
        }
    else:
        within = []
        pins1 = layer_pins(1)
        for s in range(10):
            within += _pinned_class_permutation(by_label[s], pins1, rng)
        step2 = _pinned_bijection_union(by_label, SIGMA_EVEN_STEP, layer_pins(3), rng)
        step2 += _pinned_bijection_union(by_label, SIGMA_ODD_STEP, layer_pins(3), rng)
        edges += [(u, v, 1, 0, 1) for u, v in within]
        edges += [(u, v, 1, 2, 3) for u, v in step2]
        layers = {
            "within_label": within,
            "step2": step2,
            "hamiltonian": [(e[0], e[1]) for e in ham_edges],
        }

    graph = build_graph(n, 6, edges)
    instance = FamilyInstance(graph, labels, state.family, None, layers)

    for (v, port), (u, sign) in state.edges.items():
        entry = graph.port(v, port - 1)
        if entry is None or entry[0] != u or entry[1] != sign:
            raise InfeasibleHistory(f"history edge ({v},{u}) lost at port {port}")
    violations = validate_family_membership(instance)
    if violations:
        raise InfeasibleHistory("; ".join(violations[:3]))
    return instance


def _embed_hamiltonian(state, pins, rng):
    """Uniform position assignment given seen labels, conditioned on pins."""
    n = state.n_vertices
    quota = state.quota
    seen_by_label = {p: [] for p in range(10)}
    for v, p in state.labels.items():
        seen_by_label[p].append(v)

    pinned_vertices = set(pins) | set(pins.values())
    pin_labels = {state.labels[v] for v in pinned_vertices}

    for _ in range(_MAX_EMBED_ATTEMPTS):
        pos = {}
        # classes that can affect pin feasibility are drawn per attempt,
        # everything else is placed once afterwards
        for p in pin_labels:
            members = seen_by_label[p]
            slots = rng.choice(quota, size=len(members), replace=False)
            for v, s in zip(members, slots):
                pos[v] = p + 10 * int(s)
        if all(pos[u] != pos[v] and (pos[u] + 1) % n == pos[v] for u, v in pins.items()):
            break
    else:
        raise InfeasibleHistory("could not embed history edges on the cycle")

    for p in range(10):
        if p in pin_labels:
            continue
        members = seen_by_label[p]
        if members:
            slots = rng.choice(quota, size=len(members), replace=False)
            for v, s in zip(members, slots):
                pos[v] = p + 10 * int(s)

    free_positions = sorted(set(range(n)) - set(pos.values()))
    unseen = [v for v in range(n) if v not in state.labels]
    order = rng.permutation(len(unseen))
    for idx, x in zip(order, free_positions):
        pos[unseen[int(idx)]] = x

    ordering = [0] * n
    for v, x in pos.items():
        ordering[x] = v
    return pos, ordering


def _pinned_bijection_union(by_label, sigma, pins, rng):
    """Uniform label-stepping bijections containing the pinned edges."""
    edges = []
    for p in sigma.support:
        tails = by_label[p]
        heads = by_label[sigma.apply(p)]
        fixed = {u: pins[u] for u in tails if u in pins}
        used_heads = set(fixed.values())
        free_tails = [u for u in tails if u not in fixed]
        free_heads = [v for v in heads if v not in used_heads]
        order = rng.permutation(len(free_heads))
        for i, u in enumerate(free_tails):
            fixed[u] = free_heads[int(order[i])]
        edges += [(u, fixed[u]) for u in tails]
    return edges


def _pinned_class_permutation(members, pins, rng):
    """Uniform within-class successor map with pins and no cycle under 3."""
    fixed = {u: pins[u] for u in members if u in pins}
    free_tails = [u for u in members if u not in fixed]
    used = set(fixed.values())
    free_heads = [v for v in members if v not in used]
    for _ in range(_MAX_EMBED_ATTEMPTS):
        succ = dict(fixed)
        order = rng.permutation(len(free_heads))
        for i, u in enumerate(free_tails):
            succ[u] = free_heads[int(order[i])]
        if _min_cycle_length(succ) >= 3:
            return [(u, succ[u]) for u in members]
    raise InfeasibleHistory("within-label pins admit no valid permutation")


def _min_cycle_length(succ):
    best = None
    seen = set()
    for start in succ:
        if start in seen:
            continue
        length = 0
        x = start
        while True:
            seen.add(x)
            length += 1
            x = succ[x]
            if x == start:
                break
        if best is None or length < best:
            best = length
    return best if best is not None else 3


# -- adversary strategies -----------------------------------------------------


class RandomPortWalker:
    """Repeats (last answer, uniform port)."""

    def __init__(self, rng):
        self.rng = rng

    def next_query(self, transcript):
        v = transcript[-1][2] if transcript else 0
        return (v, 1 + int(self.rng.integers(6)))


class BreadthFirstProber:
    """Probes every port of each discovered vertex in discovery order."""

    def __init__(self, rng=None):
        self.order = [0]
        self.seen = {0}
        self.cursor = 0
        self.port = 1

    def next_query(self, transcript):
        if transcript:
            u = transcript[-1][2]
            if u not in self.seen:
                self.seen.add(u)
                self.order.append(u)
        if self.cursor >= len(self.order):
            self.cursor = 0
        q = (self.order[self.cursor], self.port)
        self.port += 1
        if self.port > 6:
            self.port = 1
            self.cursor += 1
        return q


class PortOneChaser:
    """Follows port 1 from answer to answer (the cycle-chasing adversary)."""

    def __init__(self, rng=None):
        pass

    def next_query(self, transcript):
        v = transcript[-1][2] if transcript else 0
        return (v, 1)


STRATEGIES = {
    "walker": RandomPortWalker,
    "bfs": BreadthFirstProber,
    "chaser": PortOneChaser,
}


def run_strategy(session, strategy, n_queries):
    """Drive a strategy for n_queries against any QuerySession target."""
    transcript = []
    for _ in range(n_queries):
        v, i = strategy.next_query(transcript)
        ans = session.probe(v, i - 1)
        transcript.append((v, i, ans[0], ans[1]))
    return transcript


def canonical_transcript(transcript):
    """Rename vertices by first appearance; processes are symmetric under
    renaming, so raw ids would inject meaningless distance."""
    ids = {}
    out = []
    for v, i, u, s in transcript:
        a = ids.setdefault(v, len(ids))
        b = ids.setdefault(u, len(ids))
        out.append((a, i, b, s))
    return tuple(out)


# -- distinguishing experiment ------------------------------------------------


@dataclass(frozen=True)
class DistinguishConfig:
    """T = floor(delta * sqrt(N)) queries per trial; requires N >= 40 T."""

    n: int
    delta: float
    trials: int
    strategy_name: str = "walker"

    @property
    def t_queries(self):
        return int(self.delta * self.n ** 0.5)

    def validate(self):
        if not (0 < self.delta < 0.5):
            raise ConfigError(f"delta must be in (0, 1/2), got {self.delta}")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        t = self.t_queries
        if t < 1:
            raise ConfigError(f"T={t}; delta too small for N={self.n}")
        if self.n < 40 * t:
            raise ConfigError(f"need N >= 40 T, got N={self.n}, T={t}")
        if self.strategy_name not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy_name!r}")


@dataclass(frozen=True)
class DistinguishReport:
    config: DistinguishConfig
    tv_estimate: float
    bootstrap_sigma: float
    ci_low: float
    ci_high: float
    collision_rates: tuple  # per family: tuple of per-step rates, t = 1..T
    distinct_histories: int


def distinguish_experiment(cfg, seed, bootstrap_resamples=1000) -> DistinguishReport:
    """Run the strategy against fresh family-1 and family-2 processes and
    compare canonical history distributions.

    tv_estimate is the plug-in total-variation distance between the two
    empirical distributions; the bootstrap quantifies its sampling error.
    collision_rates[f][t-1] estimates the probability that the t-th answer is
    a vertex already in the history.
    """
    cfg.validate()
    t_q = cfg.t_queries
    counts = [Counter(), Counter()]
    collisions = np.zeros((2, t_q))
    for f_idx, family in enumerate((1, 2)):
        for trial in range(cfg.trials):
            # the strategy plays the same algorithm against both processes, so
            # its stream is shared per trial (common random numbers); only the
            # process keeps a family-specific stream
            rng = seeding.spawn(seed, seeding.STREAM_PROCESS, family, trial)
            strategy = STRATEGIES[cfg.strategy_name](
                seeding.spawn(seed, seeding.STREAM_STRATEGY, trial)
            )
            state = ProcessState(family, cfg.n, rng)
            transcript = []
            seen = set()
            for t in range(t_q):
                v, i = strategy.next_query(transcript)
                seen.add(v)
                edges_before = len(state.edges)
                u, s = state.answer(v, i)
                # a repeated query re-reads the history; the collision
                # statistic only concerns fresh edges landing on seen vertices
                if len(state.edges) > edges_before and u in seen:
                    collisions[f_idx, t] += 1
                seen.add(u)
                transcript.append((v, i, u, s))
            counts[f_idx][canonical_transcript(transcript)] += 1

    keys = sorted(set(counts[0]) | set(counts[1]))
    c1 = np.array([counts[0][k] for k in keys], dtype=float)
    c2 = np.array([counts[1][k] for k in keys], dtype=float)
    trials = float(cfg.trials)
    tv = 0.5 * np.abs(c1 / trials - c2 / trials).sum()

    boot_rng = seeding.spawn(seed, seeding.STREAM_BOOTSTRAP)
    tvs = np.empty(bootstrap_resamples)
    p1, p2 = c1 / trials, c2 / trials
    for b in range(bootstrap_resamples):
        r1 = boot_rng.multinomial(cfg.trials, p1) / trials
        r2 = boot_rng.multinomial(cfg.trials, p2) / trials
        tvs[b] = 0.5 * np.abs(r1 - r2).sum()
    return DistinguishReport(
        config=cfg,
        tv_estimate=float(tv),
        bootstrap_sigma=float(tvs.std()),
        ci_low=float(np.percentile(tvs, 2.5)),
        ci_high=float(np.percentile(tvs, 97.5)),
        collision_rates=tuple(tuple(row / trials) for row in collisions),
        distinct_histories=len(keys),
    )
