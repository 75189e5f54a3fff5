"""Collision finders over (f: X -> Y, R subset of Y x Y).

Three interchangeable backends:

* ``exhaustive_collide`` evaluates f on all of X and searches for a related
  pair; complete and exact, the classical reference.
* ``quantum_cost_collide`` reports the same outcome while also charging the
  quantum cost model ceil(c * |X|^(2/3) * (1 + log2 |Y|)).
* ``quantum_walk_simulate`` runs a dense statevector simulation of the
  two-reflection walk on the Johnson-graph arc space, for |X| <= 10. It never
  reports a collision when none exists, and on collision instances its
  success probability is read off the final state exactly.
"""

import math
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import TooLarge, WorkBudgetExceeded


@dataclass(frozen=True)
class CollisionBackend:
    """Backend selector used by the tester; kind is one of
    'exhaustive', 'quantum_cost_model', 'quantum_walk_sim'."""

    kind: str
    work_budget: int = 100_000_000
    cost_model_constant: float = 1.0
    # quantum_walk_sim knobs
    subset_size: Optional[int] = None
    walk_trials: int = 8
    sweep_iterations: bool = True

    def __post_init__(self):
        if self.kind not in ("exhaustive", "quantum_cost_model", "quantum_walk_sim"):
            raise ValueError(f"unknown backend kind {self.kind!r}")


@dataclass(frozen=True)
class CollisionReport:
    """Outcome of one collision search. ``pair`` is (x1, x2) or None."""

    pair: Optional[tuple]
    f_evaluations: int
    modeled_quantum_queries: Optional[int] = None
    success_probability: Optional[float] = None

    @property
    def found(self):
        return self.pair is not None


class Relation:
    """Symmetric binary relation over Y.

    ``related(a, b)`` is the predicate. ``find_pair(items)`` consumes an
    iterable of (x, f(x)) pairs in evaluation order and returns some related
    (x1, x2) with x1 evaluated before x2, or None. The default implementation
    is the quadratic reference scan; subclasses with exploitable structure
    may override it with an index, and the override must always consume the
    whole iterable (so evaluation counts stay exact) and agree with the scan
    on whether a pair exists.
    """

    def related(self, a, b) -> bool:
        raise NotImplementedError

    def find_pair(self, items):
        seen = []
        hit = None
        for x2, y2 in items:
            if hit is None:
                for x1, y1 in seen:
                    if self.related(y1, y2):
                        hit = (x1, x2)
                        break
            seen.append((x2, y2))
        return hit


class PairSetRelation(Relation):
    """Relation given extensionally as a set of unordered Y-pairs (tests, CLI toys)."""

    def __init__(self, pairs):
        self.pairs = {frozenset(p) for p in pairs}

    def related(self, a, b):
        return a != b and frozenset((a, b)) in self.pairs


def exhaustive_collide(f, xs, relation, work_budget=100_000_000) -> CollisionReport:
    """Evaluate f on every x and search all pairs; f_evaluations == |X|."""
    xs = list(xs)
    if len(xs) > work_budget:
        raise WorkBudgetExceeded(f"|X|={len(xs)} exceeds work budget {work_budget}")
    pair = relation.find_pair((x, f(x)) for x in xs)
    return CollisionReport(pair=pair, f_evaluations=len(xs))


def modeled_quantum_cost(x_size, y_size, constant) -> int:
    return math.ceil(constant * x_size ** (2.0 / 3.0) * (1 + math.log2(y_size)))


def quantum_cost_collide(f, xs, y_size, relation, constant=1.0,
                         work_budget=100_000_000) -> CollisionReport:
    """Exact outcome plus the modeled quantum query count.

    The constant is a reporting knob only; outcomes always come from the
    exhaustive search.
    """
    xs = list(xs)
    report = exhaustive_collide(f, xs, relation, work_budget)
    return replace(
        report,
        modeled_quantum_queries=modeled_quantum_cost(len(xs), y_size, constant),
    )


class JohnsonWalk:
    """Two-reflection walk on the arc space of subset inclusion.

    Basis states are arcs (S, y) with S an r-subset of X and y in X \\ S, i.e.
    the edges between levels r and r+1 of the subset lattice. One walk step
    reflects about the uniform arc within each S-block, then within each
    (S u {y})-block; the induced move on r-subsets is the uniform Johnson
    graph transition plus a lazy self-loop.
    """

    def __init__(self, n, r):
        if not (1 <= r < n):
            raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
        self.n = n
        self.r = r
        self.subsets = list(combinations(range(n), r))
        self.sub_index = {s: i for i, s in enumerate(self.subsets)}
        tops = list(combinations(range(n), r + 1))
        top_index = {s: i for i, s in enumerate(tops)}
        self.n_top = len(tops)
        arc_top = np.zeros((len(self.subsets), n - r), dtype=np.int64)
        arc_y = np.zeros((len(self.subsets), n - r), dtype=np.int64)
        for si, s in enumerate(self.subsets):
            in_s = set(s)
            slot = 0
            for y in range(n):
                if y in in_s:
                    continue
                arc_top[si, slot] = top_index[tuple(sorted(s + (y,)))]
                arc_y[si, slot] = y
                slot += 1
        self.arc_top = arc_top
        self.arc_y = arc_y

    def uniform_state(self):
        shape = (len(self.subsets), self.n - self.r)
        return np.full(shape, 1.0 / math.sqrt(shape[0] * shape[1]))

    def step(self, state):
        # reflect about the uniform y within each S-block
        state = 2.0 * state.mean(axis=1, keepdims=True) - state
        # reflect about the uniform arc within each (r+1)-subset block
        sums = np.bincount(self.arc_top.ravel(), weights=state.ravel(),
                           minlength=self.n_top)
        means = sums / (self.r + 1)
        return 2.0 * means[self.arc_top] - state


def _marked_subsets(walk, ys, relation):
    marked = np.zeros(len(walk.subsets), dtype=bool)
    for si, s in enumerate(walk.subsets):
        for a, b in combinations(s, 2):
            if relation.related(ys[a], ys[b]):
                marked[si] = True
                break
    return marked


def _run_walk(walk, marked, t_outer, t_inner):
    state = walk.uniform_state()
    for _ in range(t_outer):
        state = state.copy()
        state[marked] = -state[marked]
        for _ in range(t_inner):
            state = walk.step(state)
    return state


def quantum_walk_simulate(f, xs, relation, r=None, trials=8, t_outer=None,
                          t_inner=None, sweep=True, rng=None) -> CollisionReport:
    """Statevector simulation of quantum-walk collision search.

    Marked basis states are arcs whose subset contains a related pair, the
    search alternates phase flips on marked states with walk steps, and
    ``success_probability`` is the exact marked mass at the end. With
    ``sweep`` the iteration counts (t_outer, t_inner) range over [1, 8]^2 and
    the best final state is kept; otherwise the defaults are
    t_outer = ceil(|X| / r), t_inner = ceil(sqrt(r)).

    The reported pair comes from classically scanning a subset sampled from
    the final state, over ``trials`` measurement shots; on collision-free
    instances no state is ever marked, so the outcome is always NoCollision
    with success probability exactly 0.
    """
    xs = list(xs)
    n = len(xs)
    if n > 10:
        raise TooLarge(f"|X|={n} exceeds the statevector limit of 10")
    if r is None:
        r = min(n - 1, math.ceil(n ** (2.0 / 3.0)))
    walk = JohnsonWalk(n, r)
    ys = [f(x) for x in xs]
    marked = _marked_subsets(walk, ys, relation)

    if not marked.any():
        return CollisionReport(pair=None, f_evaluations=n, success_probability=0.0)

    if sweep:
        best_state, best_mass = None, -1.0
        for a in range(1, 9):
            for b in range(1, 9):
                state = _run_walk(walk, marked, a, b)
                mass = float((state[marked] ** 2).sum())
                if mass > best_mass:
                    best_state, best_mass = state, mass
        state, success = best_state, best_mass
    else:
        a = t_outer if t_outer is not None else math.ceil(n / r)
        b = t_inner if t_inner is not None else math.ceil(math.sqrt(r))
        state = _run_walk(walk, marked, a, b)
        success = float((state[marked] ** 2).sum())

    if rng is None:
        rng = np.random.default_rng(0)
    probs = (state ** 2).ravel()
    probs = probs / probs.sum()
    pair = None
    for _ in range(trials):
        arc = int(rng.choice(len(probs), p=probs))
        si = arc // (n - r)
        if marked[si]:
            s = walk.subsets[si]
            for a, b in combinations(s, 2):
                if relation.related(ys[a], ys[b]):
                    pair = (xs[a], xs[b])
                    break
            break
    return CollisionReport(pair=pair, f_evaluations=n, success_probability=success)
