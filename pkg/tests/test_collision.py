import math
from itertools import combinations

import numpy as np
import pytest

from clustertest.collision import (
    JohnsonWalk,
    PairSetRelation,
    Relation,
    exhaustive_collide,
    modeled_quantum_cost,
    quantum_cost_collide,
    quantum_walk_simulate,
    _marked_subsets,
)
from clustertest.errors import TooLarge, WorkBudgetExceeded


def identity(x):
    return x


def test_two_element_collision():
    rep = exhaustive_collide(identity, [1, 2], PairSetRelation([(1, 2)]))
    assert rep.pair == (1, 2)
    assert rep.f_evaluations == 2


def test_empty_relation_evaluates_everything():
    rep = exhaustive_collide(identity, range(10), PairSetRelation([]))
    assert rep.pair is None
    assert rep.f_evaluations == 10


def test_planted_single_collision_found():
    rng = np.random.default_rng(8)
    for _ in range(20):
        xs = list(range(100))
        a, b = sorted(rng.choice(100, size=2, replace=False).tolist())
        rep = exhaustive_collide(identity, xs, PairSetRelation([(a, b)]))
        assert rep.pair == (a, b)
        assert rep.f_evaluations == 100


def test_work_budget():
    with pytest.raises(WorkBudgetExceeded):
        exhaustive_collide(identity, range(100), PairSetRelation([]), work_budget=10)


def test_found_pair_reverifies_fresh():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        pairs = set()
        for _ in range(int(rng.integers(0, 4))):
            a, b = rng.choice(n, size=2, replace=False)
            pairs.add((int(a), int(b)))
        relation = PairSetRelation(pairs)
        rep = exhaustive_collide(identity, range(n), relation)
        if rep.pair is not None:
            x1, x2 = rep.pair
            assert x1 != x2
            assert relation.related(identity(x1), identity(x2))
        else:
            assert not pairs


def test_quantum_cost_formula():
    assert modeled_quantum_cost(8, 2, 1.0) == 8       # 8^(2/3)=4, (1+log2 2)=2
    assert modeled_quantum_cost(1000, 2, 1.0) == 200  # 1000^(2/3)=100
    rep = quantum_cost_collide(identity, range(8), 2, PairSetRelation([]))
    assert rep.modeled_quantum_queries == 8


def test_cost_model_outcome_matches_exhaustive():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(2, 30))
        pairs = []
        if rng.random() < 0.6:
            a, b = rng.choice(n, size=2, replace=False)
            pairs.append((int(a), int(b)))
        relation = PairSetRelation(pairs)
        ex = exhaustive_collide(identity, range(n), relation)
        qc = quantum_cost_collide(identity, range(n), n, relation, constant=2.5)
        assert (ex.pair is None) == (qc.pair is None)
        assert qc.modeled_quantum_queries == modeled_quantum_cost(n, n, 2.5)


class IndexedPairs(PairSetRelation):
    """Same pairs, plus an index-based find_pair (tests the override contract)."""

    def find_pair(self, items):
        items = list(items)
        by_y = {}
        hit = None
        for x, y in items:
            if hit is None:
                for other_y in by_y:
                    if self.related(other_y, y):
                        hit = (by_y[other_y], x)
                        break
            by_y.setdefault(y, x)
        return hit


def test_indexed_find_pair_agrees_with_scan():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(2, 25))
        pairs = set()
        for _ in range(int(rng.integers(0, 4))):
            a, b = rng.choice(n, size=2, replace=False)
            pairs.add((int(a), int(b)))
        scan = exhaustive_collide(identity, range(n), PairSetRelation(pairs))
        indexed = exhaustive_collide(identity, range(n), IndexedPairs(pairs))
        assert (scan.pair is None) == (indexed.pair is None)


# -- quantum walk -------------------------------------------------------------


def test_walk_size_limit():
    with pytest.raises(TooLarge):
        quantum_walk_simulate(identity, range(11), PairSetRelation([]))


def test_walk_step_is_unitary():
    walk = JohnsonWalk(8, 4)
    rng = np.random.default_rng(0)
    state = rng.normal(size=(len(walk.subsets), 4))
    state /= np.linalg.norm(state)
    for _ in range(3):
        state = walk.step(state)
        assert math.isclose(np.linalg.norm(state), 1.0, rel_tol=1e-12)


def test_reflections_preserve_uniform_state():
    walk = JohnsonWalk(6, 3)
    uniform = walk.uniform_state()
    stepped = walk.step(uniform)
    assert np.allclose(stepped, uniform)


def test_initial_marked_mass_single_pair():
    # |X|=4, r=2: exactly one of the six 2-subsets contains the planted pair
    walk = JohnsonWalk(4, 2)
    marked = _marked_subsets(walk, list(range(4)), PairSetRelation([(1, 2)]))
    assert marked.sum() == 1
    state = walk.uniform_state()
    assert math.isclose(float((state[marked] ** 2).sum()), 1 / 6, rel_tol=1e-12)


def test_collision_free_is_exactly_silent():
    for n in (4, 6, 8):
        rep = quantum_walk_simulate(identity, range(n), PairSetRelation([]),
                                    rng=np.random.default_rng(1))
        assert rep.pair is None
        assert rep.success_probability == 0.0
        assert rep.f_evaluations == n


def test_planted_collision_succeeds_after_sweep():
    rep = quantum_walk_simulate(
        identity, range(8), PairSetRelation([(1, 2)]), r=4,
        rng=np.random.default_rng(2),
    )
    assert rep.success_probability >= 0.5
    assert rep.pair == (1, 2)


def test_walk_found_only_when_exhaustive_finds():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(3, 9))
        pairs = []
        if rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False)
            pairs.append((int(a), int(b)))
        relation = PairSetRelation(pairs)
        ex = exhaustive_collide(identity, range(n), relation)
        qw = quantum_walk_simulate(identity, range(n), relation,
                                   rng=np.random.default_rng(int(rng.integers(1 << 31))))
        if qw.pair is not None:
            assert ex.pair is not None
            assert relation.related(qw.pair[0], qw.pair[1])
        if ex.pair is None:
            assert qw.success_probability == 0.0


def test_adding_first_pair_turns_success_on():
    # the weaker true form of marked-mass monotonicity: going from no marked
    # pairs to one marked pair raises the swept success from 0 to >= 0.5
    for n in (4, 5, 6):
        empty = quantum_walk_simulate(identity, range(n), PairSetRelation([]))
        assert empty.success_probability == 0.0
        for pair in combinations(range(n), 2):
            one = quantum_walk_simulate(identity, range(n), PairSetRelation([pair]))
            assert one.success_probability >= 0.5


def test_default_iteration_counts_used_without_sweep():
    rep = quantum_walk_simulate(
        identity, range(8), PairSetRelation([(0, 1)]), r=4, sweep=False,
        rng=np.random.default_rng(0),
    )
    assert 0.0 < rep.success_probability <= 1.0
