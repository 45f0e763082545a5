"""Translational Hausdorff: decision, candidates, optimization."""

import random

import pytest

from hausklee.errors import InputError
from hausklee.formats import gen_hausdorff
from hausklee.hausdorff import (
    HausdorffInstance,
    build_cell_instances,
    candidate_values,
    decide_translation,
    directed_hausdorff_linf,
    min_hausdorff_translation,
    shifted_directed_r2,
)
from hausklee.oracles import oracle_min_hausdorff


def test_directed_examples():
    assert directed_hausdorff_linf([(0, 0)], [(1, 2)]) == 4
    pts = [(3, 1), (0, 7)]
    assert directed_hausdorff_linf(pts, pts) == 0
    assert directed_hausdorff_linf([(0, 0), (3, 0)], [(0, 0)]) == 6
    with pytest.raises(InputError):
        directed_hausdorff_linf([], [(0, 0)])


def test_candidate_values_examples():
    assert candidate_values([(0, 0), (2, 0)], [(0, 0)]) == [0, 2]
    assert candidate_values([(4, 9)], [(7, 2)]) == [0]
    rng = random.Random(11)
    for _ in range(30):
        d = rng.choice([2, 3])
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        P = [tuple(rng.randint(0, 9) for _ in range(d)) for _ in range(n)]
        Q = [tuple(rng.randint(0, 9) for _ in range(d)) for _ in range(m)]
        cands = candidate_values(P, Q)
        assert cands[0] == 0
        assert cands == sorted(set(cands))
        assert len(cands) <= d * (n * m) ** 2 + 1


def test_build_cell_instances_shapes():
    P = [(0, 0), (2, 0)]
    Q = [(0, 0)]
    instances = build_cell_instances(P, Q, 2)
    assert all(inst.n_colors == 2 for inst in instances)
    total_fragments = sum(len(inst.orthants) for inst in instances)
    assert total_fragments <= 2 ** 2 * len(P) * len(Q) * 2  # cubes split across cells
    # single-pair instances are feasible for every r2 > 0
    for r2 in (1, 2, 5):
        one = build_cell_instances([(3, 4)], [(7, 7)], r2)
        assert len(one) >= 1
    with pytest.raises(InputError):
        build_cell_instances(P, Q, 0)


def test_fragment_count_bound():
    rng = random.Random(321)
    for _ in range(40):
        d = rng.choice([2, 3])
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        P = [tuple(rng.randint(0, 15) for _ in range(d)) for _ in range(n)]
        Q = [tuple(rng.randint(0, 15) for _ in range(d)) for _ in range(m)]
        r2 = rng.randint(1, 20)
        total = sum(
            len(inst.orthants) for inst in build_cell_instances(P, Q, r2)
        )
        assert total <= 2 ** d * n * m


def test_decide_examples():
    P = [(0, 0), (2, 0)]
    Q = [(0, 0)]
    got = decide_translation(P, Q, 2)
    assert got is not None and shifted_directed_r2(P, Q, got) <= 2
    assert decide_translation(P, Q, 1) is None
    assert decide_translation(P, Q, 0) is None
    assert decide_translation(P, Q, -3) is None
    # upper range is always feasible
    top = directed_hausdorff_linf(P, Q)
    assert decide_translation(P, Q, top) is not None
    # exact matching at r2 = 0
    got = decide_translation([(1, 1), (3, 4)], [(2, 2), (4, 5)], 0)
    assert got == (2, 2)


def test_decide_monotone_in_r2():
    rng = random.Random(77)
    for _ in range(25):
        d = rng.choice([2, 3])
        inst = gen_hausdorff(d, rng.randint(1, 5), rng.randint(1, 5), 12, rng.randrange(10**6))
        cands = candidate_values(inst.P, inst.Q)
        feas = [decide_translation(inst.P, inst.Q, r2) is not None for r2 in cands]
        assert feas == sorted(feas)  # False... then True...


def test_min_translation_examples():
    r2, w = min_hausdorff_translation([(0, 0)], [(5, 7)])
    assert r2 == 0 and w == (10, 14)
    r2, w = min_hausdorff_translation([(0, 0), (2, 0)], [(0, 0)])
    assert r2 == 2
    assert shifted_directed_r2([(0, 0), (2, 0)], [(0, 0)], w) == 2


def test_min_translation_matches_oracle_random():
    rng = random.Random(10**6 + 7)
    for _ in range(40):
        d = rng.choice([2, 3])
        inst = gen_hausdorff(d, rng.randint(1, 6), rng.randint(1, 6), 20, rng.randrange(10**9))
        r2, w = min_hausdorff_translation(inst.P, inst.Q)
        assert r2 == oracle_min_hausdorff(inst.P, inst.Q)
        assert shifted_directed_r2(inst.P, inst.Q, w) == r2
        assert decide_translation(inst.P, inst.Q, r2 - 1) is None
        assert r2 <= directed_hausdorff_linf(inst.P, inst.Q)


def test_equivariance():
    rng = random.Random(2024)
    for _ in range(20):
        d = rng.choice([2, 3])
        inst = gen_hausdorff(d, rng.randint(1, 4), rng.randint(1, 4), 12, rng.randrange(10**9))
        base, _ = min_hausdorff_translation(inst.P, inst.Q)
        shift = tuple(rng.randint(-6, 6) for _ in range(d))
        P2 = tuple(tuple(a + s for a, s in zip(p, shift)) for p in inst.P)
        Q2 = tuple(tuple(a + s for a, s in zip(q, shift)) for q in inst.Q)
        assert min_hausdorff_translation(P2, Q2)[0] == base
        assert min_hausdorff_translation(P2, inst.Q)[0] == base
        k = rng.randint(2, 3)
        Pk = tuple(tuple(k * a for a in p) for p in inst.P)
        Qk = tuple(tuple(k * a for a in q) for q in inst.Q)
        assert min_hausdorff_translation(Pk, Qk)[0] == k * base


def test_instance_validation():
    with pytest.raises(InputError):
        HausdorffInstance(2, (), ((0, 0),))
    with pytest.raises(InputError):
        HausdorffInstance(2, ((0, 0, 0),), ((0, 0),))
    with pytest.raises(InputError):
        HausdorffInstance(2, ((1 << 41, 0),), ((0, 0),))
