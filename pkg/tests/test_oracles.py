"""Brute-force oracles: hand-checked values and internal consistency."""

import random

import pytest

from hausklee.errors import CapacityError, InputError
from hausklee.formats import gen_gkmp, gen_graph
from hausklee.geom import AxisBox, Cell, ColoredOrthant, Orthant
from hausklee.gkmp import Ebox, GkmpInstance
from hausklee.oracles import (
    Graph,
    brute_clique,
    is_clique,
    oracle_colorful_point,
    oracle_depth,
    oracle_min_hausdorff,
    oracle_volume,
)


def _inst(d, n_colors, orthants, eboxes, clip_lo, clip_hi, offset=0):
    return GkmpInstance(
        d,
        n_colors,
        tuple(ColoredOrthant(o, c) for c, o in orthants),
        tuple(Ebox(b, w) for b, w in eboxes),
        Cell(clip_lo, clip_hi),
        offset,
    )


INST24 = _inst(
    2,
    2,
    [(0, Orthant.at_least((2, 0))), (1, Orthant.at_most((6, 6)))],
    [],
    (0, 0),
    (8, 8),
)


def test_oracle_volume_examples():
    assert oracle_volume(INST24) == 24
    with_open = GkmpInstance(
        2,
        2,
        INST24.orthants,
        (Ebox(AxisBox((4, 0), (5, 6), open_box=True), 0),),
        INST24.clip,
    )
    assert oracle_volume(with_open) == 18
    two_squares = _inst(
        2,
        2,
        [
            (0, Orthant.at_least((4, 4))),
            (0, Orthant.at_most((2, 2))),
            (1, Orthant.at_least((0, 0))),
        ],
        [],
        (0, 0),
        (6, 6),
    )
    assert oracle_volume(two_squares) == 8


def test_oracle_volume_additive_under_clip_split():
    rng = random.Random(99)
    for _ in range(60):
        d = rng.choice([2, 3])
        nc = rng.randint(1, 3)
        inst = gen_gkmp(d, nc, rng.randint(nc, 10), 8, rng.randrange(10**6))
        total = oracle_volume(inst)
        ax = rng.randrange(d)
        cut = rng.randint(0, 8)
        lo1, hi1 = list(inst.clip.lo), list(inst.clip.hi)
        lo2, hi2 = list(inst.clip.lo), list(inst.clip.hi)
        hi1[ax] = cut
        lo2[ax] = cut
        left = GkmpInstance(
            d, inst.n_colors, inst.orthants, inst.eboxes, Cell(tuple(lo1), tuple(hi1))
        )
        right = GkmpInstance(
            d, inst.n_colors, inst.orthants, inst.eboxes, Cell(tuple(lo2), tuple(hi2))
        )
        assert oracle_volume(left) + oracle_volume(right) == total


def test_oracle_colorful_examples():
    touching = _inst(
        2,
        2,
        [(0, Orthant.at_most((1, 1))), (1, Orthant.at_least((1, 1)))],
        [],
        (0, 0),
        (4, 4),
    )
    assert oracle_colorful_point(touching) == (2, 2)  # doubled corner
    disjoint = _inst(
        2,
        2,
        [(0, Orthant.at_most((1, 1))), (1, Orthant.at_least((2, 2)))],
        [],
        (0, 0),
        (4, 4),
    )
    assert oracle_colorful_point(disjoint) is None


def test_oracle_colorful_iff_depth_max_counts_all_colors():
    rng = random.Random(123)
    for _ in range(80):
        d = rng.choice([2, 3])
        nc = rng.randint(1, 4)
        inst = gen_gkmp(d, nc, rng.randint(nc, 10), 8, rng.randrange(10**6))
        got = oracle_colorful_point(inst)
        depth, _ = oracle_depth(inst, "max")
        assert (got is not None) == (depth == nc)


def test_oracle_depth_examples():
    inst = _inst(
        2,
        2,
        [
            (0, Orthant.at_least((4, 4))),
            (0, Orthant.at_most((2, 2))),
            (1, Orthant.at_least((0, 0))),
        ],
        [],
        (0, 0),
        (6, 6),
    )
    assert oracle_depth(inst, "max")[0] == 2
    assert oracle_depth(inst, "min")[0] == 1
    empty = _inst(2, 0, [], [], (0, 0), (5, 5))
    assert oracle_depth(empty, "max")[0] == 0
    assert oracle_depth(empty, "min")[0] == 0


def test_oracle_depth_weighted_eboxes_and_offset():
    inst = _inst(
        2,
        1,
        [(0, Orthant.at_least((0, 0)))],
        [(AxisBox((1, 1), (2, 2)), 5), (AxisBox((1, 1), (1, 1)), -2)],
        (0, 0),
        (4, 4),
        offset=7,
    )
    # max: inside the weight-5 box but off the weight--2 point
    assert oracle_depth(inst, "max")[0] == 1 + 5 + 7
    assert oracle_depth(inst, "min")[0] == 1 + 7


def test_oracle_capacity_error():
    big = gen_gkmp(4, 2, 8, 16, 3)
    with pytest.raises(CapacityError):
        oracle_volume(big, budget=10)
    with pytest.raises(CapacityError):
        oracle_colorful_point(big, budget=10)


def test_oracle_rejects_weighted_eboxes_for_volume():
    inst = _inst(
        2, 1, [(0, Orthant.at_least((0, 0)))], [(AxisBox((1, 1), (2, 2)), 3)], (0, 0), (4, 4)
    )
    with pytest.raises(InputError):
        oracle_volume(inst)


def test_brute_clique_examples():
    k4 = Graph.complete(4)
    assert brute_clique(k4, 3)
    path3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert not brute_clique(path3, 3)
    empty = Graph.from_edges(3, [])
    assert not brute_clique(empty, 2)
    assert brute_clique(empty, 1)
    assert is_clique(k4, [0, 1, 2])
    assert not is_clique(k4, [0, 0, 1])


def test_oracle_min_hausdorff_examples():
    assert oracle_min_hausdorff([(0, 0)], [(5, 7)]) == 0
    assert oracle_min_hausdorff([(0, 0), (2, 0)], [(0, 0)]) == 2  # doubled distance 1
    pts = [(1, 5), (3, 2), (9, 9)]
    assert oracle_min_hausdorff(pts, pts) == 0


def test_oracle_min_hausdorff_equivariance():
    rng = random.Random(5150)
    for _ in range(20):
        d = rng.choice([2, 3])
        P = [tuple(rng.randint(0, 12) for _ in range(d)) for _ in range(rng.randint(1, 5))]
        Q = [tuple(rng.randint(0, 12) for _ in range(d)) for _ in range(rng.randint(1, 5))]
        base = oracle_min_hausdorff(P, Q)
        shift = tuple(rng.randint(-5, 5) for _ in range(d))
        P2 = [tuple(a + s for a, s in zip(p, shift)) for p in P]
        Q2 = [tuple(a + s for a, s in zip(q, shift)) for q in Q]
        assert oracle_min_hausdorff(P2, Q2) == base
        # translating P alone never changes the optimum either
        P3 = [tuple(a + s for a, s in zip(p, shift)) for p in P]
        assert oracle_min_hausdorff(P3, Q) == base
        k = rng.randint(2, 4)
        Pk = [tuple(k * a for a in p) for p in P]
        Qk = [tuple(k * a for a in q) for q in Q]
        assert oracle_min_hausdorff(Pk, Qk) == k * base


def test_oracle_min_hausdorff_capacity():
    P = [(i, 0) for i in range(15)]
    Q = [(i, 1) for i in range(15)]
    with pytest.raises(CapacityError):
        oracle_min_hausdorff(P, Q)
