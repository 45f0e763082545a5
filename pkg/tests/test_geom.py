"""Exact-geometry primitives: classification, faces, weights, rank space."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hausklee.geom import (
    INF,
    NEG_INF,
    AxisBox,
    Cell,
    Classification,
    ColoredOrthant,
    Orthant,
    classify_object,
    enumerate_faces,
    face_weight,
    rank_space_encode,
    rotate_axes,
)


CELL2 = Cell((0, 0), (2, 2))


def test_classify_examples():
    assert classify_object(Orthant.at_least((1, 1)), CELL2) is Classification.SHORT
    assert classify_object(Orthant((1, -5), (INF, INF)), CELL2) is Classification.LONG
    assert classify_object(AxisBox((3, 0), (4, 1)), CELL2) is Classification.TRIVIAL_OUTSIDE
    assert (
        classify_object(Orthant((NEG_INF, NEG_INF), (5, 5)), CELL2)
        is Classification.TRIVIAL_CONTAINS
    )


def test_classify_dimension_mismatch():
    with pytest.raises(ValueError):
        classify_object(Orthant.at_least((1, 1, 1)), CELL2)


def test_enumerate_faces_examples():
    faces = enumerate_faces(Orthant.at_least((1, 1)), CELL2)
    assert [(f.axes, f.fixed, f.kind) for f in faces] == [((1, 2), (1, 1), "B")]
    assert enumerate_faces(Orthant((1, -5), (INF, INF)), CELL2) == []
    cell3 = Cell((0, 0, 0), (2, 2, 2))
    faces = enumerate_faces(AxisBox((1, 1, 1), (3, 3, 3)), cell3)
    assert sorted((f.axes, f.fixed) for f in faces) == [
        ((1, 2), (1, 1)),
        ((1, 3), (1, 1)),
        ((2, 3), (1, 1)),
    ]
    assert all(f.kind == "E" for f in faces)


def test_face_weight_examples():
    assert face_weight((1, 2), "B", 1, 4) == pytest.approx(2 ** 0.75)
    assert face_weight((3, 4), "E", 8, 4) == pytest.approx(2 ** 1.75 / 8)
    assert face_weight((1, 2), "B", 1, 2) == pytest.approx(2 ** 1.5)
    with pytest.raises(ValueError):
        face_weight((2, 2), "B", 1, 4)


def test_rotate_examples():
    box = AxisBox((0, 2, 4), (1, 3, 5))
    assert rotate_axes(box, 1) == AxisBox((2, 4, 0), (3, 5, 1))
    assert rotate_axes(box, 0) == box
    orth = Orthant((10, NEG_INF, NEG_INF, 30), (INF, 20, INF, INF))
    got = rotate_axes(orth, 1)
    assert got == Orthant((NEG_INF, NEG_INF, 30, 10), (20, INF, INF, INF))


@given(st.integers(2, 6), st.integers(1, 5), st.data())
@settings(max_examples=60, deadline=None)
def test_rotation_period(d, k, data):
    k = k % d
    lo = tuple(data.draw(st.integers(-5, 5)) for _ in range(d))
    hi = tuple(a + data.draw(st.integers(0, 5)) for a in lo)
    box = AxisBox(lo, hi)
    assert rotate_axes(rotate_axes(box, k), (d - k) % d if k else 0) == box
    # full cycle is the identity
    cur = box
    for _ in range(d):
        cur = rotate_axes(cur, 1)
    assert cur == box


def _random_object(rng, d, span):
    if rng.random() < 0.5:
        lo = [NEG_INF] * d
        hi = [INF] * d
        for ax in range(d):
            roll = rng.random()
            if roll < 0.2:
                continue
            v = rng.randint(-1, span + 1)
            if roll < 0.6:
                lo[ax] = v
            else:
                hi[ax] = v
        return Orthant(tuple(lo), tuple(hi))
    lo = []
    hi = []
    for ax in range(d):
        a = rng.randint(-1, span + 1)
        b = rng.randint(-1, span + 1)
        lo.append(min(a, b))
        hi.append(max(a, b))
    return AxisBox(tuple(lo), tuple(hi), open_box=rng.random() < 0.3)


def test_classify_enumerate_consistency():
    rng = random.Random(20240)
    for d in (2, 3, 4, 5):
        for _ in range(2500):
            cell = Cell((0,) * d, tuple(rng.randint(1, 6) for _ in range(d)))
            obj = _random_object(rng, d, 6)
            cls = classify_object(obj, cell)
            has_faces = bool(enumerate_faces(obj, cell))
            assert (cls is Classification.SHORT) == has_faces


def _covers_doubled(obj, w):
    return obj.contains_doubled(w)


def test_long_orthant_halfspace_property():
    rng = random.Random(77)
    checked = 0
    while checked < 400:
        d = rng.choice([2, 3, 4])
        cell = Cell((0,) * d, tuple(rng.randint(2, 6) for _ in range(d)))
        obj = _random_object(rng, d, 6)
        if not isinstance(obj, Orthant):
            continue
        if classify_object(obj, cell) is not Classification.LONG:
            continue
        checked += 1
        crossing = [
            ax
            for ax in range(d)
            for v in (obj.lo[ax], obj.hi[ax])
            if v not in (INF, NEG_INF) and cell.lo[ax] < v < cell.hi[ax]
        ]
        assert len(crossing) == 1
        ax = crossing[0]
        # inside the cell the orthant is the halfspace of its crossing facet
        half = (
            Orthant.halfspace(d, ax, ">=", obj.lo[ax])
            if obj.lo[ax] != NEG_INF
            else Orthant.halfspace(d, ax, "<=", obj.hi[ax])
        )
        for _ in range(40):
            w = tuple(2 * rng.randint(cell.lo[k], cell.hi[k]) for k in range(d))
            assert _covers_doubled(obj, w) == _covers_doubled(half, w)


def test_long_box_slab_property():
    rng = random.Random(78)
    checked = 0
    while checked < 300:
        d = rng.choice([2, 3, 4])
        cell = Cell((0,) * d, tuple(rng.randint(2, 6) for _ in range(d)))
        obj = _random_object(rng, d, 6)
        if not isinstance(obj, AxisBox) or obj.open_box:
            continue
        if classify_object(obj, cell) is not Classification.LONG:
            continue
        checked += 1
        crossing_axes = {
            ax
            for ax in range(d)
            for v in (obj.lo[ax], obj.hi[ax])
            if cell.lo[ax] < v < cell.hi[ax]
        }
        assert len(crossing_axes) == 1
        for ax in range(d):
            if ax not in crossing_axes:
                assert obj.lo[ax] <= cell.lo[ax] and obj.hi[ax] >= cell.hi[ax]


def test_rank_space_encode_examples():
    cell = Cell((3,), (10,))
    objs = [
        AxisBox((3,), (7,)),
        AxisBox((7,), (7,)),
        AxisBox((3,), (7,), open_box=True),
    ]
    enc, enc_cell, rm = rank_space_encode(objs, cell)
    assert rm.values[0] == (3, 7, 10)
    assert [rm.forward(0, v) for v in (3, 7, 10)] == [0, 2, 4]
    assert (enc[0].lo, enc[0].hi) == ((0,), (2,))
    assert (enc[2].lo, enc[2].hi) == ((1,), (1,))
    assert enc_cell == Cell((0,), (4,))
    # gap decoding: midpoint in doubled original coordinates
    assert rm.backward(0, 3) == 17
    assert rm.backward(0, 2) == 14
    with pytest.raises(KeyError):
        rm.backward(0, 5)


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=12, unique=True))
@settings(max_examples=80, deadline=None)
def test_rank_roundtrip(values):
    values = sorted(values)
    cell = Cell((values[0],), (values[-1],))
    objs = [AxisBox((v,), (v,)) for v in values]
    _, _, rm = rank_space_encode(objs, cell)
    for v in values:
        code = rm.forward(0, v)
        assert code % 2 == 0
        assert rm.backward(0, code) == 2 * v
    codes = [rm.forward(0, v) for v in values]
    assert codes == sorted(codes)


def test_rank_space_preserves_colorful_existence():
    # random small colored closed-box families: decision before encoding
    # (exhaustive doubled-grid check) equals integer-grid decision after
    rng = random.Random(4242)
    from itertools import product

    for _ in range(120):
        d = rng.choice([1, 2])
        span = 6
        cell = Cell((0,) * d, (span,) * d)
        n_colors = rng.randint(1, 3)
        objs = []
        for color in range(n_colors):
            for _ in range(rng.randint(1, 3)):
                lo, hi = [], []
                for ax in range(d):
                    a, b = rng.randint(0, span), rng.randint(0, span)
                    lo.append(min(a, b))
                    hi.append(max(a, b))
                objs.append((color, AxisBox(tuple(lo), tuple(hi))))

        def colorful(boxes, grid):
            for w in product(*[grid] * d):
                if all(
                    any(b.contains_doubled(w) for c2, b in boxes if c2 == c)
                    for c in range(n_colors)
                ):
                    return True
            return False

        before = colorful(objs, range(0, 2 * span + 1))
        enc, enc_cell, rm = rank_space_encode([b for _, b in objs], cell)
        enc_objs = list(zip([c for c, _ in objs], enc))
        k = len(rm.values[0])
        after = colorful(enc_objs, range(0, 2 * (2 * k - 2) + 1))
        assert before == after
