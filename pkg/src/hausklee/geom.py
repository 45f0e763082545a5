"""Exact integer axis-aligned geometry.

Objects are products of per-axis intervals with integer endpoints; sides
may be unbounded (``INF`` / ``-INF`` sentinels).  Predicates that involve
open sets (cell interiors, open boxes) are evaluated in *doubled*
coordinates: a closed interval ``[a, b]`` becomes ``[2a, 2b]`` and an open
one ``(a, b)`` becomes ``[2a+1, 2b-1]``, after which every test is an
integer interval comparison.  This keeps boundary and degenerate cases
exact without any epsilon.

Axis indices in `Face2` and `face_weight` are 1-based, matching the usual
"axes 1..d" convention; tuple storage is 0-based.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

INF = float("inf")
NEG_INF = float("-inf")

#: user-facing coordinate budget; internal pipelines may exceed it slightly
#: (doubling, grid offsets) but stay well inside 128-bit headroom.
COORD_LIMIT = 1 << 40

Bound = Union[int, float]  # int, INF or NEG_INF


def _is_coord(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check_bound(v, side: str) -> Bound:
    if v == INF:
        if side == "lo":
            raise ValueError("lo bound cannot be +inf")
        return v
    if v == NEG_INF:
        if side == "hi":
            raise ValueError("hi bound cannot be -inf")
        return v
    if not _is_coord(v):
        raise ValueError(f"{side} bound must be an int or +/-inf, got {v!r}")
    return v


class Classification(enum.Enum):
    TRIVIAL_OUTSIDE = "trivial_outside"
    TRIVIAL_CONTAINS = "trivial_contains"
    LONG = "long"
    SHORT = "short"


@dataclass(frozen=True)
class Orthant:
    """Axis-aligned region with at most one finite bound per axis.

    ``lo[i]`` finite means ``x_i >= lo[i]``; ``hi[i]`` finite means
    ``x_i <= hi[i]``; both infinite means the axis is free.  Orthants are
    closed sets.
    """

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(_check_bound(v, "lo") for v in self.lo)
        hi = tuple(_check_bound(v, "hi") for v in self.hi)
        if len(lo) != len(hi):
            raise ValueError("lo/hi length mismatch")
        if not lo:
            raise ValueError("dimension must be >= 1")
        for a, b in zip(lo, hi):
            if a != NEG_INF and b != INF:
                raise ValueError("orthant axis has two finite bounds")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    @classmethod
    def halfspace(cls, d: int, axis: int, side: str, value: int) -> "Orthant":
        """Single-bound orthant: ``side`` is '>=' or '<=', ``axis`` 0-based."""
        lo = [NEG_INF] * d
        hi = [INF] * d
        if side == ">=":
            lo[axis] = value
        elif side == "<=":
            hi[axis] = value
        else:
            raise ValueError(f"side must be '>=' or '<=', got {side!r}")
        return cls(tuple(lo), tuple(hi))

    @classmethod
    def at_least(cls, apex: Sequence[int]) -> "Orthant":
        """All-axes-lower-bounded orthant with the given apex."""
        return cls(tuple(apex), (INF,) * len(apex))

    @classmethod
    def at_most(cls, apex: Sequence[int]) -> "Orthant":
        return cls((NEG_INF,) * len(apex), tuple(apex))

    def rotated(self, k: int) -> "Orthant":
        d = self.d
        return Orthant(
            tuple(self.lo[(i + k) % d] for i in range(d)),
            tuple(self.hi[(i + k) % d] for i in range(d)),
        )

    def contains_point(self, x: Sequence[int]) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lo, x, self.hi))

    def contains_doubled(self, w: Sequence[int]) -> bool:
        """Membership of a point given in doubled coordinates."""
        return all(2 * a <= v <= 2 * b for a, v, b in zip(self.lo, w, self.hi))


@dataclass(frozen=True)
class AxisBox:
    """Axis-aligned box; ``open_box=True`` makes every finite face open.

    ``lo[i] <= hi[i]`` is required on every axis; a box with ``lo > hi``
    is invalid, never "empty by convention".  (An *open* box with
    ``lo == hi`` on some axis denotes the empty set.)
    """

    lo: tuple
    hi: tuple
    open_box: bool = False

    def __post_init__(self):
        lo = tuple(_check_bound(v, "lo") for v in self.lo)
        hi = tuple(_check_bound(v, "hi") for v in self.hi)
        if len(lo) != len(hi):
            raise ValueError("lo/hi length mismatch")
        if not lo:
            raise ValueError("dimension must be >= 1")
        for a, b in zip(lo, hi):
            if a > b:
                raise ValueError(f"invalid box: lo {a} > hi {b}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    def rotated(self, k: int) -> "AxisBox":
        d = self.d
        return AxisBox(
            tuple(self.lo[(i + k) % d] for i in range(d)),
            tuple(self.hi[(i + k) % d] for i in range(d)),
            self.open_box,
        )

    def contains_doubled(self, w: Sequence[int]) -> bool:
        if self.open_box:
            return all(2 * a < v < 2 * b for a, v, b in zip(self.lo, w, self.hi))
        return all(2 * a <= v <= 2 * b for a, v, b in zip(self.lo, w, self.hi))


@dataclass(frozen=True)
class Cell:
    """Finite closed box: the recursion cell / clip region."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(self.lo)
        hi = tuple(self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("bad cell bounds")
        for a, b in zip(lo, hi):
            if not (_is_coord(a) and _is_coord(b)):
                raise ValueError("cell bounds must be finite ints")
            if a > b:
                raise ValueError(f"invalid cell: lo {a} > hi {b}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    def rotated(self, k: int) -> "Cell":
        d = self.d
        return Cell(
            tuple(self.lo[(i + k) % d] for i in range(d)),
            tuple(self.hi[(i + k) % d] for i in range(d)),
        )

    def contains_doubled(self, w: Sequence[int]) -> bool:
        return all(2 * a <= v <= 2 * b for a, v, b in zip(self.lo, w, self.hi))

    def as_box(self) -> AxisBox:
        return AxisBox(self.lo, self.hi)


@dataclass(frozen=True)
class ColoredOrthant:
    orthant: Orthant
    color: int

    @property
    def d(self) -> int:
        return self.orthant.d

    def rotated(self, k: int) -> "ColoredOrthant":
        return ColoredOrthant(self.orthant.rotated(k), self.color)


@dataclass(frozen=True)
class Face2:
    """A (d-2)-face: two axes pinned at fixed coordinates.

    ``axes`` is a 1-based pair ``(i, j)`` with ``i < j``; ``kind`` is "B"
    for faces of colored orthants and "E" for faces of extra boxes.
    """

    owner: object
    axes: tuple
    fixed: tuple
    kind: str


GeomObject = Union[Orthant, AxisBox]


def _axis_intervals_doubled(obj: GeomObject):
    """Per-axis (dlo, dhi) of the object in doubled coordinates."""
    if isinstance(obj, AxisBox) and obj.open_box:
        return [
            (2 * a + 1 if a != NEG_INF else NEG_INF, 2 * b - 1 if b != INF else INF)
            for a, b in zip(obj.lo, obj.hi)
        ]
    return [
        (2 * a if a != NEG_INF else NEG_INF, 2 * b if b != INF else INF)
        for a, b in zip(obj.lo, obj.hi)
    ]


def _relint_doubled(a: Bound, b: Bound):
    """Doubled form of the relative interior of [a, b] ((a,b), or {a} if a==b)."""
    if a == b:
        return (2 * a, 2 * a)
    return (2 * a + 1 if a != NEG_INF else NEG_INF, 2 * b - 1 if b != INF else INF)


def _bare(obj: GeomObject) -> GeomObject:
    return obj.orthant if isinstance(obj, ColoredOrthant) else obj


def classify_object(obj, cell: Cell) -> Classification:
    """Classify an orthant or box against a cell.

    Short: some (d-2)-face of the object meets the cell's interior.
    Long: meets the interior but is not short.  Trivial otherwise
    (either disjoint from the interior, or containing the whole cell).
    """
    bare = _bare(obj)
    if bare.d != cell.d:
        raise ValueError(f"dimension mismatch: object d={bare.d}, cell d={cell.d}")
    ivals = _axis_intervals_doubled(bare)
    # containment of the closed cell
    if all(dlo <= 2 * c and 2 * e <= dhi for (dlo, dhi), c, e in zip(ivals, cell.lo, cell.hi)):
        return Classification.TRIVIAL_CONTAINS
    # disjoint from the open interior
    for (dlo, dhi), c, e in zip(ivals, cell.lo, cell.hi):
        if max(dlo, 2 * c + 1) > min(dhi, 2 * e - 1):
            return Classification.TRIVIAL_OUTSIDE
    if enumerate_faces(obj, cell):
        return Classification.SHORT
    return Classification.LONG


def enumerate_faces(obj, cell: Cell) -> list:
    """All (d-2)-faces of the object whose relative interior meets the
    cell's interior.  For d=2 these are vertices, reported with axes (1, 2).
    """
    bare = _bare(obj)
    if bare.d != cell.d:
        raise ValueError(f"dimension mismatch: object d={bare.d}, cell d={cell.d}")
    d = bare.d
    kind = "B" if isinstance(bare, Orthant) else "E"
    if isinstance(bare, AxisBox) and bare.open_box:
        if any(a == b for a, b in zip(bare.lo, bare.hi)):
            return []  # a degenerate open box is the empty set
    # per-axis finite endpoints that can pin a face, and whether the
    # relative interior of the object's interval meets the cell interior
    endpoints: list = []
    relint_ok: list = []
    for ax in range(d):
        a, b = bare.lo[ax], bare.hi[ax]
        pts = []
        if a != NEG_INF:
            pts.append(a)
        if b != INF and b != a:
            pts.append(b)
        endpoints.append(pts)
        rlo, rhi = _relint_doubled(a, b)
        c, e = cell.lo[ax], cell.hi[ax]
        relint_ok.append(max(rlo, 2 * c + 1) <= min(rhi, 2 * e - 1))
    faces = []
    for i in range(d):
        pin_i = [p for p in endpoints[i] if cell.lo[i] < p < cell.hi[i]]
        if not pin_i:
            continue
        for j in range(i + 1, d):
            pin_j = [p for p in endpoints[j] if cell.lo[j] < p < cell.hi[j]]
            if not pin_j:
                continue
            if not all(relint_ok[k] for k in range(d) if k != i and k != j):
                continue
            for pi in pin_i:
                for pj in pin_j:
                    faces.append(Face2(obj, (i + 1, j + 1), (pi, pj), kind))
    return faces


def face_weight(axes: tuple, kind: str, t: float, d: int) -> float:
    """Weight of a (d-2)-face orthogonal to 1-based axes (i, j).

    B-faces weigh ``2**((i+j)/d)``, E-faces ``2**((i+j)/d) / t``.  Weights
    steer median splits and recursion accounting only; exact answers never
    depend on them.
    """
    i, j = axes
    if not (1 <= i < j <= d):
        raise ValueError(f"need 1 <= i < j <= d, got axes={axes}, d={d}")
    w = 2.0 ** ((i + j) / d)
    if kind == "E":
        if t < 1:
            raise ValueError("t must be >= 1")
        return w / t
    if kind != "B":
        raise ValueError(f"kind must be 'B' or 'E', got {kind!r}")
    return w


def rotate_axes(x, k: int):
    """Cyclic left shift of axis data by k: axes 1..d become 2..d,1 (k=1)."""
    d = getattr(x, "d")
    if not (0 <= k < d):
        raise ValueError(f"need 0 <= k < d, got k={k}, d={d}")
    return x.rotated(k)


@dataclass(frozen=True)
class RankMap:
    """Per-axis order-preserving map between coordinates and even ranks.

    ``forward`` sends the r-th smallest distinct value on an axis to
    ``2r``; odd codes denote the open gaps between consecutive values.
    ``backward`` returns representatives in doubled original coordinates
    (evens map back exactly, odds to the gap midpoint).
    """

    values: tuple  # per axis: tuple of sorted distinct ints

    @property
    def d(self) -> int:
        return len(self.values)

    def forward(self, axis: int, v: int) -> int:
        vals = self.values[axis]
        i = bisect_left(vals, v)
        if i == len(vals) or vals[i] != v:
            raise KeyError(f"value {v} not present on axis {axis}")
        return 2 * i

    def backward(self, axis: int, code: int) -> int:
        """Representative of a rank code, in doubled original coordinates."""
        vals = self.values[axis]
        if not (0 <= code <= 2 * len(vals) - 2):
            raise KeyError(f"code {code} out of range on axis {axis}")
        if code % 2 == 0:
            return 2 * vals[code // 2]
        k = code // 2
        return vals[k] + vals[k + 1]

    def encode_bound(self, axis: int, v: Bound, shift: int = 0) -> Bound:
        """Rank-encode one bound; infinities pass through, ``shift`` is the
        openness adjustment (+1 / -1) applied after doubling the rank."""
        if v == INF or v == NEG_INF:
            return v
        return self.forward(axis, v) + shift


def rank_space_encode(objects: Iterable, cell: Cell):
    """Encode objects and a cell into doubled rank space.

    Closed intervals ``[a, b]`` map to ``[2r_a, 2r_b]``, open ones to
    ``[2r_a+1, 2r_b-1]``; a colorful point exists in real space iff an
    integer point exists in encoded space.  Returns
    ``(encoded_objects, encoded_cell, rank_map)``.
    """
    objects = list(objects)
    d = cell.d
    per_axis = [set() for _ in range(d)]
    for ax in range(d):
        per_axis[ax].add(cell.lo[ax])
        per_axis[ax].add(cell.hi[ax])
    for obj in objects:
        bare = _bare(obj)
        if bare.d != d:
            raise ValueError("dimension mismatch in rank_space_encode")
        for ax in range(d):
            for v in (bare.lo[ax], bare.hi[ax]):
                if v != INF and v != NEG_INF:
                    per_axis[ax].add(v)
    rm = RankMap(tuple(tuple(sorted(s)) for s in per_axis))

    def enc(obj):
        if isinstance(obj, ColoredOrthant):
            return ColoredOrthant(enc(obj.orthant), obj.color)
        if isinstance(obj, Orthant):
            return Orthant(
                tuple(rm.encode_bound(ax, v) for ax, v in enumerate(obj.lo)),
                tuple(rm.encode_bound(ax, v) for ax, v in enumerate(obj.hi)),
            )
        if isinstance(obj, AxisBox):
            s = 1 if obj.open_box else 0
            return AxisBox(
                tuple(rm.encode_bound(ax, v, +s) for ax, v in enumerate(obj.lo)),
                tuple(rm.encode_bound(ax, v, -s) for ax, v in enumerate(obj.hi)),
                open_box=False,
            )
        raise TypeError(f"cannot rank-encode {type(obj).__name__}")

    enc_cell = Cell(
        tuple(rm.forward(ax, v) for ax, v in enumerate(cell.lo)),
        tuple(rm.forward(ax, v) for ax, v in enumerate(cell.hi)),
    )
    return [enc(o) for o in objects], enc_cell, rm
