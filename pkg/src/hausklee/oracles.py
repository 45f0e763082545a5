"""Brute-force reference implementations.

These are the ground truth for every solver in the package: compressed
grid enumerations for volume/emptiness/depth queries and exhaustive
searches for clique detection and the translational Hausdorff optimum.
They deliberately run in time (and memory) exponential in the dimension
and enforce explicit capacity budgets instead of silently grinding.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError
from .geom import INF, NEG_INF, RankMap
from .gkmp import GkmpInstance

DEFAULT_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# compressed grids


@dataclass(frozen=True)
class CompressedGrid:
    """Per-axis event coordinates of an instance, restricted to the clip.

    Grid cells (event hyperplanes and the open gaps between them) partition
    the clip region, and every instance object is a union of whole grid
    cells within it.
    """

    rank_map: RankMap

    @property
    def d(self) -> int:
        return self.rank_map.d

    def gap_lengths(self, axis: int) -> np.ndarray:
        vals = self.rank_map.values[axis]
        return np.diff(np.array(vals, dtype=np.int64))

    def n_positions(self, axis: int) -> int:
        return 2 * len(self.rank_map.values[axis]) - 1


def build_compressed_grid(inst: GkmpInstance) -> CompressedGrid:
    d = inst.d
    per_axis = [set() for _ in range(d)]
    for ax in range(d):
        per_axis[ax].add(inst.clip.lo[ax])
        per_axis[ax].add(inst.clip.hi[ax])
    boxes = [co.orthant for co in inst.orthants] + [eb.box for eb in inst.eboxes]
    for b in boxes:
        for ax in range(d):
            for v in (b.lo[ax], b.hi[ax]):
                if v not in (INF, NEG_INF) and inst.clip.lo[ax] < v < inst.clip.hi[ax]:
                    per_axis[ax].add(int(v))
    return CompressedGrid(RankMap(tuple(tuple(sorted(s)) for s in per_axis)))


def _gap_range(vals, a, b):
    """Indices of gap cells (vals[g], vals[g+1]) fully inside [a, b]."""
    if a == NEG_INF or a <= vals[0]:
        ga = 0
    elif a > vals[-1]:
        return None
    else:
        ga = bisect_left(vals, a)
    if b == INF or b >= vals[-1]:
        gb = len(vals) - 2
    elif b < vals[0]:
        return None
    else:
        gb = bisect_left(vals, b) - 1
    return (ga, gb) if ga <= gb else None


def _code_range(vals, a, b, open_box):
    """Rank codes (0..2K-2) covered by the interval; None if empty here."""
    if open_box:
        if a == NEG_INF or a < vals[0]:
            ca = 0
        elif a > vals[-1]:
            return None
        else:
            ca = 2 * bisect_left(vals, a) + 1
        if b == INF or b > vals[-1]:
            cb = 2 * (len(vals) - 1)
        elif b < vals[0]:
            return None
        else:
            cb = 2 * bisect_left(vals, b) - 1
    else:
        if a == NEG_INF or a <= vals[0]:
            ca = 0
        elif a > vals[-1]:
            return None
        else:
            ca = 2 * bisect_left(vals, a)
        if b == INF or b >= vals[-1]:
            cb = 2 * (len(vals) - 1)
        elif b < vals[0]:
            return None
        else:
            cb = 2 * bisect_left(vals, b)
    return (ca, cb) if ca <= cb else None


def _check_budget(counts, budget, what):
    total = 1
    for c in counts:
        total *= max(int(c), 0)
        if total > budget:
            raise CapacityError(
                f"{what}: grid of {'x'.join(str(int(x)) for x in counts)} cells "
                f"exceeds the budget of {budget}"
            )
    return total


def _slices(ranges):
    return tuple(slice(a, b + 1) for a, b in ranges)


def _object_ranges(vals_per_axis, lo, hi, open_box, ranger):
    out = []
    for ax, vals in enumerate(vals_per_axis):
        r = ranger(vals, lo[ax], hi[ax], open_box) if ranger is _code_range else ranger(
            vals, lo[ax], hi[ax]
        )
        if r is None:
            return None
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# volume


def oracle_volume(inst: GkmpInstance, budget: int = DEFAULT_BUDGET) -> int:
    """Exact volume of the colorful region minus exclusions, inside the
    clip, by enumerating all full-dimensional compressed grid cells.

    Openness flags never change a volume.  Raises CapacityError instead of
    enumerating more cells than the budget allows.
    """
    inst.validate()
    for eb in inst.eboxes:
        if eb.weight != 0:
            raise InputError("oracle_volume expects weight-0 eboxes")
    grid = build_compressed_grid(inst)
    vals_per_axis = grid.rank_map.values
    gaps = [len(v) - 1 for v in vals_per_axis]
    if any(g <= 0 for g in gaps):
        return 0
    _check_budget(gaps, budget, "oracle_volume")

    feasible = np.ones(tuple(gaps), dtype=bool)
    for color in range(inst.n_colors):
        cover = np.zeros(tuple(gaps), dtype=bool)
        for co in inst.orthants:
            if co.color != color:
                continue
            rng = _object_ranges(vals_per_axis, co.orthant.lo, co.orthant.hi, False, _gap_range)
            if rng is not None:
                cover[_slices(rng)] = True
        feasible &= cover
        if not feasible.any():
            return 0
    for eb in inst.eboxes:
        rng = _object_ranges(vals_per_axis, eb.box.lo, eb.box.hi, False, _gap_range)
        if rng is not None:
            feasible[_slices(rng)] = False

    lens = [np.array(np.diff(np.array(v, dtype=np.int64)), dtype=np.int64) for v in vals_per_axis]
    # exact integer accumulation: use int64 tensor contraction when the
    # worst-case sum provably fits, else fall back to python ints
    bound = 1
    for le in lens:
        bound *= int(le.max())
    bound *= feasible.size
    if bound < (1 << 62):
        acc = feasible.astype(np.int64)
        for ax in range(inst.d - 1, -1, -1):
            acc = np.tensordot(acc, lens[ax], axes=([ax], [0]))
        return int(acc)
    total = 0
    for idx in np.argwhere(feasible):
        prod = 1
        for ax, g in enumerate(idx):
            prod *= int(lens[ax][g])
        total += prod
    return total


# ---------------------------------------------------------------------------
# colorful point / depth


def _position_grid(inst: GkmpInstance, budget: int, what: str):
    grid = build_compressed_grid(inst)
    vals_per_axis = grid.rank_map.values
    npos = [2 * len(v) - 1 for v in vals_per_axis]
    _check_budget(npos, budget, what)
    return grid, vals_per_axis, tuple(npos)


def _decode_position(grid: CompressedGrid, flat: int, shape) -> tuple:
    idx = np.unravel_index(flat, shape)
    return tuple(grid.rank_map.backward(ax, int(c)) for ax, c in enumerate(idx))


def oracle_colorful_point(inst: GkmpInstance, budget: int = DEFAULT_BUDGET):
    """A point (doubled coordinates) lying in every color's union, in no
    ebox and inside the clip, or None.  All rank-space grid points are
    tested, so measure-zero intersections are found; the returned witness
    is the lexicographically smallest feasible rank point.
    """
    inst.validate()
    for eb in inst.eboxes:
        if eb.weight != 0:
            raise InputError("oracle_colorful_point expects weight-0 eboxes")
    grid, vals_per_axis, shape = _position_grid(inst, budget, "oracle_colorful_point")
    feasible = np.ones(shape, dtype=bool)
    for color in range(inst.n_colors):
        cover = np.zeros(shape, dtype=bool)
        for co in inst.orthants:
            if co.color != color:
                continue
            rng = _object_ranges(vals_per_axis, co.orthant.lo, co.orthant.hi, False, _code_range)
            if rng is not None:
                cover[_slices(rng)] = True
        feasible &= cover
        if not feasible.any():
            return None
    for eb in inst.eboxes:
        rng = _object_ranges(vals_per_axis, eb.box.lo, eb.box.hi, eb.box.open_box, _code_range)
        if rng is not None:
            feasible[_slices(rng)] = False
    flat = int(np.argmax(feasible.reshape(-1)))
    if not feasible.reshape(-1)[flat]:
        return None
    return _decode_position(grid, flat, shape)


def oracle_depth(inst: GkmpInstance, mode: str = "max", budget: int = DEFAULT_BUDGET):
    """Extremal depth over the clip: the number of colors whose union
    covers a point, plus weights of covering eboxes, plus the instance
    offset.  Evaluated on all rank-space grid points; the witness is the
    lexicographically smallest extremal point (doubled coordinates)."""
    inst.validate()
    if mode not in ("min", "max"):
        raise InputError(f"mode must be 'min' or 'max', got {mode!r}")
    grid, vals_per_axis, shape = _position_grid(inst, budget, "oracle_depth")
    depth = np.zeros(shape, dtype=np.int64)
    for color in range(inst.n_colors):
        cover = np.zeros(shape, dtype=bool)
        for co in inst.orthants:
            if co.color != color:
                continue
            rng = _object_ranges(vals_per_axis, co.orthant.lo, co.orthant.hi, False, _code_range)
            if rng is not None:
                cover[_slices(rng)] = True
        depth += cover
    for eb in inst.eboxes:
        rng = _object_ranges(vals_per_axis, eb.box.lo, eb.box.hi, eb.box.open_box, _code_range)
        if rng is not None:
            depth[_slices(rng)] += int(eb.weight)
    flat_depth = depth.reshape(-1)
    ext = int(flat_depth.max() if mode == "max" else flat_depth.min())
    flat = int(np.argmax(flat_depth == ext))
    return ext + inst.depth_offset, _decode_position(grid, flat, shape)


# ---------------------------------------------------------------------------
# graphs and cliques


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n0-1."""

    n0: int
    edges: frozenset  # of (u, v) pairs with u < v

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.n0):
                raise InputError(f"bad edge ({u}, {v}) for n0={self.n0}")

    @classmethod
    def from_edges(cls, n0: int, edges) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise InputError("self-loops are not allowed")
            norm.add((min(u, v), max(u, v)))
        return cls(n0, frozenset(norm))

    @classmethod
    def complete(cls, n0: int) -> "Graph":
        return cls(n0, frozenset((u, v) for u in range(n0) for v in range(u + 1, n0)))

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return (min(u, v), max(u, v)) in self.edges

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n0, self.edges | {(min(u, v), max(u, v))})


def brute_clique(g: Graph, k: int) -> bool:
    """True iff the graph has k mutually adjacent vertices."""
    if k <= 1:
        return k <= 0 or g.n0 >= 1
    if k > g.n0:
        return False
    for combo in itertools.combinations(range(g.n0), k):
        if all(g.adjacent(u, v) for u, v in itertools.combinations(combo, 2)):
            return True
    return False


def is_clique(g: Graph, vertices) -> bool:
    """True iff the given vertices are pairwise distinct and adjacent."""
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(g.adjacent(u, v) for u, v in itertools.combinations(vs, 2))


# ---------------------------------------------------------------------------
# translational Hausdorff optimum


def _sweep_feasible(centers_by_color, r2: int, d: int) -> bool:
    """Does some translation put every color's point within distance r2/2
    of a center?  Exhaustive compressed sweep over cube arrangements in
    doubled translation space; exact for closed cubes."""
    objs = []
    for color, centers in enumerate(centers_by_color):
        for ctr in centers:
            objs.append(
                (tuple(c - r2 for c in ctr), tuple(c + r2 for c in ctr), color)
            )
    pending = set(range(len(centers_by_color)))

    def rec(ax, objs):
        if ax == d:
            return True
        events = sorted({o[0][ax] for o in objs} | {o[1][ax] for o in objs})
        # candidate regions: event points and the open gaps between them
        regions = []
        for i, e in enumerate(events):
            regions.append((e, e))
            if i + 1 < len(events):
                regions.append((e, events[i + 1]))
        for u, v in regions:
            if u == v:
                sub = [o for o in objs if o[0][ax] <= u <= o[1][ax]]
            else:
                sub = [o for o in objs if o[0][ax] <= u and v <= o[1][ax]]
            if {o[2] for o in sub} >= pending and rec(ax + 1, sub):
                return True
        return False

    if {o[2] for o in objs} < pending:
        return False
    return rec(0, objs)


def _merge_intervals(ivals):
    merged = []
    for a, b in sorted(ivals):
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return merged


def _axis_feasible_1d(centers_by_color, r2: int, ax: int) -> bool:
    """Necessary condition: the per-axis projections must intersect."""
    running = None
    for centers in centers_by_color:
        merged = _merge_intervals((c[ax] - r2, c[ax] + r2) for c in centers)
        if running is None:
            running = merged
        else:
            cur = []
            for a, b in merged:
                for c, e in running:
                    x, y = max(a, c), min(b, e)
                    if x <= y:
                        cur.append((x, y))
            running = _merge_intervals(cur)
        if not running:
            return False
    return True


def oracle_min_hausdorff(P, Q) -> int:
    """Exhaustive optimum of the directed translational Hausdorff distance
    (doubled).  Scans the candidate values in ascending order and returns
    the first feasible one; feasibility is decided by an independent
    compressed sweep over the cube arrangement in translation space.
    """
    from .hausdorff import candidate_values  # candidate set is shared by contract

    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    if not P or not Q:
        raise InputError("P and Q must be nonempty")
    if len(P) * len(Q) > 120:
        raise CapacityError("oracle_min_hausdorff expects |P|*|Q| <= ~100")
    d = len(P[0])
    centers_by_color = [
        [tuple(2 * (q[ax] - p[ax]) for ax in range(d)) for q in Q] for p in P
    ]
    cands = candidate_values(P, Q)
    # cheap per-axis lower bound: skip candidates that fail in projection
    start = 0
    for ax in range(d):
        lo_i, hi_i = 0, len(cands) - 1
        while lo_i < hi_i:
            mid = (lo_i + hi_i) // 2
            if _axis_feasible_1d(centers_by_color, cands[mid], ax):
                hi_i = mid
            else:
                lo_i = mid + 1
        start = max(start, lo_i)
    for r2 in cands[start:]:
        if _sweep_feasible(centers_by_color, r2, d):
            return r2
    raise AssertionError("candidate list missing a feasible value")
