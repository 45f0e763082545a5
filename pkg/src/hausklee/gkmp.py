"""Divide-and-conquer solver for the colored Klee's measure problem.

Three queries over a set of colored orthants ``B``, extra boxes ``E`` and a
finite clip cell: exact volume of ``inter_chi S_chi ∩ inter complement(E)``,
a colorful point witness (emptiness decision), and min/max depth.

The recursion classifies objects against the current cell as trivial,
long (halfspace-like) or short (some (d-2)-face meets the cell interior),
prunes long objects per color, converts colors whose restriction is a
single box complement into extra boxes, collapses fully-excluded slabs to
zero width, and splits cells at weighted medians of face coordinates with
axis renumbering.  Leaves are solved by a compressed-coordinate sweep.

Internal coordinates
--------------------
Volume mode works on doubled input coordinates (closed ``[a,b]`` maps to
``[2a, 2b]``): odd lattice positions are the open unit gaps and carry
measure 1, even positions are hyperplanes of measure 0, so closed cells
may share split planes without double counting.

Exists and depth modes work on quadrupled coordinates (closed ``[a,b]``
maps to ``[4a, 4b]``, open ``(a,b)`` to ``[4a+2, 4b-2]``): real candidate
points are the even positions (values and open unit gaps), cells keep odd
bounds, and split planes emit an explicit dimension-reduced child for the
plane column.  Object endpoints are always even and cell bounds always
odd, so no candidate point ever sits on a cell boundary and degenerate
(measure-zero) intersections are decided exactly.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError
from .geom import (
    INF,
    NEG_INF,
    AxisBox,
    Cell,
    ColoredOrthant,
    Orthant,
)

SENTINEL = 1 << 62
_COORD_HEADROOM = 1 << 45  # anything beyond this is treated as unbounded

VOLUME = "volume"
EXISTS = "exists"
DEPTH = "depth"

_BASE_FACE_COUNT = 4  # recurse while more short (d-2)-faces than this
_REDUCE_LOOP_LIMIT = 200


@dataclass(frozen=True)
class Ebox:
    """Extra box with an integer weight.

    Weight must be 0 for volume/exists queries (pure exclusion); nonzero
    weights arise internally during depth queries where boxes contribute
    additively wherever they cover.
    """

    box: AxisBox
    weight: int = 0


@dataclass(frozen=True)
class GkmpInstance:
    d: int
    n_colors: int
    orthants: tuple
    eboxes: tuple
    clip: Cell
    depth_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "orthants", tuple(self.orthants))
        object.__setattr__(self, "eboxes", tuple(self.eboxes))

    def validate(self, coord_limit: int = _COORD_HEADROOM) -> None:
        if not (2 <= self.d <= 8):
            raise InputError(f"d must be in [2, 8], got {self.d}")
        if self.n_colors < 0:
            raise InputError("n_colors must be >= 0")
        if self.clip.d != self.d:
            raise InputError("clip dimension mismatch")
        for c in self.clip.lo + self.clip.hi:
            if abs(c) > coord_limit:
                raise InputError(f"clip coordinate {c} exceeds limit")
        for co in self.orthants:
            if not isinstance(co, ColoredOrthant):
                raise InputError("orthants must be ColoredOrthant")
            if co.d != self.d:
                raise InputError("orthant dimension mismatch")
            if not (0 <= co.color < self.n_colors):
                raise InputError(f"color {co.color} out of range")
            for v in co.orthant.lo + co.orthant.hi:
                if v not in (INF, NEG_INF) and abs(v) > coord_limit:
                    raise InputError(f"coordinate {v} exceeds limit")
        for eb in self.eboxes:
            if not isinstance(eb, Ebox):
                raise InputError("eboxes must be Ebox")
            if eb.box.d != self.d:
                raise InputError("ebox dimension mismatch")
            for v in eb.box.lo + eb.box.hi:
                if v not in (INF, NEG_INF) and abs(v) > coord_limit:
                    raise InputError(f"coordinate {v} exceeds limit")

    def rotated(self, k: int) -> "GkmpInstance":
        return GkmpInstance(
            self.d,
            self.n_colors,
            tuple(o.rotated(k) for o in self.orthants),
            tuple(Ebox(e.box.rotated(k), e.weight) for e in self.eboxes),
            self.clip.rotated(k),
            self.depth_offset,
        )


# ---------------------------------------------------------------------------
# node state and encoding


@dataclass
class NodeState:
    """One recursion node, in internal (doubled or quadrupled) coordinates."""

    mode: str
    minmax: int  # +1 max, -1 min (depth mode only)
    d: int
    t: float
    scale: int  # 2 for volume, 4 for exists/depth
    cell_lo: np.ndarray  # (d,) int64
    cell_hi: np.ndarray
    olo: np.ndarray  # (K, d) int64, SENTINEL for unbounded sides
    ohi: np.ndarray
    ocolor: np.ndarray  # (K,) int64
    elo: np.ndarray  # (M, d) int64
    ehi: np.ndarray
    ew: np.ndarray  # (M,) int64 weights
    colors_alive: set
    offset: int = 0
    profiles: list = field(default_factory=list)  # per axis: [(a, b, w)]
    depth_level: int = 0

    def copy(self) -> "NodeState":
        return NodeState(
            self.mode,
            self.minmax,
            self.d,
            self.t,
            self.scale,
            self.cell_lo.copy(),
            self.cell_hi.copy(),
            self.olo.copy(),
            self.ohi.copy(),
            self.ocolor.copy(),
            self.elo.copy(),
            self.ehi.copy(),
            self.ew.copy(),
            set(self.colors_alive),
            self.offset,
            [list(p) for p in self.profiles],
            self.depth_level,
        )

    @classmethod
    def from_instance(cls, inst: GkmpInstance, mode: str, minmax: int = 1) -> "NodeState":
        """Encode an instance into a root node.

        Volume mode doubles coordinates and treats every ebox as closed
        (openness never changes measure); exists/depth modes quadruple
        coordinates and encode openness exactly.
        """
        if mode not in (VOLUME, EXISTS, DEPTH):
            raise InputError(f"unknown mode {mode!r}")
        scale = 2 if mode == VOLUME else 4
        d = inst.d

        def enc(v, side):
            if v == NEG_INF or v == INF:
                return -SENTINEL if side == "lo" else SENTINEL
            return scale * int(v)

        K = len(inst.orthants)
        olo = np.empty((K, d), dtype=np.int64)
        ohi = np.empty((K, d), dtype=np.int64)
        ocolor = np.empty(K, dtype=np.int64)
        for i, co in enumerate(inst.orthants):
            ocolor[i] = co.color
            for ax in range(d):
                olo[i, ax] = enc(co.orthant.lo[ax], "lo")
                ohi[i, ax] = enc(co.orthant.hi[ax], "hi")
        erows = []
        eweights = []
        for eb in inst.eboxes:
            row_lo, row_hi = [], []
            empty = False
            for ax in range(d):
                a = enc(eb.box.lo[ax], "lo")
                b = enc(eb.box.hi[ax], "hi")
                if mode != VOLUME and eb.box.open_box:
                    if abs(a) < _COORD_HEADROOM * scale:
                        a += 2
                    if abs(b) < _COORD_HEADROOM * scale:
                        b -= 2
                if a > b:
                    empty = True  # open box with a degenerate axis excludes nothing
                    break
                row_lo.append(a)
                row_hi.append(b)
            if not empty:
                erows.append((row_lo, row_hi))
                eweights.append(int(eb.weight))
        M = len(erows)
        elo = np.empty((M, d), dtype=np.int64)
        ehi = np.empty((M, d), dtype=np.int64)
        for i, (row_lo, row_hi) in enumerate(erows):
            elo[i] = row_lo
            ehi[i] = row_hi
        ew = np.array(eweights, dtype=np.int64)

        if mode == VOLUME:
            cell_lo = np.array([2 * v for v in inst.clip.lo], dtype=np.int64)
            cell_hi = np.array([2 * v for v in inst.clip.hi], dtype=np.int64)
        else:
            cell_lo = np.array([4 * v - 1 for v in inst.clip.lo], dtype=np.int64)
            cell_hi = np.array([4 * v + 1 for v in inst.clip.hi], dtype=np.int64)

        n_obj = K + M
        t = max(1.0, math.ceil(math.log2(max(2, n_obj))))
        return cls(
            mode=mode,
            minmax=minmax,
            d=d,
            t=t,
            scale=scale,
            cell_lo=cell_lo,
            cell_hi=cell_hi,
            olo=olo,
            ohi=ohi,
            ocolor=ocolor,
            elo=elo,
            ehi=ehi,
            ew=ew,
            colors_alive=set(range(inst.n_colors)),
            offset=inst.depth_offset,
            profiles=[[] for _ in range(d)],
        )

    # -- small helpers used by tests and assertions

    def cell_doubled(self):
        """Cell atom range expressed in doubled original coordinates."""
        if self.mode == VOLUME:
            return tuple(int(v) for v in self.cell_lo), tuple(int(v) for v in self.cell_hi)
        return (
            tuple((int(v) + 1) // 2 for v in self.cell_lo),
            tuple((int(v) - 1) // 2 for v in self.cell_hi),
        )


def _zero_answer(node: NodeState):
    if node.mode == VOLUME:
        return 0
    return None


# ---------------------------------------------------------------------------
# classification


def _classify(LO, HI, cl, ch):
    """Vectorized object-vs-cell classification.

    Returns (empty, contains, crossL, crossH, ccnt, nfaces).  ``ccnt`` is
    the per-axis count of facets crossing the cell interior; an object is
    short iff nfaces >= 1, long iff exactly one axis has crossing facets
    (then it meets the cell in a halfspace or slab), trivial otherwise.
    """
    # LO > HI arises when a shrink collapses an object into a deleted range
    empty = ((HI <= cl) | (LO >= ch) | (LO > HI)).any(axis=1)
    contains = ((LO <= cl + 1) & (HI >= ch - 1)).all(axis=1)
    crossL = (LO > cl) & (LO < ch)
    crossH = (HI > cl) & (HI < ch)
    ccnt = crossL.astype(np.int64) + crossH.astype(np.int64)
    s = ccnt.sum(axis=1)
    sq = (ccnt * ccnt).sum(axis=1)
    nfaces = (s * s - sq) // 2
    return empty, contains, crossL, crossH, ccnt, nfaces


def _axis_weights(d: int) -> np.ndarray:
    # w[ax] = 2^((ax+1)/d) so that a face on axes (i, j) weighs w[i]*w[j]
    return np.array([2.0 ** ((ax + 1) / d) for ax in range(d)])


def _short_weight(node: NodeState, ccnt_o, ccnt_e) -> float:
    w = _axis_weights(node.d)
    total = 0.0
    for ccnt, scale in ((ccnt_o, 1.0), (ccnt_e, 1.0 / node.t)):
        if len(ccnt) == 0:
            continue
        cw = ccnt * w
        s = cw.sum(axis=1)
        sq = (cw * cw).sum(axis=1)
        total += float(((s * s - sq) / 2).sum()) * scale
    return total


def node_short_weight(node: NodeState) -> float:
    """Total weight of short (d-2)-faces in the node's cell."""
    cl, ch = node.cell_lo, node.cell_hi
    *_, ccnt_o, _ = _classify(node.olo, node.ohi, cl, ch)
    *_, ccnt_e, _ = _classify(node.elo, node.ehi, cl, ch)
    return _short_weight(node, ccnt_o, ccnt_e)


def node_face_count(node: NodeState) -> int:
    cl, ch = node.cell_lo, node.cell_hi
    *_, nf_o = _classify(node.olo, node.ohi, cl, ch)
    *_, nf_e = _classify(node.elo, node.ehi, cl, ch)
    return int(nf_o.sum() + nf_e.sum())


# ---------------------------------------------------------------------------
# shrink: collapse fully-excluded slabs


@dataclass
class ShrinkTransform:
    """Monotone piecewise shift that deleted sorted intervals on one axis."""

    axis: int
    starts: list  # deleted interval starts (pre-shrink coords)
    ends: list  # deleted interval ends, inclusive
    prefix: list  # cumulative deleted counts after each interval

    def inverse(self, y: int) -> int:
        """Map a post-shrink kept coordinate back to pre-shrink coords."""
        # post-shrink position of the first kept point after interval j is
        # ends[j] + 1 - prefix[j]; everything at or beyond it shifts back.
        lo, hi = 0, len(self.starts)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ends[mid] + 1 - self.prefix[mid] <= y:
                lo = mid + 1
            else:
                hi = mid
        return y if lo == 0 else y + self.prefix[lo - 1]

    def apply(self, x: int) -> int:
        """Map a pre-shrink kept coordinate forward (for tests)."""
        i = bisect_right(self.starts, x) - 1
        if i >= 0 and x <= self.ends[i]:
            raise ValueError(f"{x} was deleted by the shrink")
        return x - (self.prefix[i] if i >= 0 else 0)


def _apply_deletions(node: NodeState, axis: int, deletions: list) -> ShrinkTransform:
    """Delete sorted disjoint closed intervals from one coordinate axis.

    Object endpoints inside a deleted range snap to the collapse point;
    every other coordinate shifts down by the number of deleted positions
    below it.  Interval lengths are even, preserving lattice parity.
    """
    starts = [a for a, _ in deletions]
    ends = [b for _, b in deletions]
    prefix = []
    run = 0
    for a, b in deletions:
        run += b - a + 1
        prefix.append(run)
    st = np.array(starts, dtype=np.int64)
    en = np.array(ends, dtype=np.int64)
    pref = np.array(prefix, dtype=np.int64)

    def remap(col, snap):
        # index of the deletion interval strictly below/containing each value
        idx = np.searchsorted(st, col, side="right") - 1
        shift = np.where(idx >= 0, pref[np.maximum(idx, 0)], 0)
        inside = (idx >= 0) & (col <= en[np.maximum(idx, 0)])
        out = col - shift
        if inside.any():
            # snap to the first kept position at or above the deleted range
            tgt = en[np.maximum(idx, 0)] + 1 - pref[np.maximum(idx, 0)]
            out = np.where(inside, tgt + snap, out)
        return out

    # endpoints snap to even kept positions: lo endpoints to the collapse
    # point (first kept), hi endpoints to the last kept even position below.
    for arr, snap in ((node.olo, 0), (node.elo, 0)):
        if arr.shape[0]:
            arr[:, axis] = remap(arr[:, axis], snap)
    for arr in (node.ohi, node.ehi):
        if arr.shape[0]:
            arr[:, axis] = remap(arr[:, axis], 0 if node.mode == VOLUME else -2)
    node.cell_lo[axis] = int(remap(np.array([node.cell_lo[axis]]), 0)[0])
    hi = int(node.cell_hi[axis])
    if starts and starts[-1] <= hi <= ends[-1]:
        node.cell_hi[axis] = starts[-1] - 1 - (prefix[-2] if len(prefix) > 1 else 0)
    else:
        node.cell_hi[axis] = int(remap(np.array([hi]), 0)[0])
    if node.profiles and node.profiles[axis]:
        segs = []
        for a, b, w in node.profiles[axis]:
            a2 = int(remap(np.array([a]), 0)[0])
            b2 = int(remap(np.array([b]), -2)[0])
            if a2 <= b2:
                segs.append((a2, b2, w))
        node.profiles[axis] = segs
    return ShrinkTransform(axis, starts, ends, prefix)


def shrink_long_eboxes(node: NodeState, axis: int, rows=None) -> Optional[ShrinkTransform]:
    """Remove long eboxes (slabs orthogonal to ``axis``) by collapsing the
    union of their excluded intervals to zero width.

    Volume mode keeps one zero-measure collapse hyperplane per slab;
    exists mode deletes the excluded candidate positions outright.  The
    answer of the node is unchanged: everything removed was excluded.
    """
    if node.mode == DEPTH:
        raise AssertionError("shrink is a volume/exists operation")
    if rows is None:
        _, _, _, _, ccnt_e, nfaces_e = _classify(
            node.elo, node.ehi, node.cell_lo, node.cell_hi
        )
        rows = [
            int(r)
            for r in range(node.elo.shape[0])
            if nfaces_e[r] == 0
            and ccnt_e[r].sum() > 0
            and int(np.nonzero(ccnt_e[r])[0][0]) == axis
        ]
        if not rows:
            return None
    cl = int(node.cell_lo[axis])
    ch = int(node.cell_hi[axis])
    # clamp the excluded interval to the cell; in volume mode the cell
    # bounds are even like object endpoints, in exists mode the candidate
    # range starts one past the odd cell bound
    pad = 0 if node.mode == VOLUME else 1
    slabs = []
    for i in rows:
        a = max(int(node.elo[i, axis]), cl + pad)
        b = min(int(node.ehi[i, axis]), ch - pad)
        if a > b:
            raise AssertionError("shrink called on a non-slab ebox")
        slabs.append((a, b))
    slabs.sort()
    # in volume mode the position between two touching slabs is an open unit
    # gap that still carries measure, so only true overlaps merge there
    merge_gap = 0 if node.mode == VOLUME else 2
    merged = []
    for a, b in slabs:
        if merged and a <= merged[-1][1] + merge_gap:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    deletions = []
    for a, b in merged:
        if node.mode == VOLUME:
            if a < b:
                deletions.append((a, b - 1))  # collapse [a, b] to the point b
        else:
            deletions.append((a, b + 1))  # remove excluded candidates entirely
    keep = np.ones(node.elo.shape[0], dtype=bool)
    keep[list(rows)] = False
    node.elo = node.elo[keep]
    node.ehi = node.ehi[keep]
    node.ew = node.ew[keep]
    if not deletions:
        return None
    return _apply_deletions(node, axis, deletions)


# ---------------------------------------------------------------------------
# reduce


@dataclass
class ReduceOutcome:
    node: Optional[NodeState]  # None when short-circuited
    answer: object  # short-circuit answer (0 / None), meaningful iff node is None
    transforms: list  # ShrinkTransforms applied, in order
    short_circuit: bool


def _drop_rows(node: NodeState, kind: str, keep: np.ndarray) -> None:
    if kind == "o":
        node.olo = node.olo[keep]
        node.ohi = node.ohi[keep]
        node.ocolor = node.ocolor[keep]
    else:
        node.elo = node.elo[keep]
        node.ehi = node.ehi[keep]
        node.ew = node.ew[keep]


def reduce_node(node: NodeState) -> ReduceOutcome:
    """Eliminate trivial objects, prune and convert long objects, and
    clear long eboxes, iterating until the node is stable.

    Short-circuits with the node's final answer when a needed color dies
    or an exclusion box swallows the cell.  Afterward no trivial objects
    remain, every long orthant's color owns a short orthant, long orthants
    are capped at 2d per color, and no long eboxes survive.
    """
    transforms: list = []
    # every pass drops a row, discards a color or shrinks an ebox away
    limit = _REDUCE_LOOP_LIMIT + 10 * (node.olo.shape[0] + node.elo.shape[0])
    for _ in range(limit):
        cl, ch = node.cell_lo, node.cell_hi
        if bool((cl + 1 > ch - 1).any()):
            # no candidate columns at all: nothing lives here
            return ReduceOutcome(None, _zero_answer(node), transforms, True)

        # --- trivial eboxes
        if node.elo.shape[0]:
            empty, contains, _, _, _, _ = _classify(node.elo, node.ehi, cl, ch)
            if contains.any():
                if node.mode != DEPTH:
                    return ReduceOutcome(None, _zero_answer(node), transforms, True)
                node.offset += int(node.ew[contains].sum())
            keep = ~(empty | contains)
            if not keep.all():
                _drop_rows(node, "e", keep)
                continue

        # --- trivial orthants: satisfied colors, then dead objects
        if node.olo.shape[0]:
            empty, contains, _, _, _, _ = _classify(node.olo, node.ohi, cl, ch)
            sat = set(int(c) for c in np.unique(node.ocolor[contains])) & node.colors_alive
            if sat:
                node.colors_alive -= sat
                if node.mode == DEPTH:
                    node.offset += len(sat)
            drop = empty | contains | np.isin(node.ocolor, sorted(sat))
            if drop.any():
                _drop_rows(node, "o", ~drop)
                continue

        # --- colors that can no longer be covered
        present = set(int(c) for c in np.unique(node.ocolor)) if node.olo.shape[0] else set()
        dead = node.colors_alive - present
        if dead:
            if node.mode != DEPTH:
                return ReduceOutcome(None, _zero_answer(node), transforms, True)
            node.colors_alive -= dead  # absent colors contribute 0 everywhere
            continue

        # --- long-orthant pruning and conversion
        changed = False
        if node.olo.shape[0]:
            _, _, crossL, crossH, ccnt, nfaces = _classify(node.olo, node.ohi, cl, ch)
            is_long = nfaces == 0  # trivials are gone by now
            colors_with_short = set(int(c) for c in np.unique(node.ocolor[~is_long]))
            drop = np.zeros(node.olo.shape[0], dtype=bool)
            new_eboxes = []
            for color in sorted(node.colors_alive):
                rows = [int(r) for r in np.nonzero((node.ocolor == color) & is_long)[0]]
                if not rows:
                    continue
                # canonicalize: per (axis, side) keep the most permissive bound;
                # a long orthant meets the cell in a halfspace on its one
                # crossing axis, so same-side unions collapse to one bound
                best_lo = {}
                best_hi = {}
                for r in rows:
                    ax = int(np.nonzero(ccnt[r])[0][0])
                    if crossL[r, ax]:
                        v = int(node.olo[r, ax])
                        if ax not in best_lo or v < best_lo[ax][0]:
                            best_lo[ax] = (v, r)
                    else:
                        v = int(node.ohi[r, ax])
                        if ax not in best_hi or v > best_hi[ax][0]:
                            best_hi[ax] = (v, r)
                keep_rows = {r for _, r in best_lo.values()} | {r for _, r in best_hi.values()}
                for r in rows:
                    if r not in keep_rows:
                        drop[r] = True
                        changed = True
                if color in colors_with_short:
                    continue
                # no short orthant of this color: S_color is a union of
                # halfspaces here, so its complement inside the cell is a box
                for r in rows:
                    drop[r] = True
                changed = True
                gap = 0 if node.mode == VOLUME else 2
                blo = [-SENTINEL] * node.d
                bhi = [SENTINEL] * node.d
                feasible = True
                for ax, (v, _) in best_lo.items():
                    bhi[ax] = v - gap
                for ax, (v, _) in best_hi.items():
                    blo[ax] = v + gap
                for ax in range(node.d):
                    if blo[ax] > bhi[ax]:
                        feasible = False
                        break
                    if min(bhi[ax], int(ch[ax]) - 1) < max(blo[ax], int(cl[ax]) + 1):
                        feasible = False  # complement misses the cell: color covers it
                        break
                node.colors_alive.discard(color)
                if node.mode == DEPTH:
                    node.offset += 1
                if feasible:
                    new_eboxes.append((blo, bhi, -1 if node.mode == DEPTH else 0))
            if drop.any():
                _drop_rows(node, "o", ~drop)
            if new_eboxes:
                add_lo = np.array([b[0] for b in new_eboxes], dtype=np.int64)
                add_hi = np.array([b[1] for b in new_eboxes], dtype=np.int64)
                add_w = np.array([b[2] for b in new_eboxes], dtype=np.int64)
                node.elo = np.vstack([node.elo, add_lo]) if node.elo.shape[0] else add_lo
                node.ehi = np.vstack([node.ehi, add_hi]) if node.ehi.shape[0] else add_hi
                node.ew = np.concatenate([node.ew, add_w]) if node.ew.shape[0] else add_w
                changed = True
        if changed:
            continue

        # --- long eboxes: shrink (volume/exists) or fold into profiles (depth)
        if node.elo.shape[0]:
            _, _, _, _, ccnt_e, nfaces_e = _classify(node.elo, node.ehi, cl, ch)
            long_e = nfaces_e == 0
            if long_e.any():
                if node.mode == DEPTH:
                    for r in np.nonzero(long_e)[0]:
                        ax = int(np.nonzero(ccnt_e[r])[0][0])
                        a = max(int(node.elo[r, ax]), int(cl[ax]) + 1)
                        b = min(int(node.ehi[r, ax]), int(ch[ax]) - 1)
                        node.profiles[ax].append((a, b, int(node.ew[r])))
                    _drop_rows(node, "e", ~long_e)
                else:
                    # one axis at a time; the outer loop re-examines the rest
                    first = int(np.nonzero(long_e)[0][0])
                    ax = int(np.nonzero(ccnt_e[first])[0][0])
                    rows = [
                        int(r)
                        for r in np.nonzero(long_e)[0]
                        if int(np.nonzero(ccnt_e[r])[0][0]) == ax
                    ]
                    tr = shrink_long_eboxes(node, ax, rows)
                    if tr is not None:
                        transforms.append(tr)
                continue

        return ReduceOutcome(node, None, transforms, False)
    raise AssertionError("reduce did not stabilize")


def check_reduced_invariants(node: NodeState) -> None:
    """Structural post-reduce assertions (always cheap, always on)."""
    cl, ch = node.cell_lo, node.cell_hi
    if node.olo.shape[0]:
        empty, contains, _, _, _, nfaces = _classify(node.olo, node.ohi, cl, ch)
        assert not empty.any(), "trivial (outside) orthant survived reduce"
        assert not contains.any(), "trivial (containing) orthant survived reduce"
        is_long = nfaces == 0
        colors_with_short = set(int(c) for c in np.unique(node.ocolor[~is_long]))
        long_colors = node.ocolor[is_long]
        for color in set(int(c) for c in np.unique(long_colors)):
            assert color in colors_with_short, "long orthant without short sibling"
            assert int((long_colors == color).sum()) <= 2 * node.d, "more than 2d long orthants"
    if node.elo.shape[0]:
        empty, contains, _, _, _, nfaces_e = _classify(node.elo, node.ehi, cl, ch)
        assert not empty.any() and not contains.any(), "trivial ebox survived reduce"
        assert bool((nfaces_e >= 1).all()), "long ebox survived reduce"


# ---------------------------------------------------------------------------
# split


@dataclass
class SplitResult:
    rotated_only: bool
    median: Optional[int]
    left: Optional[NodeState]
    right: Optional[NodeState]
    middle: Optional[NodeState]  # plane-column child (measure-zero in volume mode)
    middle_coord: Optional[int]


def _rotate_node(node: NodeState) -> NodeState:
    out = node.copy()
    if node.d == 1:
        return out
    out.cell_lo = np.roll(node.cell_lo, -1)
    out.cell_hi = np.roll(node.cell_hi, -1)
    for name in ("olo", "ohi", "elo", "ehi"):
        arr = getattr(node, name)
        setattr(out, name, np.roll(arr, -1, axis=1) if arr.shape[0] else arr.copy())
    out.profiles = [list(p) for p in node.profiles[1:]] + [list(node.profiles[0])]
    return out


def _project_out_axis0(node: NodeState, m: int) -> Optional[NodeState]:
    """Child for the plane column x_1 = m: keep objects covering the column
    and drop the axis, reducing the dimension by one."""
    d = node.d
    keep_o = (node.olo[:, 0] <= m) & (node.ohi[:, 0] >= m) if node.olo.shape[0] else None
    keep_e = (node.elo[:, 0] <= m) & (node.ehi[:, 0] >= m) if node.elo.shape[0] else None
    out = node.copy()
    out.d = d - 1
    out.cell_lo = node.cell_lo[1:].copy()
    out.cell_hi = node.cell_hi[1:].copy()
    if keep_o is not None:
        out.olo = node.olo[keep_o][:, 1:]
        out.ohi = node.ohi[keep_o][:, 1:]
        out.ocolor = node.ocolor[keep_o]
    else:
        out.olo = node.olo[:, 1:]
        out.ohi = node.ohi[:, 1:]
    if keep_e is not None:
        out.elo = node.elo[keep_e][:, 1:]
        out.ehi = node.ehi[keep_e][:, 1:]
        out.ew = node.ew[keep_e]
    else:
        out.elo = node.elo[:, 1:]
        out.ehi = node.ehi[:, 1:]
    if node.mode == DEPTH and node.profiles[0]:
        out.offset += sum(w for a, b, w in node.profiles[0] if a <= m <= b)
    out.profiles = [list(p) for p in node.profiles[1:]]
    out.depth_level = node.depth_level + 1
    return out


def split_node(node: NodeState) -> SplitResult:
    """Divide the cell at the weighted median of axis-1 face coordinates.

    Children are axis-rotated by one.  Faces on the median plane leave
    both side children; in exists/depth mode the plane column itself
    becomes a dimension-reduced middle child (in volume mode the column
    has measure zero and only exists when coordinate drift from earlier
    shrinks gives it positive length -- it never does, see encoding notes).
    """
    cl, ch = node.cell_lo, node.cell_hi
    w = _axis_weights(node.d)
    positions = []
    weights = []
    for LO, HI, esc in ((node.olo, node.ohi, 1.0), (node.elo, node.ehi, 1.0 / node.t)):
        if not LO.shape[0]:
            continue
        _, _, crossL, crossH, ccnt, _ = _classify(LO, HI, cl, ch)
        cw = ccnt * w
        rest = cw.sum(axis=1) - cw[:, 0]
        per_endpoint = w[0] * rest * esc
        for r in np.nonzero(crossL[:, 0] & (rest > 0))[0]:
            positions.append(int(LO[r, 0]))
            weights.append(float(per_endpoint[r]))
        for r in np.nonzero(crossH[:, 0] & (rest > 0))[0]:
            positions.append(int(HI[r, 0]))
            weights.append(float(per_endpoint[r]))
    if not positions:
        child = _rotate_node(node)
        child.depth_level = node.depth_level + 1
        return SplitResult(True, None, child, None, None, None)

    order = np.argsort(np.array(positions), kind="stable")
    pos = np.array(positions)[order]
    wts = np.array(weights)[order]
    cum = np.cumsum(wts)
    total = cum[-1]
    idx = int(np.searchsorted(cum, total / 2.0))
    m = int(pos[min(idx, len(pos) - 1)])

    left = node.copy()
    right = node.copy()
    if node.mode == VOLUME:
        left.cell_hi = node.cell_hi.copy()
        left.cell_hi[0] = m
        right.cell_lo = node.cell_lo.copy()
        right.cell_lo[0] = m
        middle = None
    else:
        left.cell_hi = node.cell_hi.copy()
        left.cell_hi[0] = m - 1
        right.cell_lo = node.cell_lo.copy()
        right.cell_lo[0] = m + 1
        middle = _project_out_axis0(node, m)
    left = _rotate_node(left)
    right = _rotate_node(right)
    left.depth_level = node.depth_level + 1
    right.depth_level = node.depth_level + 1
    return SplitResult(False, m, left, right, middle, m)


# ---------------------------------------------------------------------------
# base case: compressed-coordinate sweep


def _measure(node: NodeState, u: int, v: int) -> int:
    """Exact measure of the lattice interval [u, v] in original units."""
    if u > v:
        return 0
    if node.mode == VOLUME:
        # odd positions are open unit gaps
        return (v + 1) // 2 - u // 2 if v >= u else 0
    # quadrupled: positions ≡ 2 (mod 4) are open unit gaps
    a = -((u - 2) // -4)  # ceil((u-2)/4)
    b = (v - 2) // 4
    return b - a + 1 if b >= a else 0


def _profile_extremum(segs, u, v, minmax):
    """Extremum of a per-axis breakpoint profile over [u, v] and the
    smallest even position attaining it."""
    if not segs:
        return 0, u
    cuts = {u}
    for a, b, _ in segs:
        if u < a <= v:
            cuts.add(a)
        if u <= b + 2 <= v:
            cuts.add(b + 2)
    best_val = None
    best_pos = None
    for p in sorted(cuts):
        val = sum(w for a, b, w in segs if a <= p <= b)
        if best_val is None or (val - best_val) * minmax > 0:
            best_val, best_pos = val, p
    return best_val, best_pos


def base_case(node: NodeState):
    """Solve a node by a recursive compressed-coordinate sweep.

    Intended for nodes with O(1) short faces; correct for any node.
    """
    d = node.d
    orths = [
        (tuple(int(x) for x in node.olo[i]), tuple(int(x) for x in node.ohi[i]), int(node.ocolor[i]))
        for i in range(node.olo.shape[0])
    ]
    eboxes = [
        (tuple(int(x) for x in node.elo[i]), tuple(int(x) for x in node.ehi[i]), int(node.ew[i]))
        for i in range(node.elo.shape[0])
    ]
    cell = [(int(node.cell_lo[ax]), int(node.cell_hi[ax])) for ax in range(d)]
    atom_rng = [(lo + (lo & 1), hi - (hi & 1)) for lo, hi in cell]
    for lo, hi in atom_rng:
        if lo > hi:
            return _zero_answer(node) if node.mode != DEPTH else None
    needed = set(node.colors_alive)
    mode = node.mode
    minmax = node.minmax

    # position spacing: the doubled lattice (volume) uses every integer,
    # the quadrupled lattice (exists/depth) only the even candidates
    step = 1 if mode == VOLUME else 2

    def runs(ax, objs_o, objs_e):
        first, last = atom_rng[ax]
        events = set()
        for lo, hi, _ in objs_o + objs_e:
            if first < lo[ax] <= last:
                events.add(lo[ax])
            if first <= hi[ax] + step <= last:
                events.add(hi[ax] + step)
        marks = [first] + sorted(events) + [last + step]
        out = []
        for k in range(len(marks) - 1):
            u, v = marks[k], marks[k + 1] - step
            if u <= v:
                out.append((u, v))
        return out

    if mode == VOLUME:

        def rec_vol(ax, objs_o, objs_e, pending):
            if pending and any(
                not any(o[2] == c for o in objs_o) for c in pending
            ):
                return 0
            if ax == d:
                # every survivor covers the final box, so pending colors
                # are covered; any surviving ebox excludes the box
                return 0 if objs_e else 1
            # a color with an orthant covering the whole remaining box is done
            done = set()
            for lo, hi, c in objs_o:
                if c in pending and all(
                    lo[k] <= atom_rng[k][0] and hi[k] >= atom_rng[k][1] for k in range(ax, d)
                ):
                    done.add(c)
            if done:
                pending = pending - done
                objs_o = [o for o in objs_o if o[2] in pending]
            for lo, hi, w in objs_e:
                if all(lo[k] <= atom_rng[k][0] and hi[k] >= atom_rng[k][1] for k in range(ax, d)):
                    return 0
            total = 0
            for u, v in runs(ax, objs_o, objs_e):
                mu = _measure(node, u, v)
                if mu == 0:
                    continue
                sub_o = [o for o in objs_o if o[0][ax] <= u and o[1][ax] >= v]
                if pending and any(not any(o[2] == c for o in sub_o) for c in pending):
                    continue
                sub_e = [e for e in objs_e if e[0][ax] <= u and e[1][ax] >= v]
                total += mu * rec_vol(ax + 1, sub_o, sub_e, pending)
            return total

        return rec_vol(0, orths, eboxes, needed)

    if mode == EXISTS:

        def rec_ex(ax, objs_o, objs_e, pending, prefix):
            if any(not any(o[2] == c for o in objs_o) for c in pending):
                return None
            if ax == d:
                return tuple(prefix) if not objs_e else None
            for u, v in runs(ax, objs_o, objs_e):
                sub_o = [o for o in objs_o if o[0][ax] <= u and o[1][ax] >= v]
                new_pending = {c for c in pending if any(o[2] == c for o in sub_o)}
                if len(new_pending) < len(pending):
                    continue
                sub_e = [e for e in objs_e if e[0][ax] <= u and e[1][ax] >= v]
                got = rec_ex(ax + 1, sub_o, sub_e, pending, prefix + [u])
                if got is not None:
                    return got
            return None

        return rec_ex(0, orths, eboxes, needed, [])

    # depth
    profiles = node.profiles

    def rec_depth(ax, objs_o, objs_e, alive, acc, prefix):
        if ax == d:
            covered = {o[2] for o in objs_o} & alive
            val = acc + len(covered) + sum(e[2] for e in objs_e)
            wit = []
            for k, (u, v) in enumerate(prefix):
                pv, pp = _profile_extremum(profiles[k], u, v, minmax)
                val += pv
                wit.append(pp)
            return val, tuple(wit)
        best = None
        for u, v in runs(ax, objs_o, objs_e):
            sub_o = [o for o in objs_o if o[0][ax] <= u and o[1][ax] >= v]
            sub_e = [e for e in objs_e if e[0][ax] <= u and e[1][ax] >= v]
            got = rec_depth(ax + 1, sub_o, sub_e, alive, acc, prefix + [(u, v)])
            if got is None:
                continue
            if best is None or (got[0] - best[0]) * minmax > 0 or (
                got[0] == best[0] and got[1] < best[1]
            ):
                best = got
        return best

    return rec_depth(0, orths, eboxes, needed, node.offset, [])


# ---------------------------------------------------------------------------
# full recursion


def _unshrink_witness(ans, transforms, mode):
    if ans is None or mode == VOLUME or not transforms:
        return ans
    if mode == EXISTS:
        w = list(ans)
        for tr in reversed(transforms):
            w[tr.axis] = tr.inverse(w[tr.axis])
        return tuple(w)
    val, wit = ans
    w = list(wit)
    for tr in reversed(transforms):
        w[tr.axis] = tr.inverse(w[tr.axis])
    return val, tuple(w)


def _unrotate_witness(ans, mode, d):
    if ans is None or mode == VOLUME:
        return ans
    if mode == EXISTS:
        return (ans[d - 1],) + tuple(ans[: d - 1])
    val, wit = ans
    return val, (wit[d - 1],) + tuple(wit[: d - 1])


def _insert_axis0(ans, m, mode):
    if ans is None or mode == VOLUME:
        return ans
    if mode == EXISTS:
        return (m,) + tuple(ans)
    val, wit = ans
    return val, (m,) + tuple(wit)


class SolveStats:
    """Optional instrumentation collected during a solve."""

    def __init__(self):
        self.splits = []  # (d, parent_weight, child_weights)
        self.nodes = 0
        self.leaves = 0
        self.max_depth = 0

    def record_split(self, d, parent_w, child_ws):
        self.splits.append((d, parent_w, tuple(child_ws)))


def _combine_depth(a, b, minmax):
    if a is None:
        return b
    if b is None:
        return a
    if (b[0] - a[0]) * minmax > 0:
        return b
    if a[0] == b[0] and b[1] < a[1]:
        return b
    return a


def _solve_node(node: NodeState, guard: int, stats: Optional[SolveStats]) -> object:
    if stats is not None:
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, node.depth_level)
    if node.depth_level > guard:
        raise AssertionError("recursion depth guard exceeded: accounting bug")
    outcome = reduce_node(node)
    if outcome.short_circuit:
        return outcome.answer
    node = outcome.node
    check_reduced_invariants(node)
    transforms = outcome.transforms

    if node.d == 1 or node_face_count(node) <= _BASE_FACE_COUNT:
        if stats is not None:
            stats.leaves += 1
        ans = base_case(node)
        return _unshrink_witness(ans, transforms, node.mode)

    parent_w = node_short_weight(node) if stats is not None else None
    sp = split_node(node)
    if sp.rotated_only:
        ans = _solve_node(sp.left, guard, stats)
        ans = _unrotate_witness(ans, node.mode, node.d)
        return _unshrink_witness(ans, transforms, node.mode)

    if stats is not None:
        stats.record_split(
            node.d, parent_w, [node_short_weight(sp.left), node_short_weight(sp.right)]
        )

    if node.mode == VOLUME:
        ans = _solve_node(sp.left, guard, stats) + _solve_node(sp.right, guard, stats)
        return ans
    if node.mode == EXISTS:
        got = _solve_node(sp.left, guard, stats)
        if got is not None:
            ans = _unrotate_witness(got, EXISTS, node.d)
        else:
            got_m = _solve_node(sp.middle, guard, stats) if sp.middle is not None else None
            if got_m is not None:
                ans = _insert_axis0(got_m, sp.middle_coord, EXISTS)
            else:
                got_r = _solve_node(sp.right, guard, stats)
                ans = _unrotate_witness(got_r, EXISTS, node.d) if got_r is not None else None
        return _unshrink_witness(ans, transforms, node.mode)

    # depth
    best = None
    got = _solve_node(sp.left, guard, stats)
    best = _combine_depth(best, _unrotate_witness(got, DEPTH, node.d), node.minmax)
    if sp.middle is not None:
        got = _solve_node(sp.middle, guard, stats)
        best = _combine_depth(best, _insert_axis0(got, sp.middle_coord, DEPTH), node.minmax)
    got = _solve_node(sp.right, guard, stats)
    best = _combine_depth(best, _unrotate_witness(got, DEPTH, node.d), node.minmax)
    return _unshrink_witness(best, transforms, node.mode)


def solve_node(node: NodeState, stats: Optional[SolveStats] = None):
    """Solve from an arbitrary node state (answers in node coordinates)."""
    w = node_short_weight(node)
    guard = node.d * (math.ceil((node.d / 2) * math.log2(max(2.0, w))) + 2) + 2 * node.d + 8
    return _solve_node(node.copy(), guard + node.depth_level, stats)


# ---------------------------------------------------------------------------
# public entry points


def _decode_witness(w, scale) -> tuple:
    # internal lattice -> doubled original coordinates
    return tuple(int(x) // (scale // 2) for x in w)


def _check_exists_witness(inst: GkmpInstance, w: tuple) -> None:
    by_color = {}
    for co in inst.orthants:
        by_color.setdefault(co.color, []).append(co.orthant)
    assert inst.clip.contains_doubled(w), "witness outside clip"
    for color in range(inst.n_colors):
        assert any(o.contains_doubled(w) for o in by_color.get(color, [])), (
            "witness misses color %d" % color
        )
    for eb in inst.eboxes:
        assert not eb.box.contains_doubled(w), "witness inside excluded box"


def check_colorful_witness(inst: GkmpInstance, w: tuple) -> None:
    """Assert that a doubled-coordinate point is a valid colorful witness."""
    _check_exists_witness(inst, w)


def depth_at(inst: GkmpInstance, w: tuple) -> int:
    """Depth of a point (doubled coordinates) under the instance."""
    by_color = {}
    for co in inst.orthants:
        by_color.setdefault(co.color, []).append(co.orthant)
    val = inst.depth_offset
    for color, orths in by_color.items():
        if any(o.contains_doubled(w) for o in orths):
            val += 1
    for eb in inst.eboxes:
        if eb.box.contains_doubled(w):
            val += int(eb.weight)
    return val


def _require_zero_weights(inst: GkmpInstance) -> None:
    for eb in inst.eboxes:
        if eb.weight != 0:
            raise InputError("eboxes must carry weight 0 for this query")


def solve_volume(inst: GkmpInstance, stats: Optional[SolveStats] = None) -> int:
    """Exact volume of the colorful region minus exclusions, inside the clip."""
    inst.validate()
    _require_zero_weights(inst)
    node = NodeState.from_instance(inst, VOLUME)
    return int(solve_node(node, stats))


def solve_exists_colorful(inst: GkmpInstance, stats: Optional[SolveStats] = None):
    """A colorful point (in every color's union, no exclusion box, inside
    the clip) in doubled coordinates, or None.  Finds measure-zero
    intersections; the returned witness is re-verified by membership."""
    inst.validate()
    _require_zero_weights(inst)
    node = NodeState.from_instance(inst, EXISTS)
    got = solve_node(node, stats)
    if got is None:
        return None
    w = _decode_witness(got, 4)
    _check_exists_witness(inst, w)
    return w


def solve_depth(inst: GkmpInstance, mode: str = "max", stats: Optional[SolveStats] = None):
    """Extremal depth over the clip with a witness point (doubled coords)."""
    inst.validate()
    if mode not in ("min", "max"):
        raise InputError(f"mode must be 'min' or 'max', got {mode!r}")
    minmax = 1 if mode == "max" else -1
    node = NodeState.from_instance(inst, DEPTH, minmax)
    got = solve_node(node, stats)
    assert got is not None, "depth query on an empty clip"
    val, wit = got
    w = _decode_witness(wit, 4)
    assert depth_at(inst, w) == val, "depth witness failed re-verification"
    return int(val), w
