"""Hard-instance generation from clique detection.

A graph with n0 vertices and a clique size d*g reduce to an intersection
problem over translated orthant-union shapes ("Problem 3" style), which in
turn reduces to a translational Hausdorff decision on points and cubes.
Ground truth comes from brute-force clique detection, so the emitted
instances are self-verifying benchmarks.

Construction sketch: a point x in [0, n0^g)^d encodes d*g vertices as
base-n0 digits.  For every slot pair and every non-edge (u, v) (including
u = v, which enforces distinctness) the digit pattern is forbidden by
intersecting with complements of block patterns.  Single blocks and block
rows/columns use O(1)-orthant box complements; full block grids are
tiled by anti-diagonal staircases of mu+1 blocks whose complement needs
only O(mu) orthants, trading orthant count against translate count.

Everything uses integer-closed semantics: half-open digit blocks
``[s, s+len)`` become closed integer boxes ``[s, s+len-1]``, which is
exact on the integer lattice and loses nothing because a nonempty
intersection of closed integer-coordinate boxes contains a lattice point.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError
from .geom import INF, NEG_INF, Orthant
from .oracles import Graph, brute_clique


def phi_digit(x: int, a: int, n0: int) -> int:
    """The (a+1)-th least significant base-n0 digit of x."""
    if n0 < 2:
        raise InputError("n0 must be >= 2")
    if x < 0 or a < 0:
        raise InputError("x and a must be nonnegative")
    return (x // n0**a) % n0


@dataclass(frozen=True)
class Problem3Instance:
    """Shapes (orthant unions), translated copies, and the bounding region.

    The intersection of all translates, clipped to [0, region_side)^d,
    is exactly the set of points whose digit tuple forms a (d*g)-clique.
    """

    d: int
    shapes: tuple  # of tuple[Orthant]
    translates: tuple  # of (shape_index, translation vector)
    region_side: int
    graph: Graph
    meta: tuple  # (n0, g, mu)

    @property
    def total_orthants(self) -> int:
        return sum(len(s) for s in self.shapes)


@dataclass(frozen=True)
class ReductionOutput:
    P: tuple
    Qcubes: tuple  # cube centers
    side: int  # cube side = decision threshold r2
    expected: bool
    provenance: dict


def _orthant(d: int, bounds: dict) -> Orthant:
    """Orthant from {axis: ('>=', v) | ('<=', v)}; axes not listed are free."""
    lo = [NEG_INF] * d
    hi = [INF] * d
    for ax, (side, v) in bounds.items():
        if side == ">=":
            lo[ax] = v
        else:
            hi[ax] = v
    return Orthant(tuple(lo), tuple(hi))


def _materialize(orth: Orthant, active: set, inert_lo: int, inert_hi: int) -> Orthant:
    """Give every free axis a bound that is inert under the shape's
    translates: region-min on axes the translates never touch, and a
    far-out bound on active axes so the cube conversion stays exact."""
    lo = list(orth.lo)
    hi = list(orth.hi)
    for ax in range(orth.d):
        if lo[ax] != NEG_INF or hi[ax] != INF:
            continue
        if ax in active:
            # pair lower-bounded pieces with a far-low bound, upper with far-high
            has_upper = any(h != INF for h in orth.hi)
            if has_upper:
                hi[ax] = inert_hi
            else:
                lo[ax] = inert_lo
        else:
            lo[ax] = 0
    return Orthant(tuple(lo), tuple(hi))


def _box_complement_2d(d, axa, axb, ha, hb, inert_lo, inert_hi):
    """Complement of the block [0,ha-1] x [0,hb-1] on axes (axa, axb)."""
    pieces = [
        _orthant(d, {axa: ("<=", -1), axb: ("<=", inert_hi)}),
        _orthant(d, {axa: (">=", ha), axb: (">=", inert_lo)}),
        _orthant(d, {axb: ("<=", -1), axa: ("<=", inert_hi)}),
        _orthant(d, {axb: (">=", hb), axa: (">=", inert_lo)}),
    ]
    return tuple(_materialize(o, {axa, axb}, inert_lo, inert_hi) for o in pieces)


def _box_complement_1d(d, ax, length, inert_lo, inert_hi):
    pieces = [
        _orthant(d, {ax: ("<=", -1)}),
        _orthant(d, {ax: (">=", length)}),
    ]
    return tuple(_materialize(o, {ax}, inert_lo, inert_hi) for o in pieces)


def _staircase_complement(d, axa, axb, mu, A, B, ha, hb, inert_lo, inert_hi):
    """Complement of the anti-diagonal of mu+1 separated blocks.

    Block k (k = 0..mu) spans [k*A, k*A+ha-1] on axa and
    [(mu-k)*B, (mu-k)*B+hb-1] on axb.  The complement is a union of
    2*mu+4 orthants: upper-right and lower-left quadrants along the
    staircase plus four outer pieces.
    """
    X = [k * A for k in range(mu + 1)]
    Y = [(mu - k) * B for k in range(mu + 1)]
    pieces = []
    for k in range(mu):
        pieces.append(_orthant(d, {axa: (">=", X[k] + ha), axb: (">=", Y[k + 1] + hb)}))
        pieces.append(_orthant(d, {axa: ("<=", X[k + 1] - 1), axb: ("<=", Y[k] - 1)}))
    pieces.append(_orthant(d, {axb: (">=", Y[0] + hb), axa: (">=", inert_lo)}))
    pieces.append(_orthant(d, {axa: (">=", X[mu] + ha), axb: (">=", inert_lo)}))
    pieces.append(_orthant(d, {axa: ("<=", X[0] - 1), axb: ("<=", inert_hi)}))
    pieces.append(_orthant(d, {axb: ("<=", Y[mu] - 1), axa: ("<=", inert_hi)}))
    return tuple(_materialize(o, {axa, axb}, inert_lo, inert_hi) for o in pieces)


def build_problem3(graph: Graph, d: int, g: int, mu: int) -> Problem3Instance:
    """Shapes and translates whose intersection, clipped to the region,
    is exactly the set of points whose d*g digits form a clique.

    ``mu`` trades orthants per staircase shape (O(mu)) against the number
    of translates needed to tile each block grid (O(n0^2(g-1)/mu) per
    forbidden pair).
    """
    n0 = graph.n0
    if n0 < 2:
        raise InputError("need n0 >= 2")
    if d < 2 or g < 1:
        raise InputError("need d >= 2 and g >= 1")
    if not (1 <= mu <= n0 ** (g - 1)):
        raise InputError(f"need 1 <= mu <= n0^(g-1) = {n0 ** (g - 1)}")
    N = n0**g
    inert_lo = -2 * N
    inert_hi = 3 * N

    shapes: list = []
    shape_index: dict = {}
    translates: list = []

    def shape_id(key, builder):
        if key not in shape_index:
            shape_index[key] = len(shapes)
            shapes.append(builder())
        return shape_index[key]

    # region bounding halfspaces, untranslated
    for ax in range(d):
        sid = shape_id(
            ("bound_lo", ax),
            lambda ax=ax: (
                _materialize(_orthant(d, {ax: (">=", 0)}), set(), inert_lo, inert_hi),
            ),
        )
        translates.append((sid, (0,) * d))
        sid = shape_id(
            ("bound_hi", ax),
            lambda ax=ax: (
                _materialize(_orthant(d, {ax: ("<=", N - 1)}), set(), inert_lo, inert_hi),
            ),
        )
        translates.append((sid, (0,) * d))

    slots = [(alpha, a) for alpha in range(d) for a in range(g)]
    nonedges = [
        (u, v)
        for u in range(n0)
        for v in range(n0)
        if not graph.adjacent(u, v)
    ]

    for si in range(len(slots)):
        for sj in range(si + 1, len(slots)):
            (alpha, a), (beta, b) = slots[si], slots[sj]
            if alpha == beta:
                # two digits of one coordinate: a union of short intervals
                lo_dig, hi_dig = (a, b) if a < b else (b, a)
                length = n0**lo_dig
                sid = shape_id(
                    ("1d", alpha, length),
                    lambda alpha=alpha, length=length: _box_complement_1d(
                        d, alpha, length, inert_lo, inert_hi
                    ),
                )
                for u, v in nonedges:
                    du = u if a == lo_dig else v  # digit value at the low slot
                    dv = v if a == lo_dig else u
                    base = dv * n0**hi_dig + du * n0**lo_dig
                    for t_outer in range(n0 ** (g - 1 - hi_dig)):
                        for t_mid in range(n0 ** (hi_dig - lo_dig - 1)):
                            start = (
                                t_outer * n0 ** (hi_dig + 1)
                                + t_mid * n0 ** (lo_dig + 1)
                                + base
                            )
                            vec = [0] * d
                            vec[alpha] = start
                            translates.append((sid, tuple(vec)))
                continue
            ni = n0 ** (g - 1 - a)
            nj = n0 ** (g - 1 - b)
            ha, hb = n0**a, n0**b
            A, B = n0 ** (a + 1), n0 ** (b + 1)
            if ni == 1 or nj == 1:
                # block row/column: one box complement per block
                sid = shape_id(
                    ("2d", alpha, beta, ha, hb),
                    lambda alpha=alpha, beta=beta, ha=ha, hb=hb: _box_complement_2d(
                        d, alpha, beta, ha, hb, inert_lo, inert_hi
                    ),
                )
                for u, v in nonedges:
                    for i in range(ni):
                        for j in range(nj):
                            vec = [0] * d
                            vec[alpha] = i * A + u * ha
                            vec[beta] = j * B + v * hb
                            translates.append((sid, tuple(vec)))
                continue
            # full block grid: tile anti-diagonal levels with staircase segments
            sid = shape_id(
                ("diag", alpha, beta, a, b, mu),
                lambda alpha=alpha, beta=beta, a=a, b=b: _staircase_complement(
                    d, alpha, beta, mu, n0 ** (a + 1), n0 ** (b + 1), n0**a, n0**b,
                    inert_lo, inert_hi,
                ),
            )
            for u, v in nonedges:
                for level in range(ni + nj - 1):
                    i_lo = max(0, level - (nj - 1))
                    i_hi = min(ni - 1, level)
                    i_s = i_lo
                    while i_s <= i_hi:
                        vec = [0] * d
                        vec[alpha] = i_s * A + u * ha
                        vec[beta] = (level - i_s - mu) * B + v * hb
                        translates.append((sid, tuple(vec)))
                        i_s += mu + 1

    return Problem3Instance(
        d=d,
        shapes=tuple(shapes),
        translates=tuple(translates),
        region_side=N,
        graph=graph,
        meta=(n0, g, mu),
    )


def _covers_int(orth: Orthant, x) -> bool:
    return all(a <= c <= b for a, c, b in zip(orth.lo, x, orth.hi))


def verify_instance(inst: Problem3Instance, budget: int = 2_000_000) -> bool:
    """Exhaustive self-check on the integer lattice of the region:
    membership in the intersection of all translates must equal the clique
    predicate of the decoded digit tuple at every point."""
    n0, g, _ = inst.meta
    d = inst.d
    n_pts = inst.region_side**d
    if n_pts > budget:
        raise CapacityError(f"verify_instance: {n_pts} lattice points exceed budget {budget}")
    axes = [np.arange(inst.region_side, dtype=np.int64) for _ in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=1)  # (n_pts, d)

    member = np.ones(n_pts, dtype=bool)
    for sid, vec in inst.translates:
        covered = np.zeros(n_pts, dtype=bool)
        for orth in inst.shapes[sid]:
            ok = np.ones(n_pts, dtype=bool)
            for ax in range(d):
                lo, hi = orth.lo[ax], orth.hi[ax]
                rel = pts[:, ax] - vec[ax]
                if lo != NEG_INF:
                    ok &= rel >= lo
                if hi != INF:
                    ok &= rel <= hi
            covered |= ok
        member &= covered
        if not member.any():
            break

    clique = np.ones(n_pts, dtype=bool)
    digits = []
    for alpha in range(d):
        for a in range(g):
            digits.append((pts[:, alpha] // n0**a) % n0)
    for i in range(len(digits)):
        for j in range(i + 1, len(digits)):
            pair_ok = np.zeros(n_pts, dtype=bool)
            for u, v in inst.graph.edges:
                pair_ok |= (digits[i] == u) & (digits[j] == v)
                pair_ok |= (digits[i] == v) & (digits[j] == u)
            clique &= pair_ok
    return bool(np.array_equal(member, clique))


def graph_digest(graph: Graph) -> str:
    payload = json.dumps([graph.n0, sorted(graph.edges)], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def problem3_to_hausdorff(inst: Problem3Instance) -> ReductionOutput:
    """Points-and-cubes instance equivalent to the shape intersection.

    Shapes and translates are shifted to be nonnegative (the shift acts
    uniformly on all objects, so the decision is unchanged), the cube side
    is chosen as twice the largest coordinate so everything lives in the
    lemma frame, each orthant becomes the equivalent cube anchored at its
    apex, shape classes are separated along axis 1 by offsets 4*i*side,
    and two auxiliary cubes/points pin the frame.
    """
    d = inst.d
    all_bounds = [
        v
        for shape in inst.shapes
        for o in shape
        for v in o.lo + o.hi
        if v not in (INF, NEG_INF)
    ]
    all_tr = [c for _, vec in inst.translates for c in vec]
    g2 = max(0, -min(all_bounds))
    g1 = max(0, -min(all_tr)) if all_tr else 0
    m_scale = max(
        1,
        max(v + g2 for v in all_bounds),
        max((c + g1 for c in all_tr), default=1),
    )
    side = 2 * m_scale
    if side * 4 * (len(inst.shapes) + 2) > (1 << 40):
        raise CapacityError("reduction coordinates exceed the coordinate budget")

    q_centers = []
    half = side // 2
    for i, shape in enumerate(inst.shapes, start=1):
        ui = 4 * i * side
        for orth in shape:
            center = []
            for ax in range(d):
                lo, hi = orth.lo[ax], orth.hi[ax]
                if lo != NEG_INF:
                    c = (lo + g2) + half  # cube [lo, lo + side]
                else:
                    c = (hi + g2) - half  # cube [hi - side, hi]
                center.append(c + (ui if ax == 0 else 0))
            q_centers.append(tuple(center))
    pts = []
    for sid, vec in inst.translates:
        ui = 4 * (sid + 1) * side
        pts.append(
            tuple((ui if ax == 0 else 0) - (vec[ax] + g1) for ax in range(d))
        )
    # auxiliary frame cubes and points
    q_centers.append((half,) * d)
    u_last = 4 * (len(inst.shapes) + 1) * side
    q_centers.append(tuple(u_last + half if ax == 0 else half for ax in range(d)))
    pts.append((0,) * d)
    pts.append(tuple(u_last if ax == 0 else 0 for ax in range(d)))

    n0, g, mu = inst.meta
    expected = brute_clique(inst.graph, d * g)
    return ReductionOutput(
        P=tuple(pts),
        Qcubes=tuple(q_centers),
        side=side,
        expected=expected,
        provenance={
            "graph_sha256": graph_digest(inst.graph),
            "n0": n0,
            "g": g,
            "mu": mu,
            "d": d,
            "clique_size": d * g,
        },
    )
