"""Directed L-infinity Hausdorff distance under translation.

The decision problem (is there a translation ``v`` with every point of
``P + v`` within distance ``r`` of some point of ``Q``?) reduces to a
colorful-point query: for each pair ``(p, q)`` build the cube of feasible
translations, color it by ``p``, chop the arrangement into a uniform grid
of cube-sized cells (inside one cell a cube is an orthant), and ask each
cell for a point covered by all colors.

Everything runs in doubled coordinates: distances are reported as ``r2``
(twice the geometric distance) so optimal half-integer radii stay
integral, and witness translations are returned doubled as well.
"""

from __future__ import annotations

from bisect import insort
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import InputError
from .geom import INF, NEG_INF, Cell, ColoredOrthant, Orthant
from .gkmp import Ebox, GkmpInstance, solve_exists_colorful


@dataclass(frozen=True)
class HausdorffInstance:
    d: int
    P: tuple
    Q: tuple

    def __post_init__(self):
        P = tuple(tuple(int(c) for c in p) for p in self.P)
        Q = tuple(tuple(int(c) for c in q) for q in self.Q)
        if not P or not Q:
            raise InputError("P and Q must be nonempty")
        for pt in P + Q:
            if len(pt) != self.d:
                raise InputError("point dimension mismatch")
            for c in pt:
                if abs(c) > (1 << 40):
                    raise InputError(f"coordinate {c} exceeds the 2^40 budget")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)


def directed_hausdorff_linf(P, Q) -> int:
    """Doubled directed distance: 2 * max over p of min over q of the
    Chebyshev distance from p to q."""
    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    if not P or not Q:
        raise InputError("P and Q must be nonempty")
    worst = 0
    for p in P:
        best = None
        for q in Q:
            dist = max(abs(a - b) for a, b in zip(p, q))
            if best is None or dist < best:
                best = dist
                if best == 0:
                    break
        worst = max(worst, best)
    return 2 * worst


def shifted_directed_r2(P, Q, w) -> int:
    """Doubled directed distance of P translated by the doubled vector w."""
    worst = 0
    for p in P:
        best = None
        for q in Q:
            dist = max(abs(2 * (a - b) + s) for a, b, s in zip(p, q, w))
            if best is None or dist < best:
                best = dist
        worst = max(worst, best)
    return worst


def candidate_values(P, Q) -> list:
    """Sorted candidate thresholds (doubled) containing the optimum.

    Feasibility changes only where two opposing cube faces meet, i.e. at
    half the difference of two center coordinates; with doubled values
    that is exactly the per-axis absolute difference of two centers.
    """
    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    d = len(P[0])
    cands = {0}
    for ax in range(d):
        coords = sorted({q[ax] - p[ax] for p in P for q in Q})
        for i, a in enumerate(coords):
            for b in coords[i + 1 :]:
                cands.add(b - a)
    return sorted(cands)


def _cube_fragment_orthant(lo, hi, cell_lo, cell_hi, d) -> Orthant:
    olo = []
    ohi = []
    for ax in range(d):
        a, b, cl, ch = lo[ax], hi[ax], cell_lo[ax], cell_hi[ax]
        if a > cl and b < ch:
            raise AssertionError("cube smaller than grid cell")
        olo.append(a if a > cl else NEG_INF)
        ohi.append(b if b < ch else INF)
    return Orthant(tuple(olo), tuple(ohi))


def build_cell_instances(P, Q, r2: int) -> list:
    """Per-grid-cell colorful-point instances for the decision at r2.

    Works in doubled translation coordinates: the cube for (p, q) has
    corners ``2(q-p) +- r2`` and the uniform grid has side ``2*r2``.
    Cells missing any color are skipped; cells are emitted in
    lexicographic index order and treated as closed (a shared-facet
    witness is found in whichever cell comes first).
    """
    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    if r2 <= 0:
        raise InputError("build_cell_instances needs r2 > 0")
    d = len(P[0])
    n = len(P)
    side = 2 * r2
    cells: dict = {}
    for pi, p in enumerate(P):
        for q in Q:
            lo = tuple(2 * (q[ax] - p[ax]) - r2 for ax in range(d))
            hi = tuple(2 * (q[ax] - p[ax]) + r2 for ax in range(d))
            ranges = [range(lo[ax] // side, hi[ax] // side + 1) for ax in range(d)]
            idx = [r.start for r in ranges]
            while True:
                key = tuple(idx)
                colors, frags = cells.setdefault(key, (set(), []))
                colors.add(pi)
                frags.append((pi, lo, hi))
                ax = d - 1
                while ax >= 0:
                    idx[ax] += 1
                    if idx[ax] < ranges[ax].stop:
                        break
                    idx[ax] = ranges[ax].start
                    ax -= 1
                if ax < 0:
                    break
    out = []
    for key in sorted(k for k, (colors, _) in cells.items() if len(colors) == n):
        cell_lo = tuple(k * side for k in key)
        cell_hi = tuple((k + 1) * side for k in key)
        orthants = []
        for pi, lo, hi in cells[key][1]:
            orthants.append(
                ColoredOrthant(_cube_fragment_orthant(lo, hi, cell_lo, cell_hi, d), pi)
            )
        out.append(
            GkmpInstance(d, n, tuple(orthants), (), Cell(cell_lo, cell_hi))
        )
    return out


def _decide_exact_match(P, Q):
    """r2 = 0: some translation must map every point of P onto a point of Q."""
    qset = set(Q)
    p0 = P[0]
    for q in sorted(Q):
        v = tuple(a - b for a, b in zip(q, p0))
        if all(tuple(a + s for a, s in zip(p, v)) in qset for p in P):
            return tuple(2 * s for s in v)
    return None


def decide_translation(P, Q, r2: int, threads: int = 1):
    """Witness translation (doubled) with shifted distance at most r2, or
    None.  The witness is re-verified by direct recomputation before it is
    returned."""
    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    if r2 < 0:
        return None
    if r2 == 0:
        return _decide_exact_match(P, Q)
    instances = build_cell_instances(P, Q, r2)

    def attempt(inst):
        got = solve_exists_colorful(inst)
        if got is None:
            return None
        assert all(x % 2 == 0 for x in got), "colorful witness not at a grid value"
        return tuple(x // 2 for x in got)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for got in pool.map(attempt, instances):
                if got is not None:
                    assert shifted_directed_r2(P, Q, got) <= r2
                    return got
        return None
    for inst in instances:
        got = attempt(inst)
        if got is not None:
            assert shifted_directed_r2(P, Q, got) <= r2
            return got
    return None


def min_hausdorff_translation(P, Q, threads: int = 1):
    """Minimum doubled directed Hausdorff distance under translation and a
    witness achieving it exactly.

    Binary search over the sorted candidate set, using monotonicity of the
    decision; the largest candidate is always feasible."""
    P = [tuple(p) for p in P]
    Q = [tuple(q) for q in Q]
    cands = candidate_values(P, Q)
    memo: dict = {}

    def feasible(i):
        if i not in memo:
            memo[i] = decide_translation(P, Q, cands[i], threads=threads)
        return memo[i] is not None

    lo, hi = 0, len(cands) - 1
    assert feasible(hi), "largest candidate must be feasible"
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    r2 = cands[lo]
    w = memo[lo]
    assert shifted_directed_r2(P, Q, w) == r2, "witness must be tight at the optimum"
    return r2, w
