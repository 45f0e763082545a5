"""Shared test helpers: a brute-force evaluator for solver node states.

``node_brute`` enumerates the node's internal lattice directly (all
measure-carrying positions for volume, all candidate positions for
exists/depth) and evaluates membership object by object.  It shares no
code with the solver's reduce/split/shrink/base machinery, so it serves
as ground truth when exercising those steps on transformed nodes.
"""

from itertools import product


def _node_objects(node):
    orths = [
        (
            [int(x) for x in node.olo[i]],
            [int(x) for x in node.ohi[i]],
            int(node.ocolor[i]),
        )
        for i in range(node.olo.shape[0])
    ]
    ebs = [
        (
            [int(x) for x in node.elo[i]],
            [int(x) for x in node.ehi[i]],
            int(node.ew[i]),
        )
        for i in range(node.elo.shape[0])
    ]
    return orths, ebs


def _covered(lo, hi, vec):
    return all(a <= x <= b for a, x, b in zip(lo, vec, hi))


def node_brute(node):
    """Ground-truth answer for a NodeState, in its own coordinates.

    Volume: exact measure.  Exists: lexicographically smallest feasible
    candidate or None.  Depth: (extremum, lex-smallest witness) or None
    for an empty cell.
    """
    d = node.d
    cl = [int(x) for x in node.cell_lo]
    ch = [int(x) for x in node.cell_hi]
    orths, ebs = _node_objects(node)
    colors = sorted(node.colors_alive)

    if node.mode == "volume":
        axes = [range(c + (1 - c % 2), h + 1, 2) for c, h in zip(cl, ch)]  # odd positions
        total = 0
        for vec in product(*axes):
            if any(
                not any(_covered(lo, hi, vec) for lo, hi, c2 in orths if c2 == c)
                for c in colors
            ):
                continue
            if any(_covered(lo, hi, vec) for lo, hi, _ in ebs):
                continue
            total += 1
        return total

    axes = [range(c + 1, h, 2) for c, h in zip(cl, ch)]  # even candidates
    if node.mode == "exists":
        for vec in product(*axes):
            if any(
                not any(_covered(lo, hi, vec) for lo, hi, c2 in orths if c2 == c)
                for c in colors
            ):
                continue
            if any(_covered(lo, hi, vec) for lo, hi, _ in ebs):
                continue
            return vec
        return None

    best = None
    for vec in product(*axes):
        val = node.offset
        for c in colors:
            if any(_covered(lo, hi, vec) for lo, hi, c2 in orths if c2 == c):
                val += 1
        for lo, hi, w in ebs:
            if _covered(lo, hi, vec):
                val += w
        for ax in range(d):
            for a, b, w in node.profiles[ax]:
                if a <= vec[ax] <= b:
                    val += w
        if best is None or (val - best[0]) * node.minmax > 0:
            best = (val, vec)
    return best
