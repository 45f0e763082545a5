"""JSON instance formats and seeded random generators.

Three document kinds, schema-validated on load with path/field error
reporting:

``hausdorff``: {"kind": "hausdorff", "d": int, "P": [[int, ...]], "Q": [[int, ...]]}
``gkmp``:      {"kind": "gkmp", "d": int, "n_colors": int,
                "clip": {"lo": [...], "hi": [...]},
                "orthants": [{"color": int, "lo": [int|null, ...], "hi": [...]}],
                "eboxes": [{"lo": [...], "hi": [...], "open": bool, "weight": int}]}
``graph``:     {"kind": "graph", "n0": int, "edges": [[u, v], ...]}

A null bound is an unbounded side; orthants may not have two finite
bounds on one axis.  All file I/O is UTF-8.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .errors import InputError
from .geom import COORD_LIMIT, INF, NEG_INF, AxisBox, Cell, ColoredOrthant, Orthant
from .gkmp import Ebox, GkmpInstance
from .hausdorff import HausdorffInstance
from .oracles import Graph


def _want(cond, path, msg):
    if not cond:
        raise InputError(f"{path}: {msg}")


def _int_at(doc, path):
    _want(isinstance(doc, int) and not isinstance(doc, bool), path, "expected an integer")
    return doc


def _coord_at(doc, path):
    v = _int_at(doc, path)
    _want(abs(v) <= COORD_LIMIT, path, f"coordinate {v} exceeds the 2^40 budget")
    return v


def _bound_list(doc, d, path, side):
    _want(isinstance(doc, list) and len(doc) == d, path, f"expected a list of {d} bounds")
    out = []
    for i, v in enumerate(doc):
        if v is None:
            out.append(NEG_INF if side == "lo" else INF)
        else:
            out.append(_coord_at(v, f"{path}[{i}]"))
    return tuple(out)


def _point_list(doc, d, path):
    _want(isinstance(doc, list) and doc, path, "expected a nonempty list of points")
    pts = []
    for i, p in enumerate(doc):
        _want(isinstance(p, list) and len(p) == d, f"{path}[{i}]", f"expected {d} coordinates")
        pts.append(tuple(_coord_at(c, f"{path}[{i}][{j}]") for j, c in enumerate(p)))
    return tuple(pts)


def instance_to_dict(obj) -> dict:
    if isinstance(obj, HausdorffInstance):
        return {
            "kind": "hausdorff",
            "d": obj.d,
            "P": [list(p) for p in obj.P],
            "Q": [list(q) for q in obj.Q],
        }
    if isinstance(obj, GkmpInstance):
        def b(v):
            return None if v in (INF, NEG_INF) else v

        return {
            "kind": "gkmp",
            "d": obj.d,
            "n_colors": obj.n_colors,
            "clip": {"lo": list(obj.clip.lo), "hi": list(obj.clip.hi)},
            "orthants": [
                {
                    "color": co.color,
                    "lo": [b(v) for v in co.orthant.lo],
                    "hi": [b(v) for v in co.orthant.hi],
                }
                for co in obj.orthants
            ],
            "eboxes": [
                {
                    "lo": [b(v) for v in eb.box.lo],
                    "hi": [b(v) for v in eb.box.hi],
                    "open": eb.box.open_box,
                    "weight": eb.weight,
                }
                for eb in obj.eboxes
            ],
        }
    if isinstance(obj, Graph):
        return {"kind": "graph", "n0": obj.n0, "edges": sorted(list(e) for e in obj.edges)}
    raise InputError(f"cannot serialize {type(obj).__name__}")


def instance_from_dict(doc: dict, path: str = "$"):
    _want(isinstance(doc, dict), path, "expected an object")
    kind = doc.get("kind")
    if kind == "hausdorff":
        d = _int_at(doc.get("d"), f"{path}.d")
        _want(2 <= d <= 8, f"{path}.d", "d must be in [2, 8]")
        P = _point_list(doc.get("P"), d, f"{path}.P")
        Q = _point_list(doc.get("Q"), d, f"{path}.Q")
        return HausdorffInstance(d, P, Q)
    if kind == "gkmp":
        d = _int_at(doc.get("d"), f"{path}.d")
        _want(2 <= d <= 8, f"{path}.d", "d must be in [2, 8]")
        n_colors = _int_at(doc.get("n_colors"), f"{path}.n_colors")
        clip = doc.get("clip")
        _want(isinstance(clip, dict), f"{path}.clip", "expected an object")
        clo = tuple(
            _coord_at(v, f"{path}.clip.lo[{i}]")
            for i, v in enumerate(clip.get("lo") or [])
        )
        chi = tuple(
            _coord_at(v, f"{path}.clip.hi[{i}]")
            for i, v in enumerate(clip.get("hi") or [])
        )
        _want(len(clo) == d and len(chi) == d, f"{path}.clip", f"expected {d} bounds")
        _want(all(a <= b for a, b in zip(clo, chi)), f"{path}.clip", "lo must not exceed hi")
        orthants = []
        for i, o in enumerate(doc.get("orthants") or []):
            opath = f"{path}.orthants[{i}]"
            _want(isinstance(o, dict), opath, "expected an object")
            color = _int_at(o.get("color"), f"{opath}.color")
            _want(0 <= color < n_colors, f"{opath}.color", "color out of range")
            lo = _bound_list(o.get("lo"), d, f"{opath}.lo", "lo")
            hi = _bound_list(o.get("hi"), d, f"{opath}.hi", "hi")
            for ax in range(d):
                _want(
                    lo[ax] == NEG_INF or hi[ax] == INF,
                    f"{opath}",
                    f"axis {ax}: an orthant may not have two finite bounds",
                )
            orthants.append(ColoredOrthant(Orthant(lo, hi), color))
        eboxes = []
        for i, e in enumerate(doc.get("eboxes") or []):
            epath = f"{path}.eboxes[{i}]"
            _want(isinstance(e, dict), epath, "expected an object")
            lo = _bound_list(e.get("lo"), d, f"{epath}.lo", "lo")
            hi = _bound_list(e.get("hi"), d, f"{epath}.hi", "hi")
            for ax in range(d):
                _want(lo[ax] <= hi[ax], epath, f"axis {ax}: lo must not exceed hi")
            open_box = e.get("open", False)
            _want(isinstance(open_box, bool), f"{epath}.open", "expected a boolean")
            weight = _int_at(e.get("weight", 0), f"{epath}.weight")
            eboxes.append(Ebox(AxisBox(lo, hi, open_box), weight))
        inst = GkmpInstance(d, n_colors, tuple(orthants), tuple(eboxes), Cell(clo, chi))
        inst.validate()
        return inst
    if kind == "graph":
        n0 = _int_at(doc.get("n0"), f"{path}.n0")
        _want(n0 >= 1, f"{path}.n0", "n0 must be >= 1")
        edges = doc.get("edges")
        _want(isinstance(edges, list), f"{path}.edges", "expected a list")
        pairs = []
        for i, e in enumerate(edges):
            _want(
                isinstance(e, list) and len(e) == 2,
                f"{path}.edges[{i}]",
                "expected a pair [u, v]",
            )
            u = _int_at(e[0], f"{path}.edges[{i}][0]")
            v = _int_at(e[1], f"{path}.edges[{i}][1]")
            _want(0 <= u < n0 and 0 <= v < n0 and u != v, f"{path}.edges[{i}]", "bad edge")
            pairs.append((u, v))
        return Graph.from_edges(n0, pairs)
    raise InputError(f"{path}.kind: unknown kind {kind!r}")


def save_instance(obj, path) -> None:
    Path(path).write_text(dumps_instance(obj), encoding="utf-8")


def dumps_instance(obj) -> str:
    return json.dumps(instance_to_dict(obj), indent=2, sort_keys=True) + "\n"


def load_instance(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}")
    return instance_from_dict(doc)


# ---------------------------------------------------------------------------
# seeded generators


def gen_gkmp(
    d: int,
    n_colors: int,
    n_orthants: int,
    coord_max: int,
    seed: int,
    n_eboxes: int = 0,
    p_free: float = 0.15,
) -> GkmpInstance:
    """Deterministic random instance; every color gets at least one orthant."""
    if n_colors < 1 or n_orthants < n_colors:
        raise InputError("need n_orthants >= n_colors >= 1")
    if d < 2 or coord_max < 1:
        raise InputError("need d >= 2 and coord_max >= 1")
    rng = random.Random(seed)
    orthants = []
    for i in range(n_orthants):
        color = i if i < n_colors else rng.randrange(n_colors)
        lo = [NEG_INF] * d
        hi = [INF] * d
        n_free = 0
        for ax in range(d):
            roll = rng.random()
            if roll < p_free and n_free + 1 < d:
                n_free += 1
                continue
            v = rng.randint(0, coord_max)
            if rng.random() < 0.5:
                lo[ax] = v
            else:
                hi[ax] = v
        orthants.append(ColoredOrthant(Orthant(tuple(lo), tuple(hi)), color))
    eboxes = []
    for _ in range(n_eboxes):
        lo = []
        hi = []
        for ax in range(d):
            a = rng.randint(0, coord_max)
            b = rng.randint(0, coord_max)
            lo.append(min(a, b))
            hi.append(max(a, b))
        eboxes.append(Ebox(AxisBox(tuple(lo), tuple(hi), open_box=rng.random() < 0.5), 0))
    clip = Cell((0,) * d, (coord_max,) * d)
    return GkmpInstance(d, n_colors, tuple(orthants), tuple(eboxes), clip)


def gen_corner_touching(d: int, n_colors: int, coord_max: int, seed: int) -> GkmpInstance:
    """Instance whose colorful intersection is exactly one point: colors 0
    and 1 are opposite orthants meeting at a corner, further colors contain
    the corner.  These exercise measure-zero intersection handling."""
    if n_colors < 2:
        raise InputError("need n_colors >= 2")
    rng = random.Random(seed)
    z = tuple(rng.randint(1, coord_max - 1) for _ in range(d))
    orthants = [
        ColoredOrthant(Orthant.at_least(z), 0),
        ColoredOrthant(Orthant.at_most(z), 1),
    ]
    for color in range(2, n_colors):
        lo = [NEG_INF] * d
        hi = [INF] * d
        for ax in range(d):
            if rng.random() < 0.5:
                lo[ax] = rng.randint(0, z[ax])
            else:
                hi[ax] = rng.randint(z[ax], coord_max)
        orthants.append(ColoredOrthant(Orthant(tuple(lo), tuple(hi)), color))
    clip = Cell((0,) * d, (coord_max,) * d)
    return GkmpInstance(d, n_colors, tuple(orthants), (), clip)


def gen_hausdorff(d: int, n: int, m: int, coord_max: int, seed: int) -> HausdorffInstance:
    if n < 1 or m < 1:
        raise InputError("need n >= 1 and m >= 1")
    rng = random.Random(seed)
    P = tuple(tuple(rng.randint(0, coord_max) for _ in range(d)) for _ in range(n))
    Q = tuple(tuple(rng.randint(0, coord_max) for _ in range(d)) for _ in range(m))
    return HausdorffInstance(d, P, Q)


def gen_graph(n0: int, p_edge: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(n0)
        for v in range(u + 1, n0)
        if rng.random() < p_edge
    ]
    return Graph.from_edges(n0, edges)
