"""Command-line interface.

Commands::

    hausklee gkmp volume|exists|depth --input F [--mode min|max] [--threads K]
    hausklee hausdorff decide --input F --r2 R [--threads K]
    hausklee hausdorff dist --input F [--threads K]
    hausklee gen gkmp --d D --colors C --n N [--coord-max M] [--eboxes E] --seed S
    hausklee gen hausdorff --d D --n N --m M [--coord-max M] --seed S
    hausklee gen clique --graph F --d D --g G --mu MU
    hausklee oracle gkmp volume|exists|depth --input F [--mode min|max]
    hausklee oracle hausdorff decide|dist --input F [--r2 R]
    hausklee bench --suite S --csv OUT
    hausklee verify --input F

Results go to stdout as one JSON object; decisions are encoded in the
JSON, never in the exit code.  Exit status: 0 computed, 2 invalid input,
3 capacity exceeded.  Witnesses and r2 values are in doubled coordinates.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import CapacityError, InputError
from . import bench as bench_mod
from . import formats
from .cliquegen import (
    build_problem3,
    graph_digest,
    problem3_to_hausdorff,
    verify_instance,
)
from .gkmp import GkmpInstance, solve_depth, solve_exists_colorful, solve_volume
from .hausdorff import HausdorffInstance, decide_translation, min_hausdorff_translation
from .oracles import (
    Graph,
    brute_clique,
    oracle_colorful_point,
    oracle_depth,
    oracle_min_hausdorff,
    oracle_volume,
)


def _emit(doc: dict) -> int:
    json.dump(doc, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _load_gkmp(path) -> GkmpInstance:
    inst = formats.load_instance(path)
    if not isinstance(inst, GkmpInstance):
        raise InputError(f"{path}: expected a gkmp instance")
    return inst


def _load_hausdorff(path) -> HausdorffInstance:
    inst = formats.load_instance(path)
    if not isinstance(inst, HausdorffInstance):
        raise InputError(f"{path}: expected a hausdorff instance")
    return inst


def _cmd_gkmp(args, use_oracle: bool) -> int:
    inst = _load_gkmp(args.input)
    t0 = time.perf_counter_ns()
    if args.query == "volume":
        val = oracle_volume(inst) if use_oracle else solve_volume(inst)
        out = {"volume": str(val)}
    elif args.query == "exists":
        got = oracle_colorful_point(inst) if use_oracle else solve_exists_colorful(inst)
        out = {"feasible": got is not None, "witness": list(got) if got else None}
    else:
        val, wit = (
            oracle_depth(inst, args.mode) if use_oracle else solve_depth(inst, args.mode)
        )
        out = {"value": val, "witness": list(wit), "mode": args.mode}
    out["wall_ns"] = time.perf_counter_ns() - t0
    return _emit(out)


def _cmd_hausdorff(args, use_oracle: bool) -> int:
    inst = _load_hausdorff(args.input)
    t0 = time.perf_counter_ns()
    if args.query == "decide":
        if args.r2 is None:
            raise InputError("decide requires --r2")
        if use_oracle:
            from .oracles import _sweep_feasible

            centers = [
                [tuple(2 * (q[ax] - p[ax]) for ax in range(inst.d)) for q in inst.Q]
                for p in inst.P
            ]
            feasible = args.r2 >= 0 and _sweep_feasible(centers, args.r2, inst.d)
            out = {"feasible": bool(feasible), "witness": None, "r2": args.r2}
        else:
            got = decide_translation(inst.P, inst.Q, args.r2, threads=args.threads)
            out = {
                "feasible": got is not None,
                "witness": list(got) if got else None,
                "r2": args.r2,
            }
    else:
        if use_oracle:
            r2 = oracle_min_hausdorff(inst.P, inst.Q)
            out = {"r2": r2, "witness": None}
        else:
            r2, w = min_hausdorff_translation(inst.P, inst.Q, threads=args.threads)
            out = {"r2": r2, "witness": list(w)}
    out["wall_ns"] = time.perf_counter_ns() - t0
    return _emit(out)


def _cmd_gen(args) -> int:
    if args.what == "gkmp":
        inst = formats.gen_gkmp(
            args.d, args.colors, args.n, args.coord_max, args.seed, n_eboxes=args.eboxes
        )
        text = formats.dumps_instance(inst)
    elif args.what == "hausdorff":
        inst = formats.gen_hausdorff(args.d, args.n, args.m, args.coord_max, args.seed)
        text = formats.dumps_instance(inst)
    else:  # clique
        graph = formats.load_instance(args.graph)
        if not isinstance(graph, Graph):
            raise InputError(f"{args.graph}: expected a graph instance")
        p3 = build_problem3(graph, args.d, args.g, args.mu)
        red = problem3_to_hausdorff(p3)
        doc = formats.instance_to_dict(HausdorffInstance(args.d, red.P, red.Qcubes))
        doc["r2"] = red.side
        doc["provenance"] = dict(red.provenance)
        doc["provenance"]["expected"] = red.expected
        doc["provenance"]["graph"] = formats.instance_to_dict(graph)
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    import json as _json
    from pathlib import Path

    try:
        doc = _json.loads(Path(args.input).read_text(encoding="utf-8"))
    except _json.JSONDecodeError as exc:
        raise InputError(f"{args.input}: malformed JSON at line {exc.lineno}")
    prov = doc.get("provenance")
    if not isinstance(prov, dict) or "graph" not in prov:
        raise InputError(f"{args.input}: no clique provenance to verify")
    graph = formats.instance_from_dict(prov["graph"], "$.provenance.graph")
    d, g, mu = prov["d"], prov["g"], prov["mu"]
    p3 = build_problem3(graph, d, g, mu)
    ok_lattice = verify_instance(p3)
    red = problem3_to_hausdorff(p3)
    regenerated = formats.instance_to_dict(HausdorffInstance(d, red.P, red.Qcubes))
    same = (
        regenerated["P"] == doc.get("P")
        and regenerated["Q"] == doc.get("Q")
        and red.side == doc.get("r2")
    )
    expected = brute_clique(graph, d * g)
    return _emit(
        {
            "ok": bool(ok_lattice and same and expected == prov.get("expected")),
            "lattice_check": bool(ok_lattice),
            "instance_matches": bool(same),
            "expected": expected,
            "graph_sha256": graph_digest(graph),
        }
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hausklee")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_gkmp(parent, name):
        p = parent.add_parser(name)
        q = p.add_subparsers(dest="query", required=True)
        for query in ("volume", "exists", "depth"):
            pq = q.add_parser(query)
            pq.add_argument("--input", required=True)
            pq.add_argument("--mode", choices=("min", "max"), default="max")
            pq.add_argument("--threads", type=int, default=1)
        return p

    def add_hausdorff(parent):
        p = parent.add_parser("hausdorff")
        q = p.add_subparsers(dest="query", required=True)
        for query in ("decide", "dist"):
            pq = q.add_parser(query)
            pq.add_argument("--input", required=True)
            pq.add_argument("--r2", type=int, default=None)
            pq.add_argument("--threads", type=int, default=1)
        return p

    add_gkmp(sub, "gkmp")
    add_hausdorff(sub)

    gen = sub.add_parser("gen")
    gsub = gen.add_subparsers(dest="what", required=True)
    gg = gsub.add_parser("gkmp")
    gg.add_argument("--d", type=int, required=True)
    gg.add_argument("--colors", type=int, required=True)
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--coord-max", type=int, default=16)
    gg.add_argument("--eboxes", type=int, default=0)
    gg.add_argument("--seed", type=int, required=True)
    gg.add_argument("--output", default=None)
    gh = gsub.add_parser("hausdorff")
    gh.add_argument("--d", type=int, required=True)
    gh.add_argument("--n", type=int, required=True)
    gh.add_argument("--m", type=int, required=True)
    gh.add_argument("--coord-max", type=int, default=20)
    gh.add_argument("--seed", type=int, required=True)
    gh.add_argument("--output", default=None)
    gc = gsub.add_parser("clique")
    gc.add_argument("--graph", required=True)
    gc.add_argument("--d", type=int, required=True)
    gc.add_argument("--g", type=int, required=True)
    gc.add_argument("--mu", type=int, required=True)
    gc.add_argument("--output", default=None)

    oracle = sub.add_parser("oracle")
    osub = oracle.add_subparsers(dest="target", required=True)
    og = osub.add_parser("gkmp")
    oq = og.add_subparsers(dest="query", required=True)
    for query in ("volume", "exists", "depth"):
        pq = oq.add_parser(query)
        pq.add_argument("--input", required=True)
        pq.add_argument("--mode", choices=("min", "max"), default="max")
    oh = osub.add_parser("hausdorff")
    ohq = oh.add_subparsers(dest="query", required=True)
    for query in ("decide", "dist"):
        pq = ohq.add_parser(query)
        pq.add_argument("--input", required=True)
        pq.add_argument("--r2", type=int, default=None)

    bench = sub.add_parser("bench")
    bench.add_argument("--suite", required=True)
    bench.add_argument("--csv", required=True)

    verify = sub.add_parser("verify")
    verify.add_argument("--input", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "gkmp":
            return _cmd_gkmp(args, use_oracle=False)
        if args.command == "hausdorff":
            return _cmd_hausdorff(args, use_oracle=False)
        if args.command == "oracle":
            args.threads = 1
            if args.target == "gkmp":
                return _cmd_gkmp(args, use_oracle=True)
            return _cmd_hausdorff(args, use_oracle=True)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "bench":
            report = bench_mod.run_suite(args.suite, args.csv)
            return _emit(report)
        if args.command == "verify":
            return _cmd_verify(args)
        raise InputError(f"unknown command {args.command!r}")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
