"""Benchmark harness: timed size ladders with CSV output and slope fits.

Each suite runs a fixed ladder of seeded instances, times the solver, and
fits the least-squares slope of log(wall) against log(N).  The fitted
slope is reported next to the relevant theoretical exponents for context
(solver volume bound d/2; end-to-end distance bound d in the square case);
timing is informational and never asserted.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time

import numpy as np

from .errors import InputError
from . import formats
from .gkmp import solve_exists_colorful, solve_volume
from .hausdorff import min_hausdorff_translation

CSV_COLUMNS = ["command", "d", "N", "n_colors", "seed", "wall_ns", "answer_digest"]


def _digest(answer) -> str:
    return hashlib.sha256(json.dumps(answer, sort_keys=True).encode()).hexdigest()[:16]


def _volume_ladder(d, sizes, n_colors, coord_max):
    def run(n, seed):
        inst = formats.gen_gkmp(d, n_colors, n, coord_max, seed, n_eboxes=n // 10)
        t0 = time.perf_counter_ns()
        vol = solve_volume(inst)
        return time.perf_counter_ns() - t0, str(vol)

    return [("gkmp-volume", d, n, n_colors, 1000 + n, run) for n in sizes]


def _exists_ladder(d, sizes, n_colors, coord_max):
    def run(n, seed):
        inst = formats.gen_gkmp(d, n_colors, n, coord_max, seed, n_eboxes=n // 10)
        t0 = time.perf_counter_ns()
        got = solve_exists_colorful(inst)
        return time.perf_counter_ns() - t0, [list(got)] if got else None

    return [("gkmp-exists", d, n, n_colors, 2000 + n, run) for n in sizes]


def _hausdorff_ladder(d, sizes, coord_max):
    def run(n, seed):
        inst = formats.gen_hausdorff(d, n, n, coord_max, seed)
        t0 = time.perf_counter_ns()
        r2, w = min_hausdorff_translation(inst.P, inst.Q)
        return time.perf_counter_ns() - t0, [r2, list(w)]

    return [("hausdorff-dist", d, n * n, n, 3000 + n, run) for n in sizes]


SUITES = {
    "volume-d2": lambda: _volume_ladder(2, [250, 500, 1000, 2000], 4, 4096),
    "volume-d3": lambda: _volume_ladder(3, [250, 500, 1000, 2000], 4, 4096),
    "volume-d4": lambda: _volume_ladder(4, [250, 500, 1000, 2000], 4, 4096),
    "volume-d4-smoke": lambda: _volume_ladder(4, [60, 120, 240], 4, 1024),
    "exists-d4": lambda: _exists_ladder(4, [250, 500, 1000, 2000], 4, 4096),
    "hausdorff-d2": lambda: _hausdorff_ladder(2, [4, 8, 16, 24], 64),
    "hausdorff-d3": lambda: _hausdorff_ladder(3, [3, 5, 8, 12], 48),
}


def run_suite(name: str, csv_path: str) -> dict:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
    rows = []
    for command, d, n, n_colors, seed, run in SUITES[name]():
        wall_ns, answer = run(n, seed)
        rows.append(
            {
                "command": command,
                "d": d,
                "N": n,
                "n_colors": n_colors,
                "seed": seed,
                "wall_ns": wall_ns,
                "answer_digest": _digest(answer),
            }
        )
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    xs = np.log([r["N"] for r in rows])
    ys = np.log([max(r["wall_ns"], 1) for r in rows])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(rows) > 1 else math.nan
    d = rows[0]["d"]
    return {
        "suite": name,
        "csv": csv_path,
        "rows": len(rows),
        "fitted_slope": round(slope, 3),
        "theory_solver_exponent": d / 2,
        "theory_end_to_end_exponent": d,
        "max_wall_s": round(max(r["wall_ns"] for r in rows) / 1e9, 3),
    }
