"""Exact geometric solvers around the colored Klee's measure problem.

The package computes the minimum directed L-infinity Hausdorff distance
between integer point sets under translation, exactly, by reducing the
decision problem to colorful-point queries on colored orthants.  The same
divide-and-conquer engine answers volume, emptiness-with-witness and
min/max depth queries over colored orthant unions.  Brute-force oracles,
hard-instance generators built from k-clique reductions, and a benchmark
harness round out the toolbox.

All geometry is axis-aligned with exact integer coordinates; answers are
exact integers (distances are reported doubled so half-integer optima stay
integral).
"""

from .errors import CapacityError, InputError
from .geom import (
    AxisBox,
    Cell,
    Classification,
    ColoredOrthant,
    Face2,
    Orthant,
    RankMap,
    classify_object,
    enumerate_faces,
    face_weight,
    rank_space_encode,
    rotate_axes,
)
from .gkmp import (
    Ebox,
    GkmpInstance,
    NodeState,
    base_case,
    reduce_node,
    shrink_long_eboxes,
    solve_depth,
    solve_exists_colorful,
    solve_volume,
    split_node,
)
from .hausdorff import (
    HausdorffInstance,
    build_cell_instances,
    candidate_values,
    decide_translation,
    directed_hausdorff_linf,
    min_hausdorff_translation,
)
from .oracles import (
    Graph,
    brute_clique,
    oracle_colorful_point,
    oracle_depth,
    oracle_min_hausdorff,
    oracle_volume,
)
from .cliquegen import (
    Problem3Instance,
    ReductionOutput,
    build_problem3,
    phi_digit,
    problem3_to_hausdorff,
    verify_instance,
)

__all__ = [
    "AxisBox",
    "CapacityError",
    "Cell",
    "Classification",
    "ColoredOrthant",
    "Ebox",
    "Face2",
    "GkmpInstance",
    "Graph",
    "HausdorffInstance",
    "InputError",
    "NodeState",
    "Orthant",
    "Problem3Instance",
    "RankMap",
    "ReductionOutput",
    "base_case",
    "brute_clique",
    "build_cell_instances",
    "build_problem3",
    "candidate_values",
    "classify_object",
    "decide_translation",
    "directed_hausdorff_linf",
    "enumerate_faces",
    "face_weight",
    "min_hausdorff_translation",
    "oracle_colorful_point",
    "oracle_depth",
    "oracle_min_hausdorff",
    "oracle_volume",
    "phi_digit",
    "problem3_to_hausdorff",
    "rank_space_encode",
    "reduce_node",
    "rotate_axes",
    "shrink_long_eboxes",
    "solve_depth",
    "solve_exists_colorful",
    "solve_volume",
    "split_node",
    "verify_instance",
]

__version__ = "0.1.0"
