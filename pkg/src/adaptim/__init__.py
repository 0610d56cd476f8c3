"""Adaptive influence maximization under the independent-cascade model.

Core pieces: probabilistic graph ingestion and synthesis, possible-world
simulation, partial-observation edge inference, reverse-reachable set
spread estimation, adaptive and non-adaptive greedy seeding policies,
minimum-target-seed-set solvers, closed-form approximation bounds, and a
surrogate-model tuner for bounded-horizon intervention schedules.
"""

__version__ = "1.0.0"

from .bounds import (
    GAMMA_DEFAULT,
    BoundParams,
    emit_bound_curves,
    ga_factor,
    gna_factor,
    mintss_seed_bounds,
    prop1_ratio,
    theorem3_counterexample,
)
from .feedback import EdgeStatusMap, MaskedGraph, infer_edges, mask_active, observe
from .graph import (
    GraphFormatError,
    GraphStats,
    ProbGraph,
    assign_weighted_cascade,
    depth_bound,
    generate_synthetic,
    load_edge_list,
    write_edge_list,
    write_label_map,
)
from .mintss import MintssReport, MintssSpec, TargetUnreachable, evaluate_mintss, mintss_adaptive, mintss_non_adaptive
from .policies import EvalReport, PolicySpec, PolicyTrace, evaluate, greedy_non_adaptive, run_adaptive
from .rrsets import RRIndex, RRSet, build_index, estimate_spread, greedy_cover, sample_rr, size_index
from .tuner import (
    ConfigSpace,
    Instance,
    Objective,
    PolicyConfig,
    TunerBudget,
    TuneResult,
    evaluate_config,
    report_policy,
    tune,
    unroll,
)
from .worlds import (
    DiffusionResult,
    PossibleWorld,
    SeedingSchedule,
    SpreadEstimate,
    WorldRun,
    diffuse,
    expected_spread_mc,
    sample_world,
    spread,
)
