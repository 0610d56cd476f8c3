"""Greedy non-adaptive and adaptive seeding policies plus the f_avg
evaluation harness.

Adaptive runs interleave seed selection on an RR index built over the
active-node-masked graph with in-world diffusion. Under `full`
regeneration the index is rebuilt before every intervention; under
`lazy` regeneration covered sets are eliminated in place and the index is
rebuilt only when the active count has grown past the threshold since the
last build.
"""

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import rrsets
from .feedback import mask_active
from .util import derive_seed, world_seed
from .worlds import WorldRun, sample_world

UNBOUNDED = None


@dataclass
class PolicySpec:
    kind: str  # "non-adaptive" | "adaptive"
    k: int
    batch_size: int = 1
    horizon: int | None = UNBOUNDED
    regen: str = "full"  # "full" | "lazy"
    regen_threshold: int = 10
    epsilon: float = 0.1
    ell: int = 1
    rr_count: int | None = None  # force theta; None sizes statistically
    schedule: object = None  # PolicyConfig pairs for bounded-horizon runs

    def __post_init__(self):
        if self.kind not in ("non-adaptive", "adaptive"):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if not (1 <= self.batch_size <= self.k):
            raise ValueError("need 1 <= batch_size <= k")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("bounded horizon must be >= 1")
        if self.regen not in ("full", "lazy"):
            raise ValueError("regen must be 'full' or 'lazy'")


@dataclass
class Intervention:
    time: int
    seeded: tuple
    active_count_before: int


@dataclass
class PolicyTrace:
    interventions: list
    final_active: int
    seeds_used: int
    rr_regens: int
    wall_time: float = 0.0

    def to_json(self):
        return json.dumps(
            {
                "interventions": [
                    {"time": iv.time, "seeded": list(iv.seeded), "active_before": iv.active_count_before}
                    for iv in self.interventions
                ],
                "final_active": self.final_active,
                "seeds_used": self.seeds_used,
                "rr_regens": self.rr_regens,
                "wall_time": self.wall_time,
            }
        )


@dataclass
class EvalReport:
    f_avg: float
    stderr: float
    per_world: np.ndarray = field(repr=False, default=None)
    seeds_used_avg: float = 0.0
    rr_regens_avg: float = 0.0
    adaptivity_gain: float | None = None
    seeds: tuple | None = None  # fixed seed set for non-adaptive runs


def _theta(g, spec):
    return rrsets.size_index(g, spec.k, spec.epsilon, spec.ell, forced=spec.rr_count)


def _pad_seeds(seeds, want, n, excluded):
    """Top up a greedy pick with the smallest-id eligible nodes so the
    budget is always spent (fixed-k policy semantics)."""
    out = list(seeds)
    if len(out) < want:
        taken = set(out) | set(excluded)
        for v in range(n):
            if len(out) >= want:
                break
            if v not in taken:
                out.append(v)
    return out


def greedy_non_adaptive(g, k, epsilon=0.1, seed=0, rr_count=None, ell=1):
    """TIM once on the unmodified graph; world-independent seed set."""
    if k > g.n:
        raise ValueError("k > n")
    theta = rrsets.size_index(g, k, epsilon, ell, forced=rr_count)
    idx = rrsets.build_index(g, theta, seed)
    seeds, _ = rrsets.greedy_cover(idx, k)
    return _pad_seeds(seeds, k, g.n, ())


class _AdaptiveIndex:
    """Index lifecycle shared by IM and MINTSS adaptive loops."""

    def __init__(self, g, spec, theta, rr_seed):
        self.g = g
        self.spec = spec
        self.theta = theta
        self.rr_seed = rr_seed
        self.idx = None
        self.builds = 0
        self.active_at_build = 0
        self.known_active = set()

    def refresh(self, active):
        spec = self.spec
        newly = [v for v in active if v not in self.known_active]
        needs_build = (
            self.idx is None
            or spec.regen == "full"
            or (len(active) - self.active_at_build) > spec.regen_threshold
        )
        if needs_build:
            view = mask_active(self.g, active)
            self.idx = rrsets.build_index(view, self.theta, derive_seed(self.rr_seed, self.builds))
            self.builds += 1
            self.active_at_build = len(active)
        elif newly:
            self.idx.eliminate_covered(newly)
        self.known_active = set(active)
        return self.idx


def _pick_batch(idx, b, active, already_seeded, n):
    forbidden = set(active) | set(already_seeded)
    picked, _ = rrsets.greedy_cover(idx, b, forbidden=forbidden)
    return _pad_seeds(picked, b, n, forbidden)


def run_adaptive(g, spec, world, master_seed):
    """One adaptive policy run on one world. Unbounded horizon: batches of
    b seeds, diffusion to quiescence between interventions. Bounded
    horizon: follows spec.schedule (cyclic (s_i, t_i) pairs), defaulting
    to (b, 1)."""
    if spec.kind != "adaptive":
        raise ValueError("spec.kind must be 'adaptive'")
    t0 = time.perf_counter()
    theta = _theta(g, spec)
    aidx = _AdaptiveIndex(g, spec, theta, derive_seed(master_seed, 0x5252))
    run = WorldRun(world)
    interventions = []
    used = 0

    if spec.horizon is UNBOUNDED:
        while used < spec.k and len(run.active) < g.n:
            idx = aidx.refresh(run.active)
            b = min(spec.batch_size, spec.k - used)
            batch = _pick_batch(idx, b, run.active, (), g.n)
            if not batch:
                break
            interventions.append(Intervention(run.t, tuple(batch), len(run.active)))
            run.seed(batch)
            used += len(batch)
            run.run_to_quiescence()
    else:
        pairs = list(spec.schedule.pairs) if spec.schedule is not None else [(spec.batch_size, 1)]
        i = 0
        while run.t < spec.horizon and used < spec.k and len(run.active) < g.n:
            s_i, t_i = pairs[i % len(pairs)]
            remaining = spec.k - used
            if remaining < s_i:
                s_i = remaining  # last intervention spends what is left
            idx = aidx.refresh(run.active)
            batch = _pick_batch(idx, s_i, run.active, (), g.n)
            if not batch:
                break
            interventions.append(Intervention(run.t, tuple(batch), len(run.active)))
            run.seed(batch)
            used += len(batch)
            run.run_until(min(run.t + t_i, spec.horizon))
            i += 1
        run.run_until(spec.horizon)  # let the tail of the diffusion play out

    return PolicyTrace(
        interventions=interventions,
        final_active=len(run.active),
        seeds_used=used,
        rr_regens=aidx.builds,
        wall_time=time.perf_counter() - t0,
    )


def evaluate(g, spec, num_worlds=100, master_seed=0, baseline_f_avg=None):
    """f_avg of a policy over `num_worlds` sampled true worlds."""
    per_world = np.zeros(num_worlds)
    seeds_used = np.zeros(num_worlds)
    regens = np.zeros(num_worlds)
    fixed_seeds = None

    if spec.kind == "non-adaptive":
        fixed_seeds = tuple(
            greedy_non_adaptive(g, spec.k, spec.epsilon, derive_seed(master_seed, 0x4E41),
                                rr_count=spec.rr_count, ell=spec.ell)
        )

    for i in range(num_worlds):
        w = sample_world(g, world_seed(master_seed, i))
        if spec.kind == "non-adaptive":
            run = WorldRun(w)
            run.seed(fixed_seeds)
            if spec.horizon is UNBOUNDED:
                run.run_to_quiescence()
            else:
                run.run_until(spec.horizon)
            per_world[i] = len(run.active)
            seeds_used[i] = len(fixed_seeds)
        else:
            trace = run_adaptive(g, spec, w, derive_seed(master_seed, i))
            per_world[i] = trace.final_active
            seeds_used[i] = trace.seeds_used
            regens[i] = trace.rr_regens

    f_avg = float(per_world.mean())
    stderr = float(per_world.std(ddof=1) / np.sqrt(num_worlds)) if num_worlds > 1 else 0.0
    gain = f_avg / baseline_f_avg if baseline_f_avg else None
    return EvalReport(
        f_avg=f_avg,
        stderr=stderr,
        per_world=per_world,
        seeds_used_avg=float(seeds_used.mean()),
        rr_regens_avg=float(regens.mean()),
        adaptivity_gain=gain,
        seeds=fixed_seeds,
    )
