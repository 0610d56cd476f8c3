"""MINTSS solvers: bi-criteria non-adaptive greedy and adaptive greedy
with an early stopping rule at the target spread."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import rrsets
from .policies import Intervention, PolicyTrace, _AdaptiveIndex, _pick_batch
from .util import derive_seed, world_seed
from .worlds import WorldRun, sample_world

UNBOUNDED = None


class TargetUnreachable(RuntimeError):
    """Seed cap hit before the estimated spread reached Q - beta."""


@dataclass
class MintssSpec:
    Q: float
    beta: float = 1.0
    batch_size: int = 1
    horizon: int | None = UNBOUNDED
    epsilon: float = 0.2
    ell: int = 1
    regen: str = "lazy"
    regen_threshold: int = 10
    rr_count: int | None = None
    seed_cap: int | None = None  # defaults to n
    schedule: object = None

    def validate(self, n):
        if not (0 < self.Q <= n):
            raise ValueError("need 0 < Q <= n")
        if self.beta >= self.Q:
            raise ValueError("need beta < Q")

    # adaptive loops reuse the policy-engine index machinery, which reads
    # these PolicySpec-shaped fields
    @property
    def k(self):
        return max(int(self.Q), 1)


@dataclass
class MintssReport:
    c_avg: float
    stderr: float
    per_world_seeds: np.ndarray = field(repr=False, default=None)
    per_world_spread: np.ndarray = field(repr=False, default=None)
    per_world_shortfall: np.ndarray = field(repr=False, default=None)
    hit_rate: float = 0.0
    seeds: tuple | None = None  # fixed set for the non-adaptive arm


def mintss_non_adaptive(g, spec, seed=0):
    """Greedy seed set grown until the RR spread estimate reaches
    Q - beta (bi-criteria relaxation)."""
    spec.validate(g.n)
    if spec.beta <= 0:
        raise ValueError("non-adaptive MINTSS requires beta > 0")
    cap = spec.seed_cap if spec.seed_cap is not None else g.n
    theta = rrsets.size_index(g, spec.k, spec.epsilon, spec.ell, forced=spec.rr_count)
    idx = rrsets.build_index(g, theta, seed)

    seeds = []
    target = spec.Q - spec.beta
    hit = 0
    total = idx.total_at_build
    while g.n * hit / total < target:
        if len(seeds) >= cap:
            raise TargetUnreachable(
                f"estimate {g.n * hit / total:.2f} < {target} after {cap} seeds"
            )
        picked, _ = rrsets.greedy_cover(idx, 1, forbidden=seeds)
        if picked:
            hit = idx.total_at_build - idx.num_alive()
            seeds.extend(picked)
        else:
            # no alive set left to cover; fall back to smallest unused id
            nxt = next(v for v in range(g.n) if v not in set(seeds))
            seeds.append(nxt)
    return seeds


def mintss_adaptive(g, spec, world, master_seed):
    """Adaptive greedy that stops as soon as >= Q nodes are observed
    active (checked every time step under a bounded horizon)."""
    spec.validate(g.n)
    t0 = time.perf_counter()
    cap = spec.seed_cap if spec.seed_cap is not None else g.n
    theta = rrsets.size_index(g, spec.k, spec.epsilon, spec.ell, forced=spec.rr_count)
    aidx = _AdaptiveIndex(g, spec, theta, derive_seed(master_seed, 0x5252))
    run = WorldRun(world)
    interventions = []
    used = 0

    def satisfied():
        return len(run.active) >= spec.Q

    if spec.horizon is UNBOUNDED:
        while not satisfied() and len(run.active) < g.n:
            if used >= cap:
                raise TargetUnreachable(f"seed cap {cap} exhausted at spread {len(run.active)}")
            idx = aidx.refresh(run.active)
            b = min(spec.batch_size, cap - used)
            batch = _pick_batch(idx, b, run.active, (), g.n)
            if not batch:
                break
            interventions.append(Intervention(run.t, tuple(batch), len(run.active)))
            run.seed(batch)
            used += len(batch)
            while run.frontier and not satisfied():
                run.step()
    else:
        pairs = list(spec.schedule.pairs) if spec.schedule is not None else [(spec.batch_size, 1)]
        i = 0
        while run.t < spec.horizon and not satisfied() and len(run.active) < g.n and used < cap:
            s_i, t_i = pairs[i % len(pairs)]
            s_i = min(s_i, cap - used)
            idx = aidx.refresh(run.active)
            batch = _pick_batch(idx, s_i, run.active, (), g.n)
            if not batch:
                break
            interventions.append(Intervention(run.t, tuple(batch), len(run.active)))
            run.seed(batch)
            used += len(batch)
            stop_t = min(run.t + t_i, spec.horizon)
            while run.t < stop_t and not satisfied():
                run.step()
            i += 1
        while run.t < spec.horizon and run.frontier and not satisfied():
            run.step()

    return PolicyTrace(
        interventions=interventions,
        final_active=len(run.active),
        seeds_used=used,
        rr_regens=aidx.builds,
        wall_time=time.perf_counter() - t0,
    )


def evaluate_mintss(g, spec, num_worlds=100, master_seed=0, policy="adaptive"):
    """Per-world MINTSS runs; the non-adaptive arm fixes one seed set and
    reports its per-world shortfall distribution."""
    spec.validate(g.n)
    seeds_used = np.zeros(num_worlds)
    spreads = np.zeros(num_worlds)
    fixed = None
    if policy == "non-adaptive":
        fixed = tuple(mintss_non_adaptive(g, spec, derive_seed(master_seed, 0x4E41)))

    for i in range(num_worlds):
        w = sample_world(g, world_seed(master_seed, i))
        if policy == "non-adaptive":
            run = WorldRun(w)
            run.seed(fixed)
            if spec.horizon is UNBOUNDED:
                run.run_to_quiescence()
            else:
                run.run_until(spec.horizon)
            spreads[i] = len(run.active)
            seeds_used[i] = len(fixed)
        else:
            trace = mintss_adaptive(g, spec, w, derive_seed(master_seed, i))
            spreads[i] = trace.final_active
            seeds_used[i] = trace.seeds_used

    shortfall = np.maximum(0.0, spec.Q - spreads)
    c_avg = float(seeds_used.mean())
    stderr = float(seeds_used.std(ddof=1) / np.sqrt(num_worlds)) if num_worlds > 1 else 0.0
    return MintssReport(
        c_avg=c_avg,
        stderr=stderr,
        per_world_seeds=seeds_used,
        per_world_spread=spreads,
        per_world_shortfall=shortfall,
        hit_rate=float((spreads >= spec.Q).mean()),
        seeds=fixed,
    )
