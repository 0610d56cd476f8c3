"""Possible-world sampling and deterministic in-world diffusion.

Diffusion is synchronous-round independent cascade: a node seeded or
activated at step t transmits along its live out-edges at step t+1.
Horizon None means "run to quiescence".
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from .util import world_seed

NEVER = -1


@dataclass
class PossibleWorld:
    graph: object  # ProbGraph
    live: np.ndarray  # bool per edge, canonical edge order
    seed: int | None = None

    def __post_init__(self):
        self.live = np.asarray(self.live, dtype=bool)
        if len(self.live) != self.graph.m:
            raise ValueError("live bitset length != m")


@dataclass(frozen=True)
class SeedingSchedule:
    """Materialized intervention trace: [(time, frozenset of nodes)] with
    strictly increasing times and pairwise-disjoint node sets."""

    interventions: tuple

    @staticmethod
    def of(pairs):
        norm = tuple((int(t), frozenset(nodes)) for t, nodes in pairs)
        times = [t for t, _ in norm]
        if any(t < 0 for t in times):
            raise ValueError("negative intervention time")
        if sorted(times) != times or len(set(times)) != len(times):
            raise ValueError("intervention times must be strictly increasing")
        allnodes = [v for _, ns in norm for v in ns]
        if len(allnodes) != len(set(allnodes)):
            raise ValueError("intervention node sets must be disjoint")
        return SeedingSchedule(norm)

    def total_seeds(self):
        return sum(len(ns) for _, ns in self.interventions)


@dataclass
class DiffusionResult:
    active: frozenset
    activation_time: np.ndarray  # per node, NEVER if inactive
    steps_run: int
    quiescent: bool = True


def sample_world(g, seed):
    """Each edge live independently with its probability; deterministic
    per (graph, seed) via PCG64."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    live = rng.random(g.m) < g.p
    return PossibleWorld(g, live, seed)


class WorldRun:
    """Incremental diffusion over one world; policies interleave seeding
    and stepping. Semantics identical to diffuse()."""

    def __init__(self, world):
        self.world = world
        g = world.graph
        self.g = g
        self.t = 0
        self.activation_time = np.full(g.n, NEVER, dtype=np.int64)
        self.active = set()
        self.frontier = []  # nodes activated at current time t

    def seed(self, nodes):
        for v in nodes:
            v = int(v)
            if v not in self.active:
                self.active.add(v)
                self.activation_time[v] = self.t
                self.frontier.append(v)

    def step(self):
        """Advance one time step: the current frontier transmits."""
        g, live = self.g, self.world.live
        nxt = []
        for u in self.frontier:
            for e in g.out_edges(u):
                if live[e]:
                    v = int(g.dst[e])
                    if v not in self.active:
                        self.active.add(v)
                        nxt.append(v)
        self.t += 1
        for v in nxt:
            self.activation_time[v] = self.t
        self.frontier = nxt

    def run_to_quiescence(self):
        while self.frontier:
            self.step()

    def run_until(self, t_stop):
        while self.t < t_stop:
            self.step()

    @property
    def quiescent(self):
        return not self.frontier


def diffuse(w, schedule, horizon=None):
    """Run a SeedingSchedule on a world up to `horizon` steps (None:
    quiescence after the last intervention)."""
    if horizon is not None:
        for t, _ in schedule.interventions:
            if t >= horizon and t > 0:
                raise ValueError("schedule time >= horizon")
    run = WorldRun(w)
    pending = sorted(schedule.interventions)
    i = 0
    while True:
        while i < len(pending) and pending[i][0] == run.t:
            run.seed(pending[i][1])
            i += 1
        done_seeding = i >= len(pending)
        if horizon is not None and run.t >= horizon:
            break
        if done_seeding and not run.frontier:
            break
        run.step()
    return DiffusionResult(
        active=frozenset(run.active),
        activation_time=run.activation_time,
        steps_run=run.t,
        quiescent=run.quiescent,
    )


def spread(w, seeds, horizon=None):
    seeds = frozenset(int(v) for v in seeds)
    if not seeds:
        return 0
    return len(diffuse(w, SeedingSchedule.of([(0, seeds)]), horizon).active)


@dataclass
class SpreadEstimate:
    mean: float
    stderr: float
    per_world: np.ndarray = field(repr=False, default=None)


def expected_spread_mc(g, seeds, horizon, num_worlds, master_seed):
    """Monte-Carlo f_avg of a fixed seed set. World i uses
    world_seed(master_seed, i); results are identical to looping
    sample_world + spread but computed in a vectorized batch."""
    if num_worlds < 1:
        raise ValueError("num_worlds >= 1 required")
    seeds = sorted(set(int(v) for v in seeds))
    if not seeds:
        z = np.zeros(num_worlds)
        return SpreadEstimate(0.0, 0.0, z)

    live = np.empty((num_worlds, g.m), dtype=bool)
    for i in range(num_worlds):
        rng = np.random.default_rng(np.random.PCG64(world_seed(master_seed, i)))
        live[i] = rng.random(g.m) < g.p

    counts = _batch_spread(g, live, seeds, horizon)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / np.sqrt(num_worlds)) if num_worlds > 1 else 0.0
    return SpreadEstimate(mean, stderr, counts)


def _batch_spread(g, live, seeds, horizon):
    """Hop-bounded reachability from a fixed seed set in many worlds at
    once (rows of `live`)."""
    W = live.shape[0]
    active = np.zeros((W, g.n), dtype=bool)
    active[:, seeds] = True
    frontier = active.copy()

    rev_src = g.src[g.rev_eidx]
    indeg = np.diff(g.rev_indptr)
    has_in = indeg > 0
    # reduceat boundaries only for nodes that actually have in-edges;
    # empty segments would otherwise swallow their neighbors' edges
    starts = g.rev_indptr[:-1][has_in]

    t = 0
    while frontier.any() and (horizon is None or t < horizon):
        hit = np.zeros((W, g.n), dtype=bool)
        if starts.size:
            contrib = frontier[:, rev_src] & live[:, g.rev_eidx]
            hit[:, has_in] = np.bitwise_or.reduceat(contrib, starts, axis=1)
        frontier = hit & ~active
        active |= frontier
        t += 1
    return active.sum(axis=1)


# -- optional world persistence -------------------------------------------

_WORLD_MAGIC = b"ADIMWRLD"


def dump_world(w, fh):
    h = bytes.fromhex(w.graph.graph_hash())
    packed = np.packbits(w.live.astype(np.uint8))
    fh.write(_WORLD_MAGIC)
    fh.write(struct.pack("<QQ", w.seed if w.seed is not None else 0, w.graph.m))
    fh.write(h)
    fh.write(packed.tobytes())


def load_world(g, fh):
    magic = fh.read(8)
    if magic != _WORLD_MAGIC:
        raise ValueError("not a world dump")
    seed, m = struct.unpack("<QQ", fh.read(16))
    h = fh.read(32).hex()
    if m != g.m:
        raise ValueError("edge count mismatch")
    if h != g.graph_hash():
        raise ValueError("graph hash mismatch")
    packed = np.frombuffer(fh.read(), dtype=np.uint8)
    live = np.unpackbits(packed)[: g.m].astype(bool)
    return PossibleWorld(g, live, seed)
