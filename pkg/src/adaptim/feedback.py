"""Node-level market feedback: observation, edge-status inference and
active-node masking.

Edge statuses follow three inference rules applied to an observed active
set: an edge from an active node to an inactive node is dead; an edge
between active nodes whose head has a single in-neighbor is live; any
other edge between active nodes gets a fixed arbitrary status (live iff
its canonical edge index is even, for reproducibility). Inference is only
sound once diffusion has completed; incomplete observations are labeled
unsound and adaptive policies under bounded horizons must ignore them.
"""

from dataclasses import dataclass

import numpy as np

from .worlds import SeedingSchedule, diffuse

UNKNOWN = 0
LIVE = 1
DEAD = 2
ARB_LIVE = 3
ARB_DEAD = 4


@dataclass(frozen=True)
class NetworkState:
    t: int
    active: frozenset
    quiescent: bool = True


@dataclass
class EdgeStatusMap:
    status: np.ndarray  # per-edge code
    sound: bool

    def as_bool(self):
        """Collapse to {edge index: live?} for every non-unknown edge."""
        out = {}
        for e, s in enumerate(self.status):
            if s in (LIVE, ARB_LIVE):
                out[e] = True
            elif s in (DEAD, ARB_DEAD):
                out[e] = False
        return out


def observe(w, schedule_so_far, t):
    """Active set after running the schedule up to time t."""
    if t < 0:
        raise ValueError("t >= 0 required")
    if not isinstance(schedule_so_far, SeedingSchedule):
        schedule_so_far = SeedingSchedule.of(schedule_so_far)
    res = diffuse(w, schedule_so_far, horizon=t)
    return NetworkState(t=t, active=res.active, quiescent=res.quiescent)


def infer_edges(g, state, arbitrary_live_on_even=True):
    """Rule 1-3 edge-status inference from an active set.

    `arbitrary_live_on_even` flips the deterministic tie rule so tests can
    exercise both arbitrary branches.
    """
    active = state.active
    indeg = g.in_degree()
    status = np.full(g.m, UNKNOWN, dtype=np.int8)
    for e in range(g.m):
        u, v = int(g.src[e]), int(g.dst[e])
        if u not in active:
            continue
        if v not in active:
            status[e] = DEAD
        elif indeg[v] == 1:
            status[e] = LIVE
        else:
            even = e % 2 == 0
            live = even if arbitrary_live_on_even else not even
            status[e] = ARB_LIVE if live else ARB_DEAD
    return EdgeStatusMap(status=status, sound=state.quiescent)


class MaskedGraph:
    """Read-only view of a ProbGraph where every edge incident to an
    active node has probability zero. Exposes what the RR sampler needs;
    the base graph is untouched."""

    def __init__(self, base, active):
        self.base = base
        self.n = base.n
        self.m = base.m
        mask = np.zeros(base.n, dtype=bool)
        mask[list(active)] = True
        self.active_mask = mask

    @property
    def p(self):
        p = self.base.p.copy()
        blocked = self.active_mask[self.base.src] | self.active_mask[self.base.dst]
        p[blocked] = 0.0
        return p

    def rev_lists(self):
        return self.base.rev_lists()

    def edge_blocked(self, src, dst):
        return self.active_mask[src] or self.active_mask[dst]


def mask_active(g, state):
    active = state.active if isinstance(state, NetworkState) else state
    return MaskedGraph(g, active)
