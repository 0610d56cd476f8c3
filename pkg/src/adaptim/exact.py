"""Exhaustive possible-world enumeration for small graphs.

These routines are the brute-force reference implementations used to
validate the Monte-Carlo and RR-set estimators; they are exponential in m
and intended for m <= ~14.
"""

import itertools

import numpy as np


def _reach_masks(g, live):
    """Bitmask of nodes reachable from each node via live edges."""
    adj = [[] for _ in range(g.n)]
    for e in range(g.m):
        if live[e]:
            adj[int(g.src[e])].append(int(g.dst[e]))
    masks = [0] * g.n
    for s in range(g.n):
        seen = 1 << s
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not (seen >> v) & 1:
                    seen |= 1 << v
                    stack.append(v)
        masks[s] = seen
    return masks


def _bounded_reach(g, live, seeds, horizon):
    active = set(seeds)
    frontier = set(seeds)
    t = 0
    while frontier and (horizon is None or t < horizon):
        nxt = set()
        for u in frontier:
            for e in g.out_edges(u):
                if live[e]:
                    v = int(g.dst[e])
                    if v not in active:
                        nxt.add(v)
        active |= nxt
        frontier = nxt
        t += 1
    return active


def enumerate_worlds(g, fixed_status=None):
    """Yield (live_tuple, probability) over all worlds consistent with
    `fixed_status` (edge index -> bool); free edges are Bernoulli(p)."""
    fixed_status = fixed_status or {}
    free = [e for e in range(g.m) if e not in fixed_status]
    base = [False] * g.m
    for e, s in fixed_status.items():
        base[e] = bool(s)
    for bits in itertools.product([False, True], repeat=len(free)):
        live = list(base)
        w = 1.0
        for e, b in zip(free, bits):
            live[e] = b
            w *= g.p[e] if b else 1.0 - g.p[e]
        yield live, w


def exact_expected_spread(g, seeds, horizon=None, fixed_status=None):
    """Expected spread of a seed set by full world enumeration."""
    seeds = set(int(v) for v in seeds)
    if not seeds:
        return 0.0
    total = 0.0
    for live, w in enumerate_worlds(g, fixed_status):
        total += w * len(_bounded_reach(g, live, seeds, horizon))
    return total


def conditional_marginal_gains(g, active, fixed_status):
    """Exact marginal gain of seeding each node, conditioned on revealed
    edge statuses, after diffusion has completed.

    Returns a length-n array: gains[v] = E[|reach(v) \\ active|] over
    worlds consistent with fixed_status. Active nodes have gain 0.
    """
    active = set(int(v) for v in active)
    gains = np.zeros(g.n)
    for live, w in enumerate_worlds(g, fixed_status):
        masks = _reach_masks(g, live)
        for v in range(g.n):
            if v in active:
                continue
            newly = masks[v]
            for a in active:
                newly &= ~(1 << a)
            gains[v] += w * bin(newly).count("1")
    return gains


def optimal_seed_set(g, k, horizon=None):
    """Best expected spread over all seed sets of size <= k (exhaustive)."""
    best, best_set = 0.0, frozenset()
    reach_cache = [( _reach_masks(g, live) if horizon is None else None, live, w)
                   for live, w in enumerate_worlds(g)]
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(g.n), size):
            val = 0.0
            for masks, live, w in reach_cache:
                if horizon is None:
                    mset = 0
                    for v in combo:
                        mset |= masks[v]
                    val += w * bin(mset).count("1")
                else:
                    val += w * len(_bounded_reach(g, live, combo, horizon))
            if val > best + 1e-12:
                best, best_set = val, frozenset(combo)
    return best, best_set


def min_seeds_for_target(g, q, max_size=None, horizon=None):
    """Smallest seed-set size with exact expected spread >= q, or None."""
    max_size = max_size if max_size is not None else g.n
    reach_cache = [(_reach_masks(g, live), w) for live, w in enumerate_worlds(g)]
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(g.n), size):
            val = 0.0
            for masks, w in reach_cache:
                mset = 0
                for v in combo:
                    mset |= masks[v]
                val += w * bin(mset).count("1")
            if val >= q - 1e-9:
                return size, frozenset(combo)
    return None
