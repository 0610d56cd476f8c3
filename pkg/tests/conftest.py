import random

from adaptim.graph import ProbGraph


def random_small_graph(rng, n_min=3, n_max=8, m_max=12, p_lo=0.1, p_hi=0.9):
    """Random simple directed graph for brute-force comparisons."""
    n = rng.randint(n_min, n_max)
    possible = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = rng.randint(1, min(m_max, len(possible)))
    chosen = rng.sample(possible, m)
    src = [e[0] for e in chosen]
    dst = [e[1] for e in chosen]
    p = [rng.uniform(p_lo, p_hi) for _ in chosen]
    return ProbGraph(n, src, dst, p)


def seeded(master, salt):
    return random.Random(master * 1_000_003 + salt)
