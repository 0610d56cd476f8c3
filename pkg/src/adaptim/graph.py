"""Probabilistic directed graphs: ingestion, probability assignment,
synthetic generation and structural statistics.

Node ids are dense 0-based integers. Edges are stored in canonical order,
sorted by (src, dst), which doubles as the forward CSR order. Loaders that
encounter non-integer labels remap them to dense ids and report the label
map so it can be written as a sidecar file.
"""

from dataclasses import dataclass

import numpy as np

from .util import sha256_hex


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input (carries the offending line)."""


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    max_in_degree: int
    max_out_degree: int
    diffusion_depth_bound: int
    depth_exact: bool


class ProbGraph:
    """Immutable directed graph with per-edge influence probabilities."""

    def __init__(self, n, src, dst, p, p_known=None):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        p = np.asarray(p, dtype=np.float64)
        if src.shape != dst.shape or src.shape != p.shape:
            raise ValueError("src, dst, p must have equal length")
        if p_known is None:
            p_known = np.ones(len(src), dtype=bool)
        else:
            p_known = np.asarray(p_known, dtype=bool)

        if len(src) and (src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n):
            raise ValueError("node id out of range")
        if np.any(src == dst):
            raise ValueError("self-loop rejected")
        if np.any((p < 0.0) | (p > 1.0)):
            raise ValueError("edge probability outside [0, 1]")

        # canonical order: sort by (src, dst)
        order = np.lexsort((dst, src))
        src, dst, p, p_known = src[order], dst[order], p[order], p_known[order]
        if len(src) > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise ValueError(f"duplicate edge ({src[i]}, {dst[i]}) rejected")

        self.n = int(n)
        self.m = len(src)
        self.src = src
        self.dst = dst
        self.p = p
        self.p_known = p_known

        self.fwd_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.fwd_indptr, src + 1, 1)
        np.cumsum(self.fwd_indptr, out=self.fwd_indptr)
        # edges are already in src order, so forward CSR edge index is identity
        self.fwd_eidx = np.arange(self.m, dtype=np.int64)

        rev_order = np.lexsort((src, dst))
        self.rev_eidx = rev_order.astype(np.int64)
        self.rev_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.rev_indptr, dst + 1, 1)
        np.cumsum(self.rev_indptr, out=self.rev_indptr)

        self._rev_lists = None
        self._hash = None

    # -- derived views ---------------------------------------------------

    def in_degree(self):
        return np.diff(self.rev_indptr)

    def out_degree(self):
        return np.diff(self.fwd_indptr)

    def out_edges(self, v):
        return self.fwd_eidx[self.fwd_indptr[v]:self.fwd_indptr[v + 1]]

    def in_edges(self, v):
        return self.rev_eidx[self.rev_indptr[v]:self.rev_indptr[v + 1]]

    def rev_lists(self):
        """Per-node list of (src, p, edge_index), kept as plain Python
        lists because the RR sampler's inner loop is latency bound."""
        if self._rev_lists is None:
            lists = [[] for _ in range(self.n)]
            for e in range(self.m):
                lists[self.dst[e]].append((int(self.src[e]), float(self.p[e]), e))
            self._rev_lists = lists
        return self._rev_lists

    def check_integrity(self):
        """Verify forward and reverse CSR describe the same edge multiset."""
        fwd = sorted(zip(self.src.tolist(), self.dst.tolist()))
        rev = sorted(
            (int(self.src[e]), int(self.dst[e]))
            for v in range(self.n)
            for e in self.in_edges(v)
        )
        if fwd != rev:
            raise AssertionError("forward/reverse adjacency mismatch")
        return True

    def graph_hash(self):
        if self._hash is None:
            self._hash = sha256_hex(write_edge_list(self).encode())
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, ProbGraph)
            and self.n == other.n
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.p, other.p)
            and np.array_equal(self.p_known, other.p_known)
        )


# -- ingestion -----------------------------------------------------------


def load_edge_list(source, n=None):
    """Parse "src dst [p]" lines into a ProbGraph.

    `source` is a string, bytes, or iterable of lines. '#' starts a
    comment. Non-integer labels are remapped to dense ids in order of
    first appearance. Returns (graph, label_map) where label_map maps the
    original label string to the assigned id (identity labels included).
    """
    if isinstance(source, bytes):
        source = source.decode()
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.decode() if isinstance(ln, bytes) else ln for ln in source]

    raw = []
    labels = {}
    integer_ids = True
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'src dst [p]', got {line!r}")
        if len(parts) == 3:
            try:
                pv = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad probability {parts[2]!r}") from None
            if not (0.0 <= pv <= 1.0):
                raise GraphFormatError(f"line {lineno}: probability {pv} outside [0, 1]")
            known = True
        else:
            pv, known = 0.0, False
        if parts[0] == parts[1]:
            raise GraphFormatError(f"line {lineno}: self-loop on {parts[0]!r}")
        if not (parts[0].isdigit() and parts[1].isdigit()):
            integer_ids = False
        raw.append((lineno, parts[0], parts[1], pv, known))

    if integer_ids:
        label_map = {}
        max_id = -1
        for _, a, b, _, _ in raw:
            max_id = max(max_id, int(a), int(b))
            label_map[a] = int(a)
            label_map[b] = int(b)
        n_nodes = max(max_id + 1, 0 if n is None else n)
    else:
        for _, a, b, _, _ in raw:
            for lbl in (a, b):
                if lbl not in labels:
                    labels[lbl] = len(labels)
        label_map = labels
        n_nodes = len(labels) if n is None else max(n, len(labels))

    seen = {}
    for lineno, a, b, _, _ in raw:
        key = (label_map[a], label_map[b])
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {a} -> {b} (first at line {seen[key]})")
        seen[key] = lineno

    src = [label_map[a] for _, a, b, _, _ in raw]
    dst = [label_map[b] for _, a, b, _, _ in raw]
    p = [pv for *_, pv, _ in raw]
    known = [kn for *_, kn in raw]
    g = ProbGraph(n_nodes, src, dst, p, known)
    return g, label_map


def write_edge_list(g):
    """Canonical text form; load_edge_list(write_edge_list(g)) == g."""
    out = []
    for e in range(g.m):
        if g.p_known[e]:
            out.append(f"{g.src[e]} {g.dst[e]} {float(g.p[e])!r}")
        else:
            out.append(f"{g.src[e]} {g.dst[e]}")
    return "\n".join(out) + ("\n" if out else "")


def write_label_map(label_map):
    return "".join(f"{lbl}\t{i}\n" for lbl, i in sorted(label_map.items(), key=lambda kv: kv[1]))


# -- probability assignment ----------------------------------------------


def assign_weighted_cascade(g):
    """Weighted-cascade probabilities: p(u, v) = 1 / in_degree(v)."""
    indeg = g.in_degree()
    p = 1.0 / indeg[g.dst]
    return ProbGraph(g.n, g.src, g.dst, p)


# -- synthetic generation --------------------------------------------------


def generate_synthetic(model, params, seed):
    """Deterministic synthetic graphs: erdos-renyi-directed, layered-dag,
    small-world. Edge probabilities default to `edge_prob` (unassigned if
    omitted)."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    edge_prob = params.get("edge_prob")

    if model == "erdos-renyi-directed":
        n = int(params["n"])
        d = float(params["density"])
        if n < 1 or not (0.0 <= d <= 1.0):
            raise ValueError("need n >= 1 and density in [0, 1]")
        mat = rng.random((n, n)) < d
        np.fill_diagonal(mat, False)
        src, dst = np.nonzero(mat)
    elif model == "layered-dag":
        layers = int(params["layers"])
        width = int(params["width"])
        d = float(params.get("density", 1.0))
        if layers < 1 or width < 1 or not (0.0 <= d <= 1.0):
            raise ValueError("need layers, width >= 1 and density in [0, 1]")
        n = layers * width
        src, dst = [], []
        for li in range(layers - 1):
            for a in range(width):
                for b in range(width):
                    if rng.random() < d:
                        src.append(li * width + a)
                        dst.append((li + 1) * width + b)
        src, dst = np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)
    elif model == "small-world":
        n = int(params["n"])
        k = int(params.get("k", 2))
        beta = float(params.get("beta", 0.1))
        if n < 3 or k < 1 or not (0.0 <= beta <= 1.0):
            raise ValueError("need n >= 3, k >= 1, beta in [0, 1]")
        edges = set()
        for u in range(n):
            for j in range(1, k + 1):
                v = (u + j) % n
                if rng.random() < beta:
                    v = int(rng.integers(n))
                    while v == u or (u, v) in edges:
                        v = int(rng.integers(n))
                edges.add((u, v))
        src = np.array([e[0] for e in sorted(edges)], dtype=np.int64)
        dst = np.array([e[1] for e in sorted(edges)], dtype=np.int64)
    else:
        raise ValueError(f"unknown model {model!r}")

    m = len(src)
    if edge_prob is not None:
        p = np.full(m, float(edge_prob))
        known = np.ones(m, dtype=bool)
    else:
        p = np.zeros(m)
        known = np.zeros(m, dtype=bool)
    return ProbGraph(n, src, dst, p, known)


# -- depth bound -----------------------------------------------------------


def depth_bound(g):
    """GraphStats with a conservative diffusion-depth bound: exact longest
    path (in edges) for DAGs, n - 1 otherwise."""
    indeg = g.in_degree().copy()
    order = []
    stack = [v for v in range(g.n) if indeg[v] == 0]
    while stack:
        v = stack.pop()
        order.append(v)
        for e in g.out_edges(v):
            w = int(g.dst[e])
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)

    indeg_full = g.in_degree()
    outdeg = g.out_degree()
    max_in = int(indeg_full.max()) if g.n else 0
    max_out = int(outdeg.max()) if g.n else 0

    if len(order) == g.n:  # acyclic
        dist = np.zeros(g.n, dtype=np.int64)
        for v in order:
            for e in g.out_edges(v):
                w = int(g.dst[e])
                if dist[v] + 1 > dist[w]:
                    dist[w] = dist[v] + 1
        bound = int(dist.max()) if g.n else 0
        exact = True
    else:
        bound = max(g.n - 1, 0)
        exact = False
    return GraphStats(g.n, g.m, max_in, max_out, bound, exact)
