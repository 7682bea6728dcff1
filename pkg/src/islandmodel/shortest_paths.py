"""Single-source shortest paths as a multi-objective minimisation problem.

Vertices are ``1..n`` and the source is ``n``. A genotype is the tuple of
predecessors of vertices ``1..n-1`` (``x[i-1]`` is the predecessor of
``i``). Its fitness is the vector of path lengths obtained by following
predecessor chains towards the source, with ``math.inf`` for vertices whose
chain is broken by a cycle or a missing edge.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path

from .engine import Problem
from .rng import poisson1_sample

INF = math.inf
OPERATORS = ("vertex", "edge")


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    weights: dict  # (u, v) with u < v -> weight
    adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("graph needs at least two vertices")
        adj = {v: {} for v in range(1, self.n + 1)}
        for (u, v), w in self.weights.items():
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            if w < 0 or math.isnan(w):
                raise ValueError(f"negative or NaN weight on ({u}, {v})")
            adj[u][v] = w
            adj[v][u] = w
        object.__setattr__(self, "adj", adj)
        if not _connected(adj, self.n):
            raise ValueError("graph is not connected")

    @property
    def source(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return len(self.weights)

    def weight(self, u, v):
        return self.adj[u].get(v)


def make_graph(n: int, edges) -> WeightedGraph:
    """Build from ``(u, v, w)`` triples; duplicate pairs are rejected."""
    weights = {}
    for u, v, w in edges:
        key = (min(u, v), max(u, v))
        if key in weights:
            raise ValueError(f"duplicate edge {key}")
        weights[key] = float(w)
    return WeightedGraph(n, weights)


def _connected(adj, n) -> bool:
    seen = {n}
    stack = [n]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


@dataclass(frozen=True)
class LayerProfile:
    ell: int
    counts: tuple[int, ...]


def check_predecessors(x, n) -> tuple[int, ...]:
    x = tuple(x)
    if len(x) != n - 1:
        raise ValueError(f"predecessor vector must have length {n - 1}")
    for i, p in enumerate(x, start=1):
        if p == i or not 1 <= p <= n:
            raise ValueError(f"invalid predecessor {p} for vertex {i}")
    return x


def eval_distances(x, g: WeightedGraph) -> tuple[float, ...]:
    n = g.n
    s = n
    adj = g.adj
    dist: list = [None] * (n + 1)
    dist[s] = 0.0
    on_path = [False] * (n + 1)
    for i in range(1, n):
        if dist[i] is not None:
            continue
        path = []
        v = i
        while dist[v] is None and not on_path[v]:
            on_path[v] = True
            path.append(v)
            v = x[v - 1]
        base = INF if dist[v] is None else dist[v]
        for u in reversed(path):
            on_path[u] = False
            if base != INF:
                w = adj[u].get(x[u - 1])
                base = INF if w is None else base + w
            dist[u] = base
    return tuple(dist[1:n])


def dominates_weakly(a, b) -> bool:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return all(p <= q for p, q in zip(a, b))


def accept_sssp(current, candidate) -> bool:
    return dominates_weakly(candidate, current)


def migration_key(f) -> tuple[int, float]:
    """Total preorder for choosing a migrant: an infinite component counts
    as a sentinel larger than any finite sum, so vectors are ranked by the
    number of infinite entries first and the finite sum second."""
    n_inf = 0
    total = 0.0
    for v in f:
        if v == INF:
            n_inf += 1
        else:
            total += v
    return n_inf, total


def vertex_mutation(x, i: int, new_pred: int) -> tuple[int, ...]:
    """Set the predecessor of vertex ``i``; ``new_pred`` must differ from ``i`` and ``x_i``."""
    if new_pred == i or new_pred == x[i - 1]:
        raise ValueError("new predecessor must differ from the vertex and its current predecessor")
    y = list(x)
    y[i - 1] = new_pred
    return tuple(y)


def draw_vertex_mutation(x, rng) -> tuple[int, int]:
    """Uniform vertex ``i`` and uniform new predecessor from ``{1..n} - {i, x_i}``."""
    n = len(x) + 1
    i = rng.randrange(n - 1) + 1
    old = x[i - 1]
    lo, hi = (i, old) if i < old else (old, i)
    r = rng.randrange(n - 2) + 1
    if r >= lo:
        r += 1
    if r >= hi:
        r += 1
    return i, r


def mutate_vertex_based(x, rng) -> tuple[int, ...]:
    if len(x) + 1 < 3:
        raise ValueError("vertex-based mutation needs n >= 3")
    y = list(x)
    for _ in range(poisson1_sample(rng) + 1):
        i, r = draw_vertex_mutation(y, rng)
        y[i - 1] = r
    return tuple(y)


def directed_arcs(g: WeightedGraph) -> tuple[tuple[int, int], ...]:
    """Both orientations of every edge, in a fixed order."""
    return tuple(a for (u, v) in sorted(g.weights) for a in ((u, v), (v, u)))


def draw_arc(arcs, source, rng) -> tuple[int, int]:
    """Uniform orientation; arcs pointing into the source are redrawn."""
    while True:
        u, v = arcs[rng.randrange(len(arcs))]
        if v != source:
            return u, v


def mutate_edge_based(x, g: WeightedGraph, rng, arcs=None) -> tuple[int, ...]:
    if arcs is None:
        arcs = directed_arcs(g)
    y = list(x)
    s = g.source
    for _ in range(poisson1_sample(rng) + 1):
        u, v = draw_arc(arcs, s, rng)
        y[v - 1] = u
    return tuple(y)


def shortest_path_oracle(g: WeightedGraph) -> tuple[float, ...]:
    """Dijkstra distances from the source to vertices ``1..n-1``."""
    dist = {g.source: 0.0}
    done = set()
    heap = [(0.0, g.source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in g.adj[u].items():
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return tuple(dist.get(i, INF) for i in range(1, g.n))


def _same(a, b) -> bool:
    return a == b or math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def is_optimal_sssp(x, g: WeightedGraph, oracle=None) -> bool:
    if oracle is None:
        oracle = shortest_path_oracle(g)
    return all(_same(a, b) for a, b in zip(eval_distances(x, g), oracle))


def layer_profile(g: WeightedGraph) -> LayerProfile:
    """Layer sizes by the maximum edge count over shortest paths to each vertex.

    Needs strictly positive weights, so the tight edges form a DAG ordered
    by distance.
    """
    if any(w <= 0 for w in g.weights.values()):
        raise ValueError("layer profile needs strictly positive weights")
    d = dict(zip(range(1, g.n), shortest_path_oracle(g)))
    d[g.source] = 0.0
    hops = {g.source: 0}
    for v in sorted(range(1, g.n), key=d.__getitem__):
        hops[v] = max(hops[u] + 1 for u, w in g.adj[v].items() if u in hops and _same(d[u] + w, d[v]))
    ell = max(hops[v] for v in range(1, g.n))
    counts = [0] * ell
    for v in range(1, g.n):
        counts[hops[v] - 1] += 1
    return LayerProfile(ell, tuple(counts))


def gen_path_graph(n: int, weight: float = 1.0):
    """Path ``1 - 2 - ... - n`` rooted at ``n``."""
    if n < 3:
        raise ValueError("path graph needs n >= 3")
    g = make_graph(n, [(v, v + 1, weight) for v in range(1, n)])
    return g, LayerProfile(n - 1, (1,) * (n - 1))


def gen_layered_instance(n: int, ell: int, intra_weight: float | None = None):
    """Balanced layers of ``(n-1)/ell`` vertices over the source.

    Every vertex of layer ``j`` is joined by unit-weight edges to all of
    layer ``j-1`` (layer 0 is the source). With ``intra_weight`` set, the
    vertices of each layer are also joined among themselves with that
    (heavy) weight, which never lies on a shortest path as long as it is
    positive.
    """
    if n < 3 or not 1 <= ell <= n - 1:
        raise ValueError("need n >= 3 and 1 <= ell <= n-1")
    if (n - 1) % ell:
        raise ValueError(f"ell={ell} does not divide n-1={n - 1}")
    if intra_weight is not None and intra_weight <= 0:
        raise ValueError("intra-layer weight must be positive")
    size = (n - 1) // ell
    layers = [[n]] + [list(range(1 + j * size, 1 + (j + 1) * size)) for j in range(ell)]
    edges = []
    for j in range(1, ell + 1):
        for v in layers[j]:
            edges += [(u, v, 1.0) for u in layers[j - 1]]
        if intra_weight is not None:
            lay = layers[j]
            edges += [(a, b, intra_weight) for k, a in enumerate(lay) for b in lay[k + 1:]]
    return make_graph(n, edges), LayerProfile(ell, (size,) * ell)


def gen_random_connected(n: int, rng, p: float = 0.5, weights=(1, 2, 3, 4, 5)) -> WeightedGraph:
    """Random spanning tree plus extra edges with probability ``p``, integer weights."""
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    chosen = {}
    for k in range(1, n):
        u, v = verts[k], verts[rng.randrange(k)]
        chosen[(min(u, v), max(u, v))] = float(rng.choice(weights))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in chosen and rng.random() < p:
                chosen[(u, v)] = float(rng.choice(weights))
    return WeightedGraph(n, chosen)


def load_graph(path) -> WeightedGraph:
    """Read ``n m`` then ``m`` lines ``u v weight`` (1-indexed, source ``n``)."""
    rows = [ln.split("#", 1)[0].split() for ln in Path(path).read_text().splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: header must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    if len(rows) - 1 != m:
        raise ValueError(f"{path}: header says {m} edges, found {len(rows) - 1}")
    edges = []
    for r in rows[1:]:
        if len(r) != 3:
            raise ValueError(f"{path}: edge lines must be 'u v weight'")
        edges.append((int(r[0]), int(r[1]), float(r[2])))
    return make_graph(n, edges)


def save_graph(g: WeightedGraph, path) -> None:
    rows = [f"{g.n} {g.m}"] + [f"{u} {v} {w!r}" for (u, v), w in sorted(g.weights.items())]
    Path(path).write_text("\n".join(rows) + "\n")


class ShortestPathProblem(Problem):
    """Multi-objective (1+1) EA on SSSP with vertex- or edge-based mutation."""

    def __init__(self, graph: WeightedGraph, operator: str = "edge"):
        if operator not in OPERATORS:
            raise ValueError(f"unknown SSSP operator {operator!r}")
        if operator == "vertex" and graph.n < 3:
            raise ValueError("vertex-based mutation needs n >= 3")
        self.graph = graph
        self.operator = operator
        self.name = f"sssp-{operator}"
        self.oracle = shortest_path_oracle(graph)
        self._arcs = directed_arcs(graph)
        self._nbrs = {v: tuple(sorted(graph.adj[v])) for v in range(1, graph.n)}

    def sample_initial(self, rng):
        n = self.graph.n
        if self.operator == "edge":
            return tuple(self._nbrs[i][rng.randrange(len(self._nbrs[i]))] for i in range(1, n))
        out = []
        for i in range(1, n):
            r = rng.randrange(n - 1) + 1
            out.append(r + 1 if r >= i else r)
        return tuple(out)

    def mutate(self, genotype, rng):
        if self.operator == "edge":
            return mutate_edge_based(genotype, self.graph, rng, self._arcs)
        return mutate_vertex_based(genotype, rng)

    def fitness(self, genotype):
        return eval_distances(genotype, self.graph)

    def propose(self, genotype, fitness, rng):
        child = self.mutate(genotype, rng)
        if self.operator == "vertex":
            adj = self.graph.adj
            for i, (a, b) in enumerate(zip(genotype, child), start=1):
                # a non-edge makes f_i infinite, so a finite parent rejects the child;
                # handing back the parent is the same outcome without evaluating
                if a != b and fitness[i - 1] != INF and b not in adj[i]:
                    return genotype, fitness
        return child, self.fitness(child)

    def accept_offspring(self, current, candidate):
        return candidate is current or accept_sssp(current, candidate)

    def accept_immigrant(self, current, candidate):
        return candidate != current and dominates_weakly(candidate, current)

    def better_for_migration(self, a, b):
        return migration_key(a) < migration_key(b)

    def is_optimal_fitness(self, f):
        return all(_same(a, b) for a, b in zip(f, self.oracle))
