"""Eulerian cycles via edge permutations.

A genotype is a tuple of edge ids; its fitness is the length of the longest
prefix that can be traversed as a trail. The first edge is oriented by the
vertex it shares with the second one, and every later edge must contain the
running end vertex and moves it to its other endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .engine import ScalarProblem
from .rng import poisson1_sample
from .sorting import jump

OPERATORS = ("unrestricted", "symmetric", "asymmetric")

OPPOSITE = "opposite_cycle"
SAME = "same_cycle"
NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class EulerGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    vstar: int | None = None
    tags: tuple[str, ...] | None = None
    _u: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _v: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.edges:
            raise ValueError("graph has no edges")
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            deg[u] += 1
            deg[v] += 1
        odd = [v for v in range(1, self.n + 1) if deg[v] % 2]
        if odd:
            raise ValueError(f"odd-degree vertices: {odd}")
        if not _edges_connected(self.n, self.edges):
            raise ValueError("edges are not connected")
        if self.tags is not None and len(self.tags) != len(self.edges):
            raise ValueError("one tag per edge required")
        object.__setattr__(self, "_u", tuple(u for u, _ in self.edges))
        object.__setattr__(self, "_v", tuple(v for _, v in self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]


def _edges_connected(n, edges) -> bool:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = edges[0][0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


@dataclass(frozen=True)
class WalkInfo:
    length: int
    start: int
    end: int


def _trail(order, us, vs):
    """Return ``(length, start, end)`` of the walk prefix of ``order``."""
    m = len(order)
    e = order[0]
    a, b = us[e], vs[e]
    if m == 1:
        return 1, a, b
    f = order[1]
    c, d = us[f], vs[f]
    options = []
    if b == c or b == d:
        options.append((a, d if b == c else c))
    if a == c or a == d:
        options.append((b, d if a == c else c))
    if not options:
        return 1, a, b
    best = None
    for start, end in options:
        length = 2
        for k in range(2, m):
            g = order[k]
            if us[g] == end:
                end = vs[g]
            elif vs[g] == end:
                end = us[g]
            else:
                break
            length += 1
        if best is None or length > best[0]:
            best = (length, start, end)
    return best


def walk_length(p, g: EulerGraph) -> WalkInfo:
    return WalkInfo(*_trail(p, g._u, g._v))


def walk_vertices(p, g: EulerGraph) -> list[int]:
    """Vertex sequence ``start, ..., end`` of the walk prefix."""
    length, start, _ = _trail(p, g._u, g._v)
    if length == 1:
        return [g._u[p[0]], g._v[p[0]]]
    seq = [start]
    for e in p[:length]:
        u, v = g._u[e], g._v[e]
        seq.append(v if u == seq[-1] else u)
    return seq


def jump_edges(p, i: int, j: int) -> tuple[int, ...]:
    return jump(p, i, j)


def draw_unrestricted(m: int, rng) -> tuple[int, int]:
    i = rng.randrange(m) + 1
    j = rng.randrange(m - 1) + 1
    if j >= i:
        j += 1
    return i, j


def mutate_unrestricted(p, rng) -> tuple[int, ...]:
    if len(p) < 2:
        raise ValueError("need m >= 2")
    return jump(p, *draw_unrestricted(len(p), rng))


def draw_symmetric(m: int, ell: int, rng) -> tuple[int, int]:
    """Jump parameters that put an edge at the front or right behind the walk.

    The target kind is chosen with probability 1/2 each. "Behind the walk"
    is index ``ell + 1`` for an edge taken from outside the walk and index
    ``ell`` for an edge taken from inside it, so that in both cases the
    moved edge ends up immediately after the remaining walk edges; this
    makes both cycle rotations available. Draws that would leave the
    permutation unchanged are redrawn.
    """
    if ell >= m:
        raise ValueError("walk already covers every edge")
    front = rng.random() < 0.5 or m < 3
    while True:
        i = rng.randrange(m) + 1
        if front:
            j = 1
        else:
            j = ell + 1 if i > ell else ell
        if i != j:
            return i, j


def mutate_symmetric(p, g: EulerGraph, rng, ell: int | None = None) -> tuple[int, ...]:
    if len(p) < 2:
        raise ValueError("need m >= 2")
    if ell is None:
        ell = walk_length(p, g).length
    return jump(p, *draw_symmetric(len(p), ell, rng))


def mutate_asymmetric(p, rng) -> tuple[int, ...]:
    if len(p) < 2:
        raise ValueError("need m >= 2")
    return jump(p, rng.randrange(len(p) - 1) + 2, 1)


def accept_euler(current: int, candidate: int) -> bool:
    return candidate >= current


def accept_euler_immigrant(current: int, candidate: int) -> bool:
    return candidate > current


def is_euler_optimal(p, g: EulerGraph) -> bool:
    info = walk_length(p, g)
    if info.length != g.m:
        return False
    if info.start != info.end:
        raise RuntimeError(f"trail covers all edges but is not closed: {info}")
    return True


def gen_g_prime(m: int) -> EulerGraph:
    """Two cycles of ``m/2`` edges sharing vertex ``v* = 1``.

    Cycle C runs ``1, 2, ..., m/2, 1``, cycle C' runs ``1, m/2+1, ..., m-1, 1``;
    edges are tagged ``"C"`` or ``"C'"``.
    """
    if m % 2 or m // 2 < 3:
        raise ValueError(f"G' needs even m with m/2 >= 3, got {m}")
    h = m // 2
    cyc_c = [1] + list(range(2, h + 1))
    cyc_d = [1] + list(range(h + 1, m))
    edges, tags = [], []
    for verts, tag in ((cyc_c, "C"), (cyc_d, "C'")):
        for k in range(h):
            edges.append((verts[k], verts[(k + 1) % h]))
            tags.append(tag)
    return EulerGraph(m - 1, tuple(edges), vstar=1, tags=tuple(tags))


def cycle_tags_at(n, edges, vstar) -> tuple[str, ...] | None:
    """Tag edges by the component of ``G - vstar`` they touch, if there are exactly two."""
    comp: dict[int, int] = {}
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    label = 0
    for s in adj:
        if s == vstar or s in comp:
            continue
        comp[s] = label
        stack = [s]
        while stack:
            for w in adj[stack.pop()]:
                if w != vstar and w not in comp:
                    comp[w] = label
                    stack.append(w)
        label += 1
    if label != 2:
        return None
    names = ("C", "C'")
    out = []
    for u, v in edges:
        w = v if u == vstar else u
        if w == vstar:
            return None
        out.append(names[comp[w]])
    return tuple(out)


def load_euler_graph(path) -> EulerGraph:
    """Read ``n m`` then ``m`` lines ``u v``; a ``# ... vstar=K`` comment marks v*."""
    vstar = None
    rows = []
    for ln in Path(path).read_text().splitlines():
        body, _, comment = ln.partition("#")
        for tok in comment.split():
            if tok.startswith("vstar="):
                vstar = int(tok.split("=", 1)[1])
        if body.split():
            rows.append(body.split())
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: header must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    if len(rows) - 1 != m:
        raise ValueError(f"{path}: header says {m} edges, found {len(rows) - 1}")
    edges = tuple((int(r[0]), int(r[1])) for r in rows[1:])
    tags = cycle_tags_at(n, edges, vstar) if vstar is not None else None
    return EulerGraph(n, edges, vstar=vstar, tags=tags)


def save_euler_graph(g: EulerGraph, path) -> None:
    rows = []
    if g.vstar is not None:
        rows.append(f"# g_prime m={g.m} vstar={g.vstar}")
    rows.append(f"{g.n} {g.m}")
    rows += [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(rows) + "\n")


class DecisionProbe:
    """Records how the walk first gets past ``v*`` on a two-cycle instance.

    The decision is taken at the first observation where the walk either
    holds edges of both cycles (``opposite_cycle``) or runs through ``v*``
    inside one cycle (``same_cycle``). If the first walk of length >= 2 is
    already past ``v*``, the initial order made the choice, not a jump, and
    the outcome is ``not_applicable``.
    """

    def __init__(self, g: EulerGraph):
        if g.vstar is None or g.tags is None:
            raise ValueError("decision probe needs v* and cycle tags")
        self.g = g
        self.done = False
        self.outcome = None
        self._seen_walk = False

    def _classify(self, p, ell):
        g = self.g
        tags = {g.tags[e] for e in p[:ell]}
        if len(tags) > 1:
            return OPPOSITE
        seq = walk_vertices(p, g)
        if g.vstar in seq[1:-1]:
            return SAME
        return None

    def observe(self, p, fitness):
        if self.done or fitness < 2:
            return None
        tag = self._classify(p, fitness)
        if not self._seen_walk:
            self._seen_walk = True
            if tag is not None:
                tag = NOT_APPLICABLE
        if tag is None:
            return None
        self.done = True
        self.outcome = tag
        return tag, fitness


class EulerProblem(ScalarProblem):
    """Walk-length maximisation with RLS (one jump) or the (1+1) EA (S+1 jumps)."""

    maximize = True

    def __init__(self, graph: EulerGraph, operator: str = "unrestricted", algorithm: str = "rls"):
        if operator not in OPERATORS:
            raise ValueError(f"unknown jump operator {operator!r}")
        if algorithm not in ("rls", "ea"):
            raise ValueError(f"unknown algorithm {algorithm!r}")
        if graph.m < 2:
            raise ValueError("need at least two edges")
        self.graph = graph
        self.operator = operator
        self.algorithm = algorithm
        self.optimum = graph.m
        self.name = f"eulerian-{operator}"

    def sample_initial(self, rng):
        p = list(range(self.graph.m))
        rng.shuffle(p)
        return tuple(p)

    def fitness(self, genotype):
        return _trail(genotype, self.graph._u, self.graph._v)[0]

    def _one(self, p, rng, ell):
        if self.operator == "unrestricted":
            return mutate_unrestricted(p, rng)
        if self.operator == "asymmetric":
            return mutate_asymmetric(p, rng)
        if ell is None:
            ell = self.fitness(p)
        if ell >= self.graph.m:
            return p
        return mutate_symmetric(p, self.graph, rng, ell)

    def mutate(self, genotype, rng):
        if self.algorithm == "rls":
            return self._one(genotype, rng, None)
        p = genotype
        for _ in range(poisson1_sample(rng) + 1):
            p = self._one(p, rng, None)
        return p

    def propose(self, genotype, fitness, rng):
        if self.algorithm != "rls":
            return super().propose(genotype, fitness, rng)
        m = self.graph.m
        if self.operator == "unrestricted":
            i, j = draw_unrestricted(m, rng)
            child = jump(genotype, i, j)
            # positions 1..ell+1 untouched: walk prefix and its blocker unchanged
            if i > fitness + 1 and j > fitness + 1:
                return child, fitness
        elif self.operator == "symmetric":
            child = jump(genotype, *draw_symmetric(m, fitness, rng))
        else:
            child = mutate_asymmetric(genotype, rng)
        return child, self.fitness(child)

    def make_probe(self):
        return DecisionProbe(self.graph)
