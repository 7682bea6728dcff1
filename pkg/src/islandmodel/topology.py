"""Communication topologies for the island model.

A topology is a directed graph over ``mu`` islands, indexed ``0..mu-1``.
Rings are unidirectional, tori are undirected (both arc directions stored)
and the complete topology contains every ordered pair of distinct islands.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("ring", "torus", "complete", "custom")


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Topology:
    mu: int
    arcs: frozenset[tuple[int, int]]
    kind: str = "custom"
    sides: tuple[int, int] | None = None
    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _in: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mu < 1:
            raise TopologyError(f"mu must be positive, got {self.mu}")
        if self.kind not in KINDS:
            raise TopologyError(f"unknown topology kind {self.kind!r}")
        out: list[list[int]] = [[] for _ in range(self.mu)]
        inc: list[list[int]] = [[] for _ in range(self.mu)]
        for u, v in self.arcs:
            if not (0 <= u < self.mu and 0 <= v < self.mu):
                raise TopologyError(f"arc ({u}, {v}) outside 0..{self.mu - 1}")
            if u == v:
                raise TopologyError(f"self-loop at island {u}")
            out[u].append(v)
            inc[v].append(u)
        object.__setattr__(self, "_out", tuple(tuple(sorted(x)) for x in out))
        object.__setattr__(self, "_in", tuple(tuple(sorted(x)) for x in inc))

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        return self._out[i]

    def in_neighbors(self, i: int) -> tuple[int, ...]:
        """Senders of island ``i``, in increasing index order."""
        return self._in[i]

    @property
    def diameter(self) -> int:
        return diameter(self)


def make_ring(mu: int) -> Topology:
    if mu < 1:
        raise TopologyError(f"ring needs mu >= 1, got {mu}")
    arcs = frozenset((i, (i + 1) % mu) for i in range(mu)) if mu >= 2 else frozenset()
    return Topology(mu, arcs, "ring")


def make_torus(a: int, b: int) -> Topology:
    if a < 2 or b < 2:
        raise TopologyError(f"torus side lengths must be >= 2, got {a}x{b}")
    arcs = set()
    for r in range(a):
        for c in range(b):
            u = r * b + c
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                v = ((r + dr) % a) * b + (c + dc) % b
                if v != u:
                    arcs.add((u, v))
    return Topology(a * b, frozenset(arcs), "torus", sides=(a, b))


def make_complete(mu: int) -> Topology:
    if mu < 1:
        raise TopologyError(f"complete topology needs mu >= 1, got {mu}")
    arcs = frozenset((i, j) for i in range(mu) for j in range(mu) if i != j)
    return Topology(mu, arcs, "complete")


def make_custom(mu: int, arcs) -> Topology:
    return Topology(mu, frozenset((int(u), int(v)) for u, v in arcs), "custom")


def make_topology(kind: str, mu: int) -> Topology:
    """Build a named topology with ``mu`` islands.

    A torus is built square (``sqrt(mu) x sqrt(mu)``). A single island is
    returned as an arc-free ring whatever the kind, since one island has
    nobody to talk to.
    """
    if mu == 1:
        return make_ring(1)
    if kind == "ring":
        return make_ring(mu)
    if kind == "complete":
        return make_complete(mu)
    if kind == "torus":
        a = _isqrt_exact(mu)
        if a is None:
            raise TopologyError(f"torus needs a square island count, got {mu}")
        return make_torus(a, a)
    raise TopologyError(f"cannot build topology kind {kind!r} from mu alone")


def _isqrt_exact(x: int) -> int | None:
    r = math.isqrt(x)
    return r if r * r == x and r >= 2 else None


def _bfs(t: Topology, src: int) -> list[int]:
    dist = [-1] * t.mu
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in t.out_neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_strongly_connected(t: Topology) -> bool:
    if t.mu == 1:
        return True
    if min(_bfs(t, 0)) < 0:
        return False
    reverse = Topology(t.mu, frozenset((v, u) for u, v in t.arcs), "custom")
    return min(_bfs(reverse, 0)) >= 0


def diameter(t: Topology) -> int:
    """Longest shortest directed path; raises if some pair is unreachable."""
    best = 0
    for s in range(t.mu):
        d = _bfs(t, s)
        if min(d) < 0:
            raise TopologyError("topology is not strongly connected (infinite diameter)")
        best = max(best, max(d))
    return best


def load_topology(path) -> Topology:
    """Read ``mu`` on the first line, then one zero-indexed ``src dst`` per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TopologyError(f"{path}: empty topology file")
    mu = int(lines[0])
    arcs = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise TopologyError(f"{path}: line {k}: expected 'src dst'")
        arcs.append((int(parts[0]), int(parts[1])))
    return make_custom(mu, arcs)


def save_topology(t: Topology, path) -> None:
    rows = [str(t.mu)] + [f"{u} {v}" for u, v in sorted(t.arcs)]
    Path(path).write_text("\n".join(rows) + "\n")
