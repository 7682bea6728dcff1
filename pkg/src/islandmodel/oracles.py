"""Brute-force reference implementations used to cross-check the fast code."""

from __future__ import annotations

import itertools
import math
from collections import deque

from .eulerian import EulerGraph
from .shortest_paths import WeightedGraph, eval_distances


def exchange_distances(n: int) -> dict[tuple[int, ...], int]:
    """BFS from the identity over single transpositions; maps every permutation to its distance."""
    start = tuple(range(1, n + 1))
    dist = {start: 0}
    queue = deque([start])
    pairs = list(itertools.combinations(range(n), 2))
    while queue:
        p = queue.popleft()
        d = dist[p] + 1
        for i, j in pairs:
            q = list(p)
            q[i], q[j] = q[j], q[i]
            q = tuple(q)
            if q not in dist:
                dist[q] = d
                queue.append(q)
    return dist


def sssp_brute_minimum(g: WeightedGraph) -> tuple[float, ...]:
    """Componentwise minimum of the distance vector over all predecessor vectors."""
    n = g.n
    best = [math.inf] * (n - 1)
    choices = [[j for j in range(1, n + 1) if j != i] for i in range(1, n)]
    for x in itertools.product(*choices):
        for k, v in enumerate(eval_distances(x, g)):
            if v < best[k]:
                best[k] = v
    return tuple(best)


def random_eulerian_graph(rng, max_edges: int = 12, max_vertices: int = 7) -> EulerGraph:
    """Edge-disjoint union of random simple cycles (length >= 3) sharing vertices.

    Each new cycle passes through a vertex that is already used, which keeps
    the graph connected; every vertex degree is even by construction.
    """
    if max_edges < 3 or max_vertices < 3:
        raise ValueError("need room for at least one triangle")
    edges: list[tuple[int, int]] = []
    used: set[frozenset] = set()
    verts: set[int] = set()
    for _ in range(50):
        room = max_edges - len(edges)
        if room < 3:
            break
        k = rng.randint(3, min(room, max_vertices))
        pool = list(range(1, max_vertices + 1))
        if verts:
            anchor = rng.choice(sorted(verts))
            pool.remove(anchor)
            cyc = [anchor] + rng.sample(pool, k - 1)
        else:
            cyc = rng.sample(pool, k)
        cyc_edges = [frozenset((cyc[i], cyc[(i + 1) % k])) for i in range(k)]
        if any(e in used for e in cyc_edges):
            continue
        used.update(cyc_edges)
        verts.update(cyc)
        edges += [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]
        if rng.random() < 0.35:
            break
    # relabel to 1..n
    names = {v: k + 1 for k, v in enumerate(sorted(verts))}
    return EulerGraph(len(names), tuple((names[u], names[v]) for u, v in edges))


def hierholzer_tour(g: EulerGraph, rng) -> tuple[int, ...]:
    """Random Euler tour as an edge-id sequence (randomised Hierholzer)."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, (u, v) in enumerate(g.edges):
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    for lst in adj.values():
        rng.shuffle(lst)
    used = [False] * g.m
    start = rng.choice(sorted(adj))
    stack = [(start, -1)]
    tour: list[int] = []
    while stack:
        v, via = stack[-1]
        lst = adj[v]
        while lst and used[lst[-1][1]]:
            lst.pop()
        if lst:
            w, e = lst.pop()
            used[e] = True
            stack.append((w, e))
        else:
            stack.pop()
            if via >= 0:
                tour.append(via)
    tour.reverse()
    return tuple(tour)
