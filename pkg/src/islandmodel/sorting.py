"""Sorting as maximisation of sortedness.

Permutations are tuples holding ``1..n``; operator positions are 1-based.
INV, HAM and LAS are maximised, EXC is minimised.
"""

from __future__ import annotations

from bisect import bisect_left
from math import comb

from .engine import ScalarProblem
from .rng import poisson1_sample

MEASURES = ("inv", "ham", "las", "exc")


def check_permutation(p) -> tuple[int, ...]:
    p = tuple(p)
    if len(p) < 2 or sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..n with n >= 2: {p!r}")
    return p


def _check_pair(n, i, j):
    if i == j:
        raise ValueError(f"operator positions must differ, got i = j = {i}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"positions ({i}, {j}) outside 1..{n}")


def exchange(p, i: int, j: int) -> tuple[int, ...]:
    _check_pair(len(p), i, j)
    q = list(p)
    q[i - 1], q[j - 1] = q[j - 1], q[i - 1]
    return tuple(q)


def jump(p, i: int, j: int) -> tuple:
    """Move the entry at position ``i`` to position ``j``, shifting the rest."""
    _check_pair(len(p), i, j)
    q = list(p)
    q.insert(j - 1, q.pop(i - 1))
    return tuple(q)


def draw_pair(n: int, rng) -> tuple[int, int]:
    """Uniform ordered pair of distinct 1-based positions."""
    i = rng.randrange(n) + 1
    j = rng.randrange(n - 1) + 1
    if j >= i:
        j += 1
    return i, j


def elementary_op(p, rng) -> tuple[int, ...]:
    i, j = draw_pair(len(p), rng)
    return exchange(p, i, j) if rng.random() < 0.5 else jump(p, i, j)


def mutate_sorting(p, rng) -> tuple[int, ...]:
    """(1+1) EA mutation: S+1 random exchanges or jumps, S ~ Poisson(1)."""
    for _ in range(poisson1_sample(rng) + 1):
        p = elementary_op(p, rng)
    return p


def mutate_sorting_rls(p, rng) -> tuple[int, ...]:
    return elementary_op(p, rng)


def inv(p) -> int:
    """Number of pairs ``i < j`` with ``p[i] < p[j]``."""
    n = len(p)
    tree = [0] * (n + 1)
    smaller_before = 0
    for v in p:
        k = v - 1
        while k > 0:
            smaller_before += tree[k]
            k -= k & -k
        k = v
        while k <= n:
            tree[k] += 1
            k += k & -k
    return smaller_before


def ham(p) -> int:
    return sum(1 for i, v in enumerate(p, start=1) if i == v)


def las(p) -> int:
    tails: list[int] = []
    for v in p:
        k = bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
    return len(tails)


def exc(p) -> int:
    """Minimum number of exchanges to sort: ``n`` minus the cycle count."""
    n = len(p)
    seen = [False] * (n + 1)
    cycles = 0
    for start in range(1, n + 1):
        if not seen[start]:
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = p[k - 1]
    return n - cycles


MEASURE_FUNCS = {"inv": inv, "ham": ham, "las": las, "exc": exc}


def optimum_value(measure: str, n: int) -> int:
    return {"inv": comb(n, 2), "ham": n, "las": n, "exc": 0}[measure]


def worst_inv_permutation(n: int) -> tuple[int, ...]:
    """``(n/2+1, 1, n/2+2, 2, ..., n, n/2)``."""
    if n % 2 or n < 4:
        raise ValueError(f"n must be even and >= 4, got {n}")
    h = n // 2
    out = []
    for k in range(1, h + 1):
        out += [h + k, k]
    return tuple(out)


def max_single_op_inv_gain(p) -> int:
    """Largest INV increase reachable by one exchange or one jump (brute force)."""
    n = len(p)
    base = inv(p)
    best = None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for q in (exchange(p, i, j), jump(p, i, j)):
                gain = inv(q) - base
                if best is None or gain > best:
                    best = gain
    return best


class SortingProblem(ScalarProblem):
    """Sortedness maximisation with a (1+1) EA (``"ea"``) or RLS mutation."""

    def __init__(self, n: int, measure: str = "inv", algorithm: str = "ea"):
        if n < 2:
            raise ValueError("n must be >= 2")
        measure = measure.lower()
        if measure not in MEASURES:
            raise ValueError(f"unknown sortedness measure {measure!r}")
        if algorithm not in ("ea", "rls"):
            raise ValueError(f"unknown algorithm {algorithm!r}")
        self.n = n
        self.measure = measure
        self.algorithm = algorithm
        self.maximize = measure != "exc"
        self.optimum = optimum_value(measure, n)
        self.name = f"sorting-{measure}"
        self._f = MEASURE_FUNCS[measure]
        self._mutate = mutate_sorting if algorithm == "ea" else mutate_sorting_rls

    def sample_initial(self, rng):
        p = list(range(1, self.n + 1))
        rng.shuffle(p)
        return tuple(p)

    def mutate(self, genotype, rng):
        return self._mutate(genotype, rng)

    def fitness(self, genotype):
        return self._f(genotype)
