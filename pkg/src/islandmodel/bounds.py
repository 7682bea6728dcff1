"""Closed-form runtime bounds and the probabilities that feed them.

The topology bounds are fitness-level bounds for an island model that
migrates every generation: given lower bounds ``s_i`` on the probability
of leaving level ``i``, the expected parallel time is at most a spread
term (depending on the topology's density) plus the single-island sum
``sum(1/s_i)`` divided by ``mu``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .shortest_paths import LayerProfile

E = math.e
MEASURE_ALPHA = {"ham": 1 / E, "exc": 1 / E, "las": 1 / (2 * E)}
INV_ALPHA = 3 / (2 * E)


@dataclass(frozen=True)
class LevelProbabilities:
    s: tuple[float, ...]

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        if not s:
            raise ValueError("need at least one level probability")
        bad = [v for v in s if not 0.0 < v <= 1.0]
        if bad:
            raise ValueError(f"level probabilities must lie in (0, 1], got {bad[:3]}")
        object.__setattr__(self, "s", s)

    @property
    def levels(self) -> int:
        """Number of fitness levels ``m`` (one more than probabilities)."""
        return len(self.s) + 1

    def __len__(self):
        return len(self.s)


@dataclass(frozen=True)
class BoundReport:
    kind: str
    mu: int
    spread: float
    sequential: float
    value: float

    def row(self) -> dict:
        return {"topology": self.kind, "mu": self.mu, "spread": self.spread,
                "sequential": self.sequential, "value": self.value}


def _levels(s) -> LevelProbabilities:
    return s if isinstance(s, LevelProbabilities) else LevelProbabilities(tuple(s))


def _check_mu(mu):
    if int(mu) != mu or mu < 1:
        raise ValueError(f"mu must be a positive integer, got {mu}")


def rowe_bound(s: float, mu: int) -> tuple[float, float]:
    """``1/(1-(1-s)^mu)`` and its upper bound ``1 + 1/(mu*s)``."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    _check_mu(mu)
    # -expm1(mu*log1p(-s)) keeps precision when s*mu is tiny
    hit = 1.0 if s == 1.0 else -math.expm1(mu * math.log1p(-s))
    return 1.0 / hit, 1.0 + 1.0 / (mu * s)


def _report(kind, mu, spread, s):
    seq = math.fsum(1.0 / v for v in s.s) / mu
    return BoundReport(kind, int(mu), spread, seq, spread + seq)


def bound_ring(s, mu: int) -> BoundReport:
    """``2 sum s_i^(-1/2) + (1/mu) sum 1/s_i``; valid for any strongly connected topology."""
    s = _levels(s)
    _check_mu(mu)
    return _report("ring", mu, 2.0 * math.fsum(v ** -0.5 for v in s.s), s)


def bound_torus(s, mu: int) -> BoundReport:
    s = _levels(s)
    _check_mu(mu)
    r = math.isqrt(int(mu))
    if r * r != mu:
        warnings.warn(f"torus bound assumes a square torus, got mu={mu}", stacklevel=2)
    return _report("torus", mu, 3.0 * math.fsum(v ** (-1.0 / 3.0) for v in s.s), s)


def bound_complete(s, mu: int) -> BoundReport:
    s = _levels(s)
    _check_mu(mu)
    return _report("complete", mu, float(s.levels), s)


BOUNDS = {"ring": bound_ring, "torus": bound_torus, "complete": bound_complete}


def bound(kind: str, s, mu: int) -> BoundReport:
    try:
        f = BOUNDS[kind]
    except KeyError:
        raise ValueError(f"no bound for topology kind {kind!r}") from None
    return f(s, mu)


def bound_for_topology(topology, s) -> BoundReport:
    from .topology import is_strongly_connected

    if not is_strongly_connected(topology):
        raise ValueError("bounds require a strongly connected topology")
    kind = topology.kind if topology.kind in BOUNDS else "ring"
    return bound(kind, s, topology.mu)


def bound_layers(kind: str, layers, mu: int) -> BoundReport:
    """Sum one bound per layer (levels are optimised layer by layer)."""
    reports = [bound(kind, s, mu) for s in layers]
    spread = math.fsum(r.spread for r in reports)
    seq = math.fsum(r.sequential for r in reports)
    return BoundReport(kind, int(mu), spread, seq, spread + seq)


def harmonic(n: int) -> float:
    if n < 1:
        raise ValueError("harmonic number needs n >= 1")
    return math.fsum(1.0 / i for i in range(1, n + 1))


def harmonic_exact(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def sum_inv_sqrt_bound(m: int) -> float:
    """Integral estimate ``sum_{i<m} i^(-1/2) <= 2 m^(1/2)``."""
    return 2.0 * math.sqrt(m)


def sum_inv_cbrt_bound(m: int) -> float:
    """Integral estimate ``sum_{i<m} i^(-1/3) <= 1.5 m^(2/3)``."""
    return 1.5 * m ** (2.0 / 3.0)


def sorting_levels_inv(n: int) -> LevelProbabilities:
    """INV: level ``m-i`` is left with probability at least ``3i/(2e n(n-1))``.

    Entry ``k`` (0-based) belongs to level ``k+1``, i.e. ``i = m-1-k`` with
    ``m = C(n,2)+1`` levels.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    big = comb(n, 2)
    c = 3.0 / (2.0 * E * n * (n - 1))
    return LevelProbabilities(tuple(c * (big - k) for k in range(big)))


def sorting_levels_scalar(n: int, measure: str) -> LevelProbabilities:
    """HAM/LAS/EXC: ``s_i = alpha*i/n^2`` for ``i = 1..n``.

    The entries scale with ``i`` so that the bound reproduces the harmonic
    sums of the closed forms; ``alpha`` is ``1/e`` (HAM, EXC) or
    ``1/(2e)`` (LAS).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    try:
        alpha = MEASURE_ALPHA[measure.lower()]
    except KeyError:
        raise ValueError(f"measure must be one of ham, las, exc; got {measure!r}") from None
    return LevelProbabilities(tuple(alpha * i / n**2 for i in range(1, n + 1)))


def sssp_levels(profile: LayerProfile, n: int, m: int, operator: str = "vertex") -> list[LevelProbabilities]:
    """Per-layer probabilities ``i/(e n^2)`` (vertex) or ``i/(e m)`` (edge), ``i = 1..n_j``."""
    if operator == "vertex":
        denom = E * n * n
    elif operator == "edge":
        denom = E * m
    else:
        raise ValueError(f"unknown SSSP operator {operator!r}")
    out = []
    for nj in profile.counts:
        if nj < 0:
            raise ValueError("layer counts must be non-negative")
        if nj:
            out.append(LevelProbabilities(tuple(min(1.0, i / denom) for i in range(1, nj + 1))))
    return out


def sorting_closed_form(n: int, mu: int, kind: str, measure: str) -> BoundReport:
    """The integral-estimate closed forms behind the sorting table.

    ``spread`` uses the integral estimates of the partial sums, ``sequential``
    is ``n^2 H(levels)/(alpha mu)``.
    """
    measure = measure.lower()
    if measure == "inv":
        alpha, levels = INV_ALPHA, comb(n, 2)
    else:
        alpha, levels = MEASURE_ALPHA[measure], n
    seq = n * n / (alpha * mu) * harmonic(levels)
    if kind == "ring":
        spread = 2.0 * n / math.sqrt(alpha) * sum_inv_sqrt_bound(levels)
    elif kind == "torus":
        spread = 3.0 * n ** (2.0 / 3.0) / alpha ** (1.0 / 3.0) * sum_inv_cbrt_bound(levels)
    elif kind == "complete":
        spread = float(levels)
    else:
        raise ValueError(f"unknown topology kind {kind!r}")
    return BoundReport(kind, int(mu), spread, seq, spread + seq)


def sssp_closed_form(n: int, ell: int, mu: int, kind: str, operator: str = "vertex", m: int | None = None) -> BoundReport:
    """Worst-case (balanced layers) closed forms for the shortest-path table.

    With ``c = e n^2`` (vertex) or ``c = e m`` (edge):
    ring ``4 c^(1/2) n^(1/2) ell^(1/2)``, torus ``4.5 c^(1/3) n^(2/3) ell^(1/3)``,
    complete ``n``; the sequential part is ``c ell ln(e n/ell)/mu`` throughout.
    """
    if operator == "vertex":
        c = E * n * n
    elif operator == "edge":
        if m is None:
            raise ValueError("edge-based closed form needs m")
        c = E * m
    else:
        raise ValueError(f"unknown SSSP operator {operator!r}")
    seq = c * ell * math.log(E * n / ell) / mu
    if kind == "ring":
        spread = 4.0 * math.sqrt(c) * math.sqrt(n) * math.sqrt(ell)
    elif kind == "torus":
        spread = 4.5 * c ** (1.0 / 3.0) * n ** (2.0 / 3.0) * ell ** (1.0 / 3.0)
    elif kind == "complete":
        spread = float(n)
    else:
        raise ValueError(f"unknown topology kind {kind!r}")
    return BoundReport(kind, int(mu), spread, seq, spread + seq)


def lemma1_point(k: int, t: int, clip: bool = False) -> float:
    """Upper bound on ``Pr(T(k) = t)`` for the fair walk hitting ``{-k, k}``."""
    _check_kt(k, t)
    v = 2.0 * math.exp(-k * k / t) if t > 2 * k else 2.0 * (E / 4.0) ** k
    return min(v, 1.0) if clip else v


def lemma1_cumulative(k: int, t: int, clip: bool = False) -> float:
    """Upper bound on ``Pr(T(k) <= t)``."""
    _check_kt(k, t)
    if t <= 2 * k:
        v = 2.0 * t * (E / 4.0) ** k
    else:
        v = 4.0 * k * (E / 4.0) ** k + 2.0 * t * math.exp(-k * k / t)
    return min(v, 1.0) if clip else v


def _check_kt(k, t):
    if k < 1 or t < 1:
        raise ValueError(f"need k >= 1 and t >= 1, got k={k}, t={t}")


def rw_hitting_simulate(k: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Hitting times of ``{-k, +k}`` for ``trials`` fair +-1 walks from 0.

    All walks advance in lock-step; finished walks drop out of the arrays.
    """
    if k < 1 or trials < 1:
        raise ValueError("need k >= 1 and trials >= 1")
    times = np.zeros(trials, dtype=np.int64)
    pos = np.zeros(trials, dtype=np.int64)
    alive = np.arange(trials)
    t = 0
    while alive.size:
        t += 1
        pos += 2 * rng.integers(0, 2, size=pos.size, dtype=np.int64) - 1
        hit = np.abs(pos) >= k
        if hit.any():
            times[alive[hit]] = t
            keep = ~hit
            alive, pos = alive[keep], pos[keep]
    return times


def theorem4_regime(m: int, tau, diam: int, mu: int, operator: str = "unrestricted") -> str:
    """Label a migration setting ``frequent``, ``rare`` or ``neither``.

    Constants in the asymptotic conditions are taken as 1; this is a
    labelling aid, not a statement about any particular run.
    """
    if operator == "unrestricted":
        freq, rare = m * m, m**3
    elif operator == "symmetric":
        freq, rare = m, m * m
    else:
        raise ValueError("regimes are defined for unrestricted and symmetric jumps")
    if tau == math.inf:
        return "rare"
    if tau * diam * mu <= freq:
        return "frequent"
    if tau >= rare:
        return "rare"
    return "neither"
