"""Synchronous island model with one individual per island.

Every generation each island mutates its resident and keeps the offspring
if it is not worse. At generations ``t`` with ``t % tau == 0`` and ``t > 0``
every island then sends a copy of its resident to all out-neighbours, and
each island adopts its best immigrant if that one is strictly better.
Migration reads a snapshot of the post-variation residents, so the order in
which islands are processed does not matter.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

from .rng import derive_island_rng
from .topology import Topology

NEVER = math.inf
DEFAULT_MAX_GENERATIONS = 10**9


def parse_tau(value) -> float | int:
    """Accept a positive int, ``math.inf`` or the spelling ``"never"``."""
    if isinstance(value, str):
        if value.strip().lower() in ("never", "inf", "infinity"):
            return NEVER
        value = int(value)
    if value == NEVER:
        return NEVER
    if int(value) != value or value < 1:
        raise ValueError(f"tau must be a positive integer or 'never', got {value!r}")
    return int(value)


def format_tau(tau) -> str:
    return "never" if tau == NEVER else str(int(tau))


class Problem(ABC):
    """What the engine needs to know about an optimisation problem.

    Genotypes are treated as immutable values: ``mutate`` must return a new
    object and never touch its argument, because residents are shared
    between islands after migration.
    """

    name = "problem"

    @abstractmethod
    def sample_initial(self, rng): ...

    @abstractmethod
    def mutate(self, genotype, rng): ...

    @abstractmethod
    def fitness(self, genotype): ...

    @abstractmethod
    def accept_offspring(self, current, candidate) -> bool: ...

    @abstractmethod
    def accept_immigrant(self, current, candidate) -> bool: ...

    @abstractmethod
    def better_for_migration(self, a, b) -> bool:
        """True iff fitness ``a`` ranks strictly ahead of ``b``."""

    @abstractmethod
    def is_optimal_fitness(self, f) -> bool: ...

    def is_optimal(self, genotype) -> bool:
        return self.is_optimal_fitness(self.fitness(genotype))

    def propose(self, genotype, fitness, rng):
        """Return ``(offspring, offspring_fitness)``.

        Subclasses may override this to skip work when the parent's fitness
        already determines the offspring's; the result must be identical.
        """
        child = self.mutate(genotype, rng)
        return child, self.fitness(child)

    def make_probe(self):
        """Per-island event recorder, or ``None`` if the problem has none."""
        return None


class ScalarProblem(Problem):
    """Problem with a single real-valued fitness and a known optimum value."""

    maximize = True
    optimum: Any = None

    def accept_offspring(self, current, candidate):
        return candidate >= current if self.maximize else candidate <= current

    def accept_immigrant(self, current, candidate):
        return candidate > current if self.maximize else candidate < current

    def better_for_migration(self, a, b):
        return a > b if self.maximize else a < b

    def is_optimal_fitness(self, f):
        return f == self.optimum


@dataclass
class IslandState:
    genotype: Any
    fitness: Any


@dataclass
class RunConfig:
    problem: Problem
    topology: Topology
    tau: float | int = 1
    seed: int = 0
    replication: int = 0
    max_generations: int = DEFAULT_MAX_GENERATIONS
    probe: bool = False
    stop_on_probes: bool = False
    trace: bool = False

    def __post_init__(self):
        self.tau = parse_tau(self.tau)
        if self.max_generations < 1:
            raise ValueError("max_generations must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.stop_on_probes and not self.probe:
            raise ValueError("stop_on_probes requires probe=True")

    @property
    def mu(self) -> int:
        return self.topology.mu


@dataclass
class RunRecord:
    """Outcome of one seeded run.

    ``parallel_time`` is the number of generations until some island held an
    optimum (0 if an initial individual already was optimal), ``math.inf``
    if the generation cap was hit, and ``None`` if the run was stopped early
    because every island's probe had fired before any optimum appeared.

    With ``stop_on_probes`` the run continues past the first optimum until
    every probe has fired, so that all islands report.
    """

    parallel_time: float | int | None
    hit_cap: bool
    seed: int
    replication: int
    termination: str
    generations: int
    final_best_fitness: Any
    probes: list = field(default_factory=list)
    trajectory: list = field(default_factory=list)


def migration_step(islands: list[IslandState], topology: Topology, problem: Problem) -> list[IslandState]:
    """One migration round over a snapshot of ``islands``.

    Ties between equally good immigrants go to the lowest sending index.
    """
    out = []
    for v in range(topology.mu):
        resident = islands[v]
        best = None
        for u in topology.in_neighbors(v):
            cand = islands[u]
            if best is None or problem.better_for_migration(cand.fitness, best.fitness):
                best = cand
        if best is not None and problem.accept_immigrant(resident.fitness, best.fitness):
            out.append(IslandState(best.genotype, best.fitness))
        else:
            out.append(resident)
    return out


def _best_index(problem: Problem, fits) -> int:
    b = 0
    for i in range(1, len(fits)):
        if problem.better_for_migration(fits[i], fits[b]):
            b = i
    return b


def run(config: RunConfig) -> RunRecord:
    problem = config.problem
    topo = config.topology
    mu = topo.mu
    tau = config.tau
    rngs = [derive_island_rng(config.seed, i, config.replication) for i in range(mu)]
    genos = [problem.sample_initial(r) for r in rngs]
    fits = [problem.fitness(g) for g in genos]

    probes_out: list = []
    trajectory: list = []
    probes = [problem.make_probe() for _ in range(mu)] if config.probe else None
    if config.probe and any(p is None for p in probes):
        raise ValueError(f"problem {problem.name!r} has no probe")
    if config.trace:
        trajectory.append((0, tuple(fits), tuple(fits)))

    def finish(ptime, cause, gens):
        best = fits[_best_index(problem, fits)]
        return RunRecord(ptime, cause == "cap", config.seed, config.replication, cause, gens,
                         best, probes_out, trajectory)

    is_opt = problem.is_optimal_fitness
    wait = config.stop_on_probes
    first_opt = 0 if any(is_opt(f) for f in fits) else None
    if first_opt is not None and not wait:
        return finish(0, "optimal", 0)
    if probes is not None and _observe(probes, 0, genos, fits, probes_out) and wait:
        return finish(first_opt, "optimal" if first_opt is not None else "probes", 0)

    propose = problem.propose
    accept = problem.accept_offspring
    islands_range = range(mu)
    has_arcs = bool(topo.arcs)
    for t in range(config.max_generations):
        for i in islands_range:
            child, fc = propose(genos[i], fits[i], rngs[i])
            if accept(fits[i], fc):
                genos[i] = child
                fits[i] = fc
        pre = tuple(fits) if config.trace else None
        if has_arcs and t > 0 and tau != NEVER and t % tau == 0:
            states = migration_step([IslandState(g, f) for g, f in zip(genos, fits)], topo, problem)
            genos = [s.genotype for s in states]
            fits = [s.fitness for s in states]
        if config.trace:
            trajectory.append((t + 1, pre, tuple(fits)))
        gens = t + 1
        fired = probes is not None and _observe(probes, gens, genos, fits, probes_out)
        if first_opt is None:
            for f in fits:
                if is_opt(f):
                    first_opt = gens
                    break
        if wait:
            if fired:
                return finish(first_opt, "optimal" if first_opt is not None else "probes", gens)
        elif first_opt is not None:
            return finish(gens, "optimal", gens)
    if first_opt is not None:
        return finish(first_opt, "optimal", config.max_generations)
    return finish(math.inf, "cap", config.max_generations)


def _observe(probes, generation, genos, fits, sink) -> bool:
    """Feed every unfinished probe; return True once all have fired."""
    all_done = True
    for i, p in enumerate(probes):
        if not p.done:
            ev = p.observe(genos[i], fits[i])
            if ev is not None:
                sink.append((generation, i, ev[0], ev[1]))
        all_done = all_done and p.done
    return all_done
