"""Replicated experiments over a list of island counts."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from ..engine import DEFAULT_MAX_GENERATIONS, NEVER, RunConfig, format_tau, parse_tau, run
from ..eulerian import NOT_APPLICABLE, OPPOSITE, SAME, EulerProblem, gen_g_prime, load_euler_graph
from ..rng import derive_seed, stable_key
from ..shortest_paths import ShortestPathProblem, gen_layered_instance, gen_path_graph, load_graph
from ..sorting import MEASURES, SortingProblem
from ..topology import make_ring, make_topology
from .output import RUN_HEADER, SUMMARY_HEADER, emit_csv, emit_svg
from .stats import SummaryStats, speedup_table, summarize

PROBLEMS = ("sorting", "sssp", "eulerian")
TOPOLOGIES = ("ring", "torus", "complete")
DEFAULT_OPERATOR = {"sorting": "exchange-jump", "sssp": "edge", "eulerian": "unrestricted"}
DEFAULT_ALGORITHM = {"sorting": "ea", "sssp": "ea", "eulerian": "rls"}
DEFAULT_INSTANCE = {"sorting": "random", "sssp": "path", "eulerian": "g_prime"}


class SpecError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentSpec:
    problem: str
    size: int
    mu: list = field(default_factory=lambda: [1])
    tau: object = 1
    topology: str = "ring"
    measure: str | None = None
    instance: str | None = None
    operator: str | None = None
    algorithm: str | None = None
    ell: int | None = None
    replications: int = 1
    seed: int | None = None
    max_generations: int = DEFAULT_MAX_GENERATIONS
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.problem not in PROBLEMS:
            raise SpecError("problem", f"must be one of {', '.join(PROBLEMS)}, got {self.problem!r}")
        p = self.problem
        if self.operator is None:
            self.operator = DEFAULT_OPERATOR[p]
        if self.algorithm is None:
            self.algorithm = DEFAULT_ALGORITHM[p]
        if self.instance is None:
            self.instance = DEFAULT_INSTANCE[p]
        if p == "sorting":
            if self.measure is None or self.measure.lower() not in MEASURES:
                raise SpecError("measure", f"sorting needs one of {', '.join(MEASURES)}")
            self.measure = self.measure.lower()
            if self.algorithm not in ("ea", "rls"):
                raise SpecError("algorithm", "sorting supports 'ea' or 'rls'")
            if self.operator != "exchange-jump":
                raise SpecError("operator", "sorting only has the exchange-jump operator")
        elif p == "sssp":
            if self.operator not in ("vertex", "edge"):
                raise SpecError("operator", "sssp operator must be 'vertex' or 'edge'")
            if self.algorithm != "ea":
                raise SpecError("algorithm", "sssp runs the multi-objective (1+1) EA only ('ea')")
            if self.instance == "layered" and not self.ell:
                raise SpecError("ell", "layered instance needs ell")
        else:
            if self.operator not in ("unrestricted", "symmetric", "asymmetric"):
                raise SpecError("operator", "eulerian operator must be unrestricted, symmetric or asymmetric")
            if self.algorithm not in ("rls", "ea"):
                raise SpecError("algorithm", "eulerian supports 'rls' or 'ea'")
        if isinstance(self.mu, int):
            self.mu = [self.mu]
        if not self.mu:
            raise SpecError("mu", "list must be non-empty")
        if any(int(m) != m or m < 1 for m in self.mu):
            raise SpecError("mu", f"entries must be positive integers, got {self.mu}")
        self.mu = [int(m) for m in self.mu]
        if len(set(self.mu)) != len(self.mu):
            raise SpecError("mu", "entries must be distinct")
        if self.topology not in TOPOLOGIES:
            raise SpecError("topology", f"must be one of {', '.join(TOPOLOGIES)}")
        if self.topology == "torus":
            bad = [m for m in self.mu if m != 1 and not (math.isqrt(m) ** 2 == m and m >= 4)]
            if bad:
                raise SpecError("mu", f"torus needs square island counts >= 4 (or 1), got {bad}")
        try:
            self.tau = parse_tau(self.tau)
        except (TypeError, ValueError) as exc:
            raise SpecError("tau", str(exc)) from None
        if int(self.replications) < 1:
            raise SpecError("replications", "must be >= 1")
        if self.seed is None:
            raise SpecError("seed", "a master seed is required (no wall-clock seeding)")
        if not 0 <= int(self.seed) < 2**64:
            raise SpecError("seed", "must be a 64-bit unsigned integer")
        if int(self.max_generations) < 1:
            raise SpecError("max_generations", "must be positive")
        if int(self.workers) < 1:
            raise SpecError("workers", "must be >= 1")
        if int(self.size) < 2:
            raise SpecError("size", "must be >= 2")
        try:
            self.build_problem()
        except SpecError:
            raise
        except (ValueError, OSError) as exc:
            raise SpecError("instance" if p != "sorting" else "size", str(exc)) from None

    def build_problem(self):
        p = self.problem
        if p == "sorting":
            return SortingProblem(int(self.size), self.measure, self.algorithm)
        if p == "sssp":
            if self.instance == "path":
                g, _ = gen_path_graph(int(self.size))
            elif self.instance == "layered":
                g, _ = gen_layered_instance(int(self.size), int(self.ell))
            else:
                g = load_graph(self.instance)
                if g.n != int(self.size):
                    raise SpecError("size", f"graph file has n={g.n}, spec says {self.size}")
            return ShortestPathProblem(g, self.operator)
        if self.instance == "g_prime":
            g = gen_g_prime(int(self.size))
        else:
            g = load_euler_graph(self.instance)
            if g.m != int(self.size):
                raise SpecError("size", f"graph file has m={g.m}, spec says {self.size}")
        return EulerProblem(g, self.operator, self.algorithm)

    def operator_label(self) -> str:
        return f"{self.operator}:{self.algorithm}"

    def cell_key(self, mu: int) -> str:
        """Content of one cell; seeds hang off this, not off list positions."""
        parts = [self.problem, self.measure or "", str(self.instance), str(self.ell or ""), str(self.size),
                 self.topology, format_tau(self.tau), self.operator_label(), str(mu)]
        return "|".join(parts)

    def cell_seed(self, mu: int) -> int:
        return derive_seed(int(self.seed), stable_key(self.cell_key(mu)))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tau"] = format_tau(self.tau)
        return d


def load_spec(path, **overrides) -> ExperimentSpec:
    """Read a YAML mapping with ExperimentSpec keys; non-None overrides win."""
    data = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(data, dict):
        raise SpecError("config", "top level must be a mapping")
    known = set(ExperimentSpec.__dataclass_fields__)
    unknown = sorted(set(data) - known)
    if unknown:
        raise SpecError(unknown[0], "unknown key")
    data.update({k: v for k, v in overrides.items() if v is not None})
    missing = [k for k in ("problem", "size") if k not in data]
    if missing:
        raise SpecError(missing[0], "required key missing")
    return ExperimentSpec(**data)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list
    summaries: dict  # mu -> SummaryStats

    def speedups(self):
        means = {mu: s for mu, s in self.summaries.items() if s.count}
        if 1 not in means:
            return None
        return speedup_table(means)

    def summary_rows(self) -> list[dict]:
        sp = {mu: (a, b) for mu, a, b in (self.speedups() or [])}
        out = []
        for mu in sorted(self.summaries):
            s = self.summaries[mu]
            out.append({"problem": self.spec.problem, "measure": self.spec.measure or "",
                        "n_or_m": int(self.spec.size), "topology": self.spec.topology, "mu": mu,
                        "tau": format_tau(self.spec.tau), "operator": self.spec.operator_label(),
                        "count": s.count, "mean": s.mean, "median": s.median, "std": s.std,
                        "ci95": s.ci95, "q1": s.q1, "q3": s.q3, "cap_hits": s.cap_hits,
                        "speedup": sp.get(mu, (None, None))[0], "efficiency": sp.get(mu, (None, None))[1]})
        return out


def _one_run(task):
    problem, topo, tau, seed, rep, cap = task
    rec = run(RunConfig(problem, topo, tau=tau, seed=seed, replication=rep, max_generations=cap))
    return rec.parallel_time


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    problem = spec.build_problem()
    tasks, keys = [], []
    for mu in spec.mu:
        topo = make_topology(spec.topology, mu)
        seed = spec.cell_seed(mu)
        for r in range(int(spec.replications)):
            tasks.append((problem, topo, spec.tau, seed, r, int(spec.max_generations)))
            keys.append((mu, seed, r))
    if int(spec.workers) > 1:
        with ProcessPoolExecutor(max_workers=int(spec.workers)) as pool:
            times = list(pool.map(_one_run, tasks, chunksize=max(1, len(tasks) // (4 * int(spec.workers)))))
    else:
        times = [_one_run(t) for t in tasks]

    rows = []
    by_mu: dict[int, list] = {mu: [] for mu in spec.mu}
    for (mu, seed, r), t in sorted(zip(keys, times)):
        by_mu[mu].append(t)
        rows.append({"problem": spec.problem, "measure": spec.measure or "", "n_or_m": int(spec.size),
                     "topology": spec.topology, "mu": mu, "tau": format_tau(spec.tau),
                     "operator": spec.operator_label(), "replication": r, "seed": seed,
                     "parallel_time": t, "capped": t == math.inf})
    summaries = {mu: summarize(ts) for mu, ts in by_mu.items()}
    return ExperimentResult(spec, rows, summaries)


def write_outputs(result: ExperimentResult, path) -> dict:
    """Raw runs to ``path``, per-cell stats to ``*.summary.csv``, a chart to ``*.svg``."""
    path = Path(path)
    summary_path = path.with_suffix(".summary.csv")
    svg_path = path.with_suffix(".svg")
    emit_csv(result.rows, path, RUN_HEADER)
    emit_csv(result.summary_rows(), summary_path, SUMMARY_HEADER)
    series = {"mean parallel time": [(mu, s.mean) for mu, s in sorted(result.summaries.items()) if s.count]}
    spec = result.spec
    emit_svg(series, svg_path, logx=True, logy=True,
             title=f"{spec.problem} size={spec.size} {spec.topology} tau={format_tau(spec.tau)}",
             xlabel="islands (mu)", ylabel="mean parallel time")
    return {"runs": path, "summary": summary_path, "svg": svg_path}


def with_overrides(spec: ExperimentSpec, **kw) -> ExperimentSpec:
    return replace(spec, **{k: v for k, v in kw.items() if v is not None})


@dataclass(frozen=True)
class DecisionResult:
    m: int
    runs: int
    opposite: int
    same: int
    not_applicable: int

    @property
    def applicable(self) -> int:
        return self.opposite + self.same

    @property
    def frequency(self) -> float:
        return self.opposite / self.applicable if self.applicable else math.nan


def _decision_outcomes(m: int, mu: int, runs: int, seed: int, max_generations: int):
    problem = EulerProblem(gen_g_prime(m), "unrestricted", "rls")
    topo = make_ring(mu)
    out = []
    for r in range(runs):
        rec = run(RunConfig(problem, topo, tau=NEVER, seed=seed, replication=r,
                            max_generations=max_generations, probe=True, stop_on_probes=True))
        tags = {isl: tag for _, isl, tag, _ in rec.probes}
        out.append(tuple(tags.get(i) for i in range(mu)))
    return out


def probe_decision_experiment(m: int, runs: int, seed: int,
                              max_generations: int = DEFAULT_MAX_GENERATIONS) -> DecisionResult:
    """Single-island unrestricted RLS on G'(m), each run stopped at its first decision."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if m % 2 or m // 2 < 3:
        raise ValueError(f"m must be even with m/2 >= 3, got {m}")
    tags = [t[0] for t in _decision_outcomes(m, 1, runs, derive_seed(seed, 1, m), max_generations)]
    return DecisionResult(m, runs, tags.count(OPPOSITE), tags.count(SAME), tags.count(NOT_APPLICABLE))


def all_same_fraction(m: int, mu: int, runs: int, seed: int,
                      max_generations: int = DEFAULT_MAX_GENERATIONS) -> float:
    """Share of runs (tau = never) in which every island's first decision was ``same_cycle``."""
    outcomes = _decision_outcomes(m, mu, runs, derive_seed(seed, 2, m, mu), max_generations)
    return sum(all(t == SAME for t in o) for o in outcomes) / runs


__all__ = ["ExperimentSpec", "ExperimentResult", "DecisionResult", "SpecError", "SummaryStats",
           "load_spec", "run_experiment", "write_outputs", "with_overrides",
           "probe_decision_experiment", "all_same_fraction", "NEVER"]
