"""Acceptance checks, one function per criterion.

Every check returns a :class:`Check`. Sample sizes and tolerances default to
the documented values; smaller sizes are only meant for quick smoke tests.
"""

from __future__ import annotations

import itertools
import math
import random
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .. import bounds as B
from ..engine import NEVER, RunConfig, run
from ..eulerian import EulerProblem, gen_g_prime, is_euler_optimal, walk_length
from ..oracles import exchange_distances, random_eulerian_graph, sssp_brute_minimum
from ..rng import derive_numpy_rng, derive_seed
from ..shortest_paths import (ShortestPathProblem, eval_distances, gen_random_connected, is_optimal_sssp,
                              shortest_path_oracle)
from ..sorting import SortingProblem, exc, max_single_op_inv_gain, worst_inv_permutation
from ..topology import make_ring, make_topology
from .experiment import ExperimentSpec, all_same_fraction, probe_decision_experiment, run_experiment
from .stats import welch_less

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _mean(xs):
    return math.fsum(xs) / len(xs)


def _times(problem, topo, tau, runs, seed):
    out = []
    for r in range(runs):
        rec = run(RunConfig(problem, topo, tau=tau, seed=seed, replication=r))
        out.append(rec.parallel_time)
    return out


def check_rowe(seed=DEFAULT_SEED) -> Check:
    worst = -math.inf
    bad = 0
    for k in range(1, 101):
        s = k / 100
        for mu in range(1, 65):
            lhs, rhs = B.rowe_bound(s, mu)
            worst = max(worst, (lhs - rhs) / rhs)
            if lhs > rhs * (1 + 1e-12):
                bad += 1
    return Check(1, "rowe", bad == 0, f"{bad} violations on 6400 grid points, max rel excess {worst:.3g}")


def check_bounds(seed=DEFAULT_SEED) -> Check:
    with warnings.catch_warnings():
        # mu=2 is not a square torus; the value is still the formula's
        warnings.simplefilter("ignore")
        got = (B.bound_ring((0.25,), 2).value, B.bound_torus((0.125,), 2).value,
               B.bound_complete((0.5, 0.25), 2).value)
    h = B.harmonic(3)
    ok = got == (6.0, 10.0, 6.0) and abs(h - 11 / 6) <= 1e-12 and B.harmonic_exact(3) == Fraction(11, 6)
    return Check(2, "bounds", ok, f"ring/torus/complete = {got}, harmonic(3) = {h!r}")


def check_decision(seed=DEFAULT_SEED, m=24, runs=2000, lo=0.61, hi=0.72) -> Check:
    res = probe_decision_experiment(m, runs, seed)
    f = res.frequency
    return Check(3, "decision", lo <= f <= hi,
                 f"opposite_cycle frequency {f:.4f} in [{lo}, {hi}]; {res.applicable} applicable, "
                 f"{res.not_applicable} not_applicable")


def check_decay(seed=DEFAULT_SEED, m=16, runs=3000, mus=(1, 2, 3), lo=0.5, hi=2.0) -> Check:
    fr = {mu: all_same_fraction(m, mu, runs, seed) for mu in mus}
    base = fr[1]
    ratios = {mu: (fr[mu] / base**mu if base > 0 else math.nan) for mu in mus}
    ok = all(lo <= r <= hi for r in ratios.values())
    txt = ", ".join(f"mu={mu}: frac={fr[mu]:.4f} ratio={ratios[mu]:.3f}" for mu in mus)
    return Check(4, "decay", ok, f"{txt}; ratios in [{lo}, {hi}]")


def check_migration(seed=DEFAULT_SEED, m=16, mu=8, runs=200, rare_tau=4096, alpha=0.01) -> Check:
    problem = EulerProblem(gen_g_prime(m), "unrestricted", "rls")
    topo = make_ring(mu)
    freq = _times(problem, topo, 1, runs, derive_seed(seed, 5, 1))
    rare = _times(problem, topo, rare_tau, runs, derive_seed(seed, 5, 2))
    t, df, p = welch_less(rare, freq)
    ok = p < alpha
    return Check(5, "migration", ok,
                 f"mean T rare(tau={rare_tau})={_mean(rare):.1f} vs frequent(tau=1)={_mean(freq):.1f}; "
                 f"Welch t={t:.2f}, df={df:.1f}, one-sided p={p:.3g} (need < {alpha})")


def check_operators(seed=DEFAULT_SEED, ms=(12, 24, 48), runs=200, target=2.0) -> Check:
    ratios = []
    topo = make_ring(1)
    for m in ms:
        g = gen_g_prime(m)
        sym = _times(EulerProblem(g, "symmetric", "rls"), topo, NEVER, runs, derive_seed(seed, 6, m, 0))
        asym = _times(EulerProblem(g, "asymmetric", "rls"), topo, NEVER, runs, derive_seed(seed, 6, m, 1))
        ratios.append(_mean(sym) / _mean(asym))
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    ok = increasing and ratios[-1] > target
    txt = ", ".join(f"m={m}: {r:.3f}" for m, r in zip(ms, ratios))
    return Check(6, "operators", ok,
                 f"T_sym/T_asym {txt}; increasing={increasing}, last > {target}: {ratios[-1] > target}")


def check_speedup(seed=DEFAULT_SEED, n=24, mus=(1, 4, 16), runs=300, min_eff=0.3) -> Check:
    spec = ExperimentSpec(problem="sorting", measure="ham", size=n, mu=list(mus), topology="complete",
                          tau=1, algorithm="ea", replications=runs, seed=seed)
    res = run_experiment(spec)
    means = [res.summaries[mu].mean for mu in mus]
    caps = sum(res.summaries[mu].cap_hits for mu in mus)
    eff = {mu: e for mu, _, e in res.speedups()}
    dec = all(a > b for a, b in zip(means, means[1:]))
    ok = dec and eff[4] >= min_eff and caps == 0
    txt = ", ".join(f"mu={mu}: {v:.1f}" for mu, v in zip(mus, means))
    return Check(7, "speedup", ok, f"mean T {txt}; decreasing={dec}, efficiency(4)={eff[4]:.3f} >= {min_eff}")


def check_sssp(seed=DEFAULT_SEED, n=32, runs=200, min_ratio=5.0) -> Check:
    means = {}
    for op in ("edge", "vertex"):
        spec = ExperimentSpec(problem="sssp", instance="path", operator=op, size=n, mu=[1],
                              replications=runs, seed=seed)
        means[op] = run_experiment(spec).summaries[1].mean
    ratio = means["vertex"] / means["edge"]
    ok = means["edge"] < means["vertex"] and ratio >= min_ratio
    return Check(8, "sssp", ok, f"mean T edge={means['edge']:.1f}, vertex={means['vertex']:.1f}, "
                                f"ratio {ratio:.2f} >= {min_ratio}")


def check_lemma1(seed=DEFAULT_SEED, k=8, trials=100_000, ts=(16, 32, 64, 128, 256)) -> Check:
    rng = derive_numpy_rng(seed, 9)
    times = B.rw_hitting_simulate(k, trials, rng)
    worst = []
    ok = True
    for t in ts:
        p = float((times <= t).mean())
        sigma = math.sqrt(max(p * (1 - p), 1.0 / trials) / trials)
        bound = B.lemma1_cumulative(k, t, clip=True)
        ok = ok and p <= bound + 3 * sigma
        worst.append(f"t={t}: {p:.4f}<= {bound:.4f}")
    m2 = float(B.rw_hitting_simulate(2, trials, rng).mean())
    ok = ok and 3.9 <= m2 <= 4.1
    return Check(9, "lemma1", ok, f"{'; '.join(worst)}; mean T(2)={m2:.4f} in [3.9, 4.1]")


def check_flatgain(seed=DEFAULT_SEED, ns=(8, 12, 16)) -> Check:
    gains = [max_single_op_inv_gain(worst_inv_permutation(n)) for n in ns]
    ok = len(set(gains)) == 1
    return Check(10, "flatgain", ok, f"max single-operation INV gain {dict(zip(ns, gains))}")


def check_oracles(seed=DEFAULT_SEED, graphs=50, optima=1000) -> Check:
    dist = exchange_distances(6)
    exc_bad = sum(exc(p) != d for p, d in dist.items())
    exc_ok = len(dist) == 720 and exc_bad == 0

    rng = random.Random(derive_seed(seed, 11, 1))
    sssp_bad = 0
    vectors = 0
    for _ in range(graphs):
        n = rng.randint(3, 7)
        g = gen_random_connected(n, rng)
        brute = sssp_brute_minimum(g)
        oracle = shortest_path_oracle(g)
        if any(not math.isclose(a, b) for a, b in zip(brute, oracle)):
            sssp_bad += 1
            continue
        # agreement is checked pointwise on an evenly strided subset of all genotypes
        choices = [[j for j in range(1, n + 1) if j != i] for i in range(1, n)]
        for x in itertools.islice(itertools.product(*choices), 0, None, max(1, (n - 1) ** (n - 1) // 400)):
            vectors += 1
            exact = all(a == b for a, b in zip(eval_distances(x, g), brute))
            if exact != is_optimal_sssp(x, g, oracle):
                sssp_bad += 1
    sssp_ok = sssp_bad == 0

    euler_ok, euler_found = _euler_optima(seed, optima)
    ok = exc_ok and sssp_ok and euler_ok
    return Check(11, "oracles", ok,
                 f"exc vs BFS: {720 - exc_bad}/720 agree; sssp: {graphs} graphs, {vectors} genotypes, "
                 f"{sssp_bad} disagreements; euler: {euler_found} optima, all closed={euler_ok}")


def _euler_optima(seed, count):
    """Run RLS to optimality on random Eulerian graphs and inspect the optimum."""
    rng = random.Random(derive_seed(seed, 11, 2))
    found = 0
    ok = True
    while found < count:
        g = random_eulerian_graph(rng, max_edges=12)
        prob = EulerProblem(g, "unrestricted", "rls")
        r = random.Random(rng.getrandbits(64))
        p = prob.sample_initial(r)
        f = prob.fitness(p)
        while f < g.m:
            c, fc = prob.propose(p, f, r)
            if prob.accept_offspring(f, fc):
                p, f = c, fc
        found += 1
        info = walk_length(p, g)
        try:
            opt = is_euler_optimal(p, g)
        except RuntimeError:
            opt = False
        ok = ok and opt and info.start == info.end
    return ok, found


def _monotone(problem, seq) -> bool:
    """True if each value is at least as good as the previous one."""
    if isinstance(problem, ShortestPathProblem):
        return all(all(b <= a for a, b in zip(x, y)) for x, y in zip(seq, seq[1:]))
    if problem.maximize:
        return all(b >= a for a, b in zip(seq, seq[1:]))
    return all(b <= a for a, b in zip(seq, seq[1:]))


def _engine_cases(seed):
    rng = random.Random(derive_seed(seed, 12, 0))
    cases = []
    topo_list = [("ring", 4), ("ring", 6), ("torus", 4), ("torus", 9), ("complete", 3), ("complete", 5)]
    for k in range(100):
        kind, mu = topo_list[k % len(topo_list)]
        tau = (1, 1, 2, 3, 5)[k % 5]
        pick = k % 3
        if pick == 0:
            measure = ("inv", "ham", "las", "exc")[k % 4]
            problem = SortingProblem(rng.randint(5, 9), measure, ("ea", "rls")[k % 2])
        elif pick == 1:
            g = gen_random_connected(rng.randint(4, 8), rng)
            problem = ShortestPathProblem(g, ("edge", "vertex")[k % 2])
        else:
            m = (6, 8, 10)[k % 3]
            problem = EulerProblem(gen_g_prime(m), ("unrestricted", "symmetric", "asymmetric")[k % 3], "rls")
        cases.append((problem, make_topology(kind, mu), tau))
    return cases


def check_engine(seed=DEFAULT_SEED, runs=100) -> Check:
    fails = {"elitism": 0, "complete": 0, "takeover": 0, "determinism": 0}
    per_problem = {"sorting": 0, "sssp": 0, "eulerian": 0}
    for k, (problem, topo, tau) in enumerate(_engine_cases(seed)[:runs]):
        cfg = RunConfig(problem, topo, tau=tau, seed=derive_seed(seed, 12, 1), replication=k,
                        max_generations=20_000, trace=True)
        rec = run(cfg)
        again = run(RunConfig(problem, topo, tau=tau, seed=derive_seed(seed, 12, 1), replication=k,
                              max_generations=20_000, trace=True))
        if rec != again:
            fails["determinism"] += 1
        scalar = not isinstance(problem, ShortestPathProblem)
        kind = ("sorting" if isinstance(problem, SortingProblem)
                else "sssp" if isinstance(problem, ShortestPathProblem) else "eulerian")
        per_problem[kind] += 1
        traj = rec.trajectory
        for i in range(topo.mu):
            seq = [traj[0][2][i]]
            for _, pre, post in traj[1:]:
                seq += [pre[i], post[i]]
            if not _monotone(problem, seq):
                fails["elitism"] += 1
                break
        for gen, pre, post in traj[1:]:
            t = gen - 1
            if not (t > 0 and t % tau == 0) or topo.mu < 2:
                continue
            if scalar and topo.kind == "complete" and tau == 1:
                best = max(pre) if problem.maximize else min(pre)
                if any(f != best for f in post):
                    fails["complete"] += 1
            if scalar:
                for u, v in topo.arcs:
                    if problem.better_for_migration(pre[u], post[v]):
                        fails["takeover"] += 1
    spec = ExperimentSpec(problem="sorting", measure="inv", size=8, mu=[1, 4], topology="ring", tau=2,
                          replications=4, seed=seed)
    one = run_experiment(spec).rows
    spec.workers = 2
    two = run_experiment(spec).rows
    if one != two:
        fails["determinism"] += 1
    ok = not any(fails.values())
    return Check(12, "engine", ok, f"{runs} traced runs {per_problem}; failures {fails}; 1 vs 2 workers identical="
                                   f"{one == two}")


CHECKS = {
    "rowe": check_rowe,
    "bounds": check_bounds,
    "decision": check_decision,
    "decay": check_decay,
    "migration": check_migration,
    "operators": check_operators,
    "speedup": check_speedup,
    "sssp": check_sssp,
    "lemma1": check_lemma1,
    "flatgain": check_flatgain,
    "oracles": check_oracles,
    "engine": check_engine,
}


def verify(selector: str = "all", seed: int = DEFAULT_SEED, echo=None) -> list[Check]:
    if selector == "all":
        names = list(CHECKS)
    elif selector in CHECKS:
        names = [selector]
    else:
        raise KeyError(f"unknown selector {selector!r}; choose from all, {', '.join(CHECKS)}")
    out = []
    for name in names:
        t0 = time.perf_counter()
        c = CHECKS[name](seed=seed)
        c = Check(c.number, c.name, c.passed, c.detail, time.perf_counter() - t0)
        if echo is not None:
            echo(c.line())
        out.append(c)
    return out
