import math

import pytest
from hypothesis import given, settings, strategies as st

from islandmodel.engine import IslandState, RunConfig, ScalarProblem, migration_step, parse_tau, run
from islandmodel.eulerian import EulerProblem, gen_g_prime
from islandmodel.rng import derive_island_rng
from islandmodel.shortest_paths import ShortestPathProblem, gen_path_graph
from islandmodel.sorting import SortingProblem
from islandmodel.topology import make_complete, make_custom, make_ring, make_topology, make_torus


class Countdown(ScalarProblem):
    """Toy maximisation used to pin migration rules."""

    maximize = True
    name = "toy"

    def __init__(self, optimum=100):
        self.optimum = optimum

    def sample_initial(self, rng):
        return rng.randrange(10)

    def mutate(self, g, rng):
        return g + rng.choice((-1, 1))

    def fitness(self, g):
        return g


def states(*fits):
    return [IslandState(f, f) for f in fits]


def test_equal_immigrants_rejected():
    topo = make_custom(3, {(1, 0), (2, 0)})
    out = migration_step(states(5, 5, 5), topo, Countdown())
    assert out[0].fitness == 5 and out[0] is not None


def test_best_immigrant_replaces():
    topo = make_custom(3, {(1, 0), (2, 0)})
    out = migration_step(states(3, 5, 4), topo, Countdown())
    assert out[0].fitness == 5


def test_no_in_neighbours_unchanged():
    topo = make_custom(2, {(0, 1)})
    out = migration_step(states(1, 9), topo, Countdown())
    assert out[0].fitness == 1


def test_tie_goes_to_lowest_sender():
    topo = make_custom(3, {(1, 0), (2, 0)})
    isl = [IslandState("a", 1), IslandState("b", 5), IslandState("c", 5)]
    assert migration_step(isl, topo, Countdown())[0].genotype == "b"


def test_double_buffered():
    # 0 -> 1 -> 2: the 9 must not travel two hops in one step
    topo = make_custom(3, {(0, 1), (1, 2)})
    out = migration_step(states(9, 1, 0), topo, Countdown())
    assert [s.fitness for s in out] == [9, 9, 1]


def test_parse_tau():
    assert parse_tau("never") == math.inf
    assert parse_tau(3) == 3
    with pytest.raises(ValueError):
        parse_tau(0)


def test_frozen_parallel_times():
    g, _ = gen_path_graph(8)
    assert run(RunConfig(SortingProblem(8, "inv"), make_ring(4), tau=2, seed=11)).parallel_time == 28
    assert run(RunConfig(SortingProblem(8, "exc"), make_complete(3), tau=1, seed=11)).parallel_time == 107
    assert run(RunConfig(ShortestPathProblem(g, "edge"), make_torus(2, 2), tau=3, seed=11)).parallel_time == 0
    assert run(RunConfig(EulerProblem(gen_g_prime(10)), make_ring(2), tau=5, seed=11)).parallel_time == 167


def test_same_seed_same_record():
    cfg = dict(problem=SortingProblem(7, "las"), topology=make_ring(3), tau=2, seed=5, trace=True)
    assert run(RunConfig(**cfg)) == run(RunConfig(**cfg))


def test_single_island_is_bare_algorithm():
    problem = SortingProblem(7, "ham")
    rec = run(RunConfig(problem, make_ring(1), tau=1, seed=3, trace=True))
    rng = derive_island_rng(3, 0, 0)
    x = problem.sample_initial(rng)
    f = problem.fitness(x)
    fits = [f]
    while not problem.is_optimal_fitness(f):
        y = problem.mutate(x, rng)
        fy = problem.fitness(y)
        if problem.accept_offspring(f, fy):
            x, f = y, fy
        fits.append(f)
    assert [post[0] for _, _, post in rec.trajectory] == fits
    assert rec.parallel_time == len(fits) - 1


def test_never_equals_independent_runs():
    problem = SortingProblem(6, "inv")
    rec = run(RunConfig(problem, make_complete(3), tau="never", seed=8, trace=True))
    gens = len(rec.trajectory)
    for i in range(3):
        rng = derive_island_rng(8, i, 0)
        x = problem.sample_initial(rng)
        f = problem.fitness(x)
        seq = [f]
        for _ in range(gens - 1):
            c, fc = problem.propose(x, f, rng)
            if problem.accept_offspring(f, fc):
                x, f = c, fc
            seq.append(f)
        assert [post[i] for _, _, post in rec.trajectory] == seq


def test_migration_only_at_multiples_of_tau():
    problem = Countdown()
    rec = run(RunConfig(problem, make_ring(5), tau=3, seed=1, max_generations=60, trace=True))
    for gen, pre, post in rec.trajectory[1:]:
        t = gen - 1
        if not (t > 0 and t % 3 == 0):
            assert pre == post


def test_cap_reported():
    rec = run(RunConfig(SortingProblem(10, "inv"), make_ring(2), seed=1, max_generations=3))
    assert rec.hit_cap and rec.parallel_time == math.inf and rec.termination == "cap"


def test_initial_optimum_gives_zero():
    rec = run(RunConfig(SortingProblem(2, "inv"), make_complete(4), seed=0))
    assert rec.parallel_time == 0


def test_probe_needs_support():
    with pytest.raises(ValueError):
        run(RunConfig(SortingProblem(5, "inv"), make_ring(1), probe=True))
    with pytest.raises(ValueError):
        RunConfig(SortingProblem(5, "inv"), make_ring(1), stop_on_probes=True)


def test_probes_empty_unless_enabled():
    rec = run(RunConfig(EulerProblem(gen_g_prime(8)), make_ring(2), seed=4))
    assert rec.probes == []


def _scalar_monotone(problem, seq):
    ok = (lambda a, b: b >= a) if problem.maximize else (lambda a, b: b <= a)
    return all(ok(a, b) for a, b in zip(seq, seq[1:]))


problems = st.sampled_from([
    lambda: SortingProblem(6, "inv"), lambda: SortingProblem(6, "exc"),
    lambda: SortingProblem(7, "las", "rls"), lambda: EulerProblem(gen_g_prime(8)),
    lambda: EulerProblem(gen_g_prime(8), "symmetric"),
])
topologies = st.sampled_from([("ring", 4), ("torus", 4), ("complete", 4), ("ring", 2), ("complete", 6)])


@settings(max_examples=40, deadline=None)
@given(problems, topologies, st.integers(1, 4), st.integers(0, 2**32))
def test_scalar_invariants(make, topo_spec, tau, seed):
    problem = make()
    topo = make_topology(*topo_spec)
    rec = run(RunConfig(problem, topo, tau=tau, seed=seed, max_generations=5000, trace=True))
    traj = rec.trajectory
    for i in range(topo.mu):
        seq = [traj[0][2][i]]
        for _, pre, post in traj[1:]:
            seq += [pre[i], post[i]]
        assert _scalar_monotone(problem, seq)
    for gen, pre, post in traj[1:]:
        t = gen - 1
        if t > 0 and t % tau == 0:
            for u, v in topo.arcs:
                assert not problem.better_for_migration(pre[u], post[v])
            if topo.kind == "complete" and tau == 1:
                best = max(pre) if problem.maximize else min(pre)
                assert all(f == best for f in post)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["edge", "vertex"]), topologies, st.integers(1, 3), st.integers(0, 2**32))
def test_sssp_componentwise_elitism(op, topo_spec, tau, seed):
    g, _ = gen_path_graph(6)
    problem = ShortestPathProblem(g, op)
    topo = make_topology(*topo_spec)
    rec = run(RunConfig(problem, topo, tau=tau, seed=seed, max_generations=3000, trace=True))
    for i in range(topo.mu):
        seq = [rec.trajectory[0][2][i]]
        for _, pre, post in rec.trajectory[1:]:
            seq += [pre[i], post[i]]
        for a, b in zip(seq, seq[1:]):
            assert all(y <= x for x, y in zip(a, b))
