import io
import math
import re

import pytest

from islandmodel.engine import NEVER, RunConfig, run
from islandmodel.harness.cli import main
from islandmodel.harness.experiment import (ExperimentSpec, SpecError, load_spec, probe_decision_experiment,
                                            run_experiment, write_outputs)
from islandmodel.harness.output import OutputError, RUN_HEADER, emit_csv, emit_svg, parse_run_row, read_csv
from islandmodel.harness.stats import speedup_table, summarize, welch_less
from islandmodel.harness.verify import CHECKS, check_bounds, check_engine, check_flatgain, check_rowe
from islandmodel.topology import make_topology


def small(**kw):
    base = dict(problem="sorting", size=6, measure="ham", mu=[1, 2, 4], tau=1, replications=3, seed=5)
    base.update(kw)
    return ExperimentSpec(**base)


@pytest.mark.parametrize("means, mu, sp, eff", [
    ({1: 100, 4: 25}, 4, 4.0, 1.0),
    ({1: 100, 4: 50}, 4, 2.0, 0.5),
    ({1: 100, 4: 50}, 1, 1.0, 1.0),
])
def test_speedup_examples(means, mu, sp, eff):
    rows = {r[0]: r[1:] for r in speedup_table(means)}
    assert rows[mu] == pytest.approx((sp, eff))


def test_speedup_needs_baseline():
    with pytest.raises(ValueError):
        speedup_table({2: 10.0, 4: 5.0})


def test_summarize_excludes_caps():
    s = summarize([1, 2, 3, math.inf])
    assert (s.count, s.mean, s.median, s.cap_hits) == (3, 2.0, 2.0, 1)
    assert s.iqr == pytest.approx(1.0)
    empty = summarize([math.inf])
    assert empty.count == 0 and math.isnan(empty.mean) and empty.cap_hits == 1


def test_welch_less():
    t, df, p = welch_less([1, 2, 3, 4], [10, 11, 12, 13])
    assert t < 0 and p < 0.001 and df == pytest.approx(6.0)
    assert welch_less([10, 11, 12, 13], [1, 2, 3, 4])[2] > 0.999
    with pytest.raises(ValueError):
        welch_less([1], [2, 3])


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "e.csv"
    emit_csv([], path)
    assert path.read_text() == ",".join(RUN_HEADER) + "\n"


def test_csv_round_trip(tmp_path):
    res = run_experiment(small(mu=[1, 2], replications=2))
    path = tmp_path / "r.csv"
    emit_csv(res.rows, path)
    back = [parse_run_row(r) for r in read_csv(path)]
    assert [(r["mu"], r["replication"], r["parallel_time"]) for r in back] == \
        [(r["mu"], r["replication"], r["parallel_time"]) for r in res.rows]


def test_svg_single_series(tmp_path):
    path = tmp_path / "p.svg"
    emit_svg({"a": [(1, 10.0), (4, 3.0)]}, path)
    text = path.read_text()
    polys = re.findall(r'<polyline [^>]*points="([^"]*)"', text)
    assert len(polys) == 1 and len(polys[0].split()) == 2


def test_unwritable_output(tmp_path):
    with pytest.raises(OutputError):
        emit_csv([], tmp_path / "missing" / "x.csv")
    with pytest.raises(OutputError):
        emit_svg({}, tmp_path / "missing" / "x.svg")


@pytest.mark.parametrize("kw, field", [
    (dict(problem="tsp"), "problem"),
    (dict(measure="bogus"), "measure"),
    (dict(topology="torus", mu=[1, 8]), "mu"),
    (dict(replications=0), "replications"),
    (dict(seed=None), "seed"),
    (dict(mu=[]), "mu"),
    (dict(tau="sometimes"), "tau"),
    (dict(problem="sssp", size=8, measure=None, algorithm="rls"), "algorithm"),
    (dict(problem="eulerian", size=7, measure=None), "instance"),
])
def test_spec_validation_names_field(kw, field):
    with pytest.raises(SpecError) as err:
        small(**kw)
    assert err.value.field == field
    assert str(err.value).startswith(field)


def test_load_spec(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("problem: eulerian\nsize: 12\nmu: [1, 2]\ntau: never\noperator: symmetric\nseed: 3\n")
    spec = load_spec(cfg, mu=[4], replications=2)
    assert spec.mu == [4] and spec.replications == 2 and spec.tau == NEVER
    assert spec.operator_label() == "symmetric:rls"
    cfg.write_text("problem: eulerian\nsize: 12\ncolour: red\n")
    with pytest.raises(SpecError) as err:
        load_spec(cfg, seed=1)
    assert err.value.field == "colour"


def test_same_spec_same_files(tmp_path):
    a = write_outputs(run_experiment(small()), tmp_path / "a.csv")
    b = write_outputs(run_experiment(small()), tmp_path / "b.csv")
    for k in a:
        assert a[k].read_bytes() == b[k].read_bytes()


def test_mu_order_does_not_matter():
    key = lambda res: sorted((r["mu"], r["replication"], r["parallel_time"]) for r in res.rows)
    assert key(run_experiment(small(mu=[1, 2, 4]))) == key(run_experiment(small(mu=[4, 1, 2])))


def test_single_replication_matches_run():
    spec = small(mu=[3], replications=1, tau=2)
    res = run_experiment(spec)
    rec = run(RunConfig(spec.build_problem(), make_topology("ring", 3), tau=2, seed=spec.cell_seed(3),
                        replication=0, max_generations=spec.max_generations))
    assert res.rows[0]["parallel_time"] == rec.parallel_time
    assert res.summaries[3].mean == rec.parallel_time


def test_workers_do_not_change_rows():
    assert run_experiment(small(workers=1)).rows == run_experiment(small(workers=2)).rows


def test_cap_hits_reported():
    res = run_experiment(small(size=10, mu=[1], max_generations=3, replications=4))
    assert res.summaries[1].cap_hits == 4
    assert res.speedups() is None


def test_probe_decision():
    with pytest.raises(ValueError):
        probe_decision_experiment(12, 0, 1)
    a = probe_decision_experiment(12, 20, 4)
    assert a == probe_decision_experiment(12, 20, 4)
    assert a.opposite + a.same + a.not_applicable == 20
    assert 0 <= a.frequency <= 1


def test_quick_checks_pass():
    for check in (check_rowe, check_bounds, check_flatgain):
        assert check().passed
    assert check_engine(runs=10).passed
    assert set(CHECKS) >= {"rowe", "decision", "migration", "operators", "oracles", "engine"}


def test_cli_exit_codes(tmp_path):
    out = io.StringIO()
    assert main(["bounds", "--levels", "0.5,0.25", "--mu", "2", "--topology", "complete"], out) == 0
    assert re.search(r"complete\s+2\s+3\s+3\s+6", out.getvalue())
    cfg = tmp_path / "c.yaml"
    cfg.write_text("problem: sorting\nsize: 6\nmeasure: ham\nmu: [1, 2]\nreplications: 2\n")
    assert main(["run", str(cfg)], io.StringIO()) == 2
    out = io.StringIO()
    assert main(["run", str(cfg), "--seed", "1", "--output", str(tmp_path / "o.csv")], out) == 0
    assert (tmp_path / "o.summary.csv").exists() and (tmp_path / "o.svg").exists()
    assert main(["run", str(cfg), "--seed", "1", "--output", str(tmp_path / "no" / "o.csv")], io.StringIO()) == 2
    assert main(["run", str(tmp_path / "absent.yaml"), "--seed", "1"], io.StringIO()) == 2
    assert main(["verify", "rowe"], io.StringIO()) == 0
    assert main(["probe-decision", "--m", "12", "--runs", "0", "--seed", "1"], io.StringIO()) == 2
    out = io.StringIO()
    assert main(["rw", "--k", "2", "--trials", "1000", "--seed", "1"], out) == 0
    assert "mean=" in out.getvalue()
