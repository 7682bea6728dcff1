"""Command line: ``islandmodel {run,bounds,verify,probe-decision,rw}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings

from .. import bounds as B
from ..rng import derive_numpy_rng
from ..shortest_paths import gen_layered_instance, gen_path_graph
from .experiment import SpecError, load_spec, probe_decision_experiment, run_experiment, write_outputs
from .verify import CHECKS, DEFAULT_SEED, verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _fmt(v) -> str:
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def _print_table(rows, header, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(r[k]) if isinstance(r[k], float) else r[k] for k in header])
        return
    cells = [[_fmt(r[k]) for k in header] for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h) for i, h in enumerate(header)]
    out.write("  ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
    for c in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)) + "\n")


def cmd_run(args, out) -> int:
    spec = load_spec(args.config, seed=args.seed, mu=args.mu, tau=args.tau, replications=args.replications,
                     workers=args.workers, output=args.output, max_generations=args.max_generations)
    result = run_experiment(spec)
    rows = result.summary_rows()
    header = ("mu", "count", "mean", "median", "q1", "q3", "ci95", "cap_hits", "speedup", "efficiency")
    _print_table([{k: ("" if r[k] is None else r[k]) for k in header} for r in rows], header, "text", out)
    for r in rows:
        if r["cap_hits"]:
            out.write(f"warning: mu={r['mu']} has {r['cap_hits']} run(s) at the generation cap\n")
    if spec.output:
        paths = write_outputs(result, spec.output)
        out.write("wrote " + ", ".join(str(p) for p in paths.values()) + "\n")
    return EXIT_OK


def _bound_levels(args):
    if args.levels is not None:
        return "explicit", [B.LevelProbabilities(tuple(args.levels))]
    if args.problem == "sorting":
        if args.n is None:
            raise InputError("--n is required for sorting bounds")
        m = args.measure.lower()
        s = B.sorting_levels_inv(args.n) if m == "inv" else B.sorting_levels_scalar(args.n, m)
        return "sorting", [s]
    if args.problem == "sssp":
        if args.n is None:
            raise InputError("--n is required for sssp bounds")
        if args.ell is None:
            g, prof = gen_path_graph(args.n)
        else:
            g, prof = gen_layered_instance(args.n, args.ell)
        return "sssp", B.sssp_levels(prof, g.n, g.m, args.operator)
    raise InputError("give --levels or --problem sorting|sssp")


def cmd_bounds(args, out) -> int:
    _, layers = _bound_levels(args)
    rows = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for kind in args.topology:
            for mu in args.mu:
                rows.append(B.bound_layers(kind, layers, mu).row())
    for w in {str(w.message) for w in caught}:
        sys.stderr.write(f"warning: {w}\n")
    _print_table(rows, ("topology", "mu", "spread", "sequential", "value"), args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    checks = verify(args.selector, seed=args.seed, echo=lambda line: (out.write(line + "\n"), out.flush()))
    failed = sum(not c.passed for c in checks)
    out.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_probe(args, out) -> int:
    res = probe_decision_experiment(args.m, args.runs, args.seed)
    out.write(f"m={res.m} runs={res.runs} opposite_cycle={res.opposite} same_cycle={res.same} "
              f"not_applicable={res.not_applicable} frequency={res.frequency:.4f}\n")
    return EXIT_OK


def cmd_rw(args, out) -> int:
    if args.k < 1 or args.trials < 1:
        raise InputError("--k and --trials must be >= 1")
    times = B.rw_hitting_simulate(args.k, args.trials, derive_numpy_rng(args.seed, 9))
    out.write(f"k={args.k} trials={args.trials} mean={times.mean():.4f} (k^2={args.k ** 2})\n")
    ts = args.t or [args.k * 2 ** j for j in range(1, 6)]
    rows = []
    for t in ts:
        p = float((times <= t).mean())
        rows.append({"t": t, "empirical": p, "lemma1_cumulative": B.lemma1_cumulative(args.k, t, clip=True),
                     "sigma": math.sqrt(p * (1 - p) / args.trials)})
    _print_table(rows, ("t", "empirical", "lemma1_cumulative", "sigma"), "text", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="islandmodel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a replicated experiment from a YAML config")
    p.add_argument("config")
    p.add_argument("--seed", type=int, help="master seed (required here or in the config)")
    p.add_argument("--mu", type=_int_list, help="comma-separated island counts")
    p.add_argument("--tau", help="migration interval or 'never'")
    p.add_argument("--replications", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--max-generations", dest="max_generations", type=int)
    p.add_argument("--output", help="raw CSV path; summary and SVG go next to it")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bounds", help="evaluate topology bounds")
    p.add_argument("--topology", type=lambda s: s.split(","), default=["ring", "torus", "complete"])
    p.add_argument("--mu", type=_int_list, default=[1, 4, 16, 64])
    p.add_argument("--levels", type=_float_list, help="explicit level probabilities s_1,...")
    p.add_argument("--problem", choices=("sorting", "sssp"))
    p.add_argument("--measure", default="inv", choices=("inv", "ham", "las", "exc"))
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int, help="layered SSSP instance depth (path graph if omitted)")
    p.add_argument("--operator", default="vertex", choices=("vertex", "edge"))
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run acceptance checks")
    p.add_argument("selector", nargs="?", default="all", choices=("all", *CHECKS))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe-decision", help="first-decision frequency on G'")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("rw", help="simulate fair random-walk hitting times")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", type=_int_list, help="time points for the cumulative comparison")
    p.set_defaults(func=cmd_rw)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (SpecError, InputError, ValueError, OSError, KeyError) as exc:
        # OutputError is an OSError: an unwritable path is an input problem too
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
