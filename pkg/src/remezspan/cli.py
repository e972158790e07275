"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 not applicable,
4 verification failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .covering import covering_bounds_nd, covering_profile_1d
from .errors import FalsificationFound, IndefiniteSetError, NotApplicableError, ParseError
from .pointset import (load_pointset, make_geometric_set, make_grid_1d, make_grid_nd,
                       make_power_set, pointset_to_json)
from .polywitness import exact_remez_span, falsify, favard_bound
from .remez import chebyshev_eval, grid_product_bound, remez_span_bound
from .serialize import csv_rows, dumps, fmt_float
from .span import load_constants_table, model_for, omega, omega_1d, span_curve_csv
from .spread import beta_spread, theorem_35_check

EXIT_OK, EXIT_USAGE, EXIT_NA, EXIT_FAIL = 0, 2, 3, 4
SOUNDNESS_TOL = 1e-6
SECTIONS = ("example1", "example2", "example3", "thm25", "thm26", "lemma21")


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: _timestamp())

    def to_dict(self):
        return asdict(self)


def _timestamp():
    # SOURCE_DATE_EPOCH pins the stamp for reproducible artifacts
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
            else _dt.datetime.now(_dt.timezone.utc))
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _manifest(args):
    skip = {"func", "command", "seed"}
    params = {k: (str(v) if isinstance(v, Path) else v)
              for k, v in sorted(vars(args).items()) if k not in skip}
    return RunManifest(args.command, params, args.seed)


def _emit(args, result, csv_text=None):
    """Print ``result`` as JSON (default) or ``csv_text`` under --csv."""
    manifest = _manifest(args)
    if args.format == "csv" and csv_text is not None:
        header = "".join(f"# {k}: {v}\n" for k, v in manifest.to_dict().items()
                         if k != "parameters")
        sys.stdout.write(header + csv_text)
    else:
        sys.stdout.write(dumps({"manifest": manifest, "result": result}) + "\n")


def _model(args, Z, d):
    table = load_constants_table(args.constants_table) if args.constants_table else None
    return model_for(Z.dim, d, table)


# -- subcommands ----------------------------------------------------------------

def cmd_gen(args):
    if args.kind == "grid1d":
        Z = make_grid_1d(args.s)
    elif args.kind == "grid":
        Z = make_grid_nd(args.n, args.s)
    elif args.kind == "power":
        Z = make_power_set(args.r, args.k)
    else:
        Z = make_geometric_set(args.q, args.k)
    text = pointset_to_json(Z)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_covering(args):
    Z = load_pointset(args.input)
    if args.eps:
        rows = [covering_bounds_nd(Z, e) for e in args.eps]
        _emit(args, {"intervals": rows},
              csv_rows(["eps", "m_lo", "m_hi"], [(r.eps, r.m_lo, r.m_hi) for r in rows]))
    elif Z.dim == 1:
        prof = covering_profile_1d(Z)
        _emit(args, prof, prof.to_csv())
    else:
        raise NotApplicableError("the exact profile is one-dimensional; pass --eps values")
    return EXIT_OK


def cmd_omega(args):
    Z = load_pointset(args.input)
    model = _model(args, Z, args.d)
    res = omega(Z, args.d, model)
    if args.curve:
        Path(args.curve).write_text(span_curve_csv(Z, args.d, model))
    _emit(args, {"span": res, "model": model},
          csv_rows(["omega_lo", "omega_hi", "witness_eps", "mode"],
                   [(res.omega_lo, res.omega_hi, res.witness_eps, res.mode)]))
    return EXIT_OK


def cmd_bound(args):
    Z = load_pointset(args.input)
    rep = remez_span_bound(Z, args.d, _model(args, Z, args.d), args.normalization)
    _emit(args, rep, csv_rows(["omega", "lambda", "factor"],
                              [(rep.omega_used, rep.lam, rep.factor)]))
    return EXIT_OK


def cmd_exact(args):
    Z = load_pointset(args.input)
    est = exact_remez_span(Z, args.d, args.resolution, threads=args.threads)
    out = {"estimate": est}
    status = EXIT_OK
    if args.falsify:
        rep = remez_span_bound(Z, args.d, _model(args, Z, args.d))
        fr = falsify(Z, args.d, rep.factor, trials=args.falsify, seed=args.seed,
                     resolution=args.resolution, raise_on_violation=False)
        out["bound"], out["falsify"] = rep, fr
        if fr.violations or est.value > rep.factor + SOUNDNESS_TOL:
            status = EXIT_FAIL
    _emit(args, out, csv_rows(["value", "probe", "resolution"],
                              [(est.value, " ".join(fmt_float(v) for v in est.probe),
                                est.probe_grid)]))
    return status


def cmd_favard(args):
    Z = load_pointset(args.input)
    res = favard_bound(Z, args.d, args.mode)
    _emit(args, res, csv_rows(["value", "mode", "subset"],
                              [(res.value, res.mode, " ".join(map(str, res.subset)))]))
    return EXIT_OK


def cmd_spread(args):
    Z = load_pointset(args.input)
    rep = beta_spread(Z, args.beta, args.mode)
    if args.p_max is not None:
        rep = type(rep)(rep.beta, rep.rho_full, rep.v_lo, rep.v_hi, rep.mode, rep.best_subset,
                        {p: v for p, v in rep.eta_table.items() if p <= args.p_max})
    out = {"spread": rep}
    if args.d is not None:
        out["positivity"] = theorem_35_check(Z, args.d, args.beta,
                                             model=_model(args, Z, args.d))
    _emit(args, out, rep.eta_csv())
    return EXIT_OK


def cmd_verify(args):
    """Full chain on one set: span, bound, exact value, falsifier."""
    Z = load_pointset(args.input)
    rep = remez_span_bound(Z, args.d, _model(args, Z, args.d))
    est = exact_remez_span(Z, args.d, args.resolution, threads=args.threads)
    fr = falsify(Z, args.d, rep.factor, trials=args.trials, seed=args.seed,
                 resolution=args.resolution, raise_on_violation=False)
    ok = est.value <= rep.factor + SOUNDNESS_TOL and fr.violations == 0
    out = {"passed": ok, "bound": rep, "exact": est.value, "probe": est.probe, "falsify": fr}
    _emit(args, out, csv_rows(["passed", "exact", "factor", "falsify_max_ratio"],
                              [(ok, est.value, rep.factor, fr.max_ratio)]))
    return EXIT_OK if ok else EXIT_FAIL


# -- reproduce ------------------------------------------------------------------

def _ratio_row(Z, d, ref, lo, hi):
    w = omega_1d(Z, d).omega_lo
    ratio = w / ref
    return w, ref, ratio, lo <= ratio <= hi


def reproduce_example1():
    header = ["s", "d", "omega", "closed_form", "abs_err", "pass"]
    rows = []
    for d in (2, 3, 4):
        for s in range(5, 42):
            w = omega_1d(make_grid_1d(s), d).omega_lo
            ref = 2.0 * (s - d) / (s - 1) if s > d else 0.0
            err = abs(w - ref)
            ok = err <= 1e-10 if s > d else w == 0.0
            rows.append((s, d, w, ref, err, ok))
    return header, rows


def reproduce_example2():
    header = ["r", "d", "K", "omega", "asymptotic", "ratio", "pass"]
    rows = []
    for r in (1, 2):
        for d in range(2, 6):
            K = 8 * d * d
            ref = r ** r * (r + 1.0) ** (-r - 1) * d ** (-r)
            rows.append((r, d, K) + _ratio_row(make_power_set(r, K), d, ref, 0.5, 2.0))
    return header, rows


def reproduce_example3():
    header = ["q", "d", "K", "omega", "asymptotic", "ratio", "pass"]
    rows = []
    for q in (0.5, 0.8):
        for d in range(2, 5):
            K = 4 * d
            ref = q ** d / math.log(1.0 / q)
            rows.append((q, d, K) + _ratio_row(make_geometric_set(q, K), d, ref, 0.25, 4.0))
    return header, rows


def reproduce_thm25(threads=1):
    header = ["s", "d", "mu", "factor", "closed_form", "exact", "pass"]
    rows, d, prev = [], 3, math.inf
    for s in (11, 21, 41, 81):
        Z = make_grid_1d(s)
        mu = 2.0 * (s - d) / (s - 1)
        rep = remez_span_bound(Z, d)
        ref = chebyshev_eval(d, (4.0 - mu) / mu)
        exact = exact_remez_span(Z, d, 513, threads=threads).value
        ok = (abs(rep.factor - ref) <= 1e-9 * max(1.0, ref)
              and exact <= rep.factor + SOUNDNESS_TOL and 1.0 < rep.factor < prev)
        prev = rep.factor
        rows.append((s, d, mu, rep.factor, ref, exact, ok))
    return header, rows


def reproduce_thm26(threads=1):
    header = ["set", "d", "omega", "factor_box", "factor_unit", "exact", "favard",
              "favard_box", "unit_holds", "favard_holds", "pass"]
    rows = []
    cases = [("Z_1", lambda d: make_power_set(1, 8 * d * d)),
             ("Z_2", lambda d: make_power_set(2, 8 * d * d)),
             ("Z(0.5)", lambda d: make_geometric_set(0.5, 4 * d)),
             ("Z(0.8)", lambda d: make_geometric_set(0.8, 4 * d))]
    for name, make in cases:
        for d in (2, 3, 4):
            Z = make(d)
            box = remez_span_bound(Z, d, normalization="box")
            unit = remez_span_bound(Z, d, normalization="unit")
            exact = exact_remez_span(Z, d, 513, threads=threads).value
            fav = favard_bound(Z, d)
            # only the box-normalized factor and the box-scaled subset value are sound
            ok = exact <= box.factor + SOUNDNESS_TOL and exact <= fav.box_value + SOUNDNESS_TOL
            rows.append((name, d, box.omega_used, box.factor, unit.factor, exact, fav.value,
                         fav.box_value, exact <= unit.factor + SOUNDNESS_TOL,
                         exact <= fav.value + SOUNDNESS_TOL, ok))
    return header, rows


def reproduce_lemma21(threads=1):
    header = ["n", "s", "d", "product_bound", "exact", "pass"]
    n, s, d = 2, 11, 3
    bound = grid_product_bound(n, s, d)
    exact = exact_remez_span(make_grid_nd(n, s), d, threads=threads).value
    return header, [(n, s, d, bound, exact, exact <= bound + SOUNDNESS_TOL)]


def run_section(section, threads=1):
    fn = {"example1": reproduce_example1, "example2": reproduce_example2,
          "example3": reproduce_example3}.get(section)
    if fn is not None:
        return fn()
    return {"thm25": reproduce_thm25, "thm26": reproduce_thm26,
            "lemma21": reproduce_lemma21}[section](threads)


def cmd_reproduce(args):
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    sections = SECTIONS if args.section == "all" else (args.section,)
    summary, failures = {}, []
    for sec in sections:
        header, rows = run_section(sec, args.threads)
        path = out_dir / f"{sec}.csv"
        path.write_text(csv_rows(header, rows))
        bad = [dict(zip(header, r)) for r in rows if not r[-1]]
        summary[sec] = {"file": str(path), "rows": len(rows), "failed": len(bad)}
        failures += [{"section": sec, **b} for b in bad]
    _emit(args, {"sections": summary, "failures": failures},
          csv_rows(["section", "rows", "failed", "file"],
                   [(k, v["rows"], v["failed"], v["file"]) for k, v in summary.items()]))
    if failures:
        for f in failures:
            print(f"FAIL {f['section']}: " + ", ".join(f"{k}={v}" for k, v in f.items()
                                                       if k != "section"), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for the LP sweep")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     help="JSON output (default)")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     help="CSV output where a table form exists")
    common.add_argument("--constants-table", type=Path, default=None,
                        help="JSON map n -> [C'_0(n), ..., C'_{n-1}(n)] for n >= 3")
    common.set_defaults(format="json")

    p = argparse.ArgumentParser(prog="remezspan", parents=[common],
                                description="Metric d-span and Remez-type bounds for point sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    g = add("gen", cmd_gen, "write a canonical point set as JSON")
    g.add_argument("kind", choices=["grid1d", "grid", "power", "geometric"])
    g.add_argument("--s", type=int, help="grid size per axis")
    g.add_argument("--n", type=int, default=1, help="dimension (grid)")
    g.add_argument("--r", type=float, help="exponent for the power set")
    g.add_argument("--q", type=float, help="ratio for the geometric set")
    g.add_argument("--k", type=int, help="truncation length")
    g.add_argument("--out", type=Path, help="output file (default stdout)")

    c = add("covering", cmd_covering, "covering profile (1D) or certified bounds")
    c.add_argument("input", type=Path)
    c.add_argument("--eps", type=float, nargs="+", help="cube sides to evaluate")

    o = add("omega", cmd_omega, "metric d-span")
    o.add_argument("input", type=Path)
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--curve", type=Path, help="write eps vs eps^n (M - M_d) as CSV")

    b = add("bound", cmd_bound, "span -> lambda -> Chebyshev factor")
    b.add_argument("input", type=Path)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--normalization", choices=["box", "unit"], default="box")

    e = add("exact", cmd_exact, "exact Remez span by linear programming")
    e.add_argument("input", type=Path)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--resolution", type=int, default=None, help="probe nodes per axis")
    e.add_argument("--falsify", type=int, default=0, metavar="N",
                   help="also run N random trials against the span bound")

    f = add("favard", cmd_favard, "interpolation-subset upper estimate (1D)")
    f.add_argument("input", type=Path)
    f.add_argument("--d", type=int, required=True)
    f.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")

    s = add("spread", cmd_spread, "beta-spread, dispersion table, positivity check")
    s.add_argument("input", type=Path)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--p-max", type=int, default=None)
    s.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")
    s.add_argument("--d", type=int, default=None, help="also run the spread positivity test")

    v = add("verify", cmd_verify, "bound chain against the exact value and the falsifier")
    v.add_argument("input", type=Path)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--resolution", type=int, default=None)
    v.add_argument("--trials", type=int, default=10_000)

    r = add("reproduce", cmd_reproduce, "parameter sweeps with pass/fail tables")
    r.add_argument("--section", choices=SECTIONS + ("all",), required=True)
    r.add_argument("--out", type=Path, default=Path("reproduce_out"))
    return p


def _check_gen(parser, args):
    need = {"grid1d": ["s"], "grid": ["n", "s"], "power": ["r", "k"], "geometric": ["q", "k"]}
    missing = [f"--{k}" for k in need[args.kind] if getattr(args, k) is None]
    if missing:
        parser.error(f"gen {args.kind} requires {' '.join(missing)}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen":
        _check_gen(parser, args)
    np.seterr(over="ignore")
    try:
        return args.func(args)
    except IndefiniteSetError as exc:
        print(f"not applicable: {exc} (rank {exc.rank} of {exc.dim})", file=sys.stderr)
        return EXIT_NA
    except NotApplicableError as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return EXIT_NA
    except FalsificationFound as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
