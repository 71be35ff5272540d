"""Command-line driver.

Exit codes: 0 success, 1 configuration error, 2 a checked inequality failed,
3 a search budget ran out (partial results are still written, flagged).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .affine import halfspace_union_shatter_search, union_certificate, union_shatters
from .bounds import BoundParams, bound_report, report_csv
from .compose import FULL, SAMPLED, MaxSpec, k_fold_max
from .core import PartialClass, SampledClass, SchemaError, class_to_dict, load_class, load_measure
from .covering import INF, MetricSpec, covering_number, maurey_cover, maurey_size_bound, net_coverage, sample_absconv
from .dims import BudgetExceeded, faat_dim, fat_dim, vc_dim_partial
from .disambig import (disambiguation_vc, greedy_disambiguation, min_vc_disambiguation_exact,
                       singleton_disambiguation, size_check)
from .generators import GENERATOR_VERSION, cube_class, random_grid_class
from .suites import SUITES, run_suite

OK, CONFIG_ERROR, VIOLATION, BUDGET = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _p_value(s):
    if s.lower() in ("inf", "infinity"):
        return INF
    v = float(s)
    if v < 1:
        raise argparse.ArgumentTypeError("p must be >= 1 or inf")
    return v


# -- inputs ------------------------------------------------------------------

def _generate(spec: str, seed):
    """``cube:N`` or ``grid:ROWSxPOINTS`` (random integers in [-3, 3], needs --seed)."""
    kind, _, arg = spec.partition(":")
    if kind == "cube":
        return cube_class(int(arg))
    if kind == "grid":
        if seed is None:
            raise ConfigError("random generators need --seed")
        rows, _, pts = arg.partition("x")
        rng = np.random.default_rng(seed)
        F = random_grid_class(rng, int(rows), int(pts), min_rows=int(rows), min_points=int(pts))
        return F.with_values(F.values, seed=seed)
    raise ConfigError(f"unknown generator {spec!r}")


def _load_input(args, partial=None):
    if getattr(args, "generate", None):
        if args.input:
            raise ConfigError("give either --input or --generate")
        return _generate(args.generate, args.seed)
    if not args.input:
        raise ConfigError("--input (or --generate) is required")
    path = args.input if isinstance(args.input, str) else args.input[0]
    return load_class(path, partial=partial)


# -- outputs -----------------------------------------------------------------

def _header(args) -> dict:
    return {"command": args.command, "seed": args.seed, "generator_version": GENERATOR_VERSION,
            "version": __version__}


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def _csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, payload: dict, table=None):
    """Write JSON (or CSV when a table is available and requested) to --out or stdout."""
    if args.format == "csv":
        if table is None:
            raise ConfigError(f"{args.command} has no CSV form")
        text = table if isinstance(table, str) else _csv(*table)
        text = f"# seed={args.seed} generator_version={GENERATOR_VERSION}\n" + text
    else:
        text = json.dumps(_jsonable({**_header(args), **payload}), indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dim_entry(r, gamma) -> dict:
    return {"gamma": gamma, "dimension": r.dimension, "exact": r.exact,
            "budget_exceeded": r.budget_exceeded,
            "certificate": r.certificate.to_dict() if r.certificate else None,
            "subsets_examined": r.stats.subsets_examined, "nodes": r.stats.nodes}


# -- subcommands -------------------------------------------------------------

def cmd_dim(args) -> int:
    F = _load_input(args, partial=False)
    fn = fat_dim if args.command == "fat" else faat_dim
    entries = [_dim_entry(fn(F, g, args.max_subset, args.budget_nodes), g) for g in args.gamma]
    _emit(args, {"results": entries},
          (["gamma", "dimension", "exact", "budget_exceeded"],
           [[f"{e['gamma']:g}", e["dimension"], int(e["exact"]), int(e["budget_exceeded"])] for e in entries]))
    return BUDGET if any(e["budget_exceeded"] for e in entries) else OK


def cmd_vc(args) -> int:
    P = _load_input(args, partial=True)
    r = vc_dim_partial(P, args.max_subset, args.budget_nodes)
    e = _dim_entry(r, None)
    del e["gamma"]
    _emit(args, e, (["dimension", "exact", "budget_exceeded"],
                    [[r.dimension, int(r.exact), int(r.budget_exceeded)]]))
    return BUDGET if r.budget_exceeded else OK


def cmd_cover(args) -> int:
    F = _load_input(args, partial=False)
    rows = []
    status = OK
    for p in args.p:
        measure = load_measure(args.measure, F.n_points) if args.measure else None
        m = MetricSpec(p, measure)
        for t in args.t:
            try:
                rep = covering_number(F, m, t, args.method, max_rows=args.max_rows,
                                      budget_nodes=args.budget_nodes)
                rows.append(rep.to_dict() | {"budget_exceeded": False})
            except BudgetExceeded as exc:
                greedy = covering_number(F, m, t, "greedy")
                rows.append(greedy.to_dict() | {"budget_exceeded": True, "note": str(exc)})
                status = BUDGET
    _emit(args, {"covers": rows},
          (["p", "t", "size", "exact", "budget_exceeded"],
           [[r["metric"]["p"], f"{r['radius']:g}", r["size"], int(r["exact"]), int(r["budget_exceeded"])]
            for r in rows]))
    return status


def cmd_max(args) -> int:
    if args.generate:
        raise ConfigError("max takes --input files")
    if not args.input:
        raise ConfigError("--input is required")
    classes = [load_class(p, partial=False) for p in args.input]
    if len(classes) == 1 and args.k:
        classes = classes * args.k
    elif args.k and args.k != len(classes):
        raise ConfigError(f"--k {args.k} does not match {len(classes)} input classes")
    if args.count is not None:
        if args.seed is None:
            raise ConfigError("sampled max needs --seed")
        spec = MaxSpec(SAMPLED, count=args.count, seed=args.seed)
    else:
        spec = MaxSpec(FULL)
    G = k_fold_max(classes, spec)
    payload = {"spec": spec.to_dict(), "class": class_to_dict(G)}
    status = OK
    if args.gamma:
        payload["fat"] = []
        for g in args.gamma:
            r = fat_dim(G, g, args.max_subset, args.budget_nodes)
            comps = [fat_dim(F, g, args.max_subset, args.budget_nodes) for F in classes]
            payload["fat"].append({"gamma": g, "fat_max": _dim_entry(r, g),
                                   "components": [c.dimension for c in comps]})
            if r.budget_exceeded or any(c.budget_exceeded for c in comps):
                status = BUDGET
    _emit(args, payload)
    return status


def cmd_disambiguate(args) -> int:
    P = _load_input(args, partial=True)
    if not isinstance(P, PartialClass):
        raise ConfigError("disambiguate needs a partial class")
    if args.method == "exact":
        D, vc = min_vc_disambiguation_exact(P, budget_nodes=args.budget_nodes or 2_000_000)
    elif args.method == "greedy":
        D = greedy_disambiguation(P)
        vc = disambiguation_vc(D)
    else:
        D = singleton_disambiguation(P)
        vc = disambiguation_vc(D)
    payload = {"method": args.method, "disambiguation": D.to_dict(), "vc": vc, "size": D.size,
               "vc_partial": vc_dim_partial(P).dimension}
    if args.method == "exact" and payload["vc_partial"] >= 1 and P.n_points > 1:
        sc = size_check(P, D)
        payload["size_check"] = {"size": sc.size, "bound": sc.bound, "holds": sc.holds}
        _emit(args, payload)
        return OK if sc.holds else VIOLATION
    _emit(args, payload)
    return OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    seed = 0 if args.seed is None else args.seed
    results = []
    for name in names:
        r = run_suite(name, seed)
        print(r.line(), file=sys.stderr)
        results.append(r)
    payload = {"suites": [{"name": r.name, "checks": r.checks, "violations": r.violations,
                           "ok": r.ok, "details": r.details, "failures": [repr(f) for f in r.failures]}
                          for r in results]}
    _emit(args, payload, (["suite", "checks", "violations", "ok"],
                          [[r.name, r.checks, r.violations, int(r.ok)] for r in results]))
    return OK if all(r.ok for r in results) else VIOLATION


def cmd_probe(args) -> int:
    if args.seed is None:
        raise ConfigError("probe-conjecture needs --seed")
    rng = np.random.default_rng(args.seed)
    gamma = args.gamma[0] if args.gamma else 1.0
    instances, R_lists = [], []
    status = OK
    for i in range(args.trials):
        m = int(rng.integers(2, 5))
        comps = [SampledClass(rng.integers(-2, 3, size=(int(rng.integers(1, 4)), m)).astype(float))
                 for _ in range(args.k)]
        G = k_fold_max(comps, MaxSpec())
        r = fat_dim(G, gamma, budget_nodes=args.budget_nodes)
        cr = [fat_dim(F, gamma, budget_nodes=args.budget_nodes) for F in comps]
        if r.budget_exceeded or any(c.budget_exceeded for c in cr):
            status = BUDGET
        instances.append((f"{args.seed}-{i}", r, cr))
    ids = ("THM1", "THM3")
    R = 2.0
    rows = bound_report(instances, BoundParams(gamma=gamma, R=R, c=args.c), ids, probe_c=args.c)
    if args.format == "json":
        _emit(args, {"gamma": gamma, "k": args.k, "trials": args.trials,
                     "rows": [{"instance_id": r.instance_id, "fat_max": r.fat_max,
                               "fat_components": r.fat_components, "rhs": r.rhs, "slack": r.slack,
                               "probe": r.probe, "exact": r.exact} for r in rows]})
    else:
        _emit(args, {}, report_csv(rows, ids))
    return status


def cmd_lower_bound(args) -> int:
    if args.d is None or args.k is None:
        raise ConfigError("lower-bound-search needs --d and --k")
    res = halfspace_union_shatter_search(args.d, args.k, m_max=args.m_max,
                                         budget=args.budget_nodes or 200_000,
                                         seed=0 if args.seed is None else args.seed)
    payload = {"d": args.d, "k": args.k, "size": res.size, "pool": res.pool,
               "points": res.points.tolist(), "lp_calls": res.lp_calls,
               "budget_exceeded": res.exhausted_budget, "lower_bound_only": True}
    if res.size:
        W = union_shatters(res.points, args.k)
        _, cert = union_certificate(res.points, W, args.k, args.gamma[0] if args.gamma else 1.0)
        payload["certificate"] = cert.to_dict()
    _emit(args, payload, (["d", "k", "size", "budget_exceeded"],
                          [[args.d, args.k, res.size, int(res.exhausted_budget)]]))
    return BUDGET if res.exhausted_budget else OK


def cmd_maurey(args) -> int:
    if args.input:
        X = np.asarray(json.loads(Path(args.input).read_text())["vectors"], dtype=float)
    elif args.d:
        X = np.eye(args.d)
    else:
        raise ConfigError("maurey needs --input vectors or --d")
    seed = 0 if args.seed is None else args.seed
    rows = []
    status = OK
    for t in args.t:
        net = maurey_cover(X, args.r, t)
        bound = maurey_size_bound(X.shape[0], args.r, t, args.c)
        dist = net_coverage(net, sample_absconv(X, args.targets, seed, args.r))
        holds = bool(dist.max() <= t) and net.size <= bound
        if not holds:
            status = VIOLATION
        rows.append({"t": t, "terms": net.terms, "size": net.size, "bound": bound,
                     "max_distance": float(dist.max()), "holds": holds})
    _emit(args, {"r": args.r, "m": X.shape[0], "c": args.c, "nets": rows},
          (["t", "terms", "size", "bound", "max_distance", "holds"],
           [[f"{r['t']:g}", r["terms"], r["size"], f"{r['bound']:.6g}", f"{r['max_distance']:.6g}",
             int(r["holds"])] for r in rows]))
    return status


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--budget-nodes", type=_positive_int)
    common.add_argument("--max-subset", type=_positive_int)

    p = _Parser(prog="fatmax", description="Fat-shattering dimensions and covering numbers of finite classes.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(sp, many=False):
        sp.add_argument("--input", nargs="+" if many else None)
        sp.add_argument("--generate", help="cube:N or grid:ROWSxPOINTS")

    for name in ("fat", "faat"):
        sp = sub.add_parser(name, parents=[common], help=f"{name} dimension at each --gamma")
        with_input(sp)
        sp.add_argument("--gamma", type=_positive_float, nargs="+", required=True)
        sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("vc", parents=[common], help="VC dimension of a (partial) 0/1 class")
    with_input(sp)
    sp.set_defaults(func=cmd_vc)

    sp = sub.add_parser("cover", parents=[common], help="proper L_p covering numbers")
    with_input(sp)
    sp.add_argument("--p", type=_p_value, nargs="+", default=[INF])
    sp.add_argument("--t", type=float, nargs="+", required=True)
    sp.add_argument("--measure")
    sp.add_argument("--method", choices=("exact", "greedy"), default="exact")
    sp.add_argument("--max-rows", type=_positive_int, default=20)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("max", parents=[common], help="k-fold pointwise max of classes")
    with_input(sp, many=True)
    sp.add_argument("--k", type=_positive_int)
    sp.add_argument("--count", type=_positive_int, help="sample this many tuples instead of all")
    sp.add_argument("--gamma", type=_positive_float, nargs="+")
    sp.set_defaults(func=cmd_max)

    sp = sub.add_parser("disambiguate", parents=[common], help="total class disambiguating a partial class")
    with_input(sp)
    sp.add_argument("--method", choices=("exact", "greedy", "singleton"), default="exact")
    sp.set_defaults(func=cmd_disambiguate)

    sp = sub.add_parser("verify", parents=[common], help="run the verification suites")
    sp.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("probe-conjecture", parents=[common], help="slack table for random k-fold maxima")
    sp.add_argument("--k", type=_positive_int, default=2)
    sp.add_argument("--trials", type=_positive_int, default=20)
    sp.add_argument("--gamma", type=_positive_float, nargs="+")
    sp.add_argument("--c", type=_positive_float, default=1.0)
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("lower-bound-search", parents=[common], help="point sets shattered by unions of halfspaces")
    sp.add_argument("--d", type=_positive_int)
    sp.add_argument("--k", type=_positive_int)
    sp.add_argument("--m-max", type=_positive_int, default=8)
    sp.add_argument("--gamma", type=_positive_float, nargs="+")
    sp.set_defaults(func=cmd_lower_bound)

    sp = sub.add_parser("maurey", parents=[common], help="Maurey net of an absolutely convex hull")
    sp.add_argument("--input", help="JSON file with a 'vectors' matrix")
    sp.add_argument("--d", type=_positive_int, help="use the standard basis of R^d")
    sp.add_argument("--r", type=_positive_float, default=1.0)
    sp.add_argument("--t", type=_positive_float, nargs="+", default=[1.0])
    sp.add_argument("--c", type=_positive_float, default=3.0)
    sp.add_argument("--targets", type=_positive_int, default=1000)
    sp.set_defaults(func=cmd_maurey)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = "csv" if args.command == "probe-conjecture" else "json"
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (SchemaError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
