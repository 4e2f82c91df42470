"""sifted-mobius command line.

Exit codes: 0 success, 1 a criterion (or cache) failure, 2 usage error.
Integers are written to JSON as strings so nothing is lost to 53-bit floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict

from . import acceptance, combinatorics, constants, exact_sums, hankel, orders, primesums, series_asym, sieve


def _int(text: str) -> int:
    """Integer that may be written as 1e6."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _int_list(text: str) -> list[int]:
    return [_int(t) for t in text.split(",") if t]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_schema(command: str) -> dict:
    """JSON schema shipped for a subcommand such as "sums mkw"."""
    from importlib.resources import files

    return json.loads(files(__package__).joinpath("schemas", command.replace(" ", "_") + ".json").read_text())


def _emit(args, command: str, result, rows: list[list] | None = None, text: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps({"command": command, "result": _jsonable(result)}, sort_keys=True, indent=1))
    elif args.format == "csv" and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(text if text is not None else json.dumps(_jsonable(result), sort_keys=True))


# ---------------------------------------------------------------------------
# handlers


def cmd_sums_mkw(args):
    residue = (args.m, args.l) if args.m is not None else None
    req = exact_sums.SumRequest(args.x, args.y, args.k, residue)
    val = exact_sums.mkw_exact(req)
    _emit(args, "sums mkw", {"x": args.x, "y": args.y, "k": args.k, "value": val}, [["x", "y", "k", "value"], [args.x, args.y, args.k, val]], str(val))


def cmd_sums_duality(args):
    bad = exact_sums.duality_scan(args.max_n, args.k, exact_sums.FIXTURE_FUNCTIONS)
    res = {"max_n": args.max_n, "k": args.k, "violations": len(bad), "examples": [list(b) for b in bad[:10]]}
    _emit(args, "sums duality", res, [["n", "k", "f", "relation"]] + [list(b) for b in bad], f"violations: {len(bad)}")


def cmd_sums_residue(args):
    rows = [["x", "partial_sum"]]
    out = []
    for x in args.x_grid:
        v = exact_sums.residue_series_partial(args.m, args.l, x, args.k)
        out.append({"x": x, "partial_sum": v})
        rows.append([x, repr(v)])
    target = (-1) ** args.k / _totient(args.m)
    _emit(args, "sums residue", {"m": args.m, "l": args.l, "k": args.k, "target": target, "rows": out}, rows,
          "\n".join(f"{r[0]}\t{r[1]}" for r in rows[1:]))


def _totient(m: int) -> int:
    return sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)


def cmd_sums_ratio(args):
    v = exact_sums.upper_bound_ratio(args.x, args.y, args.k)
    _emit(args, "sums ratio", {"x": args.x, "y": args.y, "k": args.k, "ratio": v}, [["x", "y", "k", "ratio"], [args.x, args.y, args.k, repr(v)]], repr(v))


def cmd_primesums_profile(args):
    prof = primesums.profile(args.y, args.max_n, args.max_i)
    d = asdict(prof)
    rows = [["quantity", "index", "value", "radius"]]
    for j, (v, r) in enumerate(zip(prof.cont, prof.tail_bounds)):
        rows.append(["cont", j, repr(v), repr(r)])
    for i, row in enumerate(prof.g_derivs):
        for n, v in enumerate(row):
            rows.append([f"G_{i}", n, repr(v), repr(prof.g_radii[i][n])])
    _emit(args, "primesums profile", d, rows)


def cmd_primesums_fit(args):
    import numpy as np

    ys = np.logspace(np.log10(args.y_min), np.log10(args.y_max), args.points)
    vals = primesums.mertens_sum_grid(args.kind, args.power, ys)
    fit = primesums.asymptotic_fit(ys, vals, args.degree if args.degree is not None else args.power)
    res = {"columns": [list(c) for c in fit.columns], "coeffs": fit.coeffs, "ys": fit.ys, "residuals": fit.residuals}
    rows = [["y", "value", "residual"]] + [[repr(float(a)), repr(float(b)), repr(float(c))] for a, b, c in zip(ys, vals, fit.residuals)]
    _emit(args, "primesums fit", res, rows)


def cmd_primesums_cont(args):
    c = primesums.continuation_value(args.j, args.y, args.tail_cut, args.tol)
    _emit(args, "primesums cont", {"j": args.j, "y": args.y, "value": c.value, "radius": c.radius},
          [["j", "y", "value", "radius"], [args.j, args.y, repr(c.value), repr(c.radius)]], f"{c.value!r} +/- {c.radius:.3e}")


def cmd_constants_dump(args):
    rows = [["m", "N", "closed_form", "finite_diff", "contour", "abs_fd", "abs_contour"]]
    out = []
    spec = hankel.HankelContourSpec(cutoff=args.cutoff)
    for m in range(args.max_m + 1):
        for N in range(args.max_n + 1):
            c = constants.gamma_mn_closed(m, N)
            f = constants.gamma_mn_oracle(m, N)
            h = hankel.hankel_integral(m, N, spec)
            out.append({"m": m, "N": N, "closed_form": c, "finite_diff": f, "contour": h, "abs_fd": abs(c - f), "abs_contour": abs(c - h)})
            rows.append([m, N, repr(c), repr(f), repr(h), f"{abs(c - f):.3e}", f"{abs(c - h):.3e}"])
    text = "\n".join(f"Gamma_{{{r[0]},{r[1]}}} = {float(r[2]) + 0.0:.12g}  (fd {float(r[3]):.12g}, contour {float(r[4]):.12g})" for r in rows[1:])
    _emit(args, "constants dump", out, rows, text)


def cmd_constants_analytic(args):
    a = constants.analytic_constants(args.max_order)
    _emit(args, "constants analytic", asdict(a))


def cmd_hankel_eval(args):
    spec = hankel.HankelContourSpec(cutoff=args.cutoff)
    v = hankel.hankel_integral(args.m, args.n, spec, args.branch)
    ref = constants.gamma_mn_closed(args.m, args.n)
    _emit(args, "hankel eval", {"m": args.m, "N": args.n, "cutoff": args.cutoff, "value": v, "closed_form": ref},
          [["m", "N", "cutoff", "value", "closed_form"], [args.m, args.n, args.cutoff, repr(v), repr(ref)]], repr(v))


def cmd_hankel_decay(args):
    rows = hankel.truncation_decay_scan(args.m, args.n, args.cutoffs)
    _emit(args, "hankel decay", [{"cutoff": a, "value": b, "abs_error": c} for a, b, c in rows],
          [["cutoff", "value", "abs_error"]] + [[repr(a), repr(b), repr(c)] for a, b, c in rows])


def cmd_asym_phi(args):
    t = series_asym.phi_table(args.y, args.k, args.n)
    rows = [["i", "j", "phi", "radius"]]
    for i in range(t.values.shape[0]):
        for j in range(t.values.shape[1]):
            rows.append([i, j, repr(float(t.values[i, j])), repr(float(t.radii[i, j]))])
    _emit(args, "asym phi", {"y": args.y, "k": args.k, "values": t.values, "radii": t.radii}, rows)


def cmd_asym_compare(args):
    w = series_asym.Window(args.y0, args.power, args.epsilon)
    rows = series_asym.compare(args.x_grid, args.y, args.k, args.n, w)
    _emit(args, "asym compare", [asdict(r) for r in rows],
          [["x", "exact", "main", "normalized_residual"]] + [[r.x, r.exact, repr(r.main), repr(r.normalized_residual)] for r in rows])


def cmd_orders_cmp(args):
    rep = orders.compare_report(args.f, args.g)
    text = f"f <_forall g: {str(rep['lt_forall']).lower()}\nf <_exists g: {str(rep['lt_exists']).lower()}"
    _emit(args, "orders cmp", {"f": args.f, "g": args.g, **rep},
          [["f", "g", "lt_forall", "lt_exists"], [args.f, args.g, rep["lt_forall"], rep["lt_exists"]]], text)


def cmd_comb_dump(args):
    text = combinatorics.dump_csv(args.max_n)
    if args.format == "json":
        rows = list(csv.reader(io.StringIO(text)))[1:]
        _emit(args, "comb dump", [{"table": r[0], "n": r[1], "k": r[2], "value": r[3]} for r in rows])
    else:
        sys.stdout.write(text)


def cmd_acceptance(args):
    cfg = acceptance.RunConfig(cache_dir=args.cache_dir, sieve_ceiling=args.ceiling, seed=args.seed, check_runtime=not args.no_runtime)
    report = acceptance.run_acceptance(cfg, args.criteria, determinism=not args.no_determinism)
    if args.format == "json":
        print(json.dumps({"command": "acceptance", "result": _jsonable(report)}, sort_keys=True, indent=1))
    else:
        print("\n".join(acceptance.report_lines(report)))
    return report["exit_code"]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default=argparse.SUPPRESS)
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv", default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help="sieve cache directory (default: $ADL_CACHE_DIR)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized fixture selection")

    p = argparse.ArgumentParser(prog="sifted-mobius", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="group", required=True)

    def group(name, help):
        g = sub.add_parser(name, help=help).add_subparsers(dest="action", required=True)
        return g

    def action(g, name, fn, help=""):
        a = g.add_parser(name, help=help, parents=[common])
        a.set_defaults(fn=fn)
        return a

    s = group("sums", "exact sifted sums")
    a = action(s, "mkw", cmd_sums_mkw, "M_{k,omega}(x, y)")
    a.add_argument("--x", type=_int, required=True)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--m", type=int)
    a.add_argument("--l", type=int)
    a = action(s, "duality", cmd_sums_duality, "scan both duality relations")
    a.add_argument("--max-n", type=_int, default=10**5)
    a.add_argument("--k", type=_int_list, default=[1, 2, 3])
    a = action(s, "residue", cmd_sums_residue, "residue-class reciprocal series")
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--x-grid", type=_int_list, required=True)
    a = action(s, "ratio", cmd_sums_ratio, "upper-bound ratio")
    a.add_argument("--x", type=_int, required=True)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--k", type=int, required=True)

    s = group("primesums", "prime sums at s=1")
    a = action(s, "profile", cmd_primesums_profile)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--max-n", type=int, default=4)
    a.add_argument("--max-i", type=int, default=2)
    a = action(s, "fit", cmd_primesums_fit)
    a.add_argument("--kind", choices=["M", "Q"], default="M")
    a.add_argument("--power", type=int, default=1)
    a.add_argument("--degree", type=int)
    a.add_argument("--y-min", type=float, default=1e3)
    a.add_argument("--y-max", type=float, default=1e7)
    a.add_argument("--points", type=int, default=41)
    a = action(s, "cont", cmd_primesums_cont)
    a.add_argument("--j", type=int, required=True)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--tail-cut", type=float)
    a.add_argument("--tol", type=float)

    s = group("constants", "analytic constants")
    a = action(s, "dump", cmd_constants_dump, "Gamma_{m,N} by three methods")
    a.add_argument("--max-m", type=int, default=4)
    a.add_argument("--max-n", type=int, default=5)
    a.add_argument("--cutoff", type=float, default=40.0)
    a = action(s, "analytic", cmd_constants_analytic, "zeta values and Stieltjes constants")
    a.add_argument("--max-order", type=int, default=8)

    s = group("hankel", "contour quadrature")
    a = action(s, "eval", cmd_hankel_eval)
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--cutoff", type=float, default=40.0)
    a.add_argument("--branch", choices=["principal", "modulus"], default="principal")
    a = action(s, "decay", cmd_hankel_decay)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--n", type=int, default=1)
    a.add_argument("--cutoffs", type=_float_list, default=[10.0, 20.0, 30.0, 40.0])

    s = group("asym", "series expansion and main term")
    a = action(s, "phi", cmd_asym_phi)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--n", type=int, default=3)
    a = action(s, "compare", cmd_asym_compare)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--y", type=float, required=True)
    a.add_argument("--n", type=int, default=1)
    a.add_argument("--x-grid", type=_int_list, required=True)
    a.add_argument("--y0", type=float, default=1.0)
    a.add_argument("--power", type=float, default=1.0)
    a.add_argument("--epsilon", type=float, default=0.5)

    s = group("orders", "growth-order calculus")
    a = action(s, "cmp", cmd_orders_cmp)
    a.add_argument("--f", required=True)
    a.add_argument("--g", required=True)

    s = group("comb", "exact combinatorics")
    a = action(s, "dump", cmd_comb_dump)
    a.add_argument("--max-n", type=int, default=10)

    a = sub.add_parser("acceptance", help="run the acceptance suite", parents=[common])
    a.set_defaults(fn=cmd_acceptance)
    a.add_argument("--ceiling", type=_int, default=10**8)
    a.add_argument("--criteria", type=_int_list)
    a.add_argument("--no-determinism", action="store_true")
    a.add_argument("--no-runtime", action="store_true", help="do not fail criteria on runtime budgets")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format = getattr(args, "format", "text")
    args.seed = getattr(args, "seed", 0)
    args.cache_dir = getattr(args, "cache_dir", None) or os.environ.get("ADL_CACHE_DIR")
    if args.cache_dir:
        sieve.set_cache_dir(args.cache_dir)
    try:
        rc = args.fn(args)
    except sieve.CacheError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    finally:
        sieve.set_cache_dir(None)
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
