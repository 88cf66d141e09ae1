"""Command-line interface.

Every report goes to stdout, or to ``--out`` (a figure with the same stem and
a .png suffix is written alongside). Settings come from ``--config`` key=value
files, with explicit flags taking precedence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InvalidInputError, LTorsionError, VerificationFailure

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        out = [Fraction(x.strip()) for x in str(text).split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected rationals like 1/4, got {text!r}") from None
    if any(q < 0 for q in out):
        raise argparse.ArgumentTypeError("exponents must be nonnegative")
    return out


def _positive(text: str) -> int:
    try:
        n = int(float(text)) if "e" in str(text).lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def read_config(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment line; keys use flag spelling."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = val
    return out


# ---- output helpers -----------------------------------------------------


def _csv_text(header: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([r.get(h, "") for h in header])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, float) or isinstance(x, str):
        return x
    if isinstance(x, int):
        # exact integers travel as decimal strings
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(args, header: list[str], rows: list[dict], payload=None, figure=None) -> None:
    if args.format == "json":
        text = _json_text(payload if payload is not None else rows)
    else:
        text = _csv_text(header, rows)
    if args.out:
        out = Path(args.out)
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text)
        except OSError as exc:
            raise LTorsionError(f"cannot write {out}: {exc}") from exc
        if figure is not None:
            from .plotting import figure_path

            figure(figure_path(out))
    else:
        sys.stdout.write(text)


def _store(args):
    if not args.cache:
        return None
    from .store import ClassGroupCache

    return ClassGroupCache(args.cache)


def _spec(args):
    from .moments import FamilySpec

    return FamilySpec(args.sign, args.kind)


# ---- subcommands --------------------------------------------------------


def cmd_classgroup(args) -> int:
    from .classgroup import class_group, fundamental_unit_norm

    D = args.D
    store = _store(args)
    kind = args.kind if D > 0 else "wide"
    g = store.get_or_compute(D, kind) if store else class_group(D, kind)
    row = {"D": g.D, "h": g.h, "divisors": ",".join(map(str, g.divisors)), "kind": g.kind}
    if D > 0:
        row["unit_norm"] = fundamental_unit_norm(D)
    for ell in args.ell:
        row[f"torsion_{ell}"] = g.torsion(ell)
    _emit(args, list(row), [row], row)
    return EXIT_OK


def _checkpoints(x_max: int) -> list[int]:
    pts = []
    c = 1000
    while c < x_max:
        pts.append(c)
        c *= 10
    pts.append(x_max)
    return pts


def cmd_sweep(args) -> int:
    from .moments import moment_sum

    spec = _spec(args)
    store = _store(args)
    rows = []
    for X in _checkpoints(args.x_max) if args.checkpoints else [args.x_max]:
        for ell in args.ell:
            for k in args.k:
                rows.append(moment_sum(spec, ell, k, X, threads=args.threads, store=store).as_row())
    rows = [dict(r, count=r["family_count"]) for r in rows]
    header = ["X", "count", "ell", "k", "moment_sum", "ratio"]

    def fig(path):
        from .plotting import moment_ratio_plot

        moment_ratio_plot(rows, path)

    _emit(args, header, rows, rows, fig)
    return EXIT_OK


def cmd_moments(args) -> int:
    from .moments import dyadic_bound_check

    spec = _spec(args)
    store = _store(args)
    rows = []
    failed = False
    for ell in args.ell:
        for k in args.k:
            for delta in args.delta:
                v = dyadic_bound_check(
                    spec, ell, k, delta, args.x_max, checkpoints=_checkpoints(args.x_max), threads=args.threads, store=store
                )
                failed |= not v.holds
                dens = v.detail["densities"]
                rows.append(
                    {
                        "X": args.x_max,
                        "ell": ell,
                        "k": k,
                        "delta": str(delta),
                        "exceptional": v.exceptional,
                        "blocks": len(v.detail["blocks"]),
                        "holds": v.holds,
                        "density": str(dens[args.x_max]),
                        "densities": {str(c): str(d) for c, d in dens.items()},
                    }
                )
    header = ["X", "ell", "k", "delta", "exceptional", "blocks", "holds", "density"]

    def fig(path):
        from .plotting import verdict_plot

        verdict_plot(rows, path)

    _emit(args, header, rows, rows, fig)
    if failed:
        raise VerificationFailure("a dyadic moment bound failed")
    return EXIT_OK


def cmd_density(args) -> int:
    from .heuristics import AbelianPGroup, cl_density_prediction
    from .moments import empirical_density, round6

    spec = _spec(args)
    store = _store(args)
    rows = []
    p = args.ell[0]
    G = AbelianPGroup(p, tuple(args.partition))
    pred = cl_density_prediction(G)
    emp = []
    for X in _checkpoints(args.x_max):
        q = empirical_density(spec, p, G, X, threads=args.threads, store=store)
        emp.append((X, float(q)))
        rows.append(
            {
                "X": X,
                "p": p,
                "partition": ".".join(map(str, G.partition)) or "trivial",
                "empirical": str(round6(q)),
                "lower": _dec(pred.lower, 15),
                "upper": _dec(pred.upper, 15),
            }
        )
    header = ["X", "p", "partition", "empirical", "lower", "upper"]

    def fig(path):
        from .plotting import density_plot

        density_plot(emp, float(pred.lower), float(pred.upper), path)

    _emit(args, header, rows, rows, fig)
    return EXIT_OK


def _dec(q: Fraction, places: int = 12) -> str:
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = places + 10
        return str((Decimal(q.numerator) / Decimal(q.denominator)).quantize(Decimal(10) ** -places))


def cmd_fk(args) -> int:
    from .moments import fk_moment

    spec = _spec(args)
    store = _store(args)
    rows = []
    for X in _checkpoints(args.x_max) if args.checkpoints else [args.x_max]:
        for k in args.k:
            r = fk_moment(spec, k, X, threads=args.threads, store=store).as_row()
            r["count"] = r["family_count"]
            rows.append(r)
    header = ["X", "count", "k", "moment_sum", "ratio"]
    _emit(args, header, rows, rows)
    return EXIT_OK


def _poly_text(a: int, b: int) -> str:
    text = "x^3"
    if a:
        text += f" {'+-'[a < 0]} {'' if abs(a) == 1 else abs(a)}x"
    if b:
        text += f" {'+-'[b < 0]} {abs(b)}"
    return text


def cmd_hasse(args) -> int:
    from .arith import fundamental_discriminants
    from .fieldcount import cubic_count_via_hasse, cubic_fields

    fields = cubic_fields(args.x_max)
    rows = []
    bad = 0
    for sign in (-1, 1):
        for D in fundamental_discriminants(3, args.x_max, sign):
            predicted = cubic_count_via_hasse(D)
            found = len(fields.get(D, []))
            if predicted or found:
                bad += predicted != found
                polys = " ".join(_poly_text(f.a, f.b) for f in fields.get(D, []))
                rows.append({"disc": D, "hasse": predicted, "oracle": found, "polys": polys})
    rows.sort(key=lambda r: (abs(r["disc"]), r["disc"]))
    _emit(args, ["disc", "hasse", "oracle", "polys"], rows, rows)
    if bad:
        raise VerificationFailure(f"{bad} discriminants disagree with the oracle")
    return EXIT_OK


def cmd_d4(args) -> int:
    from .fieldcount import d4_terms

    genus = d4_terms(args.D)
    exact = d4_terms(args.D, exact_class_number=True)
    rows = [{"D": args.D, "d": d, "genus_term": genus[d], "exact_term": exact[d]} for d in genus]
    total = {"D": args.D, "d": "total", "genus_term": sum(genus.values()), "exact_term": sum(exact.values())}
    _emit(args, ["D", "d", "genus_term", "exact_term"], rows + [total], {"terms": rows, "bound": total})
    return EXIT_OK


def cmd_malle(args) -> int:
    from .heuristics import ClassFunction, PermGroupSpec, generalized_malle_exponent, malle_exponent

    if not args.gens:
        raise UsageError("malle needs --gens")
    G = PermGroupSpec(args.degree, [g for g in args.gens.split(";") if g.strip()])
    row = {"degree": args.degree, "order": G.order, "a_G": str(malle_exponent(G))}
    if args.class_function:
        f = ClassFunction.from_file(args.class_function, G.order)
        row["a_G_f"] = str(generalized_malle_exponent(G, f))
    row["classes"] = " ".join(G.conjugacy_classes())
    _emit(args, list(row), [row], row)
    return EXIT_OK


def cmd_ec_census(args) -> int:
    from .elliptic import census

    table = census(args.q_max, args.height_bound, threads=args.threads)
    if args.format == "json":
        payload = {
            "H": table.H,
            "Q": table.Q,
            "lower_bound": True,
            "counts": table.counts(),
            "curves": {q: [list(c.curve.ainvs) for c in cs] for q, cs in table.curves.items()},
        }
        text = _json_text(payload)
    else:
        text = table.to_csv()
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
        from .plotting import census_plot, figure_path

        census_plot(table.counts(), figure_path(args.out))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ec_moments(args) -> int:
    from .elliptic import ec_moment_comparison

    reports = [
        ec_moment_comparison(args.q_max, k, H=args.height_bound, threads=args.threads, store=_store(args))
        for k in args.k
    ]
    rows = []
    for rep in reports:
        for c in rep["checkpoints"]:
            rows.append({"k": rep["k"], "Q": c["Q"], "ec_sum": c["ec_sum"], "cl3_sum": c["cl3_sum"]})

    def fig(path):
        from .plotting import loglog_plot

        pts = {}
        for rep in reports:
            pts[f"E' k={rep['k']}"] = [(c["Q"], float(c["ec_sum"])) for c in rep["checkpoints"]]
            pts[f"Cl[3] k={rep['k']}"] = [(c["Q"], float(c["cl3_sum"])) for c in rep["checkpoints"]]
        loglog_plot(pts, path, "Q", "moment sum")

    _emit(args, ["k", "Q", "ec_sum", "cl3_sum"], rows, reports if len(reports) > 1 else reports[0], fig)
    return EXIT_OK


def cmd_split_bound(args) -> int:
    from .arith import fundamental_discriminants
    from .torsionbounds import bound_report

    rng = random.Random(args.seed)
    lo = args.d_min
    hi = args.x_max
    if lo > hi:
        raise UsageError("--d-min must not exceed --x-max")
    pool = [-D for D in fundamental_discriminants(lo, hi, -1)]
    chosen = sorted(rng.sample(pool, min(args.samples, len(pool))))
    rows = []
    failed = False
    for D in chosen:
        for ell in args.ell:
            r = bound_report(D, ell)
            failed |= not r.holds
            rows.append(
                {"D": D, "ell": ell, "h": r.h, "M": r.M, "bound": r.bound, "torsion": r.torsion,
                 "norm_solutions": r.norm_solutions, "holds": r.holds}
            )
    header = ["D", "ell", "h", "M", "bound", "torsion", "norm_solutions", "holds"]

    def fig(path):
        from .plotting import bound_plot

        bound_plot(rows, path)

    _emit(args, header, rows, rows, fig)
    if failed:
        raise VerificationFailure("split-prime bound failed")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .checks import run_all

    results = run_all(args.scale, args.seed, args.threads)
    rows = [{"check": r.name, "status": "PASS" if r.ok else "FAIL", "detail": r.detail} for r in results]
    _emit(args, ["check", "status", "detail"], rows, rows)
    if not all(r.ok for r in results):
        raise VerificationFailure("invariant suite reported failures")
    return EXIT_OK


# ---- parser -------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    # parents share Action objects, so every subcommand needs its own copy
    p = _Parser(add_help=False)
    p.add_argument("--x-max", type=_positive, default=1000)
    p.add_argument("--sign", choices=["imaginary", "real", "negative", "positive"], default="imaginary")
    p.add_argument("--kind", choices=["wide", "narrow"], default="wide")
    p.add_argument("--ell", type=_int_list, default=[3])
    p.add_argument("--k", type=_int_list, default=[1])
    p.add_argument("--delta", type=_rational_list, default=[Fraction(0)])
    p.add_argument("--cache", default=None)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--height-bound", type=_positive, default=10**8)
    p.add_argument("--q-max", type=_positive, default=100)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltorsion", description="Class group torsion statistics and related checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classgroup", parents=[_common()], help="structure of one class group")
    p.add_argument("D", type=int)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("sweep", parents=[_common()], help="moment sums over a family")
    p.add_argument("--checkpoints", action="store_true", help="also report at 10^3, 10^4, ... below X")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("moments", parents=[_common()], help="dyadic exceptional-set bounds")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("density", parents=[_common()], help="Sylow p-subgroup densities vs prediction")
    p.add_argument("--partition", type=_int_list, default=[])
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("fk-moments", parents=[_common()], help="moments of 2^rk_2(2Cl)")
    p.add_argument("--checkpoints", action="store_true")
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("hasse-check", parents=[_common()], help="3-torsion vs brute-force cubic fields")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("d4-bound", parents=[_common()], help="explicit D4 quartic count bound")
    p.add_argument("D", type=_positive)
    p.set_defaults(func=cmd_d4)

    p = sub.add_parser("malle", parents=[_common()], help="Malle exponents of a permutation group")
    p.add_argument("--degree", type=_positive, default=3)
    p.add_argument("--gens", default=None, help="generators in cycle notation separated by ';'")
    p.add_argument("--class-function", default=None)
    p.set_defaults(func=cmd_malle)

    p = sub.add_parser("ec-census", parents=[_common()], help="elliptic curves by conductor in a height box")
    p.set_defaults(func=cmd_ec_census)

    p = sub.add_parser("ec-moments", parents=[_common()], help="census moments vs 3-torsion moments")
    p.set_defaults(func=cmd_ec_moments)

    p = sub.add_parser("split-bound", parents=[_common()], help="small split prime torsion bounds")
    p.add_argument("--d-min", type=_positive, default=3 * 10**5)
    p.add_argument("--samples", type=_positive, default=100)
    p.set_defaults(func=cmd_split_bound, x_max=10**6)

    p = sub.add_parser("verify", parents=[_common()], help="run the invariant suite")
    p.add_argument("--scale", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # re-parse with config values as defaults so explicit flags win
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, val in cfg.items():
            if key not in known or not known[key].option_strings:
                raise UsageError(f"unknown config key {key!r}")
            action = known[key]
            if action.type is not None:
                try:
                    val = action.type(val)
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise UsageError(f"config {key}: {exc}") from None
            if action.choices is not None and val not in action.choices:
                raise UsageError(f"config {key}: {val!r} not in {list(action.choices)}")
            defaults[key] = val
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LTorsionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
