"""Command-line front end: ``nambu-lab <command> [options]``.

Exit codes: 0 when every check passes, 1 when a mathematical violation is
found, 2 for usage or input errors.  Reports are deterministic for a fixed
seed; they carry no timings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .cohomology import (
    Cochain,
    FiniteTruncation,
    SystemTooLarge,
    Window,
    WindowError,
    windowed_spaces,
)
from .ext_def import (
    DeformationSeries,
    build_extension,
    check_deformation,
    cocycle_of_extension,
    extension_equivalent,
    extension_nambu,
)
from .fundamental_complex import AdjointRep, TrivialRep, check_leibniz, check_representation, wedge_normalize
from .superalgebra import LinearMap, TableAlgebra, bracket_gens, check_derivation, check_nambu, check_skew
from .w_infinity import (
    ADJOINT,
    TRIVIAL,
    W,
    WGen,
    WTruncation,
    derivation_samples,
    second_cohomology,
    solve_derivations,
    trivialize_adjoint_2cocycle,
    trivialize_trivial_2cocycle,
    z1_versus_derivations,
)

W_NAME = "w-infinity-3"


class UsageError(Exception):
    pass


# -- inputs ------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_algebra(source: str):
    if source == W_NAME:
        return W
    data = _load_json(source)
    try:
        return TableAlgebra.from_json(data, name=os.path.basename(source))
    except ValueError as exc:
        raise UsageError(f"{source}: {exc}") from exc


def parse_pair(text: str, what: str) -> tuple:
    try:
        a, b = (int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{what} must be 's,t', got {text!r}") from exc
    return a, b


def parse_window(text: str) -> Window:
    try:
        return Window.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_parity(text: str) -> int:
    vals = {"even": 0, "0": 0, "odd": 1, "1": 1}
    if text not in vals:
        raise UsageError(f"parity must be even or odd, got {text!r}")
    return vals[text]


def parse_generator(alg, text: str):
    """``{"family":"L","m":-1,"i":2}``, ``L:-1:2`` or a table label."""
    try:
        if text.lstrip().startswith("{"):
            return alg.gen_from_json(json.loads(text))
        if alg is W:
            fam, m, i = text.split(":")
            return WGen.from_json({"family": fam, "m": m, "i": i})
        return alg.gen_from_json(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad generator {text!r}: {exc}") from exc


def threads() -> int:
    raw = os.environ.get("NAMBU_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"NAMBU_LAB_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise UsageError("NAMBU_LAB_THREADS must be at least 1")
    return n


def load_cochain(path: str, rep) -> Cochain:
    data = _load_json(path)
    try:
        return Cochain.from_json(data, rep)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


# -- output ------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "label"):
        return x.label
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return repr(x)


def _flatten(prefix, x, out):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
        for j, v in enumerate(x):
            _flatten(f"{prefix}[{j}]", v, out)
    else:
        out.append((prefix, x if not isinstance(x, list) else " ".join(map(str, x))))


def render(report: dict, fmt: str) -> str:
    data = _jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    rows: list = []
    _flatten("", data, rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def _report_summary(r) -> dict:
    out = r.summary()
    if r.violations:
        out["first_violation"] = r.violations[0]
    return out


# -- sampling ------------------------------------------------------------------------

def _gens(alg, rng, k, box=None):
    if box is not None and alg is W:
        return [W.sample_generator(rng, *box) for _ in range(k)]
    return [alg.sample_generator(rng) for _ in range(k)]


def _wedge(alg, rng, box=None):
    for _ in range(100):
        x = tuple(_gens(alg, rng, alg.arity - 1, box))
        if wedge_normalize(alg, x) is not None:
            return x
    return tuple(_gens(alg, rng, alg.arity - 1, box))


def _box(args):
    M, I = parse_pair(args.sample_window, "--sample-window")
    if M < 0 or I < 0:
        raise UsageError("--sample-window bounds must be non-negative")
    return M, I


# -- commands ------------------------------------------------------------------------

def cmd_verify(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    rng = random.Random(args.seed)
    n = alg.arity
    N = args.samples
    triples = [tuple(_gens(alg, rng, n)) for _ in range(N)]
    nambu = [(tuple(_gens(alg, rng, n - 1)), tuple(_gens(alg, rng, n))) for _ in range(N)]
    leib = [(_wedge(alg, rng), _wedge(alg, rng), _wedge(alg, rng)) for _ in range(max(1, N // 10))]
    rep = AdjointRep(alg)
    reps = [(tuple(_gens(alg, rng, n)), tuple(_gens(alg, rng, n - 2)), rep.sample_module_generator(rng), tuple(_gens(alg, rng, n - 1))) for _ in range(max(1, N // 10))]
    checks = [check_skew(alg, triples), check_nambu(alg, nambu), check_leibniz(alg, leib), check_representation(rep, reps)]
    report = {"command": "verify", "algebra": alg.name, "seed": args.seed, "checks": [_report_summary(c) for c in checks]}
    return report, 0 if all(c.ok for c in checks) else 1


def cmd_bracket(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    if len(args.generators) != alg.arity:
        raise UsageError(f"bracket needs {alg.arity} generators")
    gens = [parse_generator(alg, g) for g in args.generators]
    val = bracket_gens(alg, gens)
    terms = [{"generator": alg.gen_to_json(g), "coefficient": Fraction(c)} for g, c in sorted(val.items(), key=lambda kv: alg.key(kv[0])) if c]
    return {"command": "bracket", "arguments": [alg.gen_to_json(g) for g in gens], "value": terms}, 0


def cmd_derivations(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    if alg is not W:
        raise UsageError("derivations is implemented for w-infinity-3; use cohomology --k 1 for table algebras")
    parity = parse_parity(args.parity)
    s, t = parse_pair(args.degree, "--degree")
    window = parse_window(args.window)
    try:
        sol = solve_derivations(parity, s, t, window, probe=parse_pair(args.probe, "--probe"), patterns=args.patterns)
    except WindowError as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    samples = derivation_samples(args.samples, args.seed)
    checks = [check_derivation(D, alg, samples) for D in sol.claimed]
    report = {
        "command": "derivations",
        **sol.summary(),
        "basis": [b.name for b in sol.basis],
        "claimed": [{"name": D.name, "derivation_check": _report_summary(c)} for D, c in zip(sol.claimed, checks)],
        "matches_claimed": sol.claimed_spans and sol.dimension == len(sol.claimed),
    }
    ok = report["matches_claimed"] and all(c.ok for c in checks) and all(sol.claimed_solves)
    return report, 0 if ok else 1


def _cocycle_report(args, rep, s, t, window) -> tuple[dict, int]:
    f = load_cochain(args.cocycle, rep)
    if f.k != 1:
        raise UsageError("--cocycle must hold a cochain with one wedge slot (k=1)")
    if rep.trivial:
        tr = trivialize_trivial_2cocycle(f, window, bidegree=(s, t))
    else:
        tr = trivialize_adjoint_2cocycle(f, s, window, t=t)
    return {"command": "cohomology", "cocycle": args.cocycle, "trivialization": tr.summary()}, 0 if tr.ok else 1


def cmd_cohomology(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    coeffs = args.coeffs
    if coeffs not in ("trivial", "adjoint"):
        raise UsageError("--coeffs must be trivial or adjoint")
    parity = parse_parity(args.parity)
    window = parse_window(args.window)
    if alg is not W:
        rep = TrivialRep(alg) if coeffs == "trivial" else AdjointRep(alg)
        try:
            sp = windowed_spaces(args.k, parity, FiniteTruncation(rep), cap=args.cap)
        except SystemTooLarge as exc:
            raise UsageError(str(exc)) from exc
        return {"command": "cohomology", "algebra": alg.name, "coeffs": coeffs, **sp.summary()}, 0
    s, t = parse_pair(args.bidegree, "--bidegree")
    rep = TRIVIAL if coeffs == "trivial" else ADJOINT
    if args.cocycle:
        return _cocycle_report(args, rep, s, t, window)
    try:
        if args.k == 1:
            if coeffs != "adjoint":
                sp = windowed_spaces(1, parity, WTruncation(rep, window, (s, t)), bidegree=(s, t), cap=args.cap)
                return {"command": "cohomology", "coeffs": coeffs, "bidegree": [s, t], **sp.summary()}, 0
            return _z1_report(parity, s, t, window, args)
        if args.k == 2:
            r = second_cohomology(rep, parity, s, t, window, cap=args.cap, seed=args.seed)
            if r.error:
                return {"command": "cohomology", **r.summary()}, 2
            return {"command": "cohomology", **r.summary()}, 0 if r.ok else 1
    except WindowError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError("--k must be 1 or 2")


def _z1_report(parity, s, t, window, args) -> tuple[dict, int]:
    rep = z1_versus_derivations(parity, s, t, window, cap=args.cap)
    return {"command": "cohomology", "k": 1, "coeffs": "adjoint", **rep}, 0 if rep["same_span"] else 1


def cmd_extend(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    rep = TRIVIAL if alg is W else TrivialRep(alg)
    F = load_cochain(args.cocycle, rep)
    try:
        ext = build_extension(alg, None, F)
    except ValueError as exc:
        raise UsageError(f"{args.cocycle}: {exc}") from exc
    rng = random.Random(args.seed)
    box = _box(args)
    n = alg.arity
    base = [tuple(_gens(alg, rng, n, box)) for _ in range(args.samples)]
    nambu = [(tuple(_gens(alg, rng, n - 1, box)), x) for x in base]
    checks = [extension_nambu(ext, nambu)]
    back = cocycle_of_extension(ext, samples=0)
    rt = 0
    for x in base:
        xs, z = (tuple(x[:-1]),), x[-1]
        if F(list(xs), z) != back(list(xs), z):
            rt += 1
    report = {"command": "extend", "cocycle": args.cocycle, "checks": [_report_summary(c) for c in checks], "round_trip_mismatches": rt}
    ok = all(c.ok for c in checks) and rt == 0
    if args.equiv:
        if not args.h:
            raise UsageError("--equiv needs --h")
        G = load_cochain(args.equiv, rep)
        hc = load_cochain(args.h, rep)
        if hc.k != 0:
            raise UsageError("--h must hold a cochain with no wedge slots (k=0)")
        h = LinearMap(0, lambda g: hc.func((), g), "h")
        eq = extension_equivalent(F, G, h, alg, base)
        report["equivalence"] = _report_summary(eq)
        ok = ok and eq.ok
    return report, 0 if ok else 1


def cmd_deform(args) -> tuple[dict, int]:
    alg = load_algebra(args.algebra)
    data = _load_json(args.series)
    try:
        series = DeformationSeries.from_json(data, alg)
    except ValueError as exc:
        raise UsageError(f"{args.series}: {exc}") from exc
    K = series.order if args.order is None else args.order
    if K > series.order:
        zero = Cochain(1, 0, series.terms[0].rep, lambda xs, z: {}, None, "0")
        series = DeformationSeries(alg, series.terms + [zero] * (K - series.order))
    else:
        series = DeformationSeries(alg, series.terms[: K + 1])
    rng = random.Random(args.seed)
    box = _box(args)
    samples = [(_wedge(alg, rng, box), _wedge(alg, rng, box), _gens(alg, rng, 1, box)[0]) for _ in range(args.samples)]
    reps = check_deformation(series, samples, leibniz=args.leibniz)
    table = [{"order": j, **_report_summary(r)} for j, r in enumerate(reps)]
    return {"command": "deform", "series": args.series, "leibniz": args.leibniz, "orders": table}, 0 if all(r.ok for r in reps) else 1


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default=W_NAME, help="algebra JSON file or 'w-infinity-3'")
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p = argparse.ArgumentParser(prog="nambu-lab", description="Exact computations with n-ary Nambu-Lie superalgebras.")
    p.add_argument("--version", action="version", version=f"nambu-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common], help="identity checks on random samples")

    b = sub.add_parser("bracket", parents=[common], help="evaluate one bracket")
    b.add_argument("generators", nargs="+", help="generators as JSON, family:m:i, or table labels")

    d = sub.add_parser("derivations", parents=[common], help="windowed derivation space of one bidegree")
    d.add_argument("--parity", default="even")
    d.add_argument("--degree", default="0,0")
    d.add_argument("--window", default="8,5,2")
    d.add_argument("--probe", default="1,1", help="bounds m,i of the wedge generators used in equations")
    d.add_argument("--patterns", choices=("all", "nonzero"), default="all")

    c = sub.add_parser("cohomology", parents=[common], help="windowed cocycles, coboundaries and interior H")
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--coeffs", default="trivial")
    c.add_argument("--parity", default="even")
    c.add_argument("--bidegree", default="0,0")
    c.add_argument("--window", default="8,4,2")
    c.add_argument("--cocycle", help="cochain JSON to trivialize instead of solving")
    c.add_argument("--cap", type=int, default=50_000, help="largest admissible number of unknowns")

    e = sub.add_parser("extend", parents=[common], help="central extension from a cocycle")
    e.add_argument("--cocycle", required=True)
    e.add_argument("--sample-window", default="1,1", help="bounds M,I of sampled w-infinity generators")
    e.add_argument("--equiv", help="second cocycle G for the equivalence check")
    e.add_argument("--h", help="0-slot cochain h with (F - G)(x, z) = h([x, z])")

    f = sub.add_parser("deform", parents=[common], help="deformation equation order by order")
    f.add_argument("--series", required=True)
    f.add_argument("--sample-window", default="1,1", help="bounds M,I of sampled w-infinity generators")
    f.add_argument("--order", type=int)
    f.add_argument("--leibniz", choices=("undeformed", "deformed"), default="undeformed")
    return p


COMMANDS = {
    "verify": cmd_verify,
    "bracket": cmd_bracket,
    "derivations": cmd_derivations,
    "cohomology": cmd_cohomology,
    "extend": cmd_extend,
    "deform": cmd_deform,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads()
        report, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"nambu-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
