"""Command-line front end.

Subcommands: root (single fiber), profile (periodicity classes), constancy
(sign-determination criterion), scan (W = +1 / -1 census over a t range) and
audit (closed form vs per-prime oracle; plus table-vs-special-law consistency
when a local table is supplied for a quadratic family).

Exit codes: 0 success, 2 domain/input errors (argparse uses 2 as well),
3 falsification findings (mixed periodicity class or oracle mismatch), so CI
can tell bugs from bad invocations.  Machine output is byte-deterministic:
no timestamps, sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .analysis import (AuditResult, PeriodicityProfile, audit_family,
                       audit_table_against_special, constancy_criterion,
                       profile_quadratic, profile_quartic, profile_sextic,
                       scan_signs, search_minimal_modulus)
from .arith import DEFAULT_FACTOR_EFFORT
from .errors import DomainError, RootNumberError
from .formulas import RootNumberBreakdown, root_number
from .local import LocalTable, load_local_table
from .reduction import Curve

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_FALSIFIED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootnumber",
        description="Root numbers of elliptic-curve twist families over Q.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_t=False, with_range=False, with_bound=False,
                   with_modsearch=False):
        fam = sp.add_mutually_exclusive_group(required=True)
        fam.add_argument("--quadratic", nargs=2, type=int, metavar=("A", "B"),
                         help="quadratic family y^2 = x^3 + A*t^2*x + B*t^3 (A*B != 0)")
        fam.add_argument("--quartic", "--quartic-a", dest="quartic", type=int,
                         metavar="A", help="quartic family y^2 = x^3 + A*t*x")
        fam.add_argument("--sextic", "--sextic-b", dest="sextic", type=int,
                         metavar="B", help="sextic family y^2 = x^3 + B*t")
        if with_t:
            sp.add_argument("--t", type=int, required=True, help="twist parameter")
        if with_range:
            sp.add_argument("--range", nargs=2, type=int, required=True,
                            metavar=("LO", "HI"), help="inclusive t range")
        if with_bound:
            sp.add_argument("--bound", type=int, required=True,
                            help="scan |t| up to this bound")
        if with_modsearch:
            sp.add_argument("--modulus-search", action="store_true",
                            help="also report the minimal moduli that separate the classes")
        sp.add_argument("--local-table", metavar="PATH",
                        help="user table for W_2/W_3 of non-special quadratic bases")
        sp.add_argument("--effort", type=int, default=DEFAULT_FACTOR_EFFORT,
                        help="factorization effort bound (rho iterations)")
        out = sp.add_mutually_exclusive_group()
        out.add_argument("--json", action="store_true", help="machine-readable JSON")
        out.add_argument("--csv", action="store_true", help="CSV output")

    add_common(sub.add_parser("root", help="root number of a single fiber"), with_t=True)
    add_common(sub.add_parser("profile", help="periodicity profile of the family"),
               with_bound=True, with_modsearch=True)
    add_common(sub.add_parser("constancy", help="sign-determination criterion"))
    add_common(sub.add_parser("scan", help="count signs over a t range"), with_range=True)
    add_common(sub.add_parser("audit", help="closed form vs per-prime oracle"),
               with_bound=True)
    return parser


def _curve(args) -> Curve:
    if args.quadratic is not None:
        a, b = args.quadratic
        if a == 0 or b == 0:
            raise DomainError("quadratic family needs A != 0 and B != 0 "
                              "(use --quartic / --sextic for j = 1728 / j = 0)")
        return Curve(a, b)
    if args.quartic is not None:
        if args.quartic == 0:
            raise DomainError("quartic coefficient must be nonzero")
        return Curve(args.quartic, 0)
    if args.sextic == 0:
        raise DomainError("sextic coefficient must be nonzero")
    return Curve(0, args.sextic)


def _table(args) -> LocalTable | None:
    return load_local_table(args.local_table) if args.local_table else None


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _emit_csv(rows: list[list]) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    sys.stdout.write(out.getvalue())


def _sign_str(v) -> str:
    if v == 1:
        return "+1"
    if v == -1:
        return "-1"
    if v == "undetermined":
        return "?"
    return str(v)


def breakdown_dict(br: RootNumberBreakdown, curve: Curve, t: int) -> dict:
    return {
        "family": br.family,
        "a": curve.a,
        "b": curve.b,
        "t": t,
        "parameter": br.parameter,
        "W": br.total,
        "leading_infinity": br.leading_infinity,
        "w2": {"p": 2, "sign": br.w2.sign, "rule": br.w2.rule},
        "w3": {"p": 3, "sign": br.w3.sign, "rule": br.w3.rule},
        "jacobi_factors": [[desc, s] for desc, s in br.jacobi_factors],
        "large_prime_factors": [[p, s, kt.symbol] for p, s, kt in br.large_prime_factors],
        "notes": list(br.notes),
    }


def _cmd_root(args) -> int:
    curve = _curve(args)
    br = root_number(curve, args.t, _table(args), effort=args.effort)
    if args.json:
        _emit_json(breakdown_dict(br, curve, args.t))
    elif args.csv:
        rows = [["field", "value"],
                ["family", br.family], ["a", curve.a], ["b", curve.b],
                ["t", args.t], ["parameter", br.parameter], ["W", br.total],
                ["w2", br.w2.sign], ["w3", br.w3.sign]]
        _emit_csv(rows)
    else:
        print(f"family {br.family}: {curve}, twist t = {args.t} "
              f"(effective parameter {br.parameter})")
        print(f"W = {_sign_str(br.total)}")
        print(f"  W_inf = {_sign_str(br.leading_infinity)}")
        print(f"  W_2 = {_sign_str(br.w2.sign)}  [{br.w2.rule}]")
        print(f"  W_3 = {_sign_str(br.w3.sign)}  [{br.w3.rule}]")
        for desc, s in br.jacobi_factors:
            print(f"  {desc} = {_sign_str(s)}")
        for p, s, kt in br.large_prime_factors:
            print(f"  W_{p} = {_sign_str(s)}  [type {kt.symbol}]")
        for note in br.notes:
            print(f"  note: {note}")
    return EXIT_OK


def _class_label(key: tuple[int, int, int]) -> str:
    sign, res, _sq = key
    return f"{'+' if sign > 0 else '-'}{res}"


def _profile_rows(profile: PeriodicityProfile) -> list[list]:
    rows = [["t_class", "sq_class", "sign", "witness"]]
    for key in sorted(profile.classes):
        value = profile.classes[key]
        rows.append([_class_label(key), key[2], _sign_str(value),
                     profile.witnesses[key]])
    return rows


def _cmd_profile(args) -> int:
    curve = _curve(args)
    kind = curve.kind
    if kind == "sextic":
        profile = profile_sextic(curve.b, args.bound, effort=args.effort)
    elif kind == "quartic":
        profile = profile_quartic(curve.a, args.bound, effort=args.effort)
    else:
        profile = profile_quadratic(curve, args.bound, _table(args), effort=args.effort)
    minimal = None
    if args.modulus_search:
        minimal = search_minimal_modulus(profile)
    mixed = profile.mixed_classes
    if args.json:
        obj = {
            "kind": profile.kind,
            "modulus": profile.modulus,
            "square_modulus": profile.square_modulus,
            "scanned": profile.scanned,
            "class_count": len(profile.classes),
            "mixed_count": len(mixed),
            "undetermined_count": len(profile.undetermined_classes),
            "classes": [
                {"t_class": _class_label(k), "sq_class": k[2],
                 "sign": _sign_str(profile.classes[k]),
                 "witness": profile.witnesses[k]}
                for k in sorted(profile.classes)
            ],
            "conflicts": [
                {"t_class": _class_label(k), "sq_class": k[2],
                 "witnesses": list(profile.conflicts[k])}
                for k in sorted(profile.conflicts)
            ],
        }
        if minimal is not None:
            obj["minimal_moduli"] = [list(pair) for pair in minimal]
        _emit_json(obj)
    elif args.csv:
        _emit_csv(_profile_rows(profile))
    else:
        values = [v for v in profile.classes.values()]
        print(f"{profile.kind} profile, modulus {profile.modulus}, "
              f"square modulus {profile.square_modulus}")
        print(f"scanned {profile.scanned} twists into {len(profile.classes)} classes: "
              f"{values.count(1)} with W=+1, {values.count(-1)} with W=-1, "
              f"{len(mixed)} mixed, {len(profile.undetermined_classes)} undetermined")
        for k in mixed:
            t1, t2 = profile.conflicts[k]
            print(f"  MIXED class {_class_label(k)} sq={k[2]}: "
                  f"witnesses {t1} and {t2} disagree")
        if minimal is not None:
            pretty = ", ".join(f"(M={m}, sq mod {s})" for m, s in minimal)
            print(f"minimal sufficient moduli: {pretty}")
    return EXIT_FALSIFIED if mixed else EXIT_OK


def _cmd_constancy(args) -> int:
    curve = _curve(args)
    if curve.kind != "quadratic":
        raise DomainError("constancy criterion applies to quadratic families")
    verdict = constancy_criterion(curve, effort=args.effort)
    conditions = [
        ("no-multiplicative-place-above-3", verdict.no_multiplicative_large),
        ("special-at-2", verdict.special_at_two),
        ("special-at-3", verdict.special_at_three),
        ("additive-congruences", verdict.additive_congruences),
    ]
    if args.json:
        _emit_json({
            "a": curve.a, "b": curve.b,
            "overall": verdict.overall,
            "conditions": {name: held for name, held in conditions},
            "prime_diagnostics": {str(p): note
                                  for p, note in sorted(verdict.prime_diagnostics.items())},
        })
    elif args.csv:
        rows = [["condition", "holds"]]
        rows += [[name, str(held).lower()] for name, held in conditions]
        rows.append(["overall", verdict.overall])
        _emit_csv(rows)
    else:
        print(f"curve {curve}: {verdict.overall}")
        for name, held in conditions:
            print(f"  {name}: {'yes' if held else 'NO'}")
        for p, note in sorted(verdict.prime_diagnostics.items()):
            print(f"  p={p}: {note}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    curve = _curve(args)
    lo, hi = args.range
    result = scan_signs(curve, lo, hi, _table(args), effort=args.effort)
    if args.json:
        _emit_json({
            "range": [lo, hi],
            "scanned": result.scanned,
            "plus_count": result.plus_count,
            "minus_count": result.minus_count,
            "plus_samples": list(result.plus_samples),
            "minus_samples": list(result.minus_samples),
        })
    elif args.csv:
        _emit_csv([["w", "count", "samples"],
                   ["+1", result.plus_count, " ".join(map(str, result.plus_samples))],
                   ["-1", result.minus_count, " ".join(map(str, result.minus_samples))]])
    else:
        print(f"scan t in [{lo}, {hi}]: {result.scanned} powerfree twists")
        print(f"  W = +1: {result.plus_count}  (samples {list(result.plus_samples)})")
        print(f"  W = -1: {result.minus_count}  (samples {list(result.minus_samples)})")
    return EXIT_OK


_MISMATCH_PRINT_CAP = 100


def _cmd_audit(args) -> int:
    curve = _curve(args)
    table = _table(args)
    result = audit_family(curve, args.bound, table, effort=args.effort)
    table_disagreements = []
    if table is not None and curve.kind == "quadratic":
        table_disagreements = audit_table_against_special(curve, table)
    failed = bool(result.mismatches or table_disagreements)
    if args.json:
        _emit_json({
            "kind": result.kind,
            "bound": result.bound,
            "checked": result.checked,
            "mismatch_count": len(result.mismatches),
            "mismatches": [list(m) for m in result.mismatches[:_MISMATCH_PRINT_CAP]],
            "table_disagreements": [list(d) for d in table_disagreements],
            "ok": not failed,
        })
    elif args.csv:
        rows = [["t", "closed_form", "oracle"]]
        rows += [list(m) for m in result.mismatches[:_MISMATCH_PRINT_CAP]]
        _emit_csv(rows)
    else:
        print(f"audit {result.kind} family, |t| <= {result.bound}: "
              f"{result.checked} fibers checked, {len(result.mismatches)} mismatches")
        for t, closed, oracle in result.mismatches[:_MISMATCH_PRINT_CAP]:
            print(f"  MISMATCH t={t}: closed form {closed}, oracle {oracle}")
        for p, t, special, looked in table_disagreements:
            print(f"  TABLE DISAGREEMENT p={p} t={t}: special law {special}, table {looked}")
    return EXIT_FALSIFIED if failed else EXIT_OK


_COMMANDS = {
    "root": _cmd_root,
    "profile": _cmd_profile,
    "constancy": _cmd_constancy,
    "scan": _cmd_scan,
    "audit": _cmd_audit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RootNumberError as exc:
        print(f"error[{exc.name}]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
