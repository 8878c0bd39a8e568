"""Command-line interface exposing every operation of the package.

Exit codes: 0 computed, 2 input/parse error, 3 verdict false under
--strict, 4 verification failure (or erratum under --fail-on-erratum).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .diffalg import DiffAlgError, DiffPoly, DiffRatio, normalize_integer
from . import generators, invariants, odeforms, solutions
from .parsing import ParseError, parse, parse_value
from .rendering import render, render_ode, value_to_json
from .verification import run_suites


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="maxsym",
        description="Exact symbolic analysis of linear ODEs with maximal "
        "symmetry algebras: canonical forms, characterizing equations, "
        "semi-invariants, equivalence generators and superposition solutions.",
    )
    top.add_argument(
        "--format",
        choices=("text", "latex", "json"),
        default="text",
        help="output format for symbolic values",
    )
    top.add_argument(
        "--integer-normalize",
        action="store_true",
        help="scale printed polynomials to integer coefficients with content 1",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", help="maximal-symmetry reduced normal form")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--param", choices=("a", "b"), default="a")

    p = sub.add_parser("characterize", help="characterizing equations")
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("general-form", help="general maximal-symmetry standard form")
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("check", help="test a concrete equation for maximal symmetry")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--ode", help="equation text or JSON coefficient map")
    src.add_argument("--ode-file", type=Path)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("semi-invariant", help="the index-3 semi-invariant")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("generators", help="equivalence / symmetry generators")
    p.add_argument(
        "--form", choices=("standard", "normal", "laguerre"), required=True
    )
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--induced", action="store_true")
    p.add_argument(
        "--maximal",
        action="store_true",
        help="restrict to the maximal-symmetry family (standard form only)",
    )

    p = sub.add_parser("solve", help="superposition basis and exact series check")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--source-b", required=True, help="source coefficient b(x)")
    p.add_argument("--series-order", type=int, default=40)

    p = sub.add_parser("verify", help="run the self-verification suites")
    p.add_argument(
        "--suite",
        default="all",
        choices=("ring", "forms", "invariants", "generators", "solutions", "all"),
    )
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument(
        "--fail-on-erratum",
        action="store_true",
        help="exit 4 when a printed-formula mismatch is detected",
    )
    return top


def _emit(value, args):
    if args.integer_normalize:
        if isinstance(value, DiffRatio):
            value = value.as_poly()
        value, _ = normalize_integer(value)
    print(render(value, args.format))


def _cmd_normal_form(args) -> int:
    ode = odeforms.sym_power_normal(args.order)
    if args.param == "a":
        ode = odeforms.to_a_parameter(args.order)
    print(render_ode(ode, args.format))
    return 0


def _cmd_characterize(args) -> int:
    cs = odeforms.characterize(args.order)
    for rel in cs.relations:
        _emit(rel, args)
    return 0


def _cmd_general_form(args) -> int:
    print(render_ode(odeforms.general_maxsym_form(args.order), args.format))
    return 0


def _cmd_check(args) -> int:
    text = args.ode if args.ode is not None else args.ode_file.read_text()
    doc = parse(text, kind="ode", strict=False)
    try:
        verdict, residuals = odeforms.is_max_symmetry(doc.to_linear_ode())
    except odeforms.OrderTooLow:
        print("verdict: maximal (all equations of order < 3 are equivalent "
              "to the canonical one)")
        return 0
    print(f"verdict: {'maximal' if verdict else 'not maximal'}")
    for j, r in zip(range(doc.order - 3, -1, -1), residuals):
        if not r.is_zero():
            print(f"residual[j={j}]: {render(r, args.format)}")
    if not verdict and args.strict:
        return 3
    return 0


def _cmd_semi_invariant(args) -> int:
    si = invariants.semi_invariant(args.order)
    if si.expression.is_zero():
        print(render(si.expression, args.format))
    else:
        _emit(si.expression, args)
    if args.verify:
        ok, _ = invariants.verify_transform_law(args.order)
        print(f"transform-law: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
        if not ok:
            return 4
    return 0


def _cmd_generators(args) -> int:
    gen = {
        "standard": generators.gen_standard,
        "normal": generators.gen_normal,
        "laguerre": generators.gen_laguerre,
    }[args.form]
    variant = "induced" if args.induced else "full"
    if args.maximal:
        if args.form != "standard":
            print("--maximal applies to the standard form only", file=sys.stderr)
            return 2
        field = generators.specialize_maxsym(args.order)
    else:
        field = gen(args.order, variant)
    print(f"xi = {render(field.xi, args.format)}")
    if field.eta is not None:
        print(f"eta = {render(field.eta, args.format)}")
    for k in sorted(field.phi):
        print(f"phi[{k}] = {render(field.phi_at(k), args.format)}")
    return 0


def _cmd_solve(args) -> int:
    b = DiffRatio.of(parse_value(args.source_b)).as_poly()
    basis = solutions.superposition_basis(args.order)
    names = ", ".join(
        "*".join(
            filter(
                None,
                [
                    f"u^{s.power_u}" if s.power_u > 1 else ("u" if s.power_u else ""),
                    f"v^{s.power_v}" if s.power_v > 1 else ("v" if s.power_v else ""),
                ],
            )
        )
        or "1"
        for s in basis
    )
    print(f"basis: {names}")
    report = solutions.series_check(args.order, b, args.series_order)
    for k, resid in enumerate(report.residuals):
        ok = not any(resid)
        print(
            f"residual[k={k}]: {'0 through order ' + str(report.residual_orders) if ok else 'NONZERO'}"
        )
    if not report.all_zero:
        return 4
    return 0


def _cmd_verify(args) -> int:
    results = run_suites([args.suite], args.max_order)
    failed = 0
    errata = 0
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}"
              + (f" ({r.detail})" if r.detail else ""))
        if r.erratum is not None:
            errata += 1
            print(str(r.erratum))
        if not r.ok:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed, "
          f"{errata} errata reported")
    if failed:
        return 4
    if errata and args.fail_on_erratum:
        return 4
    return 0


_COMMANDS = {
    "normal-form": _cmd_normal_form,
    "characterize": _cmd_characterize,
    "general-form": _cmd_general_form,
    "check": _cmd_check,
    "semi-invariant": _cmd_semi_invariant,
    "generators": _cmd_generators,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiffAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
