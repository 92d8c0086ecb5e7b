"""Command line front end: ``wordchar <subcommand> ...``.

Exit status is 0 on success, 1 when a checked identity or inequality fails,
and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from math import sqrt
from typing import Sequence

from .algebra import taylor_coefficients
from .engine import InvariantViolation, expected_characters, phi_w, polynomial_form
from .partitions import EnumerationBudgetError, SetPartition
from .report import SPECTRAL_COLUMNS, emit_report
from .symmetric import YoungDiagram
from .words import WordSyntaxError, format_word, preprocess_word

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _diagram(text: str) -> YoungDiagram:
    try:
        shape = YoungDiagram.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad diagram {text!r}: {exc}") from exc
    if shape.k == 0:
        raise UsageError("diagram must have at least one box")
    return shape


def _word(text: str, rank: int | None):
    try:
        return preprocess_word(text, rank=rank)
    except (WordSyntaxError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _fmt(args) -> str:
    return "json" if getattr(args, "json", False) else args.format


# -- subcommands -----------------------------------------------------------

def cmd_expected_char(args) -> int:
    shape = _diagram(args.shape)
    word, wclass = _word(args.word, args.rank)
    res = expected_characters(word, shape.k, debug_all_partitions=args.debug_all_partitions,
                              threads=args.threads)
    E = res.values[shape]
    evals = []
    for n in args.eval or []:
        if n < res.threshold:
            raise UsageError(f"n={n} is below the validity threshold {res.threshold}")
        evals.append({"n": n, "value": E(n)})
    payload = {
        "word": args.word,
        "reduced_word": format_word(word.letters),
        "word_class": wclass.to_json(),
        "k": shape.k,
        "lambda": str(shape),
        "rational": E,
        "evals": evals,
        "degree_gap": E.degree_gap,
        "valid_from_n": res.threshold,
        "enumeration_stats": res.stats.to_json(),
    }
    if _fmt(args) == "text":
        payload = {"E": E, **{f"n={e['n']}": e["value"] for e in evals}}
    emit_report(payload, _fmt(args), args.output)
    return EXIT_OK


def cmd_poly_form(args) -> int:
    shape = _diagram(args.shape)
    word, _ = _word(args.word, args.rank)
    form = polynomial_form(word, shape, args.q)
    payload = {
        "word": args.word, "lambda": str(shape), "q": form.q,
        "P": form.numerator, "gate": form.gate, "degree": form.degree,
        "bound": form.bound, "within_bound": form.within_bound(),
        "tight_bound": form.tight_bound, "within_tight_bound": form.within_tight_bound(),
    }
    emit_report(payload, _fmt(args), args.output, var="x")
    return EXIT_OK if form.within_bound() else EXIT_VIOLATION


def cmd_phi(args) -> int:
    word, wclass = _word(args.word, args.rank)
    phi = phi_w(word, args.K)
    terms = args.terms if args.terms is not None else 2 * args.K
    coeffs = taylor_coefficients(phi, terms)
    payload = {"word": args.word, "K": args.K, "phi": phi, "taylor": coeffs}
    emit_report(payload, _fmt(args), args.output, var="x")
    if args.check:
        vanish = args.K if wclass.kind.value == "proper-power" else 2 * args.K
        if wclass.kind.value in ("generic", "proper-power") and any(coeffs[:vanish]):
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_mc(args) -> int:
    from .sampling import mc_expected_character

    shape = _diagram(args.shape)
    word, _ = _word(args.word, args.rank)
    rep = mc_expected_character(word, shape, args.n, args.samples, args.seed)
    payload = {"word": args.word, "lambda": str(shape), "n": args.n, **rep.to_json()}
    emit_report(payload, _fmt(args), args.output)
    return EXIT_OK


def cmd_exhaustive(args) -> int:
    from .sampling import exhaustive_expected_character

    shape = _diagram(args.shape)
    word, _ = _word(args.word, args.rank)
    value = exhaustive_expected_character(word, shape, args.n)
    payload = {"word": args.word, "lambda": str(shape), "n": args.n, "value": value}
    emit_report(payload, _fmt(args), args.output)
    return EXIT_OK


def cmd_weingarten(args) -> int:
    from .weingarten import weingarten

    try:
        sigma = SetPartition.parse(args.sigma)
        tau = SetPartition.parse(args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.m is not None and (sigma.size != args.m or tau.size != args.m):
        raise UsageError(f"partitions must have {args.m} elements")
    if sigma.size != tau.size:
        raise UsageError("sigma and tau differ in size")
    wg = weingarten(sigma, tau)
    payload = {"m": sigma.size, "sigma": str(sigma), "tau": str(tau), "rational": wg,
               "evals": [{"n": n, "value": wg(n)} for n in args.eval or []]}
    if _fmt(args) == "text":
        payload = {"Wg": wg, **{f"n={n}": wg(n) for n in args.eval or []}}
    emit_report(payload, _fmt(args), args.output)
    return EXIT_OK


def cmd_projection_check(args) -> int:
    from .regress import projection_report

    shape = _diagram(args.shape)
    checks = projection_report(shape, args.n, samples=args.samples, seed=args.seed)
    payload = {"lambda": str(shape), "n": args.n, "checks": checks, "passed": all(checks.values())}
    emit_report(payload, _fmt(args), args.output)
    return EXIT_OK if payload["passed"] else EXIT_VIOLATION


def cmd_spectral_gap(args) -> int:
    from .schreier import random_schreier_graph, spectral_gap

    seeds = _int_list(args.seeds)
    if not seeds:
        raise UsageError("at least one seed is required")
    rows = []
    reports = []
    for seed in seeds:
        op = random_schreier_graph(args.n, args.k, args.r, seed)
        rep = spectral_gap(op, tol=args.tol, max_iterations=args.max_iterations, seed=seed)
        reports.append(rep)
        rows.append(rep.to_row())
    if args.csv:
        emit_report(rows, "csv", args.csv, columns=SPECTRAL_COLUMNS)
    fmt = _fmt(args)
    if fmt == "csv":
        emit_report(rows, "csv", args.output, columns=SPECTRAL_COLUMNS)
    else:
        payload = {"n": args.n, "k": args.k, "r": args.r, "bound": 2 * sqrt(2 * args.r - 1),
                   "runs": [rep.to_json() for rep in reports]}
        emit_report(payload, fmt, args.output)
    return EXIT_OK if all(rep.converged or not rep.connected for rep in reports) else EXIT_VIOLATION


def cmd_regress(args) -> int:
    from .regress import run_all

    selected = set(args.only.split(",")) if args.only else None
    results = run_all(selected)
    if _fmt(args) == "json":
        emit_report({"results": [r.to_json() for r in results],
                     "passed": all(r.passed for r in results)}, "json", args.output)
    else:
        text = "\n".join(r.line() for r in results) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


# -- parser ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--json", action="store_true", help="shorthand for --format json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def _word_args(p: argparse.ArgumentParser, shape: bool = True) -> None:
    p.add_argument("--word", required=True, help="lowercase letters are generators, uppercase inverses")
    p.add_argument("--rank", type=int, default=None)
    if shape:
        p.add_argument("--lambda", dest="shape", required=True, help='diagram parts, e.g. "2,1"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordchar", description="Expected stable characters of word maps.")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for the exact engine")
    parser.add_argument("--budget", type=int, default=None, help="enumeration budget (overrides WORDCHAR_BUDGET)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expected-char", help="exact expected character as a rational function of n")
    _word_args(p)
    p.add_argument("--eval", type=int, nargs="*", help="evaluate at these n")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes")
    p.add_argument("--debug-all-partitions", action="store_true",
                   help="sum over all partitions instead of star partitions")
    _common(p)
    p.set_defaults(func=cmd_expected_char)

    p = sub.add_parser("poly-form", help="numerator polynomial over the gate polynomial")
    _word_args(p)
    p.add_argument("--q", type=int, default=None, help="defaults to the word length")
    _common(p)
    p.set_defaults(func=cmd_poly_form)

    p = sub.add_parser("phi", help="generating function over diagrams with K boxes")
    _word_args(p, shape=False)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--terms", type=int, default=None, help="Taylor coefficients to print (default 2K)")
    p.add_argument("--check", action="store_true", help="exit 1 if the expected leading coefficients do not vanish")
    _common(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("mc", help="Monte Carlo estimate")
    _word_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("exhaustive", help="exact average over all generator tuples")
    _word_args(p)
    p.add_argument("--n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser("weingarten", help="Weingarten function of two set partitions")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--sigma", required=True, help='e.g. "{{1,2},{3}}"')
    p.add_argument("--tau", required=True)
    p.add_argument("--eval", type=int, nargs="*")
    _common(p)
    p.set_defaults(func=cmd_weingarten)

    p = sub.add_parser("projection-check", help="exact checks of the dense projection matrix")
    p.add_argument("--lambda", dest="shape", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    p.set_defaults(func=cmd_projection_check)

    p = sub.add_parser("spectral-gap", help="largest non-trivial eigenvalue of random Schreier graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seeds", required=True, help="comma separated")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--csv", default=None, help="also write CSV rows here")
    _common(p)
    p.set_defaults(func=cmd_spectral_gap)

    p = sub.add_parser("regress", help="run the golden acceptance checks")
    p.add_argument("--only", default=None, help="comma separated check keys such as C1,C4")
    _common(p)
    p.set_defaults(func=cmd_regress)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.budget is not None:
        if args.budget <= 0:
            print("error: budget must be positive", file=sys.stderr)
            return EXIT_USAGE
        os.environ["WORDCHAR_BUDGET"] = str(args.budget)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violated: {exc.args[0]}", file=sys.stderr)
        for item in exc.args[1:]:
            print(item, file=sys.stderr)
        return EXIT_VIOLATION
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
