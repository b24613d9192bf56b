"""Command line entry point: ``waringmat <subcommand> ...``.

Exit codes: 0 success, 1 contract violation or failed check, 2 witness search
exhausted. Errors are one line on stderr, prefixed ``error[<kind>]:``.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import io
from .constructions import (
    ModelSpectrum,
    PreconditionError,
    complete_block_to_model,
    model_matrix,
    prescribe_diagonal,
)
from .matrix import Matrix
from .ncpoly import ParseError, ZeroPolynomialError, evaluate, parse as parse_polynomial
from .pipeline import WitnessNotFound, search_diagonal_witness, waring_for_polynomial
from .primes import select_prime
from .scalar import ScalarFormatError, parse_scalar_list, render_scalar_list
from .waring import Coefficients, decompose, two_term_obstruction

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_NOT_FOUND = 2


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = EXIT_CONTRACT):
        super().__init__(message)
        self.kind = kind
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def echo(self) -> str:
        return "config: " + json.dumps(asdict(self), sort_keys=True, default=str)


def _polynomial_text(args) -> str:
    if getattr(args, "f_file", None):
        with open(args.f_file, encoding="utf-8") as fh:
            return fh.read().strip()
    if not args.f:
        raise CliError("usage", "a polynomial is required (--f or --f-file)")
    return args.f


def _spec(n: int, lambdas_text: str, q: Optional[int]) -> ModelSpectrum:
    lambdas = parse_scalar_list(lambdas_text)
    if q is not None and q != len(lambdas):
        raise CliError("spec", f"--q {q} does not match the {len(lambdas)} eigenvalues given")
    return ModelSpectrum(n, len(lambdas), tuple(lambdas))


def _print_report_lines(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def cmd_decompose(args) -> int:
    T = io.read_matrix(args.input)
    if not T.is_square:
        raise CliError("shape", f"T must be square, got {T.rows}x{T.cols}")
    spec = _spec(T.rows, args.lambdas, args.q)
    coeffs = Coefficients.of(parse_scalar_list(args.alphas))
    d = decompose(T, spec, coeffs)
    if args.out:
        io.write_json(io.decomposition_to_json(d), args.out)
    _print_report_lines(d.report.lines())
    return EXIT_OK if d.report.ok else EXIT_CONTRACT


def cmd_verify(args) -> int:
    doc = io.read_json(args.input)
    report = io.verify_document(doc)
    _print_report_lines(report.lines())
    if not report.ok:
        raise CliError("verify", "failed checks: " + ", ".join(report.failures()))
    return EXIT_OK


def _random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        S = Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if S.is_invertible():
            return S


def cmd_obstruction(args) -> int:
    spec = _spec(args.n, args.lambdas, args.q)
    alphas = parse_scalar_list(args.alphas)
    if len(alphas) != 2:
        raise CliError("usage", "--alphas needs exactly two values for the two-term check")
    D = model_matrix(spec)
    if args.a1 or args.a2:
        if not (args.a1 and args.a2):
            raise CliError("usage", "--a1 and --a2 must be given together")
        pairs = [(io.read_matrix(args.a1), io.read_matrix(args.a2))]
    else:
        rng = random.Random(args.seed)
        pairs = []
        for _ in range(args.trials):
            S1, S2 = _random_invertible(rng, args.n), _random_invertible(rng, args.n)
            pairs.append((S1 @ D @ S1.inverse(), S2 @ D @ S2.inverse()))
    ok = True
    for k, (A1, A2) in enumerate(pairs):
        rep = two_term_obstruction(args.n, spec, alphas, A1, A2)
        ok = ok and rep.holds
        if len(pairs) == 1 or not rep.holds:
            _print_report_lines(rep.lines())
    print(f"{'PASS' if ok else 'FAIL'} obstruction held for {len(pairs)} pair(s)")
    return EXIT_OK if ok else EXIT_CONTRACT


def cmd_find_prime(args) -> int:
    print(select_prime(args.n).p)
    return EXIT_OK


def cmd_poly_eval(args) -> int:
    f = parse_polynomial(_polynomial_text(args))
    mats = io.read_matrices(args.args)
    value = evaluate(f, mats)
    if args.out:
        io.write_json(value.to_json(), args.out)
    else:
        print(json.dumps(value.to_json()))
    return EXIT_OK


def cmd_search_witness(args) -> int:
    f = parse_polynomial(_polynomial_text(args))
    w = search_diagonal_witness(f, args.p, args.budget, args.seed, args.workers)
    if w is None:
        raise CliError("not-found", f"no witness for p={args.p} (budget {args.budget}, seed {args.seed})",
                       EXIT_NOT_FOUND)
    doc = io.witness_to_json(w)
    if args.out:
        io.write_json(doc, args.out)
    print(f"found at attempt {w.attempt}: spectrum {', '.join(render_scalar_list(w.spectrum))}")
    return EXIT_OK


def cmd_waring_poly(args) -> int:
    f = parse_polynomial(_polynomial_text(args))
    T = io.read_matrix(args.input)
    coeffs = Coefficients.of(parse_scalar_list(args.alphas))
    try:
        res = waring_for_polynomial(f, args.n, T, coeffs, args.budget, args.seed, args.workers)
    except WitnessNotFound as exc:
        raise CliError("not-found", str(exc), EXIT_NOT_FOUND) from exc
    doc = io.polynomial_result_to_json(res)
    if args.out:
        io.write_json(doc, args.out)
    print(f"p = {res.prime.p}, q = {res.spec.q}, lambdas = {', '.join(render_scalar_list(res.spec.lambdas))}")
    _print_report_lines([f"{v} {k}" for k, v in doc["report"].items()])
    return EXIT_OK


def cmd_prescribe_diagonal(args) -> int:
    B = io.read_matrix(args.input)
    mus = parse_scalar_list(args.mus)
    res = prescribe_diagonal(B, mus)
    doc = {"B": B.to_json(), "mus": render_scalar_list(mus), "S": res.S.to_json(), "C": res.C.to_json()}
    io.write_json(doc, args.out or "-")
    return EXIT_OK


def cmd_complete_block(args) -> int:
    Z = io.read_matrix(args.input)
    spec = _spec(args.n, args.lambdas, args.q)
    res = complete_block_to_model(Z, spec)
    doc = {
        "Z": Z.to_json(),
        "U": res.U.to_json(),
        "V": res.V.to_json(),
        "W": res.W.to_json(),
        "A": res.A.to_json(),
        "S": res.witness.S.to_json(),
    }
    io.write_json(doc, args.out or "-")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="waringmat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="write T = a1*A1 + a2*A2 + a3*A3 with each Ai similar to the model")
    p.add_argument("--input", required=True, help="T as JSON ('-' for stdin)")
    p.add_argument("--lambdas", required=True, help='distinct nonzero eigenvalues, e.g. "1,2,3"')
    p.add_argument("--q", type=int, help="optional check on the number of eigenvalues")
    p.add_argument("--alphas", required=True, help='three nonzero coefficients summing to 0, e.g. "1,2,-3"')
    p.add_argument("--out", help="output JSON path ('-' for stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="re-check a decomposition file from its JSON alone")
    p.add_argument("--in", "--input", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("obstruction", help="rank certificate that I - nE is not a two-term combination")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--lambdas", required=True)
    p.add_argument("--alphas", required=True, help="two scalars a1,a2")
    p.add_argument("--a1", help="JSON matrix for A1 (otherwise random conjugates are used)")
    p.add_argument("--a2", help="JSON matrix for A2")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("find-prime", help="largest prime p with n/2 + 1 <= p <= n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_find_prime)

    def add_poly(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--f", help='polynomial text, e.g. "X1*X2 - X2*X1"')
        g.add_argument("--f-file", help="file containing the polynomial text")

    p = sub.add_parser("poly-eval", help="evaluate a polynomial on a JSON array of matrices")
    add_poly(p)
    p.add_argument("--args", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_poly_eval)

    p = sub.add_parser("search-witness", help="find a value of f in M_p(Q) with p distinct rational eigenvalues")
    add_poly(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_witness)

    p = sub.add_parser("waring-poly", help="decompose T with every term in the image of f")
    add_poly(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--alphas", required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_waring_poly)

    p = sub.add_parser("prescribe-diagonal", help="conjugate B to a matrix with the given diagonal")
    p.add_argument("--input", required=True)
    p.add_argument("--mus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_prescribe_diagonal)

    p = sub.add_parser("complete-block", help="fill [[U, V], [W, Z]] so it is similar to the model")
    p.add_argument("--input", required=True, help="the (n-q)x(n-q) block Z")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--lambdas", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_complete_block)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(name)s: %(message)s")
    options = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    print(RunConfig(args.command, options).echo(), file=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, ZeroPolynomialError) as exc:
        print(f"error[polynomial]: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ScalarFormatError as exc:
        print(f"error[scalar]: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except PreconditionError as exc:
        print(f"error[precondition]: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (ValueError, ZeroDivisionError, OSError, json.JSONDecodeError) as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
