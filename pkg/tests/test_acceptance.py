"""Acceptance criteria, each run at its stated size and tolerance.

Every check is exact. Each test records a single PASS/FAIL line which is
printed in the terminal summary.
"""

import json
import random
import time

import pytest
import sympy
from gmpy2 import mpq

from waringmat.cli import main as cli_main
from waringmat.constructions import (
    ModelSpectrum,
    PreconditionError,
    certifies,
    complete_block_to_model,
    factor_nonscalar_square,
    factor_rectangular,
    is_similar_to_model,
    leading_model,
    model_matrix,
    perturbing_conjugator,
    prescribe_diagonal,
)
from waringmat.matrix import Matrix, assemble_blocks, conjugate
from waringmat.ncpoly import evaluate, parse
from waringmat.primes import select_prime
from waringmat.waring import Coefficients, TraceError, decompose, two_term_obstruction, verify

from strategies import rand_coeffs, rand_invertible, rand_matrix, rand_nonscalar, rand_rational, rand_spec, rand_traceless

pytestmark = pytest.mark.slow


def record(log, number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
    log.append(line)
    print(line)
    assert ok, line


def test_criterion_1_round_trip(acceptance_log):
    rng = random.Random(20240101)
    count, bad = 500, []
    start = time.perf_counter()
    for k in range(count):
        n = rng.randint(2, 12)
        spec = rand_spec(rng, n, rng.randint((n + 1) // 2, n))
        coeffs = rand_coeffs(rng)
        T = rand_traceless(rng, n, maxden=rng.choice([1, 2, 5]))
        d = decompose(T, spec, coeffs)
        if not verify(d).ok:
            bad.append(k)
    elapsed = time.perf_counter() - start
    record(acceptance_log, 1, "random decompositions verify exactly", not bad and elapsed < 60,
           f"{count - len(bad)}/{count} all-pass in {elapsed:.1f}s, limit 60s")


def _construction_checks(rng):
    failures = {}

    def fail(name):
        failures[name] = failures.get(name, 0) + 1

    for _ in range(1000):
        Z = rand_nonscalar(rng, rng.randint(2, 8))
        W, X = factor_nonscalar_square(Z)
        if not (W @ X == Z and X.is_invertible() and not (X @ W).is_diagonal()):
            fail("factor_nonscalar_square")

    for _ in range(1000):
        k = rng.randint(1, 7)
        l = rng.randint(k + 1, 8)
        Z = rand_matrix(rng, k)
        W, X = factor_rectangular(Z, l)
        if not (W @ X == Z and not (X @ W).is_diagonal() and W.block(0, k, 0, k) == Z):
            fail("factor_rectangular")

    for _ in range(1000):
        n = rng.randint(3, 8)
        spec = rand_spec(rng, n, rng.randint((n + 1) // 2, n - 1))
        k = n - spec.q
        Z = rand_nonscalar(rng, k) if spec.q == k else rand_matrix(rng, k)
        c = complete_block_to_model(Z, spec)
        P = assemble_blocks([[Matrix.identity(spec.q), c.X], [None, Matrix.identity(k)]])
        ok = (
            c.A == assemble_blocks([[c.U, c.V], [c.W, Z]])
            and not c.U.is_scalar()
            and is_similar_to_model(c.A, spec)
            and certifies(c.witness.S, c.A, model_matrix(spec))
            and conjugate(c.A, P) == assemble_blocks([[leading_model(spec), None], [c.W, Matrix.zeros(k)]])
        )
        if not ok:
            fail("complete_block_to_model")

    for _ in range(1000):
        T = rand_nonscalar(rng, rng.randint(2, 8))
        R = perturbing_conjugator(T)
        if not (R.is_invertible() and not (conjugate(T, R) - T).is_diagonal()):
            fail("perturbing_conjugator")

    for _ in range(1000):
        k = rng.randint(2, 8)
        B = rand_nonscalar(rng, k)
        mus = [rand_rational(rng, -3, 3, 2) for _ in range(k - 1)]
        mus.append(B.trace() - sum(mus))
        r = prescribe_diagonal(B, mus)
        if not (r.C.diagonal() == mus and r.S.is_invertible() and r.S @ B == r.C @ r.S):
            fail("prescribe_diagonal")
    return failures


def test_criterion_2_construction_suite(acceptance_log):
    failures = _construction_checks(random.Random(7))
    detail = "5 constructions x 1000 checks, sizes <= 8"
    if failures:
        detail += "; failures " + ", ".join(f"{k}={v}" for k, v in failures.items())
    record(acceptance_log, 2, "constructions meet their postconditions", not failures, detail)


def test_criterion_3_prescribed_diagonal(acceptance_log):
    rng = random.Random(33)
    count, bad = 600, 0
    for _ in range(count):
        k = rng.randint(2, 10)
        B = rand_nonscalar(rng, k)
        mus = [rand_rational(rng, -4, 4, 3) for _ in range(k - 1)]
        mus.append(B.trace() - sum(mus))
        r = prescribe_diagonal(B, mus)
        if r.C.diagonal() != mus or r.S @ B != r.C @ r.S:
            bad += 1
    record(acceptance_log, 3, "prescribed diagonals are exact", bad == 0, f"{count - bad}/{count}, k <= 10")


def test_criterion_4_two_by_two(acceptance_log):
    rng = random.Random(44)
    count, bad, crossed = 200, 0, 0
    for _ in range(count):
        T = rand_traceless(rng, 2, maxden=3)
        if T.is_zero():
            T = Matrix([[1, 0], [0, -1]])
        spec = rand_spec(rng, 2)
        coeffs = rand_coeffs(rng)
        d = decompose(T, spec, coeffs, method="closed-form")
        D = Matrix.diag(spec.diagonal())
        ok = verify(d).ok and all(is_similar_to_model(a, spec) and certifies(s, a, D) for a, s in zip(d.A, d.S))
        if spec.q == 2:
            g = decompose(T, spec, coeffs, method="general")
            ok = ok and verify(g).ok
            crossed += 1
        if not ok:
            bad += 1
    record(acceptance_log, 4, "2x2 closed form", bad == 0,
           f"{count - bad}/{count} exact, {crossed} cross-checked against the block construction")


def test_criterion_5_prime_selection(acceptance_log):
    limit = 10**6
    start = time.perf_counter()
    chosen = [select_prime(n).p for n in range(2, limit + 1)]
    elapsed = time.perf_counter() - start
    bounds_ok = all(n + 2 <= 2 * p <= 2 * n for n, p in zip(range(2, limit + 1), chosen))
    primes_ok = all(sympy.isprime(p) for p in set(chosen))
    record(acceptance_log, 5, "prime selection", bounds_ok and primes_ok and elapsed < 30,
           f"2 <= n <= {limit}, bounds {'ok' if bounds_ok else 'violated'}, primality checked by sympy, "
           f"{elapsed:.1f}s, limit 30s")


POLYNOMIALS = ["X1", "X1*X2 - X2*X1", "X1*X1*X2 - X2*X1*X1"]


def test_criterion_6_polynomial_images(acceptance_log, tmp_path, capsys):
    rng = random.Random(66)
    runs, bad = 0, []
    for text in POLYNOMIALS:
        for n in range(2, 9):
            T = rand_traceless(rng, n)
            coeffs = rand_coeffs(rng)
            tpath = tmp_path / f"T{n}.json"
            tpath.write_text(json.dumps(T.to_json()))
            out = tmp_path / "result.json"
            code = cli_main(["waring-poly", "--f", text, "--n", str(n), "--input", str(tpath),
                             "--alphas=" + ",".join(coeffs.to_json()), "--budget", "10000", "--seed", "0",
                             "--out", str(out)])
            capsys.readouterr()
            runs += 1
            if code != 0:
                bad.append((text, n, f"exit {code}"))
                continue
            doc = json.loads(out.read_text())
            f = parse(doc["f"])
            images = [Matrix.from_json(doc[f"A{i}"]) for i in (1, 2, 3)]
            for i, img in enumerate(images, start=1):
                tup = [Matrix.from_json(m) for m in doc["tuples"][f"A{i}"]]
                if evaluate(f, tup) != img:
                    bad.append((text, n, f"A{i}"))
            a = [mpq(x) for x in doc["alphas"]]
            if images[0].scale(a[0]) + images[1].scale(a[1]) + images[2].scale(a[2]) != T:
                bad.append((text, n, "sum"))
    record(acceptance_log, 6, "every term re-evaluates from its tuple", not bad,
           f"{runs - len(bad)}/{runs} runs, 3 polynomials x n in [2, 8], budget 10^4, seed 0"
           + (f"; failures {bad}" if bad else ""))


def test_criterion_7_two_term_obstruction(acceptance_log):
    rng = random.Random(77)
    spec = ModelSpectrum.of(6, [1, 2, 3])
    D = model_matrix(spec)
    count, bad = 1000, 0
    for _ in range(count):
        A1 = conjugate(D, rand_invertible(rng, 6))
        A2 = conjugate(D, rand_invertible(rng, 6))
        a1, a2 = rand_rational(rng, nonzero=True), rand_rational(rng, nonzero=True)
        r = two_term_obstruction(6, spec, (a1, a2), A1, A2)
        if not (r.rank_I_minus_a1A1 >= 5 and r.rank_a2A2_plus_nE <= 4 and r.differs_from_T):
            bad += 1
    record(acceptance_log, 7, "two-term obstruction at n=6, q=3", bad == 0, f"{count - bad}/{count} pairs")


def test_criterion_8_degenerate_inputs(acceptance_log):
    outcomes = {}
    spec = ModelSpectrum.of(3, [1, 2])
    coeffs = Coefficients(1, 1, -2)

    d = decompose(Matrix.zeros(3), spec, coeffs)
    outcomes["zero T"] = d.A == (model_matrix(spec),) * 3 and verify(d).ok

    try:
        decompose(Matrix.diag([1, 2, 0]), spec, coeffs)
        outcomes["nonzero trace"] = False
    except TraceError as exc:
        outcomes["nonzero trace"] = exc.trace == 3 and "3" in str(exc)

    try:
        prescribe_diagonal(Matrix.diag([2, 2, 2]), [1, 2, 3])
        outcomes["scalar B"] = False
    except PreconditionError:
        outcomes["scalar B"] = True

    rejected = []
    for n, lams in ((4, [1]), (5, [1, 2]), (2, [1, 2, 3])):
        try:
            ModelSpectrum(n, len(lams), tuple(lams))
            rejected.append(False)
        except PreconditionError:
            rejected.append(True)
    outcomes["q out of range"] = all(rejected)

    ok = all(outcomes.values())
    record(acceptance_log, 8, "degenerate inputs", ok, ", ".join(f"{k}: {'ok' if v else 'wrong'}" for k, v in outcomes.items()))
