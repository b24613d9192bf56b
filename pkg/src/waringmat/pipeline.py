"""Decompositions whose terms lie in the image of a noncommutative polynomial.

For ``f`` of degree ``m`` and ``n >= m - 1`` we pick a prime ``p`` in
``[n/2 + 1, n]``, search ``M_p(Q)`` for arguments on which ``f`` takes a value
with ``p`` distinct rational eigenvalues, embed that value in ``M_n`` and
decompose ``T`` against the resulting model spectrum. Every term then comes
with an explicit argument tuple, obtained by conjugating the embedded
arguments, on which ``f`` evaluates to it.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import sympy
from gmpy2 import mpq

from .constructions import ModelSpectrum, PreconditionError, diagonalize_with_spectrum
from .matrix import Matrix, block_diag
from .ncpoly import NcPolynomial, evaluate
from .primes import PrimeChoice, select_prime
from .scalar import Rational
from .waring import Coefficients, Decomposition, TraceError, decompose

log = logging.getLogger(__name__)

CHUNK_SIZE = 64


class WitnessNotFound(RuntimeError):
    def __init__(self, p: int, budget: int, seed: int):
        super().__init__(
            f"no value with {p} distinct rational eigenvalues found (budget {budget}, seed {seed})"
        )
        self.p = p
        self.budget = budget
        self.seed = seed


def degree_gate(f: NcPolynomial, p: int) -> bool:
    """True iff ``deg f < 2p``, which rules out identities and central polynomials of ``M_p``."""
    m = f.degree()
    if m < 1:
        raise PreconditionError("the polynomial must have degree at least 1")
    return m < 2 * p


# exact spectra


def charpoly(A: Matrix) -> list[Rational]:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(xI - A)`` (Faddeev-LeVerrier)."""
    n = A.rows
    coeffs = [mpq(1)]
    M = Matrix.zeros(n)
    I = Matrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[-1])
        AM = A @ M
        coeffs.append(-AM.trace() / k)
    return coeffs


def distinct_rational_spectrum(A: Matrix) -> Optional[list[Rational]]:
    """The eigenvalues if ``A`` has ``n`` distinct rational ones, else None.

    Triangular matrices are read off their diagonal. Otherwise the rational
    roots of the characteristic polynomial are extracted. Either way each root
    must leave ``A - mu I`` with rank ``n - 1``.
    """
    n = A.rows
    if A.is_upper_triangular() or A.is_lower_triangular():
        spectrum = A.diagonal()
        if len(set(spectrum)) != n:
            return None
    else:
        x = sympy.Symbol("x")
        coeffs = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in charpoly(A)]
        poly = sympy.Poly(coeffs, x, domain=sympy.QQ)
        if not poly.is_sqf:
            return None
        roots = poly.ground_roots()
        if len(roots) != n:
            return None
        spectrum = sorted(mpq(int(r.p), int(r.q)) for r in roots)
    I = Matrix.identity(n)
    for mu in spectrum:
        if (A - I.scale(mu)).rank() != n - 1:
            return None
    return spectrum


# witness search


@dataclass(frozen=True)
class DiagonalWitness:
    f: NcPolynomial
    p: int
    args: tuple[Matrix, ...]
    value: Matrix
    spectrum: tuple[Rational, ...]
    attempt: int

    def check(self) -> bool:
        if evaluate(self.f, self.args) != self.value:
            return False
        spec = distinct_rational_spectrum(self.value)
        return spec is not None and sorted(spec) == sorted(self.spectrum)


def _shift(p: int) -> Matrix:
    return Matrix([[1 if c == r + 1 else 0 for c in range(p)] for r in range(p)])


def _weighted_lower_shift(p: int) -> Matrix:
    # [N, L] = diag(1, 2, ..., p-1, -c) with distinct entries
    w = [(i + 1) * (i + 2) // 2 for i in range(p - 1)]
    return Matrix([[w[c] if r == c + 1 else 0 for c in range(p)] for r in range(p)])


def _sqrt_unipotent(p: int) -> Matrix:
    """Rational square root of ``I + N`` via the binomial series (finite because N is nilpotent)."""
    N = _shift(p)
    out = Matrix.zeros(p)
    power = Matrix.identity(p)
    coeff = mpq(1)
    for k in range(p):
        out = out + power.scale(coeff)
        coeff = coeff * (mpq(1, 2) - k) / (k + 1)
        power = power @ N
    return out


def _companion(roots: Sequence[int]) -> Matrix:
    """Companion matrix of ``prod(x - r)``."""
    poly = [mpq(1)]
    for r in roots:
        poly = [a - r * b for a, b in zip(poly + [mpq(0)], [mpq(0)] + poly)]
    p = len(roots)
    rows = [[0] * (p - 1) + [-poly[p]]]
    for i in range(1, p):
        rows.append([1 if c == i - 1 else 0 for c in range(p - 1)] + [-poly[p - i]])
    return Matrix(rows)


def structured_candidates(num_vars: int, p: int) -> Iterator[tuple[Matrix, ...]]:
    """Deterministic tuples tried before random sampling."""
    v = max(num_vars, 1)
    I = Matrix.identity(p)
    diagonal_patterns = (
        lambda i, k: (i + 1) * (k + 1),
        lambda i, k: (i + 1) ** (k + 1),
        lambda i, k: i + 1 + k * p,
        lambda i, k: (i + 1) * (k + 1) + (i * i if k else 0),
    )
    for pattern in diagonal_patterns:
        yield tuple(Matrix.diag([pattern(i, k) for i in range(p)]) for k in range(v))
    if p >= 2:
        low = _weighted_lower_shift(p)
        for upper in (_shift(p), _sqrt_unipotent(p), I + _shift(p)):
            for a in range(v):
                for b in range(v):
                    if a == b:
                        continue
                    tup = [I] * v
                    tup[a] = upper
                    tup[b] = low
                    yield tuple(tup)
    yield tuple([_companion(range(1, p + 1))] + [I] * (v - 1))


def _random_tuple(rng: random.Random, num_vars: int, p: int, bound: int) -> tuple[Matrix, ...]:
    style = rng.randrange(3)

    def entry():
        return rng.randint(-bound, bound)

    out = []
    for k in range(max(num_vars, 1)):
        if style == 0:
            out.append(Matrix([[entry() if c >= r else 0 for c in range(p)] for r in range(p)]))
        elif style == 1 and k % 2:
            out.append(Matrix([[entry() if c <= r else 0 for c in range(p)] for r in range(p)]))
        else:
            out.append(Matrix([[entry() for _ in range(p)] for _ in range(p)]))
    return tuple(out)


def _chunk_candidates(num_vars: int, p: int, seed: int, chunk: int, budget: int):
    """Candidates for one chunk, as ``(attempt_index, args)`` pairs, capped by the budget."""
    start = chunk * CHUNK_SIZE
    stop = min(start + CHUNK_SIZE, budget)
    if chunk == 0:
        it = structured_candidates(num_vars, p)
        structured = [c for _, c in zip(range(CHUNK_SIZE), it)]
    else:
        structured = []
    rng = random.Random(f"{seed}/{chunk}")
    for attempt in range(start, stop):
        local = attempt - start
        if local < len(structured):
            yield attempt, structured[local]
        else:
            bound = 1 + attempt * 9 // max(budget, 1)
            yield attempt, _random_tuple(rng, num_vars, p, bound)


def _search_chunk(f: NcPolynomial, p: int, seed: int, chunk: int, budget: int) -> Optional[DiagonalWitness]:
    num_vars = f.num_variables()
    for attempt, args in _chunk_candidates(num_vars, p, seed, chunk, budget):
        value = evaluate(f, args)
        spectrum = distinct_rational_spectrum(value)
        if spectrum is not None:
            return DiagonalWitness(f, p, tuple(args), value, tuple(spectrum), attempt)
    return None


def search_diagonal_witness(
    f: NcPolynomial,
    p: int,
    budget: int = 10_000,
    seed: int = 0,
    workers: int = 1,
) -> Optional[DiagonalWitness]:
    """Find arguments in ``M_p(Q)`` where ``f`` has ``p`` distinct rational eigenvalues.

    Returns None when the budget runs out. The budget is split into chunks of
    ``CHUNK_SIZE`` attempts, each seeded from ``(seed, chunk)``; the reported
    witness is the one from the lowest-indexed successful chunk, so the result
    does not depend on ``workers``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if p < 1:
        raise ValueError("p must be positive")
    n_chunks = -(-budget // CHUNK_SIZE)
    if workers <= 1:
        for chunk in range(n_chunks):
            found = _search_chunk(f, p, seed, chunk, budget)
            if found is not None:
                return found
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for wave in range(0, n_chunks, workers):
            chunks = range(wave, min(wave + workers, n_chunks))
            results = list(pool.map(_search_chunk, [f] * len(chunks), [p] * len(chunks),
                                    [seed] * len(chunks), chunks, [budget] * len(chunks)))
            for found in results:
                if found is not None:
                    return found
    return None


# end to end


@dataclass(frozen=True)
class PolynomialDecomposition:
    """``T = a1*A1 + a2*A2 + a3*A3`` with ``f(tuples[i]) == images[i]``.

    ``decomposition`` is taken against the model of ``f`` minus its constant
    term; ``images[i]`` equals its ``A[i]`` shifted by ``constant * I``.
    """

    f: NcPolynomial
    prime: PrimeChoice
    witness: DiagonalWitness
    spec: ModelSpectrum
    constant: Rational
    decomposition: Decomposition
    images: tuple[Matrix, Matrix, Matrix]
    tuples: tuple[tuple[Matrix, ...], ...]

    @property
    def T(self) -> Matrix:
        return self.decomposition.T

    @property
    def coeffs(self) -> Coefficients:
        return self.decomposition.coeffs

    def check(self) -> dict[str, bool]:
        out = {}
        for i, (img, tup) in enumerate(zip(self.images, self.tuples), start=1):
            out[f"image_A{i}"] = evaluate(self.f, tup) == img
        a1, a2, a3 = self.coeffs
        combo = self.images[0].scale(a1) + self.images[1].scale(a2) + self.images[2].scale(a3)
        out["linear_combination"] = combo == self.T
        out["decomposition"] = self.decomposition.report.ok
        return out


def model_from_witness(witness: DiagonalWitness, n: int) -> ModelSpectrum:
    lambdas = tuple(mu for mu in witness.spectrum if mu != 0)
    return ModelSpectrum(n, len(lambdas), lambdas)


def waring_for_polynomial(
    f: NcPolynomial,
    n: int,
    T: Matrix,
    coeffs: Coefficients,
    budget: int = 10_000,
    seed: int = 0,
    workers: int = 1,
) -> PolynomialDecomposition:
    if n < 2:
        raise PreconditionError(f"n must be at least 2, got {n}")
    if f.is_zero():
        raise PreconditionError("the zero polynomial is not allowed")
    m = f.degree()
    if m < 1:
        raise PreconditionError("the polynomial must have degree at least 1 (got a constant)")
    if n < m - 1:
        raise PreconditionError(f"need n >= deg f - 1, got n = {n}, deg f = {m}")
    if T.shape != (n, n):
        raise PreconditionError(f"T is {T.rows}x{T.cols}, expected {n}x{n}")
    tr = T.trace()
    if tr != 0:
        raise TraceError(tr)

    prime = select_prime(n)
    p = prime.p
    if not degree_gate(f, p):
        raise AssertionError(f"degree gate failed for deg {m}, p = {p}")

    constant = f.constant_term()
    g = f.without_constant()
    witness = search_diagonal_witness(g, p, budget, seed, workers)
    if witness is None:
        raise WitnessNotFound(p, budget, seed)
    log.info("witness found at attempt %d with spectrum %s", witness.attempt, witness.spectrum)

    spec = model_from_witness(witness, n)
    if not (2 * spec.q >= n):
        raise AssertionError("derived q fell below n/2")

    pad = n - p
    embedded_args = tuple(a if pad == 0 else block_diag(a, Matrix.zeros(pad)) for a in witness.args)
    embedded_value = witness.value if pad == 0 else block_diag(witness.value, Matrix.zeros(pad))
    K = diagonalize_with_spectrum(embedded_value, spec).S
    K_inv = K.inverse()

    dec = decompose(T, spec, coeffs)
    shift = Matrix.identity(n).scale(constant)
    images = tuple(A + shift for A in dec.A)
    tuples = []
    for S in dec.S:
        C = S @ K_inv
        C_inv = K @ S.inverse()
        tuples.append(tuple(C @ a @ C_inv for a in embedded_args))
    result = PolynomialDecomposition(f, prime, witness, spec, constant, dec, images, tuple(tuples))
    failed = [k for k, ok in result.check().items() if not ok]
    if failed:
        raise AssertionError(f"polynomial decomposition failed checks: {', '.join(failed)}")
    return result
