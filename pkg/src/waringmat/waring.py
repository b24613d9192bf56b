"""Three-term decomposition of trace-zero matrices into conjugates of a model diagonal.

``decompose(T, spec, coeffs)`` returns ``A1, A2, A3`` and invertible ``S1, S2, S3``
with ``T = a1*A1 + a2*A2 + a3*A3`` and ``Ai = Si D Si^-1`` where
``D = diag(l1, ..., lq, 0, ..., 0)``. Every result is re-verified before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .constructions import (
    ModelSpectrum,
    PreconditionError,
    SimilarityWitness,
    certifies,
    complete_block_to_model,
    diagonalize_with_spectrum,
    is_similar_to_model,
    model_matrix,
    nonscalar_principal_pair,
    perturbing_conjugator,
    prescribe_diagonal,
)
from .matrix import Matrix, PermutationMap, assemble_blocks, block_diag
from .scalar import Rational, as_rational, render_scalar


class TraceError(PreconditionError):
    def __init__(self, trace: Rational):
        super().__init__(f"input matrix must have trace 0, got trace {render_scalar(trace)}")
        self.trace = trace


class VerificationError(AssertionError):
    """A constructed decomposition failed its own exact re-check (a bug guard)."""


@dataclass(frozen=True)
class Coefficients:
    alpha1: Rational
    alpha2: Rational
    alpha3: Rational

    def __post_init__(self):
        vals = [as_rational(a) for a in (self.alpha1, self.alpha2, self.alpha3)]
        for name, v in zip(("alpha1", "alpha2", "alpha3"), vals):
            object.__setattr__(self, name, v)
        if any(v == 0 for v in vals):
            raise PreconditionError("coefficients must all be nonzero")
        if sum(vals) != 0:
            raise PreconditionError(f"coefficients must sum to 0, got {render_scalar(sum(vals))}")

    @classmethod
    def of(cls, values: Sequence) -> "Coefficients":
        if len(values) != 3:
            raise PreconditionError(f"expected three coefficients, got {len(values)}")
        return cls(*values)

    def __iter__(self):
        return iter((self.alpha1, self.alpha2, self.alpha3))

    def to_json(self) -> list[str]:
        return [render_scalar(a) for a in self]


@dataclass
class Report:
    """Named exact checks, each True (PASS) or False (FAIL)."""

    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = bool(ok)
        if detail:
            self.details[name] = detail

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def lines(self) -> list[str]:
        out = []
        for k, v in self.checks.items():
            line = f"{'PASS' if v else 'FAIL'} {k}"
            if k in self.details:
                line += f" ({self.details[k]})"
            out.append(line)
        return out

    def to_json(self) -> dict:
        return {k: ("PASS" if v else "FAIL") for k, v in self.checks.items()}


@dataclass(frozen=True)
class Decomposition:
    spec: ModelSpectrum
    coeffs: Coefficients
    T: Matrix
    A: tuple[Matrix, Matrix, Matrix]
    S: tuple[Matrix, Matrix, Matrix]
    report: Report = field(compare=False)

    @property
    def witnesses(self) -> tuple[SimilarityWitness, ...]:
        D = model_matrix(self.spec)
        return tuple(SimilarityWitness(s, a, D) for s, a in zip(self.S, self.A))


def verify_parts(
    T: Matrix,
    spec: ModelSpectrum,
    coeffs: Coefficients,
    A: Sequence[Matrix],
    S: Sequence[Matrix],
) -> Report:
    """Recheck every claim of a decomposition from its raw parts."""
    report = Report()
    n = spec.n
    shapes_ok = T.shape == (n, n) and all(m.shape == (n, n) for m in list(A) + list(S))
    report.add("shapes", shapes_ok)
    if not shapes_ok:
        return report
    tr = T.trace()
    report.add("trace_zero", tr == 0, f"trace {render_scalar(tr)}")
    combo = A[0].scale(coeffs.alpha1) + A[1].scale(coeffs.alpha2) + A[2].scale(coeffs.alpha3)
    report.add("linear_combination", combo == T)
    D = model_matrix(spec)
    for i, (a, s) in enumerate(zip(A, S), start=1):
        report.add(f"witness_A{i}", certifies(s, a, D))
    return report


def verify(d: Decomposition) -> Report:
    return verify_parts(d.T, d.spec, d.coeffs, d.A, d.S)


def _check_inputs(T: Matrix, spec: ModelSpectrum) -> None:
    if T.shape != (spec.n, spec.n):
        raise PreconditionError(f"T is {T.rows}x{T.cols} but the model has size {spec.n}")
    tr = T.trace()
    if tr != 0:
        raise TraceError(tr)


def decompose(T: Matrix, spec: ModelSpectrum, coeffs: Coefficients, method: str = "auto") -> Decomposition:
    """Fail-closed decomposition of a trace-zero ``T``.

    ``method`` selects the 2x2 route: ``"closed-form"`` or ``"general"`` (the
    block construction, valid at n = 2 only when q = 2). ``"auto"`` uses the
    closed form for n = 2 and the block construction otherwise.
    """
    _check_inputs(T, spec)
    n = spec.n
    if method not in ("auto", "closed-form", "general"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed-form" and n != 2:
        raise PreconditionError("the closed form only applies to 2x2 matrices")
    if method == "general" and n == 2 and spec.q != 2:
        raise PreconditionError("the block construction needs q = 2 when n = 2")
    if T.is_zero():
        D = model_matrix(spec)
        A = (D, D, D)
        S = (Matrix.identity(n),) * 3
    elif n == 2 and method != "general":
        A, S = _decompose_2x2(T, spec, coeffs)
    else:
        A, S = _decompose_general(T, spec, coeffs)
    report = verify_parts(T, spec, coeffs, A, S)
    if not report.ok:
        raise VerificationError(f"decomposition failed checks: {', '.join(report.failures())}")
    return Decomposition(spec, coeffs, T, tuple(A), tuple(S), report)


def _decompose_2x2(T: Matrix, spec: ModelSpectrum, coeffs: Coefficients):
    """Closed form for 2x2 matrices via the rank-one idempotents."""
    a1, a2, a3 = coeffs
    l1 = spec.lambdas[0]
    l2 = spec.lambdas[1] if spec.q == 2 else mpq(0)
    # D = (l1 - l2) diag(1, 0) + l2 I, and the l2 I parts cancel since the alphas sum to 0
    scaled = T.scale(1 / (l1 - l2))
    half = (a1 - a2) / 2
    pd = prescribe_diagonal(scaled, [half, -half])
    gamma, delta = pd.C[0, 1], pd.C[1, 0]
    a = (gamma + (a1 + a2) / 2) / a1
    b = (delta + (a1 + a2) / 2) / a2
    B = (
        Matrix([[1, a], [0, 0]]),
        Matrix([[0, 0], [b, 1]]),
        Matrix([[mpq(1, 2), mpq(1, 2)], [mpq(1, 2), mpq(1, 2)]]),
    )
    assert B[0].scale(a1) + B[1].scale(a2) + B[2].scale(a3) == pd.C
    S_inv = pd.S.inverse()
    I2 = Matrix.identity(2)
    A = tuple(conj_back.scale(l1 - l2) + I2.scale(l2) for conj_back in (S_inv @ Bi @ pd.S for Bi in B))
    S = tuple(diagonalize_with_spectrum(Ai, spec).S for Ai in A)
    return A, S


def _nonscalar_model_conjugate(spec: ModelSpectrum):
    """``(I + E_12) D (I + E_12)^-1``, nonscalar because l1 != l2."""
    n = spec.n
    shear = Matrix.identity(n) + Matrix.unit(n, 0, 1)
    shear_inv = Matrix.identity(n) - Matrix.unit(n, 0, 1)
    return shear @ model_matrix(spec) @ shear_inv, shear


def _decompose_general(T: Matrix, spec: ModelSpectrum, coeffs: Coefficients):
    """Block construction for n >= 3, and for n = q = 2.

    The working matrix is ``G T G^-1``; results are mapped back with ``G^-1`` at the end.
    """
    n, q = spec.n, spec.q
    a1, a2, a3 = coeffs

    pair = nonscalar_principal_pair(T)
    if pair is None:
        raise PreconditionError("T is scalar; a nonzero trace-zero matrix cannot be")
    i, j = pair
    rest = [t for t in range(n) if t not in (i, j)]
    images = [0] * n
    for new, old in enumerate(rest + [i, j]):
        images[old] = new
    perm = PermutationMap(tuple(images))
    G = perm.matrix()
    Tw = G @ T @ G.transpose()

    if q == n:
        A1, S1 = _nonscalar_model_conjugate(spec)
        U = A1
    else:
        T4 = Tw.block(q, n, q, n)
        done = complete_block_to_model(T4.scale(1 / a1), spec)
        A1, S1 = done.A, done.witness.S
        U = done.U
    T1 = Tw.block(0, q, 0, q)
    if (T1 - U.scale(a1)).is_scalar():
        R = perturbing_conjugator(U)
        Rfull = R if q == n else block_diag(R, Matrix.identity(n - q))
        A1 = Rfull @ A1 @ Rfull.inverse()
        S1 = Rfull @ S1
        U = A1.block(0, q, 0, q)

    residual = Tw - A1.scale(a1)
    S1_block = residual.block(0, q, 0, q)
    target = [-a1 * lam for lam in spec.lambdas]
    if S1_block.trace() != sum(target, mpq(0)) or S1_block.is_scalar():
        raise VerificationError("leading residual block lost its trace or became scalar")
    pd = prescribe_diagonal(S1_block, target)
    Q = pd.S if q == n else block_diag(pd.S, Matrix.identity(n - q))
    Q_inv = Q.inverse()
    residual = Q @ residual @ Q_inv
    A1 = Q @ A1 @ Q_inv
    S1 = Q @ S1
    G = Q @ G

    C = residual.block(0, q, 0, q)
    L = Matrix(
        [[lam if r == c else (C[r, c] / a2 if r > c else 0) for c, lam in enumerate(spec.lambdas)]
         for r in range(q)]
    )
    M = Matrix(
        [[lam if r == c else (C[r, c] / a3 if r < c else 0) for c, lam in enumerate(spec.lambdas)]
         for r in range(q)]
    )
    if q == n:
        A2, A3 = L, M
    else:
        S2_block = residual.block(0, q, q, n)
        S3_block = residual.block(q, n, 0, q)
        A2 = assemble_blocks([[L, Matrix.zeros(q, n - q)], [S3_block.scale(1 / a2), Matrix.zeros(n - q)]])
        A3 = assemble_blocks([[M, S2_block.scale(1 / a3)], [Matrix.zeros(n - q, q), Matrix.zeros(n - q)]])
    if A2.scale(a2) + A3.scale(a3) != residual:
        raise VerificationError("triangular split does not reproduce the residual")
    S2 = diagonalize_with_spectrum(A2, spec).S
    S3 = diagonalize_with_spectrum(A3, spec).S

    G_inv = G.inverse()
    A = tuple(G_inv @ X @ G for X in (A1, A2, A3))
    S = tuple(G_inv @ X for X in (S1, S2, S3))
    return A, S


# two-term obstruction


@dataclass(frozen=True)
class ObstructionReport:
    n: int
    q: int
    rank_I_minus_a1A1: int
    rank_a2A2_plus_nE: int
    strict_gap: bool
    differs_from_T: bool

    @property
    def holds(self) -> bool:
        return (
            self.rank_I_minus_a1A1 >= self.n - 1
            and self.rank_a2A2_plus_nE <= self.q + 1
            and self.strict_gap
            and self.differs_from_T
        )

    def lines(self) -> list[str]:
        n, q = self.n, self.q
        return [
            f"{'PASS' if self.rank_I_minus_a1A1 >= n - 1 else 'FAIL'} rank(I - a1*A1) = {self.rank_I_minus_a1A1} >= {n - 1}",
            f"{'PASS' if self.rank_a2A2_plus_nE <= q + 1 else 'FAIL'} rank(a2*A2 + n*E) = {self.rank_a2A2_plus_nE} <= {q + 1}",
            f"{'PASS' if self.strict_gap else 'FAIL'} q + 1 = {q + 1} < n - 1 = {n - 1}",
            f"{'PASS' if self.differs_from_T else 'FAIL'} a1*A1 + a2*A2 != I - n*E",
        ]


def obstruction_target(n: int) -> Matrix:
    """``I - n E`` with ``E`` the idempotent unit at (0, 0); it has trace zero."""
    return Matrix.identity(n) - Matrix.unit(n, 0, 0).scale(n)


def two_term_obstruction(
    n: int,
    spec: ModelSpectrum,
    alphas: Sequence,
    A1: Matrix,
    A2: Matrix,
) -> ObstructionReport:
    """Rank certificate that ``I - nE`` is not ``a1*A1 + a2*A2`` for model conjugates ``A1``, ``A2``."""
    if spec.n != n:
        raise PreconditionError(f"model size {spec.n} does not match n = {n}")
    if n < 6 or not (2 * spec.q >= n and spec.q < n - 2):
        raise PreconditionError(f"need n >= 6 and n/2 <= q < n - 2, got n={n}, q={spec.q}")
    for name, A in (("A1", A1), ("A2", A2)):
        if not is_similar_to_model(A, spec):
            raise PreconditionError(f"{name} is not similar to the model matrix")
    a1, a2 = (as_rational(a) for a in alphas)
    I_n = Matrix.identity(n)
    E = Matrix.unit(n, 0, 0)
    left = (I_n - A1.scale(a1)).rank()
    right = (A2.scale(a2) + E.scale(n)).rank()
    differs = A1.scale(a1) + A2.scale(a2) != obstruction_target(n)
    return ObstructionReport(n, spec.q, left, right, spec.q + 1 < n - 1, differs)

