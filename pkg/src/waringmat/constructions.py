"""Constructive building blocks for decomposing trace-zero matrices.

Each routine returns explicit witnesses (factorisations or similarity
matrices) so callers can re-check the claimed identity exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from .matrix import (
    DimensionError,
    Matrix,
    PermutationMap,
    assemble_blocks,
    block_diag,
    hstack,
    vstack,
)
from .scalar import Rational, as_rational, render_scalar


class PreconditionError(ValueError):
    """An input violates the hypotheses of a construction."""


class NotSimilarError(PreconditionError):
    pass


@dataclass(frozen=True)
class ModelSpectrum:
    """Size ``n``, count ``q`` and the distinct nonzero eigenvalues of the model ``diag(l1..lq, 0..0)``."""

    n: int
    q: int
    lambdas: tuple[Rational, ...]

    def __post_init__(self):
        lams = tuple(as_rational(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lams)
        if self.n < 2:
            raise PreconditionError(f"model size n must be at least 2, got {self.n}")
        if not (2 * self.q >= self.n and self.q <= self.n):
            raise PreconditionError(f"q must satisfy n/2 <= q <= n, got n={self.n}, q={self.q}")
        if len(lams) != self.q:
            raise PreconditionError(f"expected {self.q} eigenvalues, got {len(lams)}")
        if any(x == 0 for x in lams):
            raise PreconditionError("model eigenvalues must be nonzero")
        if len(set(lams)) != len(lams):
            raise PreconditionError("model eigenvalues must be pairwise distinct")

    @classmethod
    def of(cls, n: int, lambdas: Sequence) -> "ModelSpectrum":
        lams = tuple(as_rational(x) for x in lambdas)
        return cls(n, len(lams), lams)

    def diagonal(self) -> list[Rational]:
        return list(self.lambdas) + [mpq(0)] * (self.n - self.q)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "lambdas": [render_scalar(x) for x in self.lambdas]}


def model_matrix(spec: ModelSpectrum) -> Matrix:
    return Matrix.diag(spec.diagonal())


def leading_model(spec: ModelSpectrum) -> Matrix:
    """The ``q x q`` diagonal block ``diag(l1, ..., lq)``."""
    return Matrix.diag(spec.lambdas)


@dataclass(frozen=True)
class SimilarityWitness:
    """An invertible ``S`` with ``target == S @ model @ S^-1``, checked on construction."""

    S: Matrix
    target: Matrix
    model: Matrix = field(repr=False)

    def __post_init__(self):
        if not certifies(self.S, self.target, self.model):
            raise NotSimilarError("similarity witness does not certify its target")


def certifies(S: Matrix, A: Matrix, model: Matrix) -> bool:
    """Exact check of ``A = S model S^-1`` for invertible ``S``."""
    if not (S.is_square and S.shape == A.shape == model.shape):
        return False
    if not S.is_invertible():
        return False
    return A @ S == S @ model


def _shifted(A: Matrix, lam: Rational) -> Matrix:
    if lam == 0:
        return A
    return A - Matrix.identity(A.rows).scale(lam)


def is_similar_to_model(A: Matrix, spec: ModelSpectrum) -> bool:
    """Kernel-dimension certificate: each ``A - l_i I`` has rank ``n-1`` and ``A`` has rank ``q``."""
    if A.shape != (spec.n, spec.n):
        return False
    if A.rank() != spec.q:
        return False
    return all(_shifted(A, lam).rank() == spec.n - 1 for lam in spec.lambdas)


def diagonalize_with_spectrum(A: Matrix, spec: ModelSpectrum) -> SimilarityWitness:
    """Eigenvector basis ``S`` (spectrum order, then the kernel of ``A``) with ``A = S D S^-1``."""
    n = spec.n
    if A.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix, got {A.rows}x{A.cols}")
    columns = []
    for lam in spec.lambdas:
        ker = _shifted(A, lam).kernel_basis()
        if len(ker) != 1:
            raise NotSimilarError(
                f"eigenvalue {render_scalar(lam)}: rank(A - lambda I) = {n - len(ker)}, expected {n - 1}"
            )
        columns.append(ker[0])
    if spec.q < n:
        ker = A.kernel_basis()
        if len(ker) != n - spec.q:
            raise NotSimilarError(f"rank(A) = {n - len(ker)}, expected {spec.q}")
        columns.extend(ker)
    elif A.rank() != n:
        raise NotSimilarError(f"rank(A) = {A.rank()}, expected {n}")
    S = hstack(columns)
    return SimilarityWitness(S, A, model_matrix(spec))


# factorisations ZX with XW non-diagonal


def factor_nonscalar_square(Z: Matrix) -> tuple[Matrix, Matrix]:
    """Return ``(W, X)`` with ``W X = Z``, ``X`` invertible and ``X W`` not diagonal."""
    if not Z.is_square:
        raise DimensionError(f"expected a square matrix, got {Z.rows}x{Z.cols}")
    k = Z.rows
    if k < 2 or Z.is_scalar():
        raise PreconditionError("factor_nonscalar_square needs a nonscalar matrix of size >= 2")
    if not Z.is_diagonal():
        return Z, Matrix.identity(k)
    # shear on the first pair of unequal diagonal entries
    i = 0
    j = next(t for t in range(1, k) if Z[t, t] != Z[0, 0])
    X = Matrix.identity(k) + Matrix.unit(k, i, j)
    X_inv = Matrix.identity(k) - Matrix.unit(k, i, j)
    return Z @ X_inv, X


def factor_rectangular(Z: Matrix, l: int) -> tuple[Matrix, Matrix]:
    """Return ``(W, X)`` with ``W = [Z | Y]`` (``k x l``), ``X = [I; 0]`` (``l x k``) and ``X W`` not diagonal."""
    if not Z.is_square:
        raise DimensionError(f"expected a square matrix, got {Z.rows}x{Z.cols}")
    k = Z.rows
    if l <= k:
        raise PreconditionError(f"factor_rectangular needs l > k, got l={l}, k={k}")
    Y = Matrix.unit(k, 0, 0, cols=l - k)
    W = hstack([Z, Y])
    X = vstack([Matrix.identity(k), Matrix.zeros(l - k, k)])
    return W, X


@dataclass(frozen=True)
class BlockCompletion:
    U: Matrix
    V: Matrix
    W: Matrix
    X: Matrix
    A: Matrix
    witness: SimilarityWitness


def complete_block_to_model(Z: Matrix, spec: ModelSpectrum) -> BlockCompletion:
    """Fill ``[[U, V], [W, Z]]`` around a prescribed ``(n-q) x (n-q)`` block so the result is similar to the model.

    ``U`` is nonscalar. Conjugating ``A`` by ``[[I, X], [0, I]]`` gives ``[[D_q, 0], [W, 0]]``.
    """
    n, q = spec.n, spec.q
    if n < 3:
        raise PreconditionError(f"block completion needs n >= 3, got n={n}")
    if q == n:
        raise PreconditionError("q = n leaves no block to complete")
    if Z.shape != (n - q, n - q):
        raise DimensionError(f"Z must be {n - q}x{n - q}, got {Z.rows}x{Z.cols}")
    if q > n - q:
        W, X = factor_rectangular(Z, q)
    else:
        if Z.is_scalar():
            raise PreconditionError("n = 2q requires a nonscalar Z block")
        W, X = factor_nonscalar_square(Z)
    XW = X @ W
    U = leading_model(spec) - XW
    V = U @ X + XW @ X - X @ Z
    A = assemble_blocks([[U, V], [W, Z]])
    B = assemble_blocks([[leading_model(spec), Matrix.zeros(q, n - q)], [W, Matrix.zeros(n - q)]])
    base = diagonalize_with_spectrum(B, spec)
    # A = P^-1 B P with P = [[I, X], [0, I]]
    P_inv = assemble_blocks([[Matrix.identity(q), -X], [None, Matrix.identity(n - q)]])
    witness = SimilarityWitness(P_inv @ base.S, A, base.model)
    return BlockCompletion(U, V, W, X, A, witness)


def nonscalar_principal_pair(T: Matrix) -> Optional[tuple[int, int]]:
    """First index pair ``i < j`` whose 2x2 principal submatrix is not scalar."""
    k = T.rows
    for i in range(k):
        for j in range(i + 1, k):
            if T[i, j] or T[j, i] or T[i, i] != T[j, j]:
                return i, j
    return None


def perturbing_conjugator(T: Matrix) -> Matrix:
    """Invertible ``R`` with ``R T R^-1 - T`` not diagonal."""
    if not T.is_square:
        raise DimensionError(f"expected a square matrix, got {T.rows}x{T.cols}")
    k = T.rows
    pair = nonscalar_principal_pair(T) if k >= 2 else None
    if pair is None:
        raise PreconditionError("perturbing_conjugator needs a nonscalar matrix of size >= 2")
    i, j = pair
    if not T[i, j] and not T[j, i]:
        # diagonal corner: the shear puts t_jj - t_ii at (i, j)
        return Matrix.identity(k) + Matrix.unit(k, i, j)
    d = [1] * k
    d[j] = 2
    return Matrix.diag(d)


# prescribed diagonal


def _corner_step(B: Matrix, mu: Rational) -> Matrix:
    """Invertible ``S`` such that ``S B S^-1`` has ``mu`` in position (0, 0)."""
    k = B.rows
    x = None
    for i in range(k):
        if any(B[r, i] for r in range(k) if r != i):
            x = [mpq(int(r == i)) for r in range(k)]
            break
    if x is None:
        j = next(t for t in range(1, k) if B[t, t] != B[0, 0])
        x = [mpq(int(r in (0, j))) for r in range(k)]
    Bx = [sum((B[r, c] * x[c] for c in range(k)), mpq(0)) for r in range(k)]
    y = [b - mu * a for a, b in zip(x, Bx)]
    basis = [Matrix.column(x), Matrix.column(y)]
    current = hstack(basis)
    rank = 2
    for i in range(k):
        if rank == k:
            break
        cand = hstack([current, Matrix.column([mpq(int(r == i)) for r in range(k)])])
        if cand.rank() > rank:
            current = cand
            rank += 1
    # columns of `current` form the new basis; S maps old coordinates to new ones
    return current.inverse()


def _first_free_pair(vec: Sequence[Rational]) -> list[Rational]:
    """Nonzero ``a`` with ``a . vec == 0`` for a nonzero vector of length >= 2."""
    m = len(vec)
    r = next(i for i in range(m) if vec[i])
    s = 0 if r != 0 else 1
    a = [mpq(0)] * m
    a[r] = vec[s]
    a[s] = -vec[r]
    return a


def _finish_trailing(C: Matrix, mus: Sequence[Rational]) -> Optional[Matrix]:
    """For ``C[0,0] == mus[0]``, return ``S`` fixing the rest of the diagonal, or None when ``C = diag(mu1, lam I)``."""
    k = C.rows
    C1 = C.block(1, k, 1, k)
    pre = Matrix.identity(k)
    if C1.is_scalar():
        u = list(C.row(0)[1:])
        v = [C[r, 0] for r in range(1, k)]
        if any(v):
            a = _first_free_pair(v)
            pre = Matrix([[1] + a] + [[0] + [int(r == c) for c in range(k - 1)] for r in range(k - 1)])
        elif any(u):
            b = _first_free_pair(u)
            pre = Matrix([[1] + [0] * (k - 1)] + [[b[r]] + [int(r == c) for c in range(k - 1)] for r in range(k - 1)])
        else:
            return None
        C = pre @ C @ pre.inverse()
        C1 = C.block(1, k, 1, k)
    S1 = _prescribe(C1, mus[1:])
    return block_diag(Matrix.identity(1), S1) @ pre


def _prescribe(B: Matrix, mus: Sequence[Rational]) -> Matrix:
    k = B.rows
    S = _corner_step(B, mus[0])
    C = S @ B @ S.inverse()
    if k == 2:
        return S
    rest = _finish_trailing(C, mus)
    if rest is not None:
        return rest @ S
    # C = diag(mu1, lam, ..., lam) with lam != mu1
    lam = C[1, 1]
    if all(m == lam for m in mus[1:]):
        return S
    j = next(t for t in range(1, k) if mus[t] not in (mus[0], lam))
    order = [mus[j]] + list(mus[:j]) + list(mus[j + 1 :])
    S2 = _corner_step(C, mus[j])
    D = S2 @ C @ S2.inverse()
    S3 = _finish_trailing(D, order)
    if S3 is None:
        raise AssertionError("trailing block stayed split after moving a new eigenvalue to the corner")
    # diagonal is now (mu_j, mu_1, ..., mu_{j-1}, mu_{j+1}, ...); move the corner back to position j
    perm = PermutationMap(tuple([j] + list(range(0, j)) + list(range(j + 1, k))))
    return perm.matrix() @ S3 @ S2 @ S


@dataclass(frozen=True)
class PrescribedDiagonal:
    S: Matrix
    C: Matrix


def prescribe_diagonal(B: Matrix, mus: Sequence) -> PrescribedDiagonal:
    """Conjugate a nonscalar ``B`` to ``C = S B S^-1`` whose diagonal is exactly ``mus``.

    Requires ``sum(mus) == trace(B)``.
    """
    if not B.is_square:
        raise DimensionError(f"expected a square matrix, got {B.rows}x{B.cols}")
    mus = [as_rational(m) for m in mus]
    k = B.rows
    if len(mus) != k:
        raise PreconditionError(f"need {k} diagonal targets, got {len(mus)}")
    if k == 1 or B.is_scalar():
        raise PreconditionError("prescribe_diagonal needs a nonscalar matrix (no 1x1 matrix is nonscalar)")
    tr = B.trace()
    if sum(mus, mpq(0)) != tr:
        raise PreconditionError(
            f"trace mismatch: trace(B) = {render_scalar(tr)}, sum of targets = {render_scalar(sum(mus, mpq(0)))}"
        )
    S = _prescribe(B, mus)
    C = S @ B @ S.inverse()
    if C.diagonal() != mus:
        raise AssertionError("prescribed diagonal construction produced the wrong diagonal")
    return PrescribedDiagonal(S, C)
