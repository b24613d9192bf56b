import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from waringmat.constructions import (
    ModelSpectrum,
    NotSimilarError,
    PreconditionError,
    SimilarityWitness,
    certifies,
    complete_block_to_model,
    diagonalize_with_spectrum,
    factor_nonscalar_square,
    factor_rectangular,
    is_similar_to_model,
    leading_model,
    model_matrix,
    perturbing_conjugator,
    prescribe_diagonal,
)
from waringmat.matrix import Matrix, assemble_blocks, conjugate

from strategies import rand_invertible, rand_matrix, rand_nonscalar, rand_rational, rand_spec, seeded

seeds = st.integers(0, 2**32 - 1)


def sympy_similar_to_model(A, spec):
    """Independent oracle: characteristic polynomial matches the model and A has rank q.

    With the distinct nonzero roots simple, rank(A) = q forces the zero eigenspace to
    have full dimension, so A is diagonalizable with the model's spectrum.
    """
    x = sympy.Symbol("x")
    M = sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in r] for r in A.tolist()])
    want = x ** (spec.n - spec.q)
    for lam in spec.lambdas:
        want *= x - sympy.Rational(int(lam.numerator), int(lam.denominator))
    if sympy.expand(M.charpoly(x).as_expr() - want) != 0:
        return False
    return M.rank() == spec.q


# ModelSpectrum and the model matrix


@pytest.mark.parametrize(
    "n,lams,diag",
    [(2, [3], [3, 0]), (3, [1, 2, 3], [1, 2, 3]), (4, [1, -1], [1, -1, 0, 0])],
)
def test_model_matrix_examples(n, lams, diag):
    assert model_matrix(ModelSpectrum.of(n, lams)) == Matrix.diag(diag)


@pytest.mark.parametrize(
    "n,q,lams",
    [(1, 1, [1]), (5, 2, [1, 2]), (3, 4, [1, 2, 3, 4]), (3, 2, [1, 1]), (3, 2, [0, 1]), (3, 2, [1])],
)
def test_spectrum_rejects(n, q, lams):
    with pytest.raises(PreconditionError):
        ModelSpectrum(n, q, tuple(lams))


# similarity certificate


def test_model_is_similar_to_itself():
    spec = ModelSpectrum.of(4, [1, -1])
    assert is_similar_to_model(model_matrix(spec), spec)


def test_lower_shape_example():
    spec = ModelSpectrum.of(2, [2])
    A = Matrix([[2, 0], [3, 0]])
    assert is_similar_to_model(A, spec)
    w = diagonalize_with_spectrum(A, spec)
    assert w.S == Matrix([[2, 0], [3, 1]])
    assert conjugate(Matrix.diag([2, 0]), w.S) == A


def test_identity_not_similar_to_rank_one_model():
    spec = ModelSpectrum.of(2, [1])
    assert not is_similar_to_model(Matrix.identity(2), spec)
    with pytest.raises(NotSimilarError, match="rank"):
        diagonalize_with_spectrum(Matrix.identity(2), spec)


def test_nilpotent_rejected():
    # right ranks for the kernel but not diagonalizable
    spec = ModelSpectrum.of(2, [1])
    assert not is_similar_to_model(Matrix([[0, 1], [0, 0]]), spec)


def test_witness_checked_on_construction():
    spec = ModelSpectrum.of(2, [2])
    with pytest.raises(NotSimilarError):
        SimilarityWitness(Matrix.identity(2), Matrix([[2, 0], [3, 0]]), model_matrix(spec))


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_certificate_agrees_with_sympy(seed):
    rng = seeded(seed)
    n = rng.randint(2, 4)
    spec = rand_spec(rng, n)
    kind = rng.random()
    if kind < 0.5:
        A = conjugate(model_matrix(spec), rand_invertible(rng, n))
    else:
        A = rand_matrix(rng, n, n, -2, 2)
    assert is_similar_to_model(A, spec) == sympy_similar_to_model(A, spec)


@given(seeds)
@settings(max_examples=100)
def test_lower_triangular_shape_is_similar(seed):
    rng = seeded(seed)
    n = rng.randint(2, 7)
    spec = rand_spec(rng, n)
    q = spec.q
    L = Matrix([[spec.lambdas[i] if i == j else (rand_rational(rng) if j < i else 0) for j in range(q)] for i in range(q)])
    blocks = [[L, None], [rand_matrix(rng, n - q, q), 0]] if q < n else [[L]]
    A = assemble_blocks(blocks)
    assert is_similar_to_model(A, spec)
    assert certifies(diagonalize_with_spectrum(A, spec).S, A, model_matrix(spec))


@given(seeds)
@settings(max_examples=100)
def test_upper_triangular_shape_is_similar(seed):
    rng = seeded(seed)
    n = rng.randint(2, 7)
    spec = rand_spec(rng, n)
    q = spec.q
    M = Matrix([[spec.lambdas[i] if i == j else (rand_rational(rng) if j > i else 0) for j in range(q)] for i in range(q)])
    blocks = [[M, rand_matrix(rng, q, n - q)], [None, 0]] if q < n else [[M]]
    A = assemble_blocks(blocks)
    assert is_similar_to_model(A, spec)
    assert certifies(diagonalize_with_spectrum(A, spec).S, A, model_matrix(spec))


# factor_nonscalar_square


def test_factor_square_non_diagonal_input():
    Z = Matrix([[0, 1], [0, 0]])
    assert factor_nonscalar_square(Z) == (Z, Matrix.identity(2))


def test_factor_square_diagonal_input():
    W, X = factor_nonscalar_square(Matrix.diag([1, 2]))
    assert X == Matrix([[1, 1], [0, 1]])
    assert W == Matrix([[1, -1], [0, 2]])
    assert X @ W == Matrix([[1, 1], [0, 2]])


def test_factor_square_repeated_entry():
    Z = Matrix.diag([5, 5, 7])
    W, X = factor_nonscalar_square(Z)
    assert W @ X == Z and not (X @ W).is_diagonal()


@pytest.mark.parametrize("Z", [Matrix([[4]]), Matrix.diag([3, 3, 3])])
def test_factor_square_rejects_scalar(Z):
    with pytest.raises(PreconditionError):
        factor_nonscalar_square(Z)


@given(seeds)
def test_factor_square_property(seed):
    rng = seeded(seed)
    Z = rand_nonscalar(rng, rng.randint(2, 8))
    W, X = factor_nonscalar_square(Z)
    assert W @ X == Z
    assert X.is_invertible()
    assert not (X @ W).is_diagonal()


# factor_rectangular


def test_factor_rectangular_example():
    W, X = factor_rectangular(Matrix([[5]]), 2)
    assert W == Matrix([[5, 1]])
    assert X == Matrix([[1], [0]])
    assert X @ W == Matrix([[5, 1], [0, 0]])


def test_factor_rectangular_zero():
    W, X = factor_rectangular(Matrix.zeros(1), 2)
    assert X @ W == Matrix([[0, 1], [0, 0]])


def test_factor_rectangular_rejects_small_l():
    with pytest.raises(PreconditionError):
        factor_rectangular(Matrix.zeros(2), 2)


@given(seeds)
def test_factor_rectangular_property(seed):
    rng = seeded(seed)
    k = rng.randint(1, 7)
    l = rng.randint(k + 1, 8)
    Z = rand_matrix(rng, k)
    W, X = factor_rectangular(Z, l)
    assert W.shape == (k, l) and X.shape == (l, k)
    assert W @ X == Z
    assert W.block(0, k, 0, k) == Z and not W.block(0, k, k, l).is_zero()
    assert not (X @ W).is_diagonal()


# complete_block_to_model


def check_completion(Z, spec):
    c = complete_block_to_model(Z, spec)
    n, q = spec.n, spec.q
    assert c.A == assemble_blocks([[c.U, c.V], [c.W, Z]])
    assert not c.U.is_scalar()
    assert is_similar_to_model(c.A, spec)
    assert certifies(c.witness.S, c.A, model_matrix(spec))
    P = assemble_blocks([[Matrix.identity(q), c.X], [None, Matrix.identity(n - q)]])
    assert conjugate(c.A, P) == assemble_blocks([[leading_model(spec), None], [c.W, Matrix.zeros(n - q)]])
    return c


def test_complete_block_square_case():
    check_completion(Matrix.diag([1, 2]), ModelSpectrum.of(4, [3, 4]))


def test_complete_block_rectangular_case():
    c = check_completion(Matrix.zeros(1), ModelSpectrum.of(3, [1, 2]))
    assert c.A.shape == (3, 3)


def test_complete_block_rejects_scalar_when_even_split():
    with pytest.raises(PreconditionError):
        complete_block_to_model(Matrix.diag([2, 2]), ModelSpectrum.of(4, [3, 4]))


def test_complete_block_rejects_small_or_full():
    with pytest.raises(PreconditionError):
        complete_block_to_model(Matrix.zeros(1), ModelSpectrum.of(2, [1]))
    with pytest.raises(PreconditionError):
        complete_block_to_model(Matrix.zeros(1), ModelSpectrum.of(3, [1, 2, 3]))


@given(seeds)
@settings(max_examples=100)
def test_complete_block_property(seed):
    rng = seeded(seed)
    n = rng.randint(3, 8)
    spec = rand_spec(rng, n, rng.randint((n + 1) // 2, n - 1))
    k = n - spec.q
    Z = rand_nonscalar(rng, k) if spec.q == k else rand_matrix(rng, k)
    check_completion(Z, spec)


# perturbing_conjugator


def test_perturb_diagonal_input():
    T = Matrix.diag([1, 2])
    R = perturbing_conjugator(T)
    assert R == Matrix([[1, 1], [0, 1]])
    diff = conjugate(T, R) - T
    assert diff[0, 1] == 1 and not diff.is_diagonal()


def test_perturb_off_diagonal_input():
    T = Matrix([[1, 3], [0, 1]])
    R = perturbing_conjugator(T)
    assert R == Matrix.diag([1, 2])
    assert not (conjugate(T, R) - T).is_diagonal()


def test_perturb_rejects_scalar():
    with pytest.raises(PreconditionError):
        perturbing_conjugator(Matrix.diag([4, 4, 4]))


@given(seeds)
def test_perturb_property(seed):
    rng = seeded(seed)
    T = rand_nonscalar(rng, rng.randint(2, 8))
    R = perturbing_conjugator(T)
    assert not (conjugate(T, R) - T).is_diagonal()


# prescribe_diagonal


def test_prescribe_already_in_shape():
    B = Matrix([[0, 1], [1, 0]])
    r = prescribe_diagonal(B, [0, 0])
    assert r.C.diagonal() == [0, 0] and r.S @ B == r.C @ r.S


def test_prescribe_zero_diagonal_from_diag():
    B = Matrix.diag([1, -1])
    r = prescribe_diagonal(B, [0, 0])
    assert r.C.diagonal() == [0, 0]
    assert r.S @ B == r.C @ r.S and r.S.is_invertible()


def test_prescribe_rejects_one_by_one():
    with pytest.raises(PreconditionError, match="1x1"):
        prescribe_diagonal(Matrix([[3]]), [3])


def test_prescribe_rejects_scalar():
    with pytest.raises(PreconditionError):
        prescribe_diagonal(Matrix.diag([2, 2, 2]), [1, 2, 3])


def test_prescribe_reports_both_traces():
    with pytest.raises(PreconditionError, match=r"trace\(B\) = 3.*= 4"):
        prescribe_diagonal(Matrix.diag([1, 2]), [2, 2])


@pytest.mark.parametrize(
    "B,mus",
    [
        (Matrix.diag([1, 2, 2]), [1, 2, 2]),
        (Matrix.diag([1, 2, 2]), [2, 2, 1]),
        (Matrix.diag([0, 5, 5, 5]), [5, 5, 0, 5]),
        (Matrix.diag([3, 1, 1, 1]), [1, 2, 0, 3]),
        (Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), [1, 1, 1]),
    ],
)
def test_prescribe_split_cases(B, mus):
    r = prescribe_diagonal(B, mus)
    assert r.C.diagonal() == [mpq(m) for m in mus]
    assert r.S @ B == r.C @ r.S


@given(seeds)
def test_prescribe_property(seed):
    rng = seeded(seed)
    k = rng.randint(2, 10)
    B = rand_nonscalar(rng, k)
    mus = [rand_rational(rng, -3, 3, 2) for _ in range(k - 1)]
    mus.append(B.trace() - sum(mus))
    r = prescribe_diagonal(B, mus)
    assert r.C.diagonal() == mus
    assert r.C.trace() == B.trace()
    assert r.S.is_invertible() and r.S @ B == r.C @ r.S
