"""Dense exact matrices over the rationals.

Matrices are immutable; every operation returns a new matrix. Column vectors
are plain ``n x 1`` matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .scalar import Rational, as_rational, is_scalar_value, parse_scalar, render_scalar

_ZERO = mpq(0)
_ONE = mpq(1)


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


_set = object.__setattr__


class Matrix:
    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], rows: Optional[int] = None, cols: Optional[int] = None):
        table = tuple(tuple(as_rational(x) for x in row) for row in data)
        if rows is None:
            rows = len(table)
        if cols is None:
            cols = len(table[0]) if table else 0
        if rows <= 0 or cols <= 0:
            raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
        if len(table) != rows or any(len(r) != cols for r in table):
            raise DimensionError(f"ragged or mis-sized entries for a {rows}x{cols} matrix")
        _set(self, "rows", rows)
        _set(self, "cols", cols)
        _set(self, "_data", table)
        _set(self, "_hash", None)

    @classmethod
    def _raw(cls, table: tuple) -> "Matrix":
        # trusted constructor: table is a tuple of tuples of Fractions
        m = cls.__new__(cls)
        _set(m, "rows", len(table))
        _set(m, "cols", len(table[0]))
        _set(m, "_data", table)
        _set(m, "_hash", None)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self._data,))

    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        if rows <= 0 or cols <= 0:
            raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
        return cls._raw(tuple((_ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([_ONE] * n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        vals = [as_rational(x) for x in entries]
        n = len(vals)
        if n == 0:
            raise DimensionError("empty diagonal")
        return cls._raw(tuple(tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, j: int, cols: Optional[int] = None) -> "Matrix":
        """Matrix unit with a single 1 at (i, j)."""
        cols = n if cols is None else cols
        return cls._raw(
            tuple(tuple(_ONE if (r == i and c == j) else _ZERO for c in range(cols)) for r in range(n))
        )

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls([[x] for x in entries])

    @classmethod
    def from_json(cls, obj) -> "Matrix":
        if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
            raise DimensionError("matrix JSON must be a non-empty array of rows")
        return cls([[parse_scalar(x) if isinstance(x, str) else as_rational(x) for x in row] for row in obj])

    def to_json(self) -> list[list[str]]:
        return [[render_scalar(x) for x in row] for row in self._data]

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list[list[Rational]]:
        return [list(r) for r in self._data]

    def diagonal(self) -> list[Rational]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            _set(self, "_hash", hash(self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(render_scalar(x) for x in r) + "]" for r in self._data)
        return f"Matrix([{body}])"

    def __str__(self) -> str:
        cells = [[render_scalar(x) for x in r] for r in self._data]
        width = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)

    # arithmetic

    def _check_same_shape(self, other: "Matrix", op: str) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other, "add")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other, "subtract")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._data))

    def scale(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._data))

    def __rmul__(self, c) -> "Matrix":
        if is_scalar_value(c):
            return self.scale(c)
        return NotImplemented

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols_b = tuple(zip(*other._data))
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            if not nz:
                out.append((_ZERO,) * other.cols)
                continue
            out.append(tuple(sum((a * col[k] for k, a in nz), _ZERO) for col in cols_b))
        return Matrix._raw(tuple(out))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        if is_scalar_value(other):
            return self.scale(other)
        return NotImplemented

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self._data)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def trace(self) -> Rational:
        self._require_square("trace")
        return sum((self._data[i][i] for i in range(self.rows)), _ZERO)

    def _require_square(self, what: str) -> None:
        if not self.is_square:
            raise DimensionError(f"{what} needs a square matrix, got {self.rows}x{self.cols}")

    # predicates

    def is_zero(self) -> bool:
        return all(not a for r in self._data for a in r)

    def is_diagonal(self) -> bool:
        return all(not self._data[i][j] for i in range(self.rows) for j in range(self.cols) if i != j)

    def is_scalar(self) -> bool:
        self._require_square("scalar test")
        c = self._data[0][0]
        return self.is_diagonal() and all(self._data[i][i] == c for i in range(self.rows))

    def is_lower_triangular(self) -> bool:
        return all(not self._data[i][j] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_upper_triangular(self) -> bool:
        return all(not self._data[i][j] for i in range(self.rows) for j in range(min(i, self.cols)))

    # elimination

    def rref(self) -> tuple["Matrix", int, "Matrix"]:
        """Reduced row echelon form ``R``, the rank, and an invertible ``P`` with ``P @ A == R``.

        Pivots are the first nonzero entry scanning each column top to bottom.
        """
        R, P, _, rank = _eliminate(self, track=True)
        return R, rank, P

    def rank(self) -> int:
        return _eliminate(self, track=False)[3]

    def kernel_basis(self) -> list["Matrix"]:
        """Basis of the right null space as column vectors.

        Each vector is scaled to a primitive integer vector.
        """
        R, _, pivots, rank = _eliminate(self, track=False)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vec = [_ZERO] * self.cols
            vec[free] = _ONE
            for r, pc in enumerate(pivots):
                vec[pc] = -R._data[r][free]
            basis.append(Matrix.column(_primitive(vec)))
        return basis

    def inverse(self) -> "Matrix":
        self._require_square("inverse")
        R, P, _, rank = _eliminate(self, track=True)
        if rank < self.rows:
            raise SingularMatrixError(f"matrix is not invertible (rank {rank} < {self.rows})")
        return P

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    # blocks

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        """Submatrix of rows ``r0:r1`` and columns ``c0:c1``."""
        if not (0 <= r0 < r1 <= self.rows and 0 <= c0 < c1 <= self.cols):
            raise DimensionError(f"block [{r0}:{r1}, {c0}:{c1}] out of range for {self.rows}x{self.cols}")
        return Matrix._raw(tuple(r[c0:c1] for r in self._data[r0:r1]))


def _primitive(vec: list[Rational]) -> list[Rational]:
    den = lcm(*(int(x.denominator) for x in vec))
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return [mpq(v) for v in ints]


def _eliminate(A: Matrix, track: bool):
    """Gauss-Jordan elimination. Returns (R, P, pivot_columns, rank)."""
    m, n = A.rows, A.cols
    rows = [list(r) for r in A._data]
    P = [[_ONE if i == j else _ZERO for j in range(m)] for i in range(m)] if track else None
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if track:
                P[r], P[piv] = P[piv], P[r]
        pr = rows[r]
        inv_p = 1 / pr[c]
        if inv_p != 1:
            rows[r] = pr = [x * inv_p for x in pr]
            if track:
                P[r] = [x * inv_p for x in P[r]]
        ppr = P[r] if track else None
        for i in range(m):
            if i == r:
                continue
            f = rows[i][c]
            if not f:
                continue
            ri = rows[i]
            rows[i] = [a - f * b if b else a for a, b in zip(ri, pr)]
            if track:
                P[i] = [a - f * b if b else a for a, b in zip(P[i], ppr)]
        pivots.append(c)
        r += 1
    R = Matrix._raw(tuple(tuple(x) for x in rows))
    Pm = Matrix._raw(tuple(tuple(x) for x in P)) if track else None
    return R, Pm, pivots, r


# module level helpers


def identity(n: int) -> Matrix:
    return Matrix.identity(n)


def mul(A: Matrix, B: Matrix) -> Matrix:
    return A @ B


def add(A: Matrix, B: Matrix) -> Matrix:
    return A + B


def sub(A: Matrix, B: Matrix) -> Matrix:
    return A - B


def scale(c, A: Matrix) -> Matrix:
    return A.scale(c)


def transpose(A: Matrix) -> Matrix:
    return A.transpose()


def trace(A: Matrix) -> Rational:
    return A.trace()


def rref(A: Matrix):
    return A.rref()


def rank(A: Matrix) -> int:
    return A.rank()


def kernel_basis(A: Matrix) -> list[Matrix]:
    return A.kernel_basis()


def inverse(A: Matrix) -> Matrix:
    return A.inverse()


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    rows = blocks[0].rows
    for b in blocks:
        if b.rows != rows:
            raise DimensionError(f"cannot stack {blocks[0].shape} beside {b.shape}")
    return Matrix._raw(tuple(sum((b._data[i] for b in blocks), ()) for i in range(rows)))


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = blocks[0].cols
    for b in blocks:
        if b.cols != cols:
            raise DimensionError(f"cannot stack {blocks[0].shape} above {b.shape}")
    return Matrix._raw(sum((b._data for b in blocks), ()))


def assemble_blocks(grid: Sequence[Sequence[Optional[Matrix]]]) -> Matrix:
    """Assemble a block matrix. ``None`` or ``0`` entries denote zero blocks.

    Every block row must contain at least one real matrix fixing its height,
    and likewise for every block column.
    """
    nr = len(grid)
    nc = len(grid[0])
    if any(len(r) != nc for r in grid):
        raise DimensionError("ragged block grid")
    heights: list[Optional[int]] = [None] * nr
    widths: list[Optional[int]] = [None] * nc
    for i, brow in enumerate(grid):
        for j, b in enumerate(brow):
            if isinstance(b, Matrix):
                if heights[i] is None:
                    heights[i] = b.rows
                elif heights[i] != b.rows:
                    raise DimensionError(f"block row {i}: heights {heights[i]} and {b.rows} disagree")
                if widths[j] is None:
                    widths[j] = b.cols
                elif widths[j] != b.cols:
                    raise DimensionError(f"block column {j}: widths {widths[j]} and {b.cols} disagree")
            elif b is not None and b != 0:
                raise TypeError(f"block ({i}, {j}) is neither a Matrix nor a zero marker")
    if nr == nc:
        # square grid: diagonal blocks are square, so a zero row/column borrows its partner's size
        for k in range(nr):
            if heights[k] is None:
                heights[k] = widths[k]
            if widths[k] is None:
                widths[k] = heights[k]
    if None in heights or None in widths:
        raise DimensionError("cannot infer the size of an all-zero block row or column")
    rows = []
    for i, brow in enumerate(grid):
        filled = [b if isinstance(b, Matrix) else Matrix.zeros(heights[i], widths[j]) for j, b in enumerate(brow)]
        rows.append(hstack(filled))
    return vstack(rows)


def extract_block(A: Matrix, row_range: tuple[int, int], col_range: tuple[int, int]) -> Matrix:
    return A.block(row_range[0], row_range[1], col_range[0], col_range[1])


def block_diag(*blocks: Matrix) -> Matrix:
    n = len(blocks)
    return assemble_blocks([[b if i == j else None for j, b in enumerate(blocks)] for i in range(n)])


def conjugate(A: Matrix, S: Matrix, S_inv: Optional[Matrix] = None) -> Matrix:
    """Return ``S @ A @ S^-1``."""
    A._require_square("conjugation")
    if S.shape != A.shape:
        raise DimensionError(f"conjugator {S.rows}x{S.cols} does not match {A.rows}x{A.cols}")
    if S_inv is None:
        S_inv = S.inverse()
    return S @ A @ S_inv


@dataclass(frozen=True)
class PermutationMap:
    """Bijection ``i -> images[i]`` on ``{0, ..., n-1}``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation of 0..{len(imgs) - 1}: {imgs}")

    @property
    def size(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "PermutationMap":
        return cls(tuple(range(n)))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "PermutationMap":
        imgs = list(range(n))
        imgs[i], imgs[j] = imgs[j], imgs[i]
        return cls(tuple(imgs))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "PermutationMap":
        inv = [0] * self.size
        for i, p in enumerate(self.images):
            inv[p] = i
        return PermutationMap(tuple(inv))

    def compose(self, other: "PermutationMap") -> "PermutationMap":
        """``self o other``: apply ``other`` first."""
        if self.size != other.size:
            raise DimensionError("permutation sizes differ")
        return PermutationMap(tuple(self.images[other.images[i]] for i in range(self.size)))

    def matrix(self) -> Matrix:
        """Permutation matrix ``P`` with ``P e_i = e_{p(i)}``."""
        n = self.size
        return Matrix._raw(
            tuple(
                tuple(_ONE if self.images[j] == i else _ZERO for j in range(n)) for i in range(n)
            )
        )


def permutation_conjugate(A: Matrix, p: PermutationMap) -> Matrix:
    """``P A P^-1``; entry (i, j) of the result is entry (p^-1(i), p^-1(j)) of A."""
    A._require_square("permutation conjugation")
    if p.size != A.rows:
        raise DimensionError(f"permutation of size {p.size} applied to {A.rows}x{A.cols}")
    pinv = p.inverse().images
    d = A._data
    return Matrix._raw(tuple(tuple(d[pinv[i]][pinv[j]] for j in range(A.cols)) for i in range(A.rows)))
