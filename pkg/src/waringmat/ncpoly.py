"""Noncommutative polynomials over Q in variables X1, X2, ...

Grammar accepted by :func:`parse` (explicit ``*``, no juxtaposition)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | atom
    atom   := INT ('/' INT)? | 'X' INT | '(' expr ')'
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping, Sequence

from gmpy2 import mpq

from .matrix import DimensionError, Matrix
from .scalar import Rational, as_rational, is_scalar_value, render_scalar

Word = tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ZeroPolynomialError(ValueError):
    pass


def _word_key(w: Word):
    return (len(w), w)


class NcPolynomial:
    """Immutable map from words (tuples of 1-based variable indices) to nonzero rationals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] = ()):
        clean: dict[Word, Rational] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, coeff in items:
            word = tuple(int(v) for v in word)
            if any(v < 1 for v in word):
                raise ValueError(f"variable indices must be positive, got {word}")
            c = clean.get(word, mpq(0)) + as_rational(coeff)
            if c:
                clean[word] = c
            else:
                clean.pop(word, None)
        self._terms = tuple(sorted(clean.items(), key=lambda kv: _word_key(kv[0])))

    @classmethod
    def variable(cls, index: int) -> "NcPolynomial":
        return cls({(index,): 1})

    @classmethod
    def constant(cls, c) -> "NcPolynomial":
        return cls({(): c})

    @property
    def terms(self) -> dict[Word, Rational]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Word, Rational]]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        return max(len(w) for w, _ in self._terms)

    def variables(self) -> list[int]:
        return sorted({v for w, _ in self._terms for v in w})

    def num_variables(self) -> int:
        """Largest variable index used (0 for a constant)."""
        vs = self.variables()
        return vs[-1] if vs else 0

    def constant_term(self) -> Rational:
        return self.terms.get((), mpq(0))

    def without_constant(self) -> "NcPolynomial":
        return NcPolynomial({w: c for w, c in self._terms if w})

    # algebra

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return NcPolynomial(list(self._terms) + list(other._terms))

    def __neg__(self) -> "NcPolynomial":
        return NcPolynomial({w: -c for w, c in self._terms})

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "NcPolynomial":
        if isinstance(other, NcPolynomial):
            out: list[tuple[Word, Rational]] = []
            for w1, c1 in self._terms:
                for w2, c2 in other._terms:
                    out.append((w1 + w2, c1 * c2))
            return NcPolynomial(out)
        if is_scalar_value(other):
            return NcPolynomial({w: c * other for w, c in self._terms})
        return NotImplemented

    def __rmul__(self, other) -> "NcPolynomial":
        if is_scalar_value(other):
            return self * other
        return NotImplemented

    # rendering

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"NcPolynomial({render(self)!r})"

    # evaluation

    def __call__(self, *args: Matrix) -> Matrix:
        return evaluate(self, args)


def render(f: NcPolynomial) -> str:
    """Canonical text in graded lexicographic order, e.g. ``5 + X1 - 1/2*X2*X1``."""
    if f.is_zero():
        return "0"
    pieces = []
    for i, (word, c) in enumerate(f):
        neg = c < 0
        mag = -c if neg else c
        factors = [f"X{v}" for v in word]
        if mag != 1 or not factors:
            factors.insert(0, render_scalar(mag))
        body = "*".join(factors)
        if i == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>X\d+)|(?P<op>[-+*/()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
        if kind in ("num", "var") and pos < n and (text[pos].isalnum() or text[pos] == "("):
            raise ParseError("juxtaposition is not allowed; use an explicit '*'", pos)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> NcPolynomial:
        kind, _, pos = self.peek()
        if kind == "end":
            raise ParseError("empty polynomial", pos)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return f

    def expr(self) -> NcPolynomial:
        f = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self) -> NcPolynomial:
        f = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                f = f * self.unary()
            else:
                return f

    def unary(self) -> NcPolynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            g = self.unary()
            return -g if val == "-" else g
        return self.atom()

    def atom(self) -> NcPolynomial:
        kind, val, pos = self.take()
        if kind == "num":
            num = int(val)
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "/":
                self.take()
                dkind, dval, dpos = self.take()
                if dkind != "num":
                    raise ParseError("expected an integer denominator", dpos)
                if int(dval) == 0:
                    raise ParseError("zero denominator", dpos)
                return NcPolynomial.constant(mpq(num, int(dval)))
            return NcPolynomial.constant(num)
        if kind == "var":
            idx = int(val[1:])
            if idx < 1:
                raise ParseError("variable indices start at X1", pos)
            return NcPolynomial.variable(idx)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str) -> NcPolynomial:
    """Parse polynomial text; raises ParseError or ZeroPolynomialError."""
    f = _Parser(text).parse()
    if f.is_zero():
        raise ZeroPolynomialError(f"{text!r} is the zero polynomial")
    return f


def degree(f: NcPolynomial) -> int:
    return f.degree()


def evaluate(f: NcPolynomial, args: Sequence[Matrix]) -> Matrix:
    """Substitute ``args[i-1]`` for ``Xi``; the empty word maps to the identity."""
    args = list(args)
    needed = f.num_variables()
    if len(args) < needed:
        raise ValueError(f"polynomial uses X{needed} but only {len(args)} argument(s) were given")
    if not args:
        raise ValueError("cannot infer the matrix size of a constant without arguments")
    n = args[0].rows
    for i, a in enumerate(args):
        if a.shape != (n, n):
            raise DimensionError(f"argument X{i + 1} is {a.rows}x{a.cols}, expected {n}x{n}")
    # share products along common word prefixes
    cache: dict[Word, Matrix] = {(): Matrix.identity(n)}

    def power(word: Word) -> Matrix:
        if word in cache:
            return cache[word]
        m = power(word[:-1]) @ args[word[-1] - 1]
        cache[word] = m
        return m

    total = Matrix.zeros(n)
    for word, c in f:
        total = total + power(word).scale(c)
    return total
