"""Sparse Laurent polynomials over the integers.

Elements of the character ring ``Z[l1^±1, ..., lr^±1]`` of a split torus.
A polynomial is an immutable map from exponent tuples to nonzero ints.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]
Matrix = Sequence[Sequence[int]]


class StructuralError(ValueError):
    """Operands or parameters have incompatible shapes."""


class LaurentPoly:
    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Monomial, int] | None = None):
        if rank < 1:
            raise StructuralError(f"rank must be positive, got {rank}")
        self.rank = rank
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(a) for a in mono)
            if len(mono) != rank:
                raise StructuralError(
                    f"monomial {mono} has length {len(mono)}, expected {rank}")
            if c:
                clean[mono] = clean.get(mono, 0) + int(c)
        self._terms = {m: clean[m] for m in sorted(clean) if clean[m]}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, rank: int, terms: dict[Monomial, int]) -> LaurentPoly:
        # terms already validated, nonzero; only needs sorting
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = {m: terms[m] for m in sorted(terms)}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, rank: int) -> LaurentPoly:
        return cls(rank)

    @classmethod
    def constant(cls, c: int, rank: int) -> LaurentPoly:
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def one(cls, rank: int) -> LaurentPoly:
        return cls.constant(1, rank)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: int = 1) -> LaurentPoly:
        exponents = tuple(exponents)
        return cls(len(exponents), {exponents: coeff})

    @classmethod
    def var(cls, i: int, rank: int, power: int = 1) -> LaurentPoly:
        """The character ``l_{i+1}^power`` (``i`` is zero-based)."""
        if not 0 <= i < rank:
            raise StructuralError(f"variable index {i} out of range for rank {rank}")
        exps = [0] * rank
        exps[i] = power
        return cls(rank, {tuple(exps): 1})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def coefficient(self, mono: Sequence[int]) -> int:
        return self._terms.get(tuple(mono), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.rank)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.rank}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.rank)
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")
        if other.rank != self.rank:
            raise StructuralError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return LaurentPoly._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self.rank, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentPoly._raw(self.rank, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) == 1:
                (m, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly(self.rank,
                                       {tuple(n * a for a in m): c if n % 2 else 1})
            raise ValueError("only monomials with unit coefficient are invertible")
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> LaurentPoly:
        if not c:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly._raw(self.rank, {m: c * v for m, v in self._terms.items()})

    def shift(self, mono: Sequence[int]) -> LaurentPoly:
        """Multiply by the monomial ``l^mono``."""
        return LaurentPoly._raw(
            self.rank,
            {tuple(a + b for a, b in zip(m, mono)): c for m, c in self._terms.items()})

    def augment(self) -> int:
        return augment(self)

    def act(self, matrix: Matrix) -> LaurentPoly:
        return act(self, matrix)


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def augment(p: LaurentPoly) -> int:
    """Evaluate every variable at 1, i.e. take the dimension of a character."""
    return sum(c for _, c in p.items())


def determinant(matrix: Matrix) -> int:
    """Exact integer determinant via fraction-free Bareiss elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise StructuralError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def apply_matrix(matrix: Matrix, vec: Sequence[int]) -> Monomial:
    return tuple(sum(m * v for m, v in zip(row, vec)) for row in matrix)


def act(p: LaurentPoly, matrix: Matrix) -> LaurentPoly:
    """Apply a lattice automorphism to every exponent vector of ``p``."""
    if len(matrix) != p.rank or any(len(row) != p.rank for row in matrix):
        raise StructuralError(f"matrix shape does not match rank {p.rank}")
    if determinant(matrix) not in (1, -1):
        raise StructuralError("action matrix is not unimodular")
    return LaurentPoly._raw(p.rank, {apply_matrix(matrix, m): c for m, c in p.items()})


# -- text format -------------------------------------------------------------

def _format_monomial(mono: Monomial) -> str:
    parts = []
    for i, a in enumerate(mono, start=1):
        if a == 1:
            parts.append(f"l{i}")
        elif a:
            parts.append(f"l{i}^{a}")
    return "*".join(parts)


def format_poly(p: LaurentPoly) -> str:
    """Canonical text: terms in lexicographic exponent order."""
    if p.is_zero():
        return "0"
    out = []
    for mono, c in p.items():
        body = _format_monomial(mono)
        mag = abs(c)
        if not body:
            term = str(mag)
        elif mag == 1:
            term = body
        else:
            term = f"{mag}*{body}"
        if not out:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(out)


_TERM_RE = re.compile(r"([+-]?)((?:[^+\-]|(?<=\^)-|(?<=\^\()-)+)")
_FACTOR_RE = re.compile(r"^l(\d+)(?:\^\(?(-?\d+)\)?)?$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    # a '-' right after '^' or '^(' is an exponent sign, not a separator
    terms, pos = [], 0
    for m in _TERM_RE.finditer(text):
        if m.start() != pos:
            break
        terms.append((-1 if m.group(1) == "-" else 1, m.group(2)))
        pos = m.end()
    if pos != len(text) or not terms:
        raise ValueError(f"malformed polynomial: {text!r}")
    return terms


def parse_poly(text: str, rank: int | None = None) -> LaurentPoly:
    """Parse e.g. ``"2 - l1 - l1^-1"`` or ``"3*l1^2*l2^(-1)"``.

    Whitespace is ignored. When ``rank`` is omitted it is the largest
    variable index that appears (at least 1).
    """
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial string")
    parsed: list[tuple[int, dict[int, int]]] = []
    top = 0
    for sign, body in _split_terms(s):
        coeff = sign
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"malformed term {body!r}")
            if factor.isdigit():
                coeff *= int(factor)
                continue
            m = _FACTOR_RE.match(factor)
            if m is None:
                raise ValueError(f"malformed factor {factor!r}")
            idx = int(m.group(1))
            if idx < 1:
                raise ValueError(f"variable index must start at 1: {factor!r}")
            exps[idx] = exps.get(idx, 0) + int(m.group(2) or 1)
            top = max(top, idx)
        parsed.append((coeff, exps))
    if rank is None:
        rank = max(top, 1)
    elif top > rank:
        raise StructuralError(f"variable l{top} exceeds rank {rank}")
    terms: dict[Monomial, int] = {}
    for coeff, exps in parsed:
        mono = tuple(exps.get(i, 0) for i in range(1, rank + 1))
        terms[mono] = terms.get(mono, 0) + coeff
    return LaurentPoly(rank, terms)


def poly_sum(polys: Iterable[LaurentPoly], rank: int) -> LaurentPoly:
    out = LaurentPoly.zero(rank)
    for p in polys:
        out = out + p
    return out
