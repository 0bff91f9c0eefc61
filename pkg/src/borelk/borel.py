"""Borel construction into K_0 of finite approximations of BT.

``K_0(BT_k)`` for a rank-``j`` torus is ``Z[x_1..x_j]/(x_1^{k+1}, ..., x_j^{k+1})``
and the Borel map sends ``l_i`` to ``1 - x_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .completion import (UnsupportedIdealError, degree_basis, expand_monomial,
                         invariant_spanning_set, mu_monomial_lift)
from .laurent import LaurentPoly, Monomial, StructuralError, apply_matrix
from .lattice import hnf, left_kernel
from .rootdata import RootDatum


class NilpotentPoly:
    """Element of ``Z[x_1..x_j]`` with every exponent at most ``level``."""

    __slots__ = ("rank", "level", "_terms")

    def __init__(self, rank: int, level: int, terms: dict[Monomial, int] | None = None):
        if level < 0:
            raise ValueError("level must be >= 0")
        self.rank = rank
        self.level = level
        clean: dict[Monomial, int] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != rank or min(e, default=0) < 0:
                raise StructuralError(f"bad exponent vector {e}")
            if c and max(e, default=0) <= level:
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def one(cls, rank: int, level: int) -> NilpotentPoly:
        return cls(rank, level, {(0,) * rank: 1})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, e: Sequence[int]) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def counit(self) -> int:
        """Set every ``x_i = 0``."""
        return self._terms.get((0,) * self.rank, 0)

    def _check(self, other: NilpotentPoly) -> None:
        if (self.rank, self.level) != (other.rank, other.level):
            raise StructuralError("nilpotent polynomials at different rank or level")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilpotentPoly):
            return NotImplemented
        return (self.rank, self.level, self._terms) == (other.rank, other.level, other._terms)

    def __hash__(self) -> int:
        return hash((self.rank, self.level, tuple(self._terms.items())))

    def __add__(self, other: NilpotentPoly) -> NilpotentPoly:
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return NilpotentPoly(self.rank, self.level, out)

    def __neg__(self) -> NilpotentPoly:
        return NilpotentPoly(self.rank, self.level, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: NilpotentPoly) -> NilpotentPoly:
        return self + (-other)

    def __mul__(self, other: NilpotentPoly) -> NilpotentPoly:
        self._check(other)
        k = self.level
        out: dict[Monomial, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e, default=0) <= k:
                    out[e] = out.get(e, 0) + c1 * c2
        return NilpotentPoly(self.rank, k, out)

    def truncate_total(self, D: int) -> dict[Monomial, int]:
        """Terms of total degree ``< D``."""
        return {e: c for e, c in self._terms.items() if sum(e) < D}

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self._terms), default=None)

    def vector(self, basis: Sequence[Monomial] | None = None) -> list[int]:
        basis = basis if basis is not None else level_basis(self.rank, self.level)
        return [self._terms.get(e, 0) for e in basis]

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x^{e}" for e, c in self._terms.items()) or "0"
        return f"NilpotentPoly(j={self.rank}, k={self.level}: {body})"


def level_basis(rank: int, level: int) -> list[Monomial]:
    """Monomials with every exponent ``<= level``, lexicographic order."""
    return list(itertools.product(range(level + 1), repeat=rank))


def borel_image(p: LaurentPoly, k: int) -> NilpotentPoly:
    """Ring map ``l_i -> 1 - x_i`` into ``Z[x]/(x_i^{k+1})``."""
    out: dict[Monomial, int] = {}
    for mono, c in p.items():
        for e, v in expand_monomial(mono, lambda e: True, k).items():
            out[e] = out.get(e, 0) + c * v
    return NilpotentPoly(p.rank, k, out)


def level_restriction(q: NilpotentPoly) -> NilpotentPoly:
    """Pull back from level ``k`` to level ``k - 1`` (drop exponents equal to ``k``)."""
    if q.level < 1:
        raise ValueError("cannot restrict below level 0")
    return NilpotentPoly(q.rank, q.level - 1, q.terms)


def restriction_matrix(rank: int, k: int) -> list[list[int]]:
    """Coordinate matrix of level ``k -> k - 1``: rows index level ``k-1`` basis."""
    src = level_basis(rank, k)
    dst = level_basis(rank, k - 1)
    pos = {e: i for i, e in enumerate(src)}
    return [[int(pos[e] == j) for j in range(len(src))] for e in dst]


def truncated_vector(p: LaurentPoly, D: int, basis: Sequence[Monomial] | None = None) -> list[int]:
    """Borel image at level ``D``, re-truncated to total degree ``< D``."""
    basis = basis if basis is not None else degree_basis(p.rank, D)
    terms = borel_image(p, D).truncate_total(D)
    return [terms.get(e, 0) for e in basis]


@dataclass
class IsoReport:
    rank: int
    cutoff: int
    matrix: list[list[int]]
    passed: bool

    def to_json(self, emit_matrices: bool = False) -> dict:
        out = {"rank": self.rank, "cutoff": self.cutoff, "size": len(self.matrix),
               "verdict": "PASS" if self.passed else "FAIL"}
        if emit_matrices:
            out["matrix"] = self.matrix
        return out


def completion_iso_check(j: int, d: int) -> IsoReport:
    """Matrix of ``R(T)/I_T^d -> Z[x]/(deg >= d)`` on mu- and x-monomial bases."""
    if d < 1:
        raise ValueError("cutoff must be >= 1")
    basis = degree_basis(j, d)
    # column b is the image of the lift of mu^b
    cols = [truncated_vector(mu_monomial_lift(e), d, basis) for e in basis]
    matrix = [list(row) for row in zip(*cols)]
    eye = [[int(a == b) for b in range(len(basis))] for a in range(len(basis))]
    return IsoReport(j, d, matrix, matrix == eye)


# -- invariants of the truncated x-ring -------------------------------------------------

def _truncated_product(factors: Sequence[dict[Monomial, int]], rank: int, D: int) -> dict[Monomial, int]:
    out = {(0,) * rank: 1}
    for f in factors:
        nxt: dict[Monomial, int] = {}
        for e1, c1 in out.items():
            s1 = sum(e1)
            for e2, c2 in f.items():
                if s1 + sum(e2) < D:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    nxt[e] = nxt.get(e, 0) + c1 * c2
        out = {e: c for e, c in nxt.items() if c}
    return out


def weyl_action_matrix(s, rank: int, D: int) -> list[list[int]]:
    """Rows: images of the degree-``< D`` x-monomials under a lattice automorphism.

    ``x_i`` goes to the truncation of ``1 - borel(l^{s e_i})``.
    """
    basis = degree_basis(rank, D)
    images = []
    for i in range(rank):
        col = apply_matrix(s, tuple(int(a == i) for a in range(rank)))
        lam = borel_image(LaurentPoly.monomial(col), D).truncate_total(D)
        img = {e: -c for e, c in lam.items()}
        zero = (0,) * rank
        img[zero] = img.get(zero, 0) + 1
        images.append({e: c for e, c in img.items() if c})
    rows = []
    for e in basis:
        factors = [images[i] for i in range(rank) for _ in range(e[i])]
        prod = _truncated_product(factors, rank, D)
        rows.append([prod.get(b, 0) for b in basis])
    return rows


def invariant_lattice(rd: RootDatum, D: int) -> list[list[int]]:
    """Basis of the W-invariant sublattice of ``Z[x]/(deg >= D)``."""
    basis = degree_basis(rd.rank, D)
    n = len(basis)
    if not rd.reflections:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    mats = [weyl_action_matrix(s, rd.rank, D) for s in rd.reflections]
    rows = []
    for b in range(n):
        row = []
        for m in mats:
            row += [m[b][c] - int(b == c) for c in range(n)]
        rows.append(row)
    return hnf(left_kernel(rows, len(rows[0])), n).rows if n else []


@dataclass
class Theorem1Report:
    group: str
    d: int
    D: int
    source_size: int
    kernel_rank: int
    image_rank: int
    invariant_rank: int
    image_in_invariants: bool
    image_equals_invariants: bool
    labels: list[str] = field(default_factory=list)
    image_matrix: list[list[int]] = field(default_factory=list)
    invariant_matrix: list[list[int]] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return self.kernel_rank == 0

    @property
    def verdict(self) -> str:
        return "injective" if self.injective else "undetermined-injectivity"

    def to_json(self, emit_matrices: bool = False) -> dict:
        out = {
            "group": self.group, "d": self.d, "D": self.D,
            "verdict": self.verdict, "injective": self.injective,
            "source_size": self.source_size, "kernel_rank": self.kernel_rank,
            "image_rank": self.image_rank, "invariant_rank": self.invariant_rank,
            "image_in_invariants": self.image_in_invariants,
            "image_equals_invariants": self.image_equals_invariants,
            "spanning_set": self.labels,
        }
        if emit_matrices:
            out["image_matrix"] = self.image_matrix
            out["invariant_matrix"] = self.invariant_matrix
        return out


def theorem1_report(rd: RootDatum, d: int, D: int) -> Theorem1Report:
    """Push ``R(G)/I_G^d`` through the Borel map to ``Z[x]/(deg >= D)`` and compare with W-invariants.

    A nonzero kernel is reported as undetermined: it may only mean ``D`` is
    too small for the two filtrations to separate.
    """
    if d < 1 or D < 1:
        raise ValueError("d and D must be >= 1")
    if not rd.invariant_generators:
        raise UnsupportedIdealError(f"{rd.name} carries no invariant generators")
    labels, elems = invariant_spanning_set(rd, d)
    basis = degree_basis(rd.rank, D)
    n = len(basis)
    rows = [truncated_vector(p, D, basis) for p in elems]
    img = hnf(rows, n)
    inv_rows = invariant_lattice(rd, D)
    inv = hnf(inv_rows, n) if inv_rows else None
    inside = all(inv.contains(r) for r in img.rows) if inv is not None else not img.rows
    equal = inside and (inv.rows if inv is not None else []) == img.rows
    return Theorem1Report(
        group=rd.name, d=d, D=D, source_size=len(elems),
        kernel_rank=len(elems) - img.rank, image_rank=img.rank,
        invariant_rank=inv.rank if inv is not None else 0,
        image_in_invariants=inside, image_equals_invariants=equal,
        labels=labels, image_matrix=rows, invariant_matrix=inv_rows)
