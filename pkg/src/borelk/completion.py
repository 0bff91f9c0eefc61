"""Augmentation-ideal-adic truncations of the character ring.

Writing ``mu_i = 1 - l_i`` identifies the completion of R(T) at I_T with
``Z[[mu_1, ..., mu_r]]``.  Everything here lives in the quotient by total
degree ``>= d``, which is a free abelian group on the low-degree
mu-monomials, so ideal questions become finite lattice questions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Sequence

from .laurent import LaurentPoly, Monomial, StructuralError, augment, format_poly
from .lattice import hnf, rank as lattice_rank
from .rootdata import RootDatum


class UnsupportedIdealError(ValueError):
    pass


# -- expansion of characters ---------------------------------------------------

@lru_cache(maxsize=4096)
def lambda_power_series(a: int, nmax: int) -> tuple[int, ...]:
    """Coefficients of ``(1 - z)^a`` up to ``z^nmax``, for any integer ``a``.

    For negative ``a`` this is the truncated geometric-type series, the
    exact inverse of ``(1 - z)^(-a)`` modulo ``z^(nmax+1)``.
    """
    if nmax < 0:
        return ()
    if a >= 0:
        return tuple((-1) ** n * comb(a, n) for n in range(min(a, nmax) + 1))
    b = -a
    return tuple(comb(n + b - 1, n) for n in range(nmax + 1))


def expand_monomial(mono: Monomial, keep: Callable[[Monomial], bool], nmax: int,
                    total_cutoff: int | None = None) -> dict[Monomial, int]:
    """Expand ``prod_i l_i^{a_i}`` with ``l_i = 1 - z_i``.

    Per-variable powers stop at ``nmax``; when ``total_cutoff`` is given,
    partial products of total degree ``>= total_cutoff`` are pruned early.
    ``keep`` filters the final exponent vectors.
    """
    terms: dict[Monomial, int] = {(): 1}
    for a in mono:
        series = lambda_power_series(a, nmax)
        nxt: dict[Monomial, int] = {}
        for e, c in terms.items():
            deg = sum(e)
            for n, cn in enumerate(series):
                if total_cutoff is not None and deg + n >= total_cutoff:
                    break
                if cn:
                    key = e + (n,)
                    nxt[key] = nxt.get(key, 0) + c * cn
        terms = nxt
    return {e: c for e, c in terms.items() if c and keep(e)}


# -- truncated power series ----------------------------------------------------

def degree_basis(rank: int, cutoff: int) -> list[Monomial]:
    """Exponent vectors of total degree ``< cutoff``, by degree then lexicographically descending."""
    out = [e for e in itertools.product(range(cutoff), repeat=rank) if sum(e) < cutoff]
    out.sort(key=lambda e: (sum(e), tuple(-a for a in e)))
    return out


class TruncatedSeries:
    """Element of ``Z[[mu_1..mu_r]] / (total degree >= cutoff)``."""

    __slots__ = ("rank", "cutoff", "_terms")

    def __init__(self, rank: int, cutoff: int, terms: dict[Monomial, int] | None = None):
        if cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        self.rank = rank
        self.cutoff = cutoff
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != rank or min(e, default=0) < 0:
                raise StructuralError(f"bad exponent vector {e}")
            if c and sum(e) < cutoff:
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in sorted(clean.items()) if c}

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, e: Sequence[int]) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> int | None:
        """Lowest total degree of a nonzero term; ``None`` for zero."""
        return min((sum(e) for e in self._terms), default=None)

    def _check(self, other: TruncatedSeries) -> None:
        if (self.rank, self.cutoff) != (other.rank, other.cutoff):
            raise StructuralError("series with different rank or cutoff")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.rank, self.cutoff, self._terms) == (other.rank, other.cutoff, other._terms)

    def __hash__(self) -> int:
        return hash((self.rank, self.cutoff, tuple(self._terms.items())))

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.rank, self.cutoff, out)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.rank, self.cutoff, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        out: dict[Monomial, int] = {}
        d = self.cutoff
        for e1, c1 in self._terms.items():
            s1 = sum(e1)
            for e2, c2 in other._terms.items():
                if s1 + sum(e2) >= d:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(self.rank, d, out)

    def shift(self, e: Sequence[int]) -> TruncatedSeries:
        """Multiply by the monomial ``mu^e``."""
        return TruncatedSeries(self.rank, self.cutoff,
                               {tuple(a + b for a, b in zip(m, e)): c for m, c in self._terms.items()})

    def vector(self, basis: Sequence[Monomial] | None = None) -> list[int]:
        basis = basis if basis is not None else degree_basis(self.rank, self.cutoff)
        return [self._terms.get(e, 0) for e in basis]

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*mu^{e}" for e, c in self._terms.items()) or "0"
        return f"TruncatedSeries(r={self.rank}, d={self.cutoff}: {body})"


def mu_expand(p: LaurentPoly, d: int) -> TruncatedSeries:
    """Image of a character polynomial in ``Z[[mu]]/(deg >= d)`` under ``l_i = 1 - mu_i``."""
    if d < 1:
        raise ValueError("cutoff must be >= 1")
    out: dict[Monomial, int] = {}
    for mono, c in p.items():
        for e, v in expand_monomial(mono, lambda e: True, d - 1, total_cutoff=d).items():
            out[e] = out.get(e, 0) + c * v
    return TruncatedSeries(p.rank, d, out)


def mu_monomial_lift(e: Sequence[int]) -> LaurentPoly:
    """The character polynomial ``prod_i (1 - l_i)^{e_i}`` whose expansion is ``mu^e``."""
    r = len(e)
    out = LaurentPoly.one(r)
    for i, k in enumerate(e):
        if k:
            out = out * (LaurentPoly.one(r) - LaurentPoly.var(i, r)) ** k
    return out


# -- ideals --------------------------------------------------------------------

@dataclass(frozen=True)
class IdealSpec:
    label: str
    generators: tuple[LaurentPoly, ...]

    def __post_init__(self):
        ranks = {g.rank for g in self.generators}
        if len(ranks) > 1:
            raise StructuralError(f"ideal {self.label} mixes ranks {sorted(ranks)}")
        if self.label in ("I_T", "I_G"):
            for g in self.generators:
                if augment(g) != 0:
                    raise StructuralError(
                        f"generator {format_poly(g)} of {self.label} does not augment to 0")

    @property
    def rank(self) -> int:
        return self.generators[0].rank


def ideal_it(rank: int) -> IdealSpec:
    """``I_T = (1 - l_1, ..., 1 - l_r)``; the generator ``1 - t`` is redundant."""
    one = LaurentPoly.one(rank)
    return IdealSpec("I_T", tuple(one - LaurentPoly.var(i, rank) for i in range(rank)))


def ideal_ig(rd: RootDatum) -> IdealSpec:
    if not rd.invariant_generators:
        raise UnsupportedIdealError(f"{rd.name} carries no invariant generators")
    return IdealSpec("I_G", tuple(rd.ig_generators()))


@dataclass
class LatticeBasis:
    monomial_basis: list[Monomial]
    columns: list[list[int]]

    @property
    def rank(self) -> int:
        return len(self.monomial_basis)


def quotient_basis(ideal: IdealSpec, d: int) -> tuple[LatticeBasis, int]:
    """Free basis of ``R(T)/I_T^d``: the mu-monomials of degree ``< d``."""
    if d < 1:
        raise ValueError("cutoff must be >= 1")
    std = ideal_it(ideal.rank)
    if ideal.label != "I_T" or set(ideal.generators) != set(std.generators):
        raise UnsupportedIdealError(
            f"quotient_basis supports only I_T; use membership for {ideal.label}")
    basis = degree_basis(ideal.rank, d)
    n = len(basis)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    assert n == comb(d - 1 + ideal.rank, ideal.rank)
    return LatticeBasis(basis, cols), n


# -- membership ------------------------------------------------------------------

@dataclass
class MembershipResult:
    member: bool
    cutoff: int
    certified: bool
    multiplier_degree: int | None = None
    # (generator index, mu-exponent of multiplier, coefficient)
    witness: list[tuple[int, Monomial, int]] | None = None

    @property
    def tag(self) -> str:
        return "certified" if self.certified else "modulo-cutoff"

    def witness_poly(self, ideal: IdealSpec) -> LaurentPoly | None:
        if self.witness is None:
            return None
        return combine_witness(self.witness, ideal)

    def to_json(self) -> dict:
        out = {"answer": self.member, "certified": self.certified, "tag": self.tag,
               "cutoff": self.cutoff}
        if self.witness is not None:
            out["multiplier_degree"] = self.multiplier_degree
            out["witness"] = [{"generator": g, "multiplier": list(e), "coefficient": c}
                              for g, e, c in self.witness]
        return out


def combine_witness(witness: Iterable[tuple[int, Monomial, int]], ideal: IdealSpec) -> LaurentPoly:
    out = LaurentPoly.zero(ideal.rank)
    for g, e, c in witness:
        out = out + ideal.generators[g] * mu_monomial_lift(e) * c
    return out


def _multiplier_rows(gen_series: Sequence[TruncatedSeries], exps: Sequence[Monomial],
                     basis: Sequence[Monomial]):
    labels, rows = [], []
    for gi, s in enumerate(gen_series):
        order = s.order()
        for e in exps:
            if order is None or order + sum(e) >= s.cutoff:
                continue
            labels.append((gi, e))
            rows.append(s.shift(e).vector(basis))
    return labels, rows


def membership(p: LaurentPoly, ideal: IdealSpec, N: int) -> MembershipResult:
    """Decide ``p in ideal + I_T^N`` exactly over Z.

    Multipliers are mu-monomials, searched by increasing degree so the
    witness is as small as possible.  A positive answer is ``certified``
    when the witness combination equals ``p`` exactly as Laurent
    polynomials; a negative answer is always certified, since
    ``ideal + I_T^N`` contains the ideal itself.
    """
    if N < 1:
        raise ValueError("cutoff must be >= 1")
    if ideal.generators and p.rank != ideal.rank:
        raise StructuralError(f"rank mismatch: {p.rank} vs {ideal.rank}")
    if p.is_zero():
        return MembershipResult(True, N, True, 0, [])
    target = mu_expand(p, N)
    basis = degree_basis(p.rank, N)
    tvec = target.vector(basis)
    if not any(tvec):
        # already in I_T^N
        return MembershipResult(True, N, False, 0, [])
    gens = [mu_expand(g, N) for g in ideal.generators]
    all_exps = degree_basis(p.rank, N)
    for b in range(N):
        exps = [e for e in all_exps if sum(e) <= b]
        labels, rows = _multiplier_rows(gens, exps, basis)
        if not rows:
            continue
        ech = hnf(rows, len(basis), transform=True)
        sol = ech.solve(tvec)
        if sol is None:
            continue
        witness = [(g, e, c) for (g, e), c in zip(labels, sol) if c]
        exact = combine_witness(witness, ideal) == p
        return MembershipResult(True, N, exact, b, witness)
    return MembershipResult(False, N, True)


# -- comparison of the I_B and I_G R(B) topologies ---------------------------------

@dataclass
class Prop2Result:
    group: str
    cutoff: int
    m: int | None
    certified: bool
    witnesses: dict[str, MembershipResult] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "group": self.group, "cutoff": self.cutoff,
            "m": self.m, "answer": self.m if self.m is not None else f"none <= {self.cutoff}",
            "certified": self.certified,
            "witnesses": {k: v.to_json() for k, v in self.witnesses.items()},
        }


def _ib_generator(i: int, rank: int) -> LaurentPoly:
    return LaurentPoly.one(rank) - LaurentPoly.var(i, rank)


def ib_product(idx: Sequence[int], rank: int) -> LaurentPoly:
    out = LaurentPoly.one(rank)
    for i in idx:
        out = out * _ib_generator(i, rank)
    return out


def _product_label(idx: Sequence[int]) -> str:
    return "*".join(f"(1-l{i + 1})" for i in idx)


def prop2_bound(rd: RootDatum, N: int) -> Prop2Result:
    """Smallest ``m`` with every m-fold product of the ``1 - l_i`` in ``I_G R(T) + I_T^N``."""
    ideal = ideal_ig(rd)
    for m in range(1, N):
        results = {}
        ok = True
        for idx in itertools.combinations_with_replacement(range(rd.rank), m):
            res = membership(ib_product(idx, rd.rank), ideal, N)
            results[_product_label(idx)] = res
            if not res.member:
                ok = False
                break
        if ok:
            certified = all(r.certified for r in results.values())
            return Prop2Result(rd.name, N, m, certified, results)
    return Prop2Result(rd.name, N, None, False)


class RadicalWitnessError(RuntimeError):
    def __init__(self, generator: str, cutoff: int):
        super().__init__(f"no power of {generator} below {cutoff} lies in I_G*R(T) + I_T^{cutoff}")
        self.generator = generator


@dataclass
class RadicalResult:
    group: str
    cutoff: int
    exponents: list[int]
    certified: list[bool]

    def to_json(self) -> dict:
        return {"group": self.group, "cutoff": self.cutoff,
                "exponents": self.exponents, "certified": self.certified}


def radical_witness(rd: RootDatum, N: int) -> RadicalResult:
    """For each ``1 - l_i``, the least power lying in ``I_G R(T)`` (modulo ``I_T^N``)."""
    ideal = ideal_ig(rd)
    exps, certs = [], []
    for i in range(rd.rank):
        gen = _ib_generator(i, rd.rank)
        power = LaurentPoly.one(rd.rank)
        for e in range(1, N):
            power = power * gen
            res = membership(power, ideal, N)
            if res.member:
                exps.append(e)
                certs.append(res.certified)
                break
        else:
            raise RadicalWitnessError(f"(1-l{i + 1})", N)
    return RadicalResult(rd.name, N, exps, certs)


# -- interleaving of filtrations -----------------------------------------------------

def invariant_spanning_set(rd: RootDatum, d: int) -> tuple[list[str], list[LaurentPoly]]:
    """Products of fewer than ``d`` reduced coordinate generators.

    These span ``R(G)/I_G^d``; with the preset coordinates they are a basis.
    """
    if not rd.invariant_generators:
        raise UnsupportedIdealError(f"{rd.name} carries no invariant generators")
    gens = rd.coordinate_generators()
    names = [f"c{i + 1}" for i in range(len(gens))]
    labels, elems = [], []
    for length in range(d):
        for word in itertools.combinations_with_replacement(range(len(gens)), length):
            p = LaurentPoly.one(rd.rank)
            for i in word:
                p = p * gens[i]
            labels.append("*".join(names[i] for i in word) or "1")
            elems.append(p)
    return labels, elems


@dataclass
class SeparationResult:
    group: str
    d: int
    Dmax: int
    D: int | None
    kernel_ranks: dict[int, int]

    def to_json(self) -> dict:
        return {"group": self.group, "d": self.d, "Dmax": self.Dmax,
                "D": self.D if self.D is not None else "undetermined",
                "kernel_ranks": {str(k): v for k, v in self.kernel_ranks.items()}}


def separation_degree(rd: RootDatum, d: int, Dmax: int) -> SeparationResult:
    """Least ``D <= Dmax`` for which the spanning set of ``R(G)/I_G^d`` stays independent mod ``I_T^D``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    _, elems = invariant_spanning_set(rd, d)
    kernel_ranks = {}
    for D in range(d, Dmax + 1):
        basis = degree_basis(rd.rank, D)
        rows = [mu_expand(p, D).vector(basis) for p in elems]
        k = len(rows) - lattice_rank(rows, len(basis))
        kernel_ranks[D] = k
        if k == 0:
            return SeparationResult(rd.name, d, Dmax, D, kernel_ranks)
    return SeparationResult(rd.name, d, Dmax, None, kernel_ranks)
