import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from borelk.completion import (IdealSpec, UnsupportedIdealError, degree_basis, ideal_ig, ideal_it,
                               ib_product, membership, mu_expand, mu_monomial_lift, prop2_bound,
                               quotient_basis, radical_witness, separation_degree)
from borelk.laurent import LaurentPoly, StructuralError, augment, parse_poly
from borelk.rootdata import preset
from borelk.sampling import random_laurent

from conftest import laurent_polys
from oracles import brute_force_member, random_rank1_query

P = parse_poly


def sympy_mu_expand(p: LaurentPoly, d: int) -> dict:
    """Oracle: substitute l_i = 1 - s*mu_i and take the Taylor series in s to order d."""
    s = sympy.Symbol("s")
    mus = sympy.symbols(f"m0:{p.rank}")
    expr = sum(c * sympy.Mul(*[(1 - s * m) ** a for m, a in zip(mus, mono)]) for mono, c in p.items())
    ser = sympy.series(expr, s, 0, d).removeO() if d > 0 else 0
    poly = sympy.Poly(sympy.expand(ser), s, *mus)
    out = {}
    for monom, c in poly.terms():
        out[tuple(monom[1:])] = out.get(tuple(monom[1:]), 0) + int(c)
    return {e: c for e, c in out.items() if c}


@pytest.mark.parametrize("text, expected", [
    ("l1", {(0,): 1, (1,): -1}),
    ("l1^-1", {(0,): 1, (1,): 1, (2,): 1, (3,): 1}),
    ("l1 + l1^-1 - 2", {(2,): 1, (3,): 1}),
])
def test_mu_expand_examples(text, expected):
    assert mu_expand(P(text), 4).terms == expected


@settings(max_examples=30, deadline=None)
@given(laurent_polys(2, max_terms=3, exp=2, coeff=5), st.integers(1, 4))
def test_mu_expand_matches_series_oracle(p, d):
    assert mu_expand(p, d).terms == sympy_mu_expand(p, d)


rank2 = laurent_polys(2, max_terms=4, exp=3)


@given(rank2, rank2, st.integers(1, 6))
def test_mu_expand_is_ring_homomorphism(p, q, d):
    assert mu_expand(p * q, d) == mu_expand(p, d) * mu_expand(q, d)
    assert mu_expand(p + q, d) == mu_expand(p, d) + mu_expand(q, d)


@given(rank2, st.integers(1, 6))
def test_constant_term_is_augmentation(p, d):
    assert mu_expand(p, d).coefficient((0, 0)) == augment(p)


def test_order_filtration():
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randint(1, 3)
        k = rng.randint(1, 4)
        d = k + rng.randint(1, 2)
        idx = [rng.randrange(r) for _ in range(k)]
        p = ib_product(idx, r) * random_laurent(rng, r)
        order = mu_expand(p, d).order()
        assert order is None or order >= k


def test_mu_monomial_lift():
    for e in degree_basis(2, 4):
        assert mu_expand(mu_monomial_lift(e), 4).terms == {e: 1}


@pytest.mark.parametrize("r, d, basis", [
    (1, 3, [(0,), (1,), (2,)]),
    (2, 2, [(0, 0), (1, 0), (0, 1)]),
    (1, 1, [(0,)]),
])
def test_quotient_basis_examples(r, d, basis):
    lb, rank = quotient_basis(ideal_it(r), d)
    assert lb.monomial_basis == basis and rank == len(basis)


def test_quotient_basis_rank_formula():
    for r in (1, 2, 3):
        for d in range(1, 7):
            assert quotient_basis(ideal_it(r), d)[1] == comb(d - 1 + r, r)


def test_quotient_basis_rejects_other_ideals():
    with pytest.raises(UnsupportedIdealError):
        quotient_basis(ideal_ig(preset("SL2")), 3)


def test_ideal_spec_checks_augmentation():
    with pytest.raises(StructuralError):
        IdealSpec("I_G", (P("l1 + l1^-1"),))


# -- membership ---------------------------------------------------------------------

def test_membership_examples():
    ig = ideal_ig(preset("SL2"))
    res = membership(P("1 - 2*l1 + l1^2"), ig, 6)
    assert res.member and res.certified
    assert res.witness_poly(ig) == P("1 - 2*l1 + l1^2")
    assert not membership(P("1 - l1"), ig, 6).member
    assert membership(LaurentPoly.zero(1), ig, 3).member


def test_exact_identities():
    c = P("l1 + l1^-1 - 2")
    assert P("1 - l1") ** 2 == P("l1") * c
    e1, e2 = P("l1 + l2"), P("l1*l2")
    one = LaurentPoly.one(2)
    assert (one - P("l1", 2)) + (one - P("l2", 2)) == 2 - e1
    assert (one - P("l1", 2)) * (one - P("l2", 2)) == 1 - e1 + e2
    a = one - P("l1", 2)
    assert a * a == a * (2 - e1) - a * (one - P("l2", 2))


def test_negative_answers_are_certified():
    res = membership(P("1 - l1"), ideal_ig(preset("SL2")), 6)
    assert res.certified and res.tag == "certified"


def test_certified_witness_is_exact():
    rng = random.Random(5)
    ig = ideal_ig(preset("GL2"))
    for _ in range(10):
        p = sum((g * random_laurent(rng, 2, terms=2, exp=1, coeff=3) for g in ig.generators),
                LaurentPoly.zero(2))
        res = membership(p, ig, 6)
        assert res.member
        if res.certified and not p.is_zero():
            assert res.witness_poly(ig) == p


def test_monomial_multipliers_span_modulo_cutoff():
    # for any Laurent multiplier m, g*m mod I_T^N lies in the span of g*mu^e, deg e < N
    rng = random.Random(17)
    from borelk.lattice import hnf
    for rank, N in ((1, 5), (2, 4)):
        basis = degree_basis(rank, N)
        for _ in range(10):
            g = random_laurent(rng, rank)
            m = random_laurent(rng, rank)
            gs = mu_expand(g, N)
            rows = [gs.shift(e).vector(basis) for e in basis]
            if not any(any(r) for r in rows):
                continue
            ech = hnf(rows, len(basis))
            assert ech.contains(mu_expand(g * m, N).vector(basis))


def test_membership_agrees_with_brute_force_sample():
    rng = random.Random(2024)
    for _ in range(15):
        p, ideal, N = random_rank1_query(rng)
        box = 6 if len(ideal.generators) * N <= 4 else 3
        assert membership(p, ideal, N).member == brute_force_member(p, ideal, N, box)


# -- topologies -------------------------------------------------------------------------

@pytest.mark.parametrize("name, N, m", [("SL2", 6, 2), ("Gm^2", 4, 1), ("Gm^1", 3, 1), ("GL2", 8, 2)])
def test_borel_ideal_power_examples(name, N, m):
    res = prop2_bound(preset(name), N)
    assert res.m == m and res.certified


def test_borel_ideal_power_none_below_cutoff():
    res = prop2_bound(preset("SL2"), 2)
    assert res.m is None


@pytest.mark.parametrize("name", ["SL2", "GL2"])
def test_borel_ideal_power_non_increasing_once_certified(name):
    rd = preset(name)
    best = None
    for N in range(2, 9):
        res = prop2_bound(rd, N)
        if best is not None:
            assert res.m is not None and res.m <= best
        if res.certified and res.m is not None:
            best = res.m if best is None else min(best, res.m)
    assert best == 2


@pytest.mark.parametrize("name, N, exps", [("SL2", 6, [2]), ("Gm^2", 4, [1, 1]), ("GL2", 8, [2, 2]),
                                           ("SL3", 10, [3, 3])])
def test_radical_witness_examples(name, N, exps):
    assert radical_witness(preset(name), N).exponents == exps


def test_radical_witness_error_names_generator():
    from borelk.completion import RadicalWitnessError
    with pytest.raises(RadicalWitnessError) as exc:
        radical_witness(preset("SL2"), 2)
    assert exc.value.generator == "(1-l1)"


@pytest.mark.parametrize("name, d, Dmax, D", [("SL2", 2, 8, 3), ("Gm^1", 3, 8, 3), ("Gm^2", 2, 5, 2),
                                              ("SL2", 1, 4, 1), ("GL2", 2, 8, 3)])
def test_separation_examples(name, d, Dmax, D):
    assert separation_degree(preset(name), d, Dmax).D == D


def test_separation_undetermined():
    res = separation_degree(preset("SL2"), 2, 2)
    assert res.D is None and res.kernel_ranks == {2: 1}
