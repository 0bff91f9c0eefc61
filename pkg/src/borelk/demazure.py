"""Demazure operators and induction ``R(T) -> R(G)``.

``D_i(f) = (f - l^{-a_i} s_i(f)) / (1 - l^{-a_i})``; composing along a
reduced word for the longest Weyl element gives a retraction of the
inclusion ``R(G) = R(T)^W`` into ``R(T)``.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .laurent import LaurentPoly, Monomial, act
from .rootdata import RootDatum, WeylGroup, generate_weyl, identity, matmul


class DivisibilityError(ArithmeticError):
    """A Demazure numerator was not divisible by ``1 - l^beta``."""


def _coset_key(a: Monomial, beta: Monomial) -> tuple[Monomial, int]:
    """Split ``a = rep + t*beta`` with a canonical coset representative ``rep``."""
    p = next(i for i, b in enumerate(beta) if b)
    bp = beta[p]
    r = a[p] % abs(bp)
    t = (a[p] - r) // bp
    return tuple(x - t * b for x, b in zip(a, beta)), t


def divide_one_minus(h: LaurentPoly, beta: Sequence[int]) -> LaurentPoly:
    """Exact quotient ``h / (1 - l^beta)``; raises if there is a remainder.

    Monomials are grouped along lines ``rep + Z*beta``; on each line the
    problem is univariate division by ``1 - z``, whose quotient has
    partial sums of the coefficients as its coefficients.
    """
    beta = tuple(beta)
    if not any(beta):
        raise DivisibilityError("division by 1 - l^0 = 0")
    lines: dict[Monomial, dict[int, int]] = {}
    for mono, c in h.items():
        rep, t = _coset_key(mono, beta)
        lines.setdefault(rep, {})[t] = c
    out: dict[Monomial, int] = {}
    for rep, coeffs in lines.items():
        lo, hi = min(coeffs), max(coeffs)
        acc = 0
        for t in range(lo, hi + 1):
            acc += coeffs.get(t, 0)
            if t < hi and acc:
                out[tuple(x + t * b for x, b in zip(rep, beta))] = acc
        if acc:
            raise DivisibilityError(f"remainder {acc} along the line through {rep}")
    return LaurentPoly(h.rank, out)


def demazure_op(f: LaurentPoly, i: int, rd: RootDatum) -> LaurentPoly:
    s = rd.reflections[i]
    beta = tuple(-a for a in rd.simple_roots[i])
    numerator = f - act(f, s).shift(beta)
    return divide_one_minus(numerator, beta)


def _length_of_words(W: WeylGroup) -> tuple[dict, dict]:
    """BFS over words in the generators; first visit gives the lexicographically least reduced word."""
    gens = W.generators
    start = W.elements[0]
    words = {start: ()}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for k, s in enumerate(gens):
            h = matmul(g, s)
            if h not in words:
                words[h] = words[g] + (k,)
                queue.append(h)
    return words, {g: len(w) for g, w in words.items()}


def reduced_word_w0(W: WeylGroup, rd: RootDatum | None = None) -> list[int]:
    """Lexicographically least reduced word of the longest element."""
    words, lengths = _length_of_words(W)
    top = max(lengths.values())
    longest = [g for g, n in lengths.items() if n == top]
    if len(longest) != 1:
        raise ValueError("longest element is not unique; not a Weyl group")
    return list(words[longest[0]])


def reduced_words_w0(W: WeylGroup) -> list[list[int]]:
    """Every reduced word of the longest element, in lexicographic order."""
    gens = W.generators
    _, lengths = _length_of_words(W)
    top = max(lengths.values())
    out = []

    def extend(g, word):
        if len(word) == top:
            if lengths[g] == top:
                out.append(list(word))
            return
        for k, s in enumerate(gens):
            h = matmul(g, s)
            if lengths[h] == len(word) + 1:
                extend(h, word + [k])

    extend(identity(W.rank), [])
    return sorted(out)


def evaluate_word(word: Sequence[int], W: WeylGroup):
    g = identity(W.rank)
    for k in word:
        g = matmul(g, W.generators[k])
    return g


def induction(f: LaurentPoly, rd: RootDatum, word: Sequence[int] | None = None) -> LaurentPoly:
    """``D_{i_1} o ... o D_{i_l}`` along a reduced word of the longest element."""
    if word is None:
        word = reduced_word_w0(generate_weyl(rd), rd)
    out = f
    for i in reversed(word):
        out = demazure_op(out, i, rd)
    return out


def restriction(g: LaurentPoly) -> LaurentPoly:
    """``R(G) -> R(T)`` is the inclusion of invariants."""
    return g
