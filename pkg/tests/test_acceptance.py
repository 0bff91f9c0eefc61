"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines, or
``python tests/test_acceptance.py`` for the lines alone.
"""

import random
import subprocess
import sys
import time
from math import comb

from borelk.borel import (borel_image, completion_iso_check, level_restriction, NilpotentPoly,
                          theorem1_report)
from borelk.completion import ib_product, ideal_ig, membership, prop2_bound, radical_witness
from borelk.demazure import induction, reduced_words_w0
from borelk.laurent import LaurentPoly, augment, parse_poly
from borelk.rootdata import generate_weyl, preset
from borelk.sampling import random_invariant, random_laurent
from borelk.tower import Verdict, build_bt_tower, ml_check, scalar_tower

from oracles import brute_force_member, random_rank1_query

P = parse_poly
TIME_LIMIT = 10.0
LINES = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    LINES.append(line)
    if __name__ == "__main__":
        print(line)
    assert ok, line


def test_criterion_1_completion_isomorphism():
    start = time.perf_counter()
    bad = []
    for j in (1, 2, 3):
        for d in range(1, 7):
            rep = completion_iso_check(j, d)
            n = comb(d - 1 + j, j)
            eye = [[int(a == b) for b in range(n)] for a in range(n)]
            if rep.matrix != eye:
                bad.append((j, d))
    secs = time.perf_counter() - start
    report(1, not bad and secs < TIME_LIMIT, f"18 identity matrices, failures {bad}, {secs:.2f}s")


def _witness_exact(res, ideal, target):
    return res.member and res.certified and res.witness_poly(ideal) == target


def test_criterion_2_borel_ideal_power():
    start = time.perf_counter()
    # the classical identities behind the witnesses, checked as Laurent polynomials
    l1, l2 = P("l1", 2), P("l2", 2)
    e1, e2 = l1 + l2, l1 * l2
    identities = [
        (1 - P("l1")) ** 2 == P("l1") * (P("l1 + l1^-1") - 2),
        (1 - l1) ** 2 == l1 * (e1 - 2) - (e2 - 1),
        (1 - l2) ** 2 == l2 * (e1 - 2) - (e2 - 1),
        (1 - l1) * (1 - l2) == (e2 - 1) - (e1 - 2),
    ]
    ok = all(identities)
    details = []
    for name, N in (("SL2", 6), ("GL2", 8)):
        rd = preset(name)
        res = prop2_bound(rd, N)
        ideal = ideal_ig(rd)
        exact = all(w.witness_poly(ideal) == _label_product(label, rd.rank)
                    for label, w in res.witnesses.items())
        ok = ok and res.m == 2 and res.certified and exact
        details.append(f"{name} m={res.m} certified={res.certified}")
    secs = time.perf_counter() - start
    report(2, ok and secs < TIME_LIMIT, f"{', '.join(details)}, {secs:.2f}s")


def _label_product(label, rank):
    idx = [int(part.strip("()").split("l")[1]) - 1 for part in label.split("*")]
    return ib_product(idx, rank)


def test_criterion_3_radical_witness():
    details, ok = [], True
    for name in ("SL2", "GL2", "SL3"):
        rd = preset(name)
        res = radical_witness(rd, 10)
        ideal = ideal_ig(rd)
        for i, e in enumerate(res.exponents):
            power = ib_product([i] * e, rd.rank)
            ok = ok and _witness_exact(membership(power, ideal, 10), ideal, power)
        ok = ok and len(res.exponents) == rd.rank
        details.append(f"{name} {res.exponents}")
    report(3, ok, "; ".join(details))


def test_criterion_4_lim1_evidence():
    start = time.perf_counter()
    ok = all(ml_check(build_bt_tower(j, 8)).verdicts == [Verdict.SURJECTIVE] * 8 for j in (1, 2, 3))
    doubling = ml_check(scalar_tower(2, 8)).verdicts
    ok = ok and doubling == [Verdict.UNDETERMINED] * 7
    secs = time.perf_counter() - start
    report(4, ok and secs < TIME_LIMIT, f"bt towers j<=3 surjective, doubling undetermined, {secs:.2f}s")


def test_criterion_5_retraction():
    ok, counts = True, []
    for k, name in enumerate(("SL2", "GL2", "SL3")):
        rd = preset(name)
        rng = random.Random(500 + k)
        good = sum(induction(g, rd) == g
                   for g in (random_invariant(rng, rd, max_degree=4, coeff=9) for _ in range(100)))
        counts.append(f"{name} {good}/100")
        ok = ok and good == 100
    sl3 = preset("SL3")
    words = reduced_words_w0(generate_weyl(sl3))
    rng = random.Random(77)
    samples = [random_laurent(rng, 2) for _ in range(50)]
    indep = len(words) == 2 and all(induction(f, sl3, words[0]) == induction(f, sl3, words[1]) for f in samples)
    report(5, ok and indep, f"{', '.join(counts)}, SL3 words {words} agree={indep}")


def test_criterion_6_borel_laws():
    ok = True
    for r in (1, 2, 3):
        rng = random.Random(600 + r)
        for _ in range(200):
            p, q = random_laurent(rng, r), random_laurent(rng, r)
            k = rng.randint(0, 8)
            ok = ok and borel_image(p * q, k) == borel_image(p, k) * borel_image(q, k)
            ok = ok and borel_image(LaurentPoly.one(r), k) == NilpotentPoly.one(r, k)
            ok = ok and borel_image(p, k).counit() == augment(p)
            if k >= 1:
                ok = ok and level_restriction(borel_image(p, k)) == borel_image(p, k - 1)
    rng = random.Random(66)
    for d in range(1, 7):
        for _ in range(20):
            r = rng.randint(1, 3)
            p = ib_product([rng.randrange(r) for _ in range(d)], r) * random_laurent(rng, r)
            img = borel_image(p, rng.randint(d, 8))
            ok = ok and (img.min_degree() is None or img.min_degree() >= d)
    report(6, ok, "products, units, counit, filtration d<=6, level restriction k<=8")


def test_criterion_7_injectivity_report():
    runs = {("SL2", 2, 3): "injective", ("GL2", 2, 4): "injective",
            ("SL2", 2, 2): "undetermined-injectivity"}
    ok, details = True, []
    for (name, d, D), want in runs.items():
        rep = theorem1_report(preset(name), d, D)
        ok = ok and rep.verdict == want and rep.image_in_invariants
        if want == "injective":
            ok = ok and rep.kernel_rank == 0
        details.append(f"{name} d={d} D={D} {rep.verdict} ker={rep.kernel_rank}")
    report(7, ok, "; ".join(details))


def test_criterion_8_oracle_equivalence():
    rng = random.Random(2025)
    agree = 0
    for _ in range(50):
        p, ideal, N = random_rank1_query(rng)
        box = 6 if len(ideal.generators) * N <= 4 else 3
        agree += membership(p, ideal, N).member == brute_force_member(p, ideal, N, box)
    report(8, agree == 50, f"{agree}/50 queries agree")


CLI_RUNS = [
    "iso-check --rank 2 --cutoff 4 --emit-matrices",
    "prop2 --group GL2 --cutoff 8",
    "radical --group SL3 --cutoff 6",
    "separation --group SL2 --d 2 --Dmax 5",
    "borel --group SL2 --d 2 --D 2",
    "membership --poly 1-l1^2 --ideal IG --group SL2 --cutoff 4",
    "tower ml --preset bt --rank 2 --kmax 4",
    "tower lim --preset cyclic2 --stages 4",
    "demazure --group SL3 --poly l1^2*l2 --verify-word-independence --seed 5 --samples 5",
    "ring info --group SL3",
    "verify --seed 11 --samples 5",
]


def test_criterion_9_determinism():
    diffs = []
    for line in CLI_RUNS:
        cmd = [sys.executable, "-m", "borelk", *line.split(), "--json"]
        a = subprocess.run(cmd, capture_output=True, check=False).stdout
        b = subprocess.run(cmd, capture_output=True, check=False).stdout
        if a != b or not a:
            diffs.append(line)
    report(9, not diffs, f"{len(CLI_RUNS) - len(diffs)}/{len(CLI_RUNS)} commands byte-identical")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
