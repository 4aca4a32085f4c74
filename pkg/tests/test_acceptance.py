"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (the lines are written past output capture) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import json
import random
import sys
import time
from math import gcd

import pytest

from tautpic import io
from tautpic.classes import DivisorClass, format_class, normal_form, parse_class
from tautpic.descent import BOTH, cl_subgroup, expected_cl_quotient
from tautpic.generators import ModuliPair
from tautpic.lattice import AbGroupStructure, IntMatrix, is_saturated, smith_normal_form, sublattice_equal
from tautpic.presentations import (
    build,
    build_lambda,
    build_open,
    build_relation_rows,
    build_rpic,
    verify_open_projection,
)

GMAX, NMAX = 6, 8
CL_NMAX = 6


def hyperbolic(gmax=GMAX, nmax=NMAX):
    return [ModuliPair(g, n) for g in range(gmax + 1) for n in range(nmax + 1) if 3 * g - 3 + n > 0]


def closed_form_rank(g, n):
    # written out independently of the library's own helper
    if g >= 3:
        return 1 + (2**n * (g + 1) + 1) // 2
    if g == 2:
        return (2**n * (g + 1) + 1) // 2
    if g == 1:
        return 2**n - n
    return 2 ** (n - 1) - n * (n - 1) // 2 - 1


def _fail(label, detail):
    return False, f"{label}: {detail}"


def criterion_1():
    for p in hyperbolic():
        st = build_lambda(p).structure
        want = AbGroupStructure(closed_form_rank(p.g, p.n))
        if st != want:
            return _fail(p, f"expected {want}, got {st}")
    return True, f"{len(hyperbolic())} pairs, free of the closed-form rank"


def criterion_2():
    for p in hyperbolic():
        if not is_saturated(build_relation_rows(p)):
            return _fail(p, "relation lattice not saturated")
    return True, f"{len(hyperbolic())} pairs saturated"


def _open_table(g, n):
    if g >= 3:
        return AbGroupStructure(n + 1)
    if g == 2:
        return AbGroupStructure(n, (10,))
    if g == 1:
        return AbGroupStructure(0, (12,))
    return AbGroupStructure(0)


def criterion_3():
    for p in hyperbolic():
        st = build_open(p).structure
        if st != _open_table(p.g, p.n):
            return _fail(p, f"expected {_open_table(p.g, p.n)}, got {st}")
    return True, "open structures match"


def criterion_4():
    pairs = [p for p in hyperbolic() if p.g >= 1]
    for p in pairs:
        if not verify_open_projection(p):
            return _fail(p, "projected relations differ from the open relations")
    return True, f"{len(pairs)} pairs, projection equals open relations"


def criterion_5():
    pairs = [
        ModuliPair(g, n) for g in range(GMAX + 1) for n in range(NMAX + 1) if 2 * g - 2 + n > 0
    ]
    for p in pairs:
        want = AbGroupStructure(p.n + 1 if p.g >= 2 else p.n if p.g == 1 else 1)
        st = build_rpic(p).structure
        if st != want:
            return _fail(p, f"expected {want}, got {st}")
    return True, f"{len(pairs)} pairs match"


def _cl_pairs():
    return [p for p in hyperbolic(GMAX, CL_NMAX) if p.g >= 1]


def _cl_table(g, n):
    if (g, n) == (1, 1):
        return AbGroupStructure(0, (12,))
    if (g, n) in ((2, 1), (1, 2), (2, 0)):
        return AbGroupStructure(0, (2, 2))
    return AbGroupStructure(0, (2,))


def criterion_6():
    for p in _cl_pairs():
        got = cl_subgroup(build_lambda(p)).quotient
        if got != _cl_table(p.g, p.n) or got != expected_cl_quotient(p):
            return _fail(p, f"expected {_cl_table(p.g, p.n)}, got {got}")
    return True, f"{len(_cl_pairs())} pairs match"


def criterion_7():
    pairs = [p for p in _cl_pairs() if p.g + p.n >= 4 or (p.g, p.n) in ((3, 0), (2, 1), (1, 2))]
    for p in pairs:
        method = cl_subgroup(build_lambda(p)).method
        if method != BOTH:
            return _fail(p, f"method {method}")
    return True, f"{len(pairs)} pairs, both_agree"


def _det(M):
    # Leibniz expansion; independent of the library determinant
    k = len(M)
    total = 0
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        prod = 1
        for i in range(k):
            prod *= M[i][perm[i]]
            if not prod:
                break
        total += -prod if inv % 2 else prod
    return total


def minor_gcds(A):
    r, c = len(A), len(A[0]) if A else 0
    out = []
    for k in range(1, min(r, c) + 1):
        d = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                d = gcd(d, _det([[A[i][j] for j in cols] for i in rows]))
        out.append(d)
    return out


def _mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def check_snf(A):
    r, c = len(A), len(A[0])
    dec = smith_normal_form(IntMatrix(A, ncols=c))
    U, D, V = dec.U.tolist(), dec.D.tolist(), dec.V.tolist()
    if _mul(_mul(U, A), V) != D:
        return "U*A*V != D"
    if abs(_det(U)) != 1 or abs(_det(V)) != 1:
        return "transform not unimodular"
    if any(D[i][j] for i in range(r) for j in range(c) if i != j):
        return "D not diagonal"
    diag = [D[i][i] for i in range(min(r, c))]
    if any(d < 0 for d in diag):
        return "negative invariant factor"
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            return f"divisibility chain broken at {a}, {b}"
    prod = 1
    for k, dk in enumerate(minor_gcds(A)):
        prod *= diag[k]
        if prod != dk:
            return f"minor gcd d_{k + 1} = {dk} but product of factors = {prod}"
    return None


def random_matrix(rng):
    r, c = rng.randint(1, 6), rng.randint(1, 6)
    shape = rng.random()
    if shape < 0.2:
        # low rank: product of thin factors
        k = rng.randint(1, min(r, c))
        L = [[rng.randint(-30, 30) for _ in range(k)] for _ in range(r)]
        R = [[rng.randint(-30, 30) for _ in range(c)] for _ in range(k)]
        A = _mul(L, R)
        return [[max(-1000, min(1000, x)) for x in row] for row in A]
    if shape < 0.35:
        return [[rng.choice((0, 0, 1, -1, 2)) * rng.randint(1, 6) for _ in range(c)] for _ in range(r)]
    return [[rng.randint(-1000, 1000) for _ in range(c)] for _ in range(r)]


def criterion_8(count=500, seed=20260416):
    rng = random.Random(seed)
    start = time.perf_counter()
    for _ in range(count):
        A = random_matrix(rng)
        err = check_snf(A)
        if err:
            return _fail(A, err)
    elapsed = time.perf_counter() - start
    if elapsed > 30:
        return _fail(f"{count} matrices", f"took {elapsed:.1f}s")
    return True, f"{count} matrices in {elapsed:.1f}s"


HOMOMORPHISM_SAMPLE = [
    (0, 4, "stable"), (0, 6, "stable"), (1, 1, "stable"), (1, 3, "stable"), (2, 0, "stable"),
    (2, 2, "stable"), (3, 1, "stable"), (4, 2, "stable"), (2, 3, "open"), (1, 2, "open"),
    (3, 2, "open"), (0, 5, "open"), (0, 4, "rpic"), (1, 3, "rpic"), (2, 2, "rpic"),
]


def criterion_9(per_presentation=80, seed=7):
    rng = random.Random(seed)
    pairs = 0
    for g, n, variant in HOMOMORPHISM_SAMPLE:
        pres = build(g, n, variant)
        for row in pres.relations.rows:
            if not normal_form(pres, DivisorClass(pres, row)).is_zero:
                return _fail((g, n, variant), f"relation {row} has nonzero normal form")
        for _ in range(per_presentation):
            x = DivisorClass(pres, [rng.randint(-60, 60) for _ in range(pres.rank)])
            y = DivisorClass(pres, [rng.randint(-60, 60) for _ in range(pres.rank)])
            if normal_form(pres, x + y) != normal_form(pres, x) + normal_form(pres, y):
                return _fail((g, n, variant), f"additivity fails for {x.coeffs}, {y.coeffs}")
            pairs += 1
    return True, f"{pairs} pairs over {len(HOMOMORPHISM_SAMPLE)} presentations"


def criterion_10(seed=11):
    rng = random.Random(seed)
    docs = 0
    for variant in ("stable", "open", "rpic"):
        for g in range(4):
            for n in range(5):
                try:
                    pres = build(g, n, variant)
                except ValueError:
                    continue
                back = io.presentation_from_document(json.loads(io.dumps(io.presentation_to_document(pres))))
                if back.generators != pres.generators or back.structure != pres.structure:
                    return _fail((g, n, variant), "generators or structure changed")
                if not sublattice_equal(back.relations, pres.relations):
                    return _fail((g, n, variant), "relation lattice changed")
                docs += 1
                for _ in range(10):
                    c = DivisorClass(pres, [rng.randint(-9, 9) for _ in range(pres.rank)])
                    text = format_class(c)
                    again = parse_class(pres, text)
                    if again != c or format_class(again) != text:
                        return _fail((g, n, variant), f"expression {text!r} does not round-trip")
    return True, f"{docs} documents and {docs * 10} expressions round-trip"


CRITERIA = {
    1: ("rank formula sweep", criterion_1),
    2: ("saturation sweep", criterion_2),
    3: ("open moduli structure", criterion_3),
    4: ("open projection identity", criterion_4),
    5: ("universal curve structure", criterion_5),
    6: ("coarse class group table", criterion_6),
    7: ("character kernel equals explicit list", criterion_7),
    8: ("Smith normal form properties", criterion_8),
    9: ("normal form additivity", criterion_9),
    10: ("serialization and expression round-trips", criterion_10),
}


def run(number):
    title, fn = CRITERIA[number]
    ok, detail = fn()
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title} ({detail})"
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = run(number)
    with capsys.disabled():
        print(f"\n{line}", end="")
    assert ok, line


if __name__ == "__main__":
    results = [run(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
