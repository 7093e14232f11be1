import math
from fractions import Fraction

import pytest

from adesieve.curvefam import discriminant_int, family
from adesieve.numfield import FieldContext, point_from_ints, primes_above
from adesieve.orbits import MonicPoly, NoShift, weak_shift
from adesieve.rootsys import DynkinType
from adesieve.scanner import (
    NOT_DIVISIBLE,
    STRONG,
    WEAK,
    ZeroDiscriminant,
    classify,
    classify_brute,
    count_sigma,
    default_excluded_primes,
    deng_fit,
    enumerate_sigma,
    scan,
    tail_decay,
)

Q = FieldContext(0)
QI = FieldContext(-1)
A2 = family(DynkinType("A", 2))
A3 = family(DynkinType("A", 3))


def P(ctx, p, which=0):
    return primes_above(ctx, p)[which]


def brute_sigma(ctx, fam, X):
    """Oracle: enumerate the box and filter by the definition."""
    from adesieve.numfield import height_lt, in_sigma

    X = Fraction(X)
    if ctx.d == 0:
        axes = []
        for d in fam.degrees:
            n = 0
            while Fraction((n + 1) ** 2) <= (X**d) ** 2:
                n += 1
            axes.append([(a, 0) for a in range(-n, n + 1)])
    else:
        axes = [ctx.elements_in_disc(X**d) for d in fam.degrees]
    out = []

    def rec(i, cur):
        if i == len(axes):
            b = tuple(cur)
            if b == ((0, 0),) * len(axes):
                return
            if height_lt(ctx, fam.degrees, b, X) and in_sigma(ctx, fam.degrees, b):
                out.append(b)
            return
        for x in axes[i]:
            rec(i + 1, cur + [x])

    rec(0, [])
    return set(out)


@pytest.mark.parametrize("X", ["2", "3", "7/2"])
def test_enumerate_sigma_matches_brute_filter(X):
    got = set(enumerate_sigma(Q, A2, X))
    assert got == brute_sigma(Q, A2, X)
    assert len(got) == count_sigma(Q, A2, X)


def test_enumerate_sigma_monotone_and_exact_box():
    s2 = list(enumerate_sigma(Q, A2, 2))
    s3 = list(enumerate_sigma(Q, A2, 3))
    assert set(s2) <= set(s3)
    # X = 2 box: |p2| <= 3, |p3| <= 7
    assert all(abs(b[0][0]) <= 3 and abs(b[1][0]) <= 7 for b in s2)
    assert any(abs(b[1][0]) == 7 for b in s2)
    # deterministic lexicographic order
    assert s2 == sorted(s2)


def test_enumerate_sigma_gaussian_small():
    got = set(enumerate_sigma(QI, A2, 2))
    assert got == brute_sigma(QI, A2, 2)
    assert len(got) == count_sigma(QI, A2, 2)


@pytest.mark.parametrize("X", [2, 3, 5, "13/2"])
def test_count_sigma_matches_enumeration_rational(X):
    assert count_sigma(Q, A2, X) == len(list(enumerate_sigma(Q, A2, X)))


def test_count_sigma_matches_enumeration_a3():
    assert count_sigma(Q, A3, 2) == len(list(enumerate_sigma(Q, A3, 2)))


@pytest.mark.parametrize("X", [2, 3])
def test_count_sigma_matches_enumeration_gaussian(X):
    assert count_sigma(QI, A2, X) == len(list(enumerate_sigma(QI, A2, X)))


def test_classify_examples():
    b = point_from_ints([-2, 4])  # disc -400
    assert classify(Q, A2, b, P(Q, 5)) == WEAK
    assert classify(Q, A2, b, P(Q, 2)) == STRONG
    assert classify(Q, A2, point_from_ints([3, 0]), P(Q, 3)) == STRONG
    assert classify(Q, A2, point_from_ints([1, 1]), P(Q, 7)) == NOT_DIVISIBLE
    with pytest.raises(ZeroDiscriminant):
        classify(Q, A2, point_from_ints([-3, 2]), P(Q, 5))


def test_classify_matches_brute_exhaustively_small():
    for p in (2, 3, 5, 7):
        pr = P(Q, p)
        for a in range(-12, 13):
            for c in range(-12, 13):
                if discriminant_int(2, [a, c]) == 0:
                    continue
                b = point_from_ints([a, c])
                assert classify(Q, A2, b, pr) == classify_brute(Q, A2, b, pr)


def test_classify_matches_brute_gaussian():
    for p in (2, 3, 5):
        for pr in primes_above(QI, p):
            for a in range(-4, 5):
                for c in range(-4, 5):
                    b = ((a, 1), (c, -1))
                    from adesieve.curvefam import discriminant_A

                    if discriminant_A(QI, A2.type, b) == (0, 0):
                        continue
                    assert classify(QI, A2, b, pr) == classify_brute(QI, A2, b, pr)


def test_weak_shift_agrees_with_classify_exhaustive():
    # Weak <=> shift exists, for all prime moduli <= 13 on a box
    for q in (2, 3, 5, 7, 11, 13):
        pr = P(Q, q)
        for a in range(-10, 11):
            for c in range(-10, 11):
                if discriminant_int(2, [a, c]) == 0:
                    continue
                cls = classify(Q, A2, point_from_ints([a, c]), pr)
                f = MonicPoly.from_ints([1, 0, a, c])
                try:
                    weak_shift(Q, f, (q, 0))
                    shifted = True
                except NoShift:
                    shifted = False
                assert shifted == (cls == WEAK), (a, c, q, cls)


def test_scan_small_consistency():
    rep = scan(Q, A2, 5, prime_bound=20, workers=1)
    assert rep.total == count_sigma(Q, A2, 5)
    assert rep.squarefree + rep.unresolved <= rep.total
    assert rep.band == 0.0
    # partition law: per-prime tallies cover every (point, prime) pair
    pairs = rep.total - rep.zero_disc
    for label, row in rep.per_prime.items():
        assert row[STRONG] + row[WEAK] + row[NOT_DIVISIBLE] == pairs
    # tail table is nonincreasing in M
    grid = rep.tail_grid
    for a, b in zip(grid, grid[1:]):
        assert rep.tail_strong[a] >= rep.tail_strong[b]
        assert rep.tail_weak[a] >= rep.tail_weak[b]
        assert rep.tail_weak_coprime[a] >= rep.tail_weak_coprime[b]
        assert rep.tail_weak_coprime[a] <= rep.tail_weak[a]


def test_scan_deterministic_across_worker_counts():
    reps = [scan(Q, A2, 4, prime_bound=10, workers=w) for w in (1, 2, 3)]
    base = reps[0].to_json()
    for rep in reps[1:]:
        assert rep.to_json() == base


def test_scan_squarefree_agrees_with_direct_factorization():
    import sympy

    rep = scan(Q, A2, 6, prime_bound=10, workers=1)
    direct = 0
    for b in enumerate_sigma(Q, A2, 6):
        d = discriminant_int(2, [b[0][0], b[1][0]])
        if d == 0:
            continue
        if all(e <= 1 for e in sympy.factorint(d).values()):
            direct += 1
    assert rep.squarefree == direct


def test_scan_gaussian_smoke():
    rep = scan(QI, A2, 3, prime_bound=10, workers=1)
    assert rep.total == count_sigma(QI, A2, 3)
    assert rep.soundness_disagreements == 0
    assert 0 <= rep.band <= 1


def test_scan_zero_height():
    rep = scan(Q, A2, 0, prime_bound=10)
    assert rep.total == 0
    assert rep.empirical_density is None


def test_tail_decay_table():
    rep = scan(Q, A2, 8, prime_bound=30, workers=2)
    table = tail_decay(rep)
    rows = table["rows"]
    assert [r["M"] for r in rows] == list(rep.tail_grid)
    combined = [r["strong"] + r["weak"] for r in rows]
    assert combined == sorted(combined, reverse=True)
    # beyond sqrt(max disc) the counts vanish
    big = scan(Q, A2, 3, prime_bound=10, tail_grid=(10**6,))
    assert big.tail_strong[10**6] == 0 and big.tail_weak[10**6] == 0


def test_default_excluded_primes():
    assert default_excluded_primes(A2) == (2, 3)
    assert default_excluded_primes(A3) == (2, 3)
    assert default_excluded_primes(family(DynkinType("A", 4))) == (2, 5)


def test_deng_fit_rational_small():
    fit = deng_fit(Q, A2, [4, 6, 8, 10])
    assert fit["expected"] == 5
    assert abs(fit["slope"] - 5) < 0.5  # loose at tiny heights


def test_scan_dump_rows():
    rep = scan(Q, A2, 3, prime_bound=10, dump=True)
    assert len(rep.dump_rows) == rep.total
