import random

import numpy as np
import pytest
import sympy

from adesieve.curvefam import (
    CurveFamily,
    discriminant_A,
    discriminant_D4,
    discriminant_int,
    family,
    gradient_A,
    monic_from_point,
    poly_derivative,
    subresultant_resultant,
)
from adesieve.numfield import FieldContext, point_from_ints
from adesieve.rootsys import DynkinType, table_v_dim

Q = FieldContext(0)
QI = FieldContext(-1)

ALL_TYPES = (
    [DynkinType("A", r) for r in range(2, 11)]
    + [DynkinType("D", r) for r in range(4, 13)]
    + [DynkinType("E", r) for r in (6, 7, 8)]
)


def test_family_examples():
    f = family(DynkinType("A", 2))
    assert f.degrees == (2, 3)
    assert f.equation == "y^2 = x^3 + p2x^1 + p3"
    f = family(DynkinType("E", 8))
    assert f.degrees == (2, 8, 12, 14, 18, 20, 24, 30)
    assert sum(f.degrees) == 128
    f = family(DynkinType("D", 5))
    assert f.degrees == (2, 4, 5, 6, 8)
    assert sum(f.degrees) == 25
    # duplicated even invariant degree for even D ranks
    assert family(DynkinType("D", 4)).degrees == (2, 4, 4, 6)


@pytest.mark.parametrize("t", ALL_TYPES, ids=str)
def test_degree_sum_matches_module_dimension(t):
    assert sum(family(t).degrees) == table_v_dim(t)


@pytest.mark.parametrize("t", ALL_TYPES, ids=str)
def test_disc_degree_is_root_count(t):
    fam = family(t)
    if t.kind == "A":
        expected = t.rank * (t.rank + 1)
    elif t.kind == "D":
        expected = 2 * t.rank * (t.rank - 1)
    else:
        expected = {6: 72, 7: 126, 8: 240}[t.rank]
    assert fam.disc_degree == expected


def test_discriminant_a2_examples():
    assert discriminant_int(2, [0, 0]) == 0
    assert discriminant_int(2, [-1, 0]) == 4
    assert discriminant_int(2, [0, 1]) == -27
    assert discriminant_int(2, [-2, 4]) == -400


def test_discriminant_matches_sympy():
    rng = random.Random(31)
    x = sympy.symbols("x")
    for m in range(2, 7):
        for _ in range(30):
            coords = [rng.randrange(-9, 10) for _ in range(m)]
            f = x ** (m + 1) + sum(
                c * x ** (m + 1 - d) for c, d in zip(coords, range(2, m + 2))
            )
            expected = sympy.discriminant(sympy.Poly(f, x))
            assert discriminant_int(m, coords) == expected


def test_closed_form_equals_resultant_path_on_a2():
    rng = random.Random(37)
    for _ in range(100):
        p2, p3 = rng.randrange(-50, 51), rng.randrange(-50, 51)
        f = monic_from_point(Q, 2, point_from_ints([p2, p3]))
        res = subresultant_resultant(Q, f, poly_derivative(Q, f))
        assert -res[0] == discriminant_int(2, [p2, p3])  # sign (-1)^(3*2/2)


def test_weighted_homogeneity_random():
    rng = random.Random(41)
    for m in (2, 3, 4):
        fam = family(DynkinType("A", m))
        for _ in range(100):
            b = [rng.randrange(-6, 7) for _ in range(m)]
            lam = rng.randrange(1, 4)
            scaled = [c * lam**d for c, d in zip(b, fam.degrees)]
            assert discriminant_int(m, scaled) == lam ** (m * (m + 1)) * discriminant_int(m, b)


def test_vanishing_iff_repeated_root_a2():
    rng = random.Random(43)
    x = sympy.symbols("x")
    for _ in range(10**4):
        p2, p3 = rng.randrange(-40, 41), rng.randrange(-40, 41)
        f = sympy.Poly(x**3 + p2 * x + p3, x)
        has_rep = sympy.degree(sympy.gcd(f, f.diff(x)), x) > 0
        assert (discriminant_int(2, [p2, p3]) == 0) == has_rep


def test_discriminant_over_gaussian_integers():
    # dual route: exact value vs numerical product of root differences
    rng = random.Random(47)
    for m in (2, 3):
        for _ in range(40):
            b = [(rng.randrange(-5, 6), rng.randrange(-5, 6)) for _ in range(m)]
            exact = discriminant_A(QI, DynkinType("A", m), tuple(b))
            coeffs = [1, 0] + [complex(a, bb) for a, bb in b]
            roots = np.roots(coeffs)
            num = 1.0 + 0j
            for i in range(len(roots)):
                for j in range(i + 1, len(roots)):
                    num *= (roots[i] - roots[j]) ** 2
            got = complex(exact[0], exact[1])
            assert abs(got - num) <= 1e-6 * max(1.0, abs(num))


def test_gradient_examples():
    t = DynkinType("A", 2)
    assert gradient_A(Q, t, point_from_ints([-2, 4])) == ((-48, 0), (-216, 0))
    assert gradient_A(Q, t, point_from_ints([0, 0])) == ((0, 0), (0, 0))
    assert gradient_A(Q, t, point_from_ints([1, 1])) == ((-12, 0), (-54, 0))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_gradient_matches_ring_finite_differences(m):
    # Delta(b + eps*e_i) - Delta(b) = eps * grad_i(b) mod eps^2
    rng = random.Random(53)
    t = DynkinType("A", m)
    for _ in range(25):
        b = [rng.randrange(-8, 9) for _ in range(m)]
        grad = gradient_A(Q, t, point_from_ints(b))
        eps = 10**6  # far larger than any second-order coefficient scale
        base = discriminant_int(m, b)
        for i in range(m):
            bb = list(b)
            bb[i] += eps
            diff = discriminant_int(m, bb) - base
            assert (diff - eps * grad[i][0]) % (eps * eps) == 0


def test_gradient_generic_path_agrees_with_closed_form_a2():
    # force the interpolation path on A2 by comparing against closed form
    rng = random.Random(59)
    t3 = DynkinType("A", 3)
    for _ in range(20):
        b = [rng.randrange(-8, 9) for _ in range(3)]
        grad = gradient_A(Q, t3, point_from_ints(b))
        x, p2, p3, p4 = sympy.symbols("x p2 p3 p4")
        disc = sympy.discriminant(x**4 + p2 * x**2 + p3 * x + p4, x)
        for i, sym in enumerate((p2, p3, p4)):
            expected = sympy.diff(disc, sym).subs(
                {p2: b[0], p3: b[1], p4: b[2]}
            )
            assert grad[i][0] == expected


def test_rank_bound_and_type_guard():
    with pytest.raises(ValueError):
        discriminant_A(Q, DynkinType("A", 11), point_from_ints([0] * 11))
    with pytest.raises(ValueError):
        discriminant_A(Q, DynkinType("D", 4), point_from_ints([0] * 4))


def test_d4_discriminant_not_provided():
    with pytest.raises(NotImplementedError):
        discriminant_D4(point_from_ints([1, 2, 3, 4]))
