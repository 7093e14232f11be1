from fractions import Fraction

import pytest

from adesieve.curvefam import discriminant_A, family
from adesieve.localdens import (
    BudgetExceeded,
    ResidueRing,
    euler_product,
    local_density,
    local_density_accelerated,
    local_density_brute,
    residue_field_reps,
)
from adesieve.numfield import FieldContext, primes_above, primes_up_to_norm
from adesieve.rootsys import DynkinType

Q = FieldContext(0)
QI = FieldContext(-1)
A2 = family(DynkinType("A", 2))
A3 = family(DynkinType("A", 3))


def P(ctx, p, which=0):
    return primes_above(ctx, p)[which]


def test_residue_ring_sizes():
    assert ResidueRing(Q, (9, 0)).size == 9
    two = P(QI, 2)
    ring = ResidueRing(QI, QI.mul(two.generator, two.generator))
    assert ring.size == 4
    assert len(list(ring.elements())) == 4
    three = P(QI, 3)
    assert ResidueRing(QI, three.generator).size == 9
    assert len(residue_field_reps(QI, three)) == 9
    five = P(QI, 5)
    assert len(residue_field_reps(QI, five)) == 5


def test_residue_ring_reduction_is_consistent():
    for ctx, p in [(QI, 5), (QI, 3), (QI, 2), (FieldContext(-7), 2)]:
        pr = P(ctx, p)
        g = ctx.mul(pr.generator, pr.generator)
        ring = ResidueRing(ctx, g)
        reps = list(ring.elements())
        assert len(set(reps)) == ring.size == pr.norm ** 2
        for x in reps:
            # rep - reduce(rep + g) must vanish mod g
            y = ring.reduce(ctx.add(x, g))
            diff = ctx.sub(x, y)
            assert ctx.divexact(diff, g) is not None or diff == (0, 0)


def test_a2_density_regression_constants():
    # oracle-confirmed by exhaustive enumeration of (Z/4)^2 and (Z/9)^2
    for method in ("brute", "accelerated"):
        assert local_density(Q, A2, P(Q, 2), method).rho == Fraction(1, 2)
        assert local_density(Q, A2, P(Q, 3), method).rho == Fraction(2, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_accelerated_equals_brute_small_rational(p):
    b = local_density_brute(Q, A2, P(Q, p))
    a = local_density_accelerated(Q, A2, P(Q, p))
    assert (a.rho, a.total_count) == (b.rho, b.total_count)
    assert 0 < a.rho < 1
    assert a.total_count == p ** 4


@pytest.mark.parametrize("p", [2, 3, 5])
def test_accelerated_equals_brute_gaussian(p):
    for pr in primes_above(QI, p):
        b = local_density_brute(QI, A2, pr)
        a = local_density_accelerated(QI, A2, pr)
        assert a.rho == b.rho
        assert a.total_count == pr.norm ** 4
    # conjugate split primes carry the same density
    fives = primes_above(QI, 5)
    if len(fives) == 2:
        r0 = local_density(QI, A2, fives[0]).rho
        r1 = local_density(QI, A2, fives[1]).rho
        assert r0 == r1


def test_a3_brute_equals_accelerated_tiny():
    for p in (2, 3):
        b = local_density_brute(Q, A3, P(Q, p), budget=10**7)
        a = local_density_accelerated(Q, A3, P(Q, p))
        assert a.rho == b.rho


def test_density_unit_rescaling_invariance():
    # twisting every residue tuple by a unit permutes the count
    pr = P(QI, 5)
    ring = ResidueRing(QI, QI.mul(pr.generator, pr.generator))
    reps = list(ring.elements())
    for u in QI.units():
        plain = twisted = 0
        for c2 in reps:
            for c3 in reps:
                d_plain = discriminant_A(QI, A2.type, (c2, c3))
                tw = (QI.mul(QI.pow(u, 2), c2), QI.mul(QI.pow(u, 3), c3))
                d_tw = discriminant_A(QI, A2.type, tw)
                plain += not ring.is_zero(d_plain)
                twisted += not ring.is_zero(d_tw)
        assert plain == twisted


def test_one_minus_rho_scaled_bounded():
    for pr in primes_up_to_norm(Q, 30):
        ld = local_density(Q, A2, pr)
        assert (1 - ld.rho) * pr.norm**2 <= 10 * A2.rank


def test_euler_product_examples():
    ep = euler_product(Q, A2, 3)
    assert ep.exact_product == Fraction(1, 3)
    ep10 = euler_product(Q, A2, 10)
    ep30 = euler_product(Q, A2, 30)
    assert ep30.value <= ep10.value <= ep.value  # factors in (0,1)
    assert 0 <= ep30.tail_halfwidth < ep10.tail_halfwidth
    assert ep30.to_json()["truncation_bound"] == 30


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        local_density_brute(Q, A2, P(Q, 101), budget=10**6)
    with pytest.raises(BudgetExceeded):
        local_density_accelerated(Q, A2, P(Q, 10007), budget=10**6)
