"""Exact local densities: the proportion of residue points mod p^2 with
nonzero discriminant, and truncated Euler products with a heuristic tail.

Densities are computed over the actual residue ring O/p^2 of the base
field (split, inert and ramified primes all get the right ring), by two
independent routes:

  * brute force over all coordinate tuples, and
  * an accelerated count that iterates over all but the last coordinate
    and counts roots of the residual univariate congruence mod p^2.

Both are exact rational counts; tests require them to agree wherever
both run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .curvefam import CurveFamily, discriminant_A
from .numfield import FieldContext, PrimeIdeal, RingInt, primes_up_to_norm


class BudgetExceeded(RuntimeError):
    """Residue enumeration would exceed the configured budget."""


def _hnf_basis(ctx: FieldContext, g: RingInt) -> Tuple[int, int, int]:
    """Reduced basis of the lattice (g) in (a, b) coordinates.

    Returns (A, C, D) meaning the lattice is spanned by (A, 0) and
    (C, D); the quotient has the A*D = N(g) representatives
    {(i, j) : 0 <= i < A, 0 <= j < D}.
    """
    r1 = g
    r2 = ctx.mul((0, 1), g)
    b1, b2 = r1[1], r2[1]
    d, u, v = _xgcd(b1, b2)
    C = u * r1[0] + v * r2[0]
    det = abs(r1[0] * r2[1] - r2[0] * r1[1])
    A = det // d
    return A, C % A, d


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class ResidueRing:
    """O/(g) for a ring integer g, with canonical small representatives."""

    def __init__(self, ctx: FieldContext, g: RingInt):
        self.ctx = ctx
        self.modulus = g
        if ctx.d == 0:
            self.size = abs(g[0])
        else:
            self.A, self.C, self.D = _hnf_basis(ctx, g)
            self.size = self.A * self.D

    def reduce(self, x: RingInt) -> RingInt:
        if self.ctx.d == 0:
            return (x[0] % self.size, 0)
        a, b = x
        t = b // self.D
        a -= t * self.C
        b -= t * self.D
        return (a % self.A, b)

    def elements(self) -> Iterable[RingInt]:
        if self.ctx.d == 0:
            return ((i, 0) for i in range(self.size))
        return ((i, j) for j in range(self.D) for i in range(self.A))

    def is_zero(self, x: RingInt) -> bool:
        return self.reduce(x) == (0, 0)


def residue_field_reps(ctx: FieldContext, prime: PrimeIdeal) -> List[RingInt]:
    """Small representatives of O/p, in a fixed order."""
    ring = ResidueRing(ctx, prime.generator)
    return list(ring.elements())


@dataclass(frozen=True)
class LocalDensity:
    prime: PrimeIdeal
    rho: Fraction
    total_count: int
    nonzero_count: int

    def to_json(self) -> dict:
        return {
            "norm": self.prime.norm,
            "prime": self.prime.label(),
            "rho_num": self.rho.numerator,
            "rho_den": self.rho.denominator,
            "total": self.total_count,
            "nonzero": self.nonzero_count,
        }


def _check(prime: PrimeIdeal, total: int, nonzero: int) -> LocalDensity:
    rho = Fraction(nonzero, total)
    if not 0 < rho < 1:
        raise AssertionError(f"local density {rho} out of (0,1) at {prime.label()}")
    return LocalDensity(prime, rho, total, nonzero)


def local_density_brute(ctx: FieldContext, fam: CurveFamily, prime: PrimeIdeal,
                        budget: int = 10**8) -> LocalDensity:
    """Full enumeration of coordinate tuples mod p^2."""
    r = fam.rank
    q2 = prime.norm ** 2          # size of O/p^2
    total = prime.norm ** (2 * r)
    if total > budget:
        raise BudgetExceeded(f"brute enumeration of {total} tuples at {prime.label()}")
    if ctx.d == 0 and fam.type.kind == "A" and fam.type.rank == 2:
        return _check(prime, total, _brute_a2_rational(prime.p))
    ring = ResidueRing(ctx, ctx.mul(prime.generator, prime.generator))
    reps = list(ring.elements())
    nonzero = 0
    for tup in _tuples(reps, r):
        if not ring.is_zero(discriminant_A(ctx, fam.type, tup)):
            nonzero += 1
    return _check(prime, total, nonzero)


def _tuples(reps, r):
    if r == 1:
        for x in reps:
            yield (x,)
        return
    for rest in _tuples(reps, r - 1):
        for x in reps:
            yield rest + (x,)


def _brute_a2_rational(p: int) -> int:
    """Vectorized count of (a, b) mod p^2 with -4a^3 - 27b^2 != 0 mod p^2."""
    import numpy as np

    m = p * p
    b = np.arange(m, dtype=np.int64)
    b2 = (27 * ((b * b) % m)) % m
    nonzero = 0
    for a in range(m):
        t = (-4 * pow(a, 3, m) - b2) % m
        nonzero += int(np.count_nonzero(t))
    return nonzero


def _univariate_disc_coeffs(ctx: FieldContext, fam: CurveFamily,
                            prefix: Tuple[RingInt, ...]) -> List[RingInt]:
    """Coefficients (ascending) of Delta as a polynomial in the last
    coordinate, with the other coordinates fixed; exact interpolation."""
    m = fam.type.rank
    deg = m  # degree of the discriminant in the constant coefficient
    samples = []
    for tval in range(deg + 1):
        b = prefix + (ctx.from_int(tval),)
        samples.append(discriminant_A(ctx, fam.type, b))
    # Lagrange interpolation componentwise over Q; results are integral.
    coeffs = []
    pts = list(range(deg + 1))
    for k in range(deg + 1):
        acc_a = Fraction(0)
        acc_b = Fraction(0)
        for i, ti in enumerate(pts):
            # coefficient of x^k in the i-th Lagrange basis polynomial
            lag = _lagrange_coeff(pts, i, k)
            acc_a += lag * samples[i][0]
            acc_b += lag * samples[i][1]
        if acc_a.denominator != 1 or acc_b.denominator != 1:
            raise AssertionError("interpolated coefficient not integral")
        coeffs.append((int(acc_a), int(acc_b)))
    return coeffs


def _lagrange_coeff(pts: List[int], i: int, k: int) -> Fraction:
    """Coefficient of x^k in prod_{j != i} (x - pts[j]) / (pts[i] - pts[j])."""
    num = [Fraction(1)]
    den = 1
    for j, tj in enumerate(pts):
        if j == i:
            continue
        num = _polymul_lin(num, -tj)
        den *= pts[i] - tj
    return num[k] / den if k < len(num) else Fraction(0)


def _polymul_lin(p: List[Fraction], c: int) -> List[Fraction]:
    # multiply ascending-coefficient poly by (x + c)
    out = [Fraction(0)] * (len(p) + 1)
    for i, a in enumerate(p):
        out[i] += a * c
        out[i + 1] += a
    return out


from functools import lru_cache
from itertools import product as _cartesian


@lru_cache(maxsize=None)
def _lagrange_int_matrix(deg: int) -> Tuple[Tuple[Tuple[int, ...], ...], int]:
    """Integerized inverse Vandermonde on sample points 0..deg.

    Returns (num, den) with coefficient_k = sum_i num[k][i]*sample_i / den,
    the division being exact for polynomials with integral coefficients.
    """
    pts = list(range(deg + 1))
    rows = []
    dens = []
    frac = [[_lagrange_coeff(pts, i, k) for i in range(deg + 1)]
            for k in range(deg + 1)]
    den = 1
    for row in frac:
        for f in row:
            den = den * f.denominator // math.gcd(den, f.denominator)
    num = tuple(tuple(int(f * den) for f in row) for row in frac)
    return num, den


def _accelerated_rational(fam: CurveFamily, prime: PrimeIdeal,
                          budget: int) -> LocalDensity:
    """Plain-integer fast lane of the accelerated count over Q."""
    ctx = FieldContext(0)
    r = fam.rank
    m = fam.type.rank
    p = prime.p
    p2 = p * p
    work = p2 ** (r - 1) * p
    if work > budget:
        raise BudgetExceeded(f"accelerated count of {work} steps at {prime.label()}")
    num, den = _lagrange_int_matrix(m)
    t = fam.type
    zeros = 0
    for prefix in _cartesian(range(p2), repeat=r - 1):
        pref = tuple((c, 0) for c in prefix)
        samples = [discriminant_A(ctx, t, pref + ((tv, 0),))[0]
                   for tv in range(m + 1)]
        coeffs = []
        for k in range(m + 1):
            acc = sum(num[k][i] * samples[i] for i in range(m + 1))
            q_, r_ = divmod(acc, den)
            if r_:
                raise AssertionError("interpolated coefficient not integral")
            coeffs.append(q_)
        cmod = [c % p2 for c in coeffs]
        dmod = [(k * coeffs[k]) % p2 for k in range(1, m + 1)]
        for rep in range(p):
            val = 0
            for c in reversed(cmod):
                val = (val * rep + c) % p2
            if val % p:
                continue
            dval = 0
            for c in reversed(dmod):
                dval = (dval * rep + c) % p
            if dval:
                zeros += 1
            elif val == 0:
                zeros += p
    total = p ** (2 * r)
    return _check(prime, total, total - zeros)


def local_density_accelerated(ctx: FieldContext, fam: CurveFamily,
                              prime: PrimeIdeal, budget: int = 10**9) -> LocalDensity:
    """Iterate all but the last coordinate; count roots of the residual
    univariate congruence mod p^2 via Hensel-style lifting counts."""
    if fam.type.kind != "A":
        raise ValueError("accelerated counting is for type A families")
    if ctx.d == 0:
        return _accelerated_rational(fam, prime, budget)
    r = fam.rank
    q = prime.norm
    q2 = q * q
    total = q ** (2 * r)
    work = q ** (2 * (r - 1)) * q
    if work > budget:
        raise BudgetExceeded(f"accelerated count of {work} steps at {prime.label()}")
    pi = prime.generator
    pi2 = ctx.mul(pi, pi)
    ring2 = ResidueRing(ctx, pi2)
    field_reps = residue_field_reps(ctx, prime)
    prefix_reps = list(ring2.elements())

    def div_pi(x: RingInt) -> bool:
        return ctx.divexact(x, pi) is not None

    def div_pi2(x: RingInt) -> bool:
        return ctx.divexact(x, pi2) is not None

    zeros = 0
    for prefix in _tuples(prefix_reps, r - 1):
        coeffs = _univariate_disc_coeffs(ctx, fam, prefix)
        dcoeffs = [ctx.mul_int(c, k) for k, c in enumerate(coeffs)][1:]
        for rep in field_reps:
            val = _horner(ctx, coeffs, rep)
            if not div_pi(val):
                continue
            dval = _horner(ctx, dcoeffs, rep)
            if not div_pi(dval):
                zeros += 1          # unique lift mod p^2
            elif div_pi2(val):
                zeros += q          # every lift works
    return _check(prime, total, total - zeros)


def _horner(ctx: FieldContext, coeffs_ascending: List[RingInt], x: RingInt) -> RingInt:
    acc = ctx.zero()
    for c in reversed(coeffs_ascending):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def local_density(ctx: FieldContext, fam: CurveFamily, prime: PrimeIdeal,
                  method: str = "auto", budget: int = 10**8) -> LocalDensity:
    if fam.type.kind != "A":
        raise ValueError("local densities need a discriminant evaluator (type A)")
    if method == "brute":
        return local_density_brute(ctx, fam, prime, budget)
    if method == "accelerated":
        return local_density_accelerated(ctx, fam, prime, budget)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        return local_density_accelerated(ctx, fam, prime, budget)
    except BudgetExceeded:
        return local_density_brute(ctx, fam, prime, budget)


@dataclass
class EulerProduct:
    value: float
    exact_product: Fraction
    truncation_bound: int
    tail_halfwidth: float
    factors: List[LocalDensity]

    def to_json(self) -> dict:
        return {
            "product": self.value,
            "product_num": str(self.exact_product.numerator),
            "product_den": str(self.exact_product.denominator),
            "truncation_bound": self.truncation_bound,
            "tail": self.tail_halfwidth,
            "primes": [f.to_json() for f in self.factors],
        }


def euler_product(ctx: FieldContext, fam: CurveFamily, bound: int,
                  budget: int = 10**9) -> EulerProduct:
    """Product of local densities over all primes of norm <= bound.

    The tail halfwidth is a documented heuristic, not a theorem: it
    extrapolates the empirical bound (1 - rho) <= c / Np^2 with c taken
    as the worst constant seen below the truncation bound.
    """
    factors = []
    prod = Fraction(1)
    c = 0.0
    for pr in primes_up_to_norm(ctx, bound):
        ld = local_density(ctx, fam, pr, budget=budget)
        factors.append(ld)
        prod *= ld.rho
        c = max(c, float(1 - ld.rho) * pr.norm**2)
    # sum over norms beyond the bound: at most [F:Q] primes per norm
    tail = c * ctx.degree / bound
    return EulerProduct(float(prod), prod, bound, tail, factors)
