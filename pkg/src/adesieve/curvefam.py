"""Curve families attached to each Dynkin type: invariant degrees,
equation templates, and exact discriminants for the type-A families.

The type-A discriminant is the polynomial discriminant of the odd/even
hyperelliptic model f(x) = x^(m+1) + p_2 x^(m-1) + ... + p_(m+1),
computed by an exact subresultant resultant over the base ring.  It is
already primitive as a polynomial in the p_i (the two extreme monomials
carry coprime coefficients (m+1)^(m+1) and m^m), and the sign is pinned
by disc(x^3 + p2 x + p3) = -4 p2^3 - 27 p3^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from .numfield import FieldContext, InvariantPoint, RingInt
from .rootsys import CLASSICAL_ROOT_COUNT, DynkinType, table_v_dim

DESK_RANK_BOUND = 10  # exact type-A evaluation supported up to this rank


@dataclass(frozen=True)
class CurveFamily:
    type: DynkinType
    degrees: Tuple[int, ...]
    equation: str
    marked_points: int

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def disc_degree(self) -> int:
        """Weighted degree of the discriminant = number of roots."""
        return CLASSICAL_ROOT_COUNT[self.type.kind](self.type.rank)

    def to_json(self) -> dict:
        return {
            "type": str(self.type),
            "degrees": list(self.degrees),
            "disc_degree": self.disc_degree,
        }


def family(t: DynkinType) -> CurveFamily:
    r = t.rank
    if t.kind == "A":
        degs = tuple(range(2, r + 2))
        n1 = r + 1
        terms = " + ".join(f"p{d}x^{n1 - d}" for d in degs[:-1])
        eq = f"y^2 = x^{n1} + {terms} + p{r + 1}"
        marked = 1 if r % 2 == 0 else 2
    elif t.kind == "D":
        # y(xy + p_r) = x^(r-1) + p_2 x^(r-2) + ... + p_(2r-2); the y-term
        # invariant duplicates degree r in the multiset when r is even.
        degs = tuple(sorted(list(range(2, 2 * r - 1, 2)) + [r]))
        eq = (f"y(xy + p{r}) = x^{r - 1} + "
              + " + ".join(f"p{d}x^{(2 * r - 2 - d) // 2}" for d in range(2, 2 * r - 3, 2))
              + f" + p{2 * r - 2}")
        marked = 3 if r % 2 == 0 else 2
    else:
        table = {
            6: ((2, 5, 6, 8, 9, 12),
                "y^3 = x^4 + (p2x^2 + p5x + p8)y + (p6x^2 + p9x + p12)", 1),
            7: ((2, 6, 8, 10, 12, 14, 18),
                "y^3 = x^3y + p10x^2 + x(p2y^2 + p8y + p14) + p6y^2 + p12y + p18", 2),
            8: ((2, 8, 12, 14, 18, 20, 24, 30),
                "y^3 = x^5 + (p2x^3 + p8x^2 + p14x + p20)y + (p12x^3 + p18x^2 + p24x + p30)", 1),
        }
        degs, eq, marked = table[r]
    fam = CurveFamily(t, degs, eq, marked)
    if sum(degs) != table_v_dim(t):
        raise AssertionError(f"{t}: invariant degrees sum {sum(degs)} != dim V")
    return fam


# ---------------------------------------------------------------------------
# exact resultants over the base ring
# ---------------------------------------------------------------------------

def _poly_deg(p: Sequence) -> int:
    return len(p) - 1


def subresultant_resultant(ctx: FieldContext, A: List[RingInt], B: List[RingInt]) -> RingInt:
    """Res(A, B) by the subresultant PRS; all divisions are exact.

    Polynomials are coefficient lists, highest degree first, entries in
    the ring of integers of ctx.
    """
    zero, one = ctx.zero(), ctx.one()

    def lc(p):
        return p[0]

    def trim(p):
        i = 0
        while i < len(p) - 1 and p[i] == zero:
            i += 1
        return p[i:]

    def is_zero(p):
        return len(p) == 1 and p[0] == zero

    def scale(p, c):
        return [ctx.mul(c, x) for x in p]

    def prem(p, q):
        # pseudo-remainder: lc(q)^(deg p - deg q + 1) * p mod q
        dq = _poly_deg(q)
        c = lc(q)
        r = list(p)
        e = _poly_deg(p) - dq + 1
        while not is_zero(r) and _poly_deg(r) >= dq:
            f = lc(r)
            shift = _poly_deg(r) - dq
            r = scale(r, c)
            sub = [ctx.mul(f, x) for x in q] + [zero] * shift
            r = trim([ctx.sub(a, b) for a, b in zip(r, sub)])
            e -= 1
        if e > 0 and not is_zero(r):
            r = scale(r, ctx.pow(c, e))
        return r

    def divex(x, y):
        q = ctx.divexact(x, y)
        if q is None:
            raise AssertionError("inexact division in subresultant PRS")
        return q

    A = trim(list(A))
    B = trim(list(B))
    if is_zero(A) or is_zero(B):
        return one if _poly_deg(A) == 0 and _poly_deg(B) == 0 else zero
    if _poly_deg(A) < _poly_deg(B):
        sflip = -1 if (_poly_deg(A) & 1) and (_poly_deg(B) & 1) else 1
        return ctx.mul_int(subresultant_resultant(ctx, B, A), sflip)
    if _poly_deg(B) == 0:
        return ctx.pow(B[0], _poly_deg(A))
    s = 1
    g = one
    h = one
    while True:
        dA, dB = _poly_deg(A), _poly_deg(B)
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            s = -s
        R = prem(A, B)
        A = B
        if is_zero(R):
            return zero  # shared factor: the previous B had positive degree
        denom = ctx.mul(g, ctx.pow(h, delta))
        B = [divex(x, denom) for x in R]
        g = lc(A)
        if delta == 1:
            h = g
        elif delta > 1:
            h = divex(ctx.pow(g, delta), ctx.pow(h, delta - 1))
        if _poly_deg(B) == 0:
            dA = _poly_deg(A)
            num = ctx.pow(B[0], dA)
            res = divex(num, ctx.pow(h, dA - 1)) if dA >= 1 else one
            return ctx.mul_int(res, s)


def monic_from_point(ctx: FieldContext, m: int, b: InvariantPoint) -> List[RingInt]:
    """f = x^(m+1) + p_2 x^(m-1) + ... + p_(m+1), highest degree first."""
    if len(b) != m:
        raise ValueError(f"type A{m} needs {m} coordinates, got {len(b)}")
    return [ctx.one(), ctx.zero()] + list(b)


def poly_derivative(ctx: FieldContext, f: List[RingInt]) -> List[RingInt]:
    n = _poly_deg(f)
    return [ctx.mul_int(c, n - i) for i, c in enumerate(f[:-1])]


def discriminant_A(ctx: FieldContext, t: DynkinType, b: InvariantPoint) -> RingInt:
    """Primitive discriminant of the type-A family at an integral point."""
    if t.kind != "A":
        raise ValueError("discriminant evaluation is type A only")
    m = t.rank
    if m > DESK_RANK_BOUND:
        raise ValueError(f"rank {m} beyond desk-scale bound {DESK_RANK_BOUND}")
    if m == 2:
        # closed form, kept as the scan fast path
        p2, p3 = b
        c = ctx.mul_int(ctx.mul(ctx.mul(p2, p2), p2), -4)
        return ctx.add(c, ctx.mul_int(ctx.mul(p3, p3), -27))
    f = monic_from_point(ctx, m, b)
    res = subresultant_resultant(ctx, f, poly_derivative(ctx, f))
    n = m + 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return ctx.mul_int(res, sign)


def discriminant_int(m: int, coords: Sequence[int]) -> int:
    """Rational shortcut: discriminant over Z from plain integers."""
    ctx = FieldContext(0)
    return discriminant_A(ctx, DynkinType("A", m), tuple((c, 0) for c in coords))[0]


def discriminant_D4(b: InvariantPoint):
    """Plane-curve discriminant for the rank-4 D family (not provided)."""
    raise NotImplementedError(
        "exact D4 discriminant evaluation is not implemented; only degree "
        "metadata is exposed for D types"
    )


def gradient_A(ctx: FieldContext, t: DynkinType, b: InvariantPoint) -> Tuple[RingInt, ...]:
    """Formal partial derivatives of the discriminant at b.

    Each partial is recovered exactly from univariate samples: Delta
    restricted to a coordinate line is a polynomial of degree at most
    the weighted degree over that coordinate's weight.
    """
    if t.kind != "A":
        raise ValueError("gradient evaluation is type A only")
    m = t.rank
    if m == 2:
        p2, p3 = b
        return (ctx.mul_int(ctx.mul(p2, p2), -12), ctx.mul_int(p3, -54))
    out = []
    wdeg = m * (m + 1)
    for i, d in enumerate(family(t).degrees):
        deg_i = wdeg // d
        samples = []
        for s in range(deg_i + 2):
            bb = list(b)
            bb[i] = ctx.add(bb[i], ctx.mul_int(ctx.one(), s))
            samples.append(discriminant_A(ctx, t, tuple(bb)))
        out.append(_derivative_at_zero(ctx, samples))
    return tuple(out)


def _derivative_at_zero(ctx: FieldContext, samples: List[RingInt]) -> RingInt:
    """Coefficient of t in the polynomial with values samples[t], t = 0..D.

    Finite-difference form: f'(0) = sum_{k>=1} (-1)^(k+1) D^k f(0) / k,
    where D is the forward difference; the rational sum collapses to a
    ring element because f has coefficients in the ring.
    """
    diffs = [list(samples)]
    while len(diffs[-1]) > 1:
        prev = diffs[-1]
        diffs.append([ctx.sub(prev[j + 1], prev[j]) for j in range(len(prev) - 1)])
    # accumulate over a common denominator lcm(1..K)
    from math import lcm
    K = len(diffs) - 1
    den = lcm(*range(1, K + 1)) if K >= 1 else 1
    acc = ctx.zero()
    for k in range(1, K + 1):
        term = ctx.mul_int(diffs[k][0], (den // k) * (1 if k % 2 == 1 else -1))
        acc = ctx.add(acc, term)
    q = ctx.divexact(acc, ctx.from_int(den))
    if q is None:
        raise AssertionError("derivative reconstruction was not integral")
    return q
