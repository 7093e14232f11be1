"""Integral orbit construction for the type-A families.

Given a monic polynomial f whose discriminant is weakly divisible by
m^2 (m squarefree), build an integral matrix with characteristic
polynomial f, superdiagonal (m, 1, ..., 1, m), zeros above the
superdiagonal, and product invariant m over the flip-paired
superdiagonal slots.

The matrix layout is a derived companion-like model: the coefficient
band sits on a single anti-band through a common pivot row, which makes
the characteristic polynomial exactly linear in the coefficients (no
two band cells have disjoint cycle supports).  The published layout
differs cosmetically; the contract here is the characteristic
polynomial, certified against two independent exact routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .curvefam import subresultant_resultant
from .localdens import ResidueRing, residue_field_reps
from .numfield import FieldContext, PrimeIdeal, RingInt, factor, valuation


class NoShift(ValueError):
    """m^2 does not weakly divide the discriminant."""


class ShapeError(ValueError):
    """Matrix does not have the low-triangular-plus-superdiagonal shape."""


@dataclass(frozen=True)
class MonicPoly:
    """x^(n+1) + b_1 x^n + ... + b_(n+1); coeffs stores (1, b_1, ..., b_(n+1))."""

    coeffs: Tuple[RingInt, ...]  # descending, leading entry (1, 0)

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != (1, 0):
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_ints(cls, coeffs: Sequence[int]) -> "MonicPoly":
        return cls(tuple((c, 0) for c in coeffs))

    def eval(self, ctx: FieldContext, x: RingInt) -> RingInt:
        acc = ctx.zero()
        for c in self.coeffs:
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def derivative_coeffs(self, ctx: FieldContext) -> List[RingInt]:
        n = self.degree
        return [ctx.mul_int(c, n - i) for i, c in enumerate(self.coeffs[:-1])]

    def eval_derivative(self, ctx: FieldContext, x: RingInt) -> RingInt:
        acc = ctx.zero()
        for c in self.derivative_coeffs(ctx):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def shift(self, ctx: FieldContext, l: RingInt) -> "MonicPoly":
        """The polynomial f(x + l), by repeated synthetic division by x - l."""
        a = list(self.coeffs)
        n = len(a) - 1
        res = [ctx.zero()] * (n + 1)
        for idx in range(n + 1):
            acc = a[0]
            newa = [a[0]]
            for c in a[1:]:
                acc = ctx.add(ctx.mul(acc, l), c)
                newa.append(acc)
            res[n - idx] = newa[-1]  # remainders are the Taylor coefficients
            a = newa[:-1]
        return MonicPoly(tuple(res))

    def disc(self, ctx: FieldContext) -> RingInt:
        n = self.degree
        der = self.derivative_coeffs(ctx)
        res = subresultant_resultant(ctx, list(self.coeffs), der)
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return ctx.mul_int(res, sign)


def _coefficient_gradient_mod(ctx: FieldContext, f: MonicPoly,
                              prime: PrimeIdeal) -> List[RingInt]:
    """Partials of disc over all non-leading coefficients, mod the prime.

    Exact difference quotients: disc(f + pi*e_k) - disc(f) is divisible
    by pi, and the quotient reduces to the partial derivative mod pi.
    """
    pi = prime.generator
    base = f.disc(ctx)
    out = []
    for k in range(1, f.degree + 1):
        cc = list(f.coeffs)
        cc[k] = ctx.add(cc[k], pi)
        dd = MonicPoly(tuple(cc)).disc(ctx)
        q = ctx.divexact(ctx.sub(dd, base), pi)
        if q is None:
            raise AssertionError("difference quotient not divisible by pi")
        out.append(q)
    return out


def weak_shift(ctx: FieldContext, f: MonicPoly, m: RingInt,
               excluded_primes: Sequence[int] = ()) -> RingInt:
    """Shift l such that f(x+l) has its last two coefficients divisible
    by m and m^2; raises NoShift when m^2 does not weakly divide disc f.

    Weak divisibility at a prime q of m means v_q(disc f) >= 2 together
    with a nonvanishing coefficient gradient mod q; it forces a unique
    simple double root of f mod q whose lift satisfies the mod q^2
    condition, and the shift is that root, glued over the primes of m
    by the Chinese remainder theorem.
    """
    if ctx.is_unit(m):
        return ctx.zero()
    fac = factor(ctx, m)
    if any(e != 1 for _, e in fac):
        raise ValueError("m must be squarefree")
    if any(pr.p in tuple(excluded_primes) for pr, _ in fac):
        raise ValueError("m meets the excluded prime set")
    disc = f.disc(ctx)
    if disc == (0, 0):
        raise NoShift("discriminant vanishes")
    cur = ctx.zero()
    modulus = ctx.one()
    for pr, _ in fac:
        r = _weak_root_at(ctx, f, pr, disc)
        # extend cur from modulus to modulus * pi, hitting r mod pi
        pi = pr.generator
        for t in residue_field_reps(ctx, pr):
            cand = ctx.add(cur, ctx.mul(modulus, t))
            if ctx.divexact(ctx.sub(cand, r), pi) is not None:
                cur = cand
                break
        else:
            raise AssertionError("CRT step failed")
        modulus = ctx.mul(modulus, pi)
    return _small_rep(ctx, cur, modulus)


def _weak_root_at(ctx: FieldContext, f: MonicPoly, prime: PrimeIdeal,
                  disc: RingInt) -> RingInt:
    pi = prime.generator
    pi2 = ctx.mul(pi, pi)
    if valuation(ctx, prime, disc) < 2:
        raise NoShift(f"disc has valuation < 2 at {prime.label()}")
    grad = _coefficient_gradient_mod(ctx, f, prime)
    if all(ctx.divexact(g, pi) is not None for g in grad):
        raise NoShift(f"strongly divisible at {prime.label()}")
    roots = []
    for r in residue_field_reps(ctx, prime):
        if ctx.divexact(f.eval(ctx, r), pi) is None:
            continue
        if ctx.divexact(f.eval_derivative(ctx, r), pi) is None:
            continue
        roots.append(r)
    if len(roots) != 1:
        raise AssertionError(
            f"weak point at {prime.label()} has {len(roots)} critical roots")
    r = roots[0]
    if ctx.divexact(f.eval(ctx, r), pi2) is None:
        raise AssertionError("weak double root does not lift mod pi^2")
    return r


def _small_rep(ctx: FieldContext, x: RingInt, modulus: RingInt) -> RingInt:
    """Representative of x mod modulus of small absolute value."""
    if ctx.d == 0:
        mm = abs(modulus[0])
        r = x[0] % mm
        if 2 * r > mm:
            r -= mm
        return (r, 0)
    ring = ResidueRing(ctx, modulus)
    best = None
    for u in (x, ctx.sub(x, modulus), ctx.add(x, modulus)):
        red = ring.reduce(u)
        for cand in (red, ctx.sub(red, modulus)):
            if best is None or ctx.norm(cand) < ctx.norm(best):
                best = cand
    return best


@dataclass
class OrbitMatrix:
    ctx: FieldContext
    entries: List[List[RingInt]]
    denominator_bound: int = 1

    @property
    def dim(self) -> int:
        return len(self.entries)

    def superdiagonal(self) -> List[RingInt]:
        return [self.entries[i][i + 1] for i in range(self.dim - 1)]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "denominator_bound": self.denominator_bound,
            "rows": [[list(e) for e in row] for row in self.entries],
        }


def companion_matrix(ctx: FieldContext, f: MonicPoly) -> OrbitMatrix:
    """Low-triangular-plus-superdiagonal matrix with char poly f.

    Coefficient b_L (the x^(n+1-L) coefficient) occupies one cell whose
    cycle support contains the pivot row n, so the characteristic
    polynomial picks each coefficient up exactly once and no products.
    """
    n = f.degree - 1
    dim = f.degree
    b = f.coeffs[1:]  # b_1 ... b_(n+1)
    rows = [[ctx.zero() for _ in range(dim)] for _ in range(dim)]
    for i in range(dim - 1):
        rows[i][i + 1] = ctx.one()
    if n == 0:
        rows[0][0] = ctx.neg(b[0])
    else:
        for L in range(1, n):
            rows[n - 1][n - L] = ctx.neg(b[L - 1])
        rows[n][1] = ctx.neg(b[n - 1])
        rows[n][0] = ctx.neg(b[n])
    mat = OrbitMatrix(ctx, rows)
    cp = char_poly(ctx, mat)
    if cp != list(f.coeffs):
        raise AssertionError("companion model lost the characteristic polynomial")
    return mat


def char_poly(ctx: FieldContext, mat: OrbitMatrix) -> List[RingInt]:
    """det(xI - A) by fraction-free Bareiss elimination over the ring.

    Returns descending coefficients, leading (1, 0).  Pivots are the
    leading principal minors of xI - A, never zero (their top degree
    term is a power of x), so no pivoting is needed.
    """
    dim = mat.dim
    zero, one = ctx.zero(), ctx.one()

    def padd(p, q):
        if len(p) < len(q):
            p, q = q, p
        out = list(p)
        for i, c in enumerate(q):
            out[i] = ctx.add(out[i], c)
        return _ptrim(out, zero)

    def psub(p, q):
        return padd(p, [ctx.neg(c) for c in q])

    def pmul(p, q):
        if p == [zero] or q == [zero]:
            return [zero]
        out = [zero] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == zero:
                continue
            for j, c in enumerate(q):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, c))
        return _ptrim(out, zero)

    def pdivexact(p, q):
        # long division, exact by construction in Bareiss
        if p == [zero]:
            return [zero]
        rem = list(p)
        out = [zero] * (len(p) - len(q) + 1)
        while rem != [zero] and len(rem) >= len(q):
            shift = len(rem) - len(q)
            c = ctx.divexact(rem[-1], q[-1])
            if c is None:
                raise AssertionError("inexact division in Bareiss elimination")
            out[shift] = c
            sub = [zero] * shift + [ctx.mul(c, qq) for qq in q]
            rem = psub(rem, sub)
        if rem != [zero]:
            raise AssertionError("nonzero remainder in Bareiss elimination")
        return _ptrim(out, zero)

    m = [[([ctx.neg(mat.entries[i][j])] if i != j
           else [ctx.neg(mat.entries[i][j]), one])
          for j in range(dim)] for i in range(dim)]
    prev = [one]
    for k in range(dim - 1):
        for i in range(k + 1, dim):
            for j in range(k + 1, dim):
                num = psub(pmul(m[k][k], m[i][j]), pmul(m[i][k], m[k][j]))
                m[i][j] = pdivexact(num, prev)
        prev = m[k][k]
    det = m[dim - 1][dim - 1]
    det = det + [zero] * (dim + 1 - len(det))
    return list(reversed(det))


def _ptrim(p, zero):
    while len(p) > 1 and p[-1] == zero:
        p.pop()
    return p


def char_poly_faddeev(ctx: FieldContext, mat: OrbitMatrix) -> List[RingInt]:
    """Independent oracle: Faddeev-LeVerrier over the fraction field."""
    dim = mat.dim

    def fadd(x, y):
        return (x[0] + y[0], x[1] + y[1])

    def fmul(x, y):
        if ctx.d == 0:
            return (x[0] * y[0], Fraction(0))
        w0, w1 = ctx._omega_sq
        bb = x[1] * y[1]
        return (x[0] * y[0] + w0 * bb, x[0] * y[1] + x[1] * y[0] + w1 * bb)

    A = [[(Fraction(e[0]), Fraction(e[1])) for e in row] for row in mat.entries]
    Mk = [row[:] for row in A]
    coeffs = [(Fraction(1), Fraction(0))]
    for k in range(1, dim + 1):
        tr = (Fraction(0), Fraction(0))
        for i in range(dim):
            tr = fadd(tr, Mk[i][i])
        ck = (-tr[0] / k, -tr[1] / k)
        coeffs.append(ck)
        if k == dim:
            break
        for i in range(dim):
            Mk[i][i] = fadd(Mk[i][i], ck)
        Mk = [[_dotrow(A, Mk, i, j, fadd, fmul) for j in range(dim)]
              for i in range(dim)]
    out = []
    for ca, cb in coeffs:
        if ca.denominator != 1 or cb.denominator != 1:
            raise AssertionError("characteristic coefficients not integral")
        out.append((int(ca), int(cb)))
    return out


def _dotrow(A, B, i, j, fadd, fmul):
    acc = (Fraction(0), Fraction(0))
    for t in range(len(A)):
        acc = fadd(acc, fmul(A[i][t], B[t][j]))
    return acc


def construct_orbit(ctx: FieldContext, f: MonicPoly, m: RingInt,
                    excluded_primes: Sequence[int] = ()) -> OrbitMatrix:
    """The integral orbit representative remembering the divisor m.

    Shifts f so the trailing coefficients pick up m and m^2, builds the
    companion model, undoes the shift on the diagonal and conjugates by
    diag(m, 1, ..., 1, 1/m).  The result is integral with characteristic
    polynomial f and superdiagonal (m, 1, ..., 1, m).
    """
    if f.degree < 3:
        raise ValueError("construction needs degree >= 3")
    l = weak_shift(ctx, f, m, excluded_primes)
    g = f.shift(ctx, l)
    n = f.degree - 1
    m2 = ctx.mul(m, m)
    if ctx.divexact(g.coeffs[n], m) is None or ctx.divexact(g.coeffs[n + 1], m2) is None:
        raise AssertionError("shifted trailing coefficients missed m, m^2")
    base = companion_matrix(ctx, g)
    dim = base.dim
    rows = [row[:] for row in base.entries]
    for i in range(dim):
        rows[i][i] = ctx.add(rows[i][i], l)
    # conjugation by diag(m, 1, ..., 1, 1/m): entry (i, j) scales by
    # m^(e_i - e_j) with e = (1, 0, ..., 0, -1)
    e = [0] * dim
    e[0], e[-1] = 1, -1
    for i in range(dim):
        for j in range(dim):
            power = e[i] - e[j]
            if power > 0:
                rows[i][j] = ctx.mul(rows[i][j], ctx.pow(m, power))
            elif power < 0:
                q = ctx.divexact(rows[i][j], ctx.pow(m, -power))
                if q is None:
                    raise AssertionError(
                        f"conjugated entry ({i},{j}) is not integral")
                rows[i][j] = q
    out = OrbitMatrix(ctx, rows)
    if char_poly(ctx, out) != list(f.coeffs):
        raise AssertionError("constructed orbit lost the characteristic polynomial")
    sd = out.superdiagonal()
    expected = [m] + [ctx.one()] * (dim - 3) + [m]
    if sd != expected:
        raise AssertionError(f"superdiagonal {sd} != {expected}")
    return out


@dataclass(frozen=True)
class QValue:
    value: RingInt
    slots: int

    def to_json(self) -> dict:
        return {"value": list(self.value), "paired_slots": self.slots}


def q_invariant(ctx: FieldContext, w: OrbitMatrix) -> QValue:
    """Product of the flip-paired superdiagonal coordinates.

    Slots i and n+1-i of the superdiagonal belong to one coordinate
    line (the diagram flip pairs them); each orbit contributes a single
    factor, read off the lower-indexed slot.
    """
    dim = w.dim
    for i in range(dim):
        for j in range(i + 2, dim):
            if w.entries[i][j] != (0, 0):
                raise ShapeError(f"nonzero entry above the superdiagonal at ({i},{j})")
    sd = w.superdiagonal()
    n = len(sd)
    q = ctx.one()
    for i in range((n + 1) // 2):
        q = ctx.mul(q, sd[i])
    return QValue(q, (n + 1) // 2)
