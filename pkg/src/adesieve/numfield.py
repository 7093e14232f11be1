"""Base-field arithmetic: Q and the imaginary quadratic fields of class
number one, with prime ideals, valuations, heights and the fundamental
domain membership test.

Ring integers are exact integer pairs (a, b) meaning a + b*omega, where
omega = sqrt(d) for d = 2, 3 mod 4 and omega = (1 + sqrt(d))/2 for
d = 1 mod 4.  Over Q the second component is always zero.

All nine imaginary quadratic fields in scope have class number one, so
every ideal is principal and the unit group is the finite group of
roots of unity; both facts are load-bearing for the fundamental domain.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

RingInt = Tuple[int, int]

HEEGNER = (-1, -2, -3, -7, -11, -19, -43, -67, -163)


class ZeroPoint(ValueError):
    """Raised for operations undefined at the zero point."""


class FactorBudgetExceeded(RuntimeError):
    """Factorization gave up: a composite unknown cofactor remains."""


# ---------------------------------------------------------------------------
# rational integer helpers
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2**64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of odd composite n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = 2 + seed, 1 + seed, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1
        if seed > 20:
            raise FactorBudgetExceeded(f"rho failed on {n}")


def factor_int(n: int, trial_bound: int = 100000) -> Dict[int, int]:
    """Factor |n| into primes; raises FactorBudgetExceeded if stuck."""
    n = abs(n)
    if n == 0:
        raise ZeroPoint("cannot factor 0")
    out: Dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f <= trial_bound:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        g = _pollard_rho(m)
        stack += [g, m // g]
    return out


# ---------------------------------------------------------------------------
# field contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldContext:
    """Q (d = 0) or an imaginary quadratic field Q(sqrt(d)) of class number 1."""

    d: int

    def __post_init__(self):
        if self.d != 0 and self.d not in HEEGNER:
            raise ValueError(f"unsupported field discriminant tag {self.d}")

    # --- structure -------------------------------------------------------

    @property
    def degree(self) -> int:
        return 1 if self.d == 0 else 2

    @property
    def name(self) -> str:
        if self.d == 0:
            return "Q"
        return "Q(i)" if self.d == -1 else f"Q(sqrt{self.d})"

    @classmethod
    def parse(cls, s: str) -> "FieldContext":
        s = s.strip()
        if s.upper() == "Q":
            return cls(0)
        if s in ("Q(i)", "Q(I)", "Qi"):
            return cls(-1)
        if s.startswith("Q(sqrt") and s.endswith(")"):
            return cls(int(s[6:-1]))
        raise ValueError(f"cannot parse field {s!r}")

    @property
    def _omega_sq(self) -> Tuple[int, int]:
        """omega^2 = w0 + w1*omega."""
        d = self.d
        if d % 4 == 1:  # d = 1 mod 4
            return ((d - 1) // 4, 1)
        return (d, 0)

    @property
    def field_discriminant(self) -> int:
        if self.d == 0:
            return 1
        return self.d if self.d % 4 == 1 else 4 * self.d

    # --- element arithmetic -----------------------------------------------

    def zero(self) -> RingInt:
        return (0, 0)

    def one(self) -> RingInt:
        return (1, 0)

    def from_int(self, n: int) -> RingInt:
        return (n, 0)

    def add(self, x: RingInt, y: RingInt) -> RingInt:
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x: RingInt, y: RingInt) -> RingInt:
        return (x[0] - y[0], x[1] - y[1])

    def neg(self, x: RingInt) -> RingInt:
        return (-x[0], -x[1])

    def mul(self, x: RingInt, y: RingInt) -> RingInt:
        if self.d == 0:
            return (x[0] * y[0], 0)
        w0, w1 = self._omega_sq
        bb = x[1] * y[1]
        return (x[0] * y[0] + w0 * bb, x[0] * y[1] + x[1] * y[0] + w1 * bb)

    def mul_int(self, x: RingInt, n: int) -> RingInt:
        return (x[0] * n, x[1] * n)

    def pow(self, x: RingInt, n: int) -> RingInt:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def conj(self, x: RingInt) -> RingInt:
        if self.d == 0:
            return x
        if self.d % 4 == 1:
            # conj(a + b*omega) = a + b - b*omega
            return (x[0] + x[1], -x[1])
        return (x[0], -x[1])

    def norm(self, x: RingInt) -> int:
        if self.d == 0:
            return abs(x[0])
        a, b = x
        if self.d % 4 == 1:
            return a * a + a * b + b * b * (1 - self.d) // 4
        return a * a - self.d * b * b

    def trace(self, x: RingInt) -> int:
        if self.d == 0:
            return x[0]
        return 2 * x[0] + (x[1] if self.d % 4 == 1 else 0)

    def divides(self, g: RingInt, x: RingInt) -> bool:
        return self.divexact(x, g) is not None

    def divexact(self, x: RingInt, g: RingInt) -> RingInt | None:
        """x / g if exact in the ring, else None."""
        if g == (0, 0):
            raise ZeroDivisionError
        if self.d == 0:
            q, r = divmod(x[0], g[0])
            return (q, 0) if r == 0 else None
        n = self.norm(g)
        t = self.mul(x, self.conj(g))
        if t[0] % n or t[1] % n:
            return None
        return (t[0] // n, t[1] // n)

    def units(self) -> List[RingInt]:
        if self.d == 0:
            return [(1, 0), (-1, 0)]
        if self.d == -1:
            return [(1, 0), (0, 1), (-1, 0), (0, -1)]
        if self.d == -3:
            u = (0, 1)  # omega, a primitive 6th root of unity
            out = [(1, 0)]
            for _ in range(5):
                out.append(self.mul(out[-1], u))
            return out
        return [(1, 0), (-1, 0)]

    def is_unit(self, x: RingInt) -> bool:
        return self.norm(x) == 1

    # --- archimedean absolute value ---------------------------------------

    def abs_arch(self, x: RingInt) -> float:
        """|x|_v at the single infinite place (squared modulus if complex)."""
        if self.d == 0:
            return abs(x[0])
        return float(self.norm(x))

    def abs_arch_exact(self, x: RingInt) -> int:
        """Same as abs_arch but exact (integer) for ring integers."""
        return abs(x[0]) if self.d == 0 else self.norm(x)

    # --- enumeration -------------------------------------------------------

    def elements_in_disc(self, bound: Fraction) -> List[RingInt]:
        """All ring integers with |x|_v < bound, lexicographic in (a, b)."""
        out = []
        if self.d == 0:
            m = _strict_floor(bound)
            return [(a, 0) for a in range(-m, m + 1)]
        # norm(a + b*omega) < bound
        d = self.d
        if d % 4 == 1:
            bmax = _strict_floor_sqrt(Fraction(4, -d) * bound)  # 4N >= -d b^2
            c = (1 - d) // 4
            for b in range(-bmax, bmax + 1):
                # norm = (a + b/2)^2 + (-d/4) b^2, so a sits near -b/2
                rem = bound - Fraction(b * b * (-d), 4)
                s = _strict_floor_sqrt(rem)
                center = -b // 2
                for a in range(center - s - 2, center + s + 3):
                    if Fraction(a * a + a * b + c * b * b) < bound:
                        out.append((a, b))
        else:
            bmax = _strict_floor_sqrt(bound / -d)
            for b in range(-bmax, bmax + 1):
                rem = bound - Fraction(-d * b * b)
                s = _strict_floor_sqrt(rem)
                for a in range(-s - 1, s + 2):
                    if Fraction(a * a - d * b * b) < bound:
                        out.append((a, b))
        out.sort()
        return out


def _strict_floor(x: Fraction) -> int:
    """Largest integer strictly below x (= floor(x) or floor(x)-1)."""
    f = math.floor(x)
    return f - 1 if f == x else f


def _strict_floor_sqrt(x: Fraction) -> int:
    """Largest integer s with s*s < x, or -1 if none... clamped at 0."""
    if x <= 0:
        return -1
    s = math.isqrt(math.floor(x))
    while Fraction(s * s) >= x:
        s -= 1
    while Fraction((s + 1) * (s + 1)) < x:
        s += 1
    return s


# ---------------------------------------------------------------------------
# prime ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIdeal:
    generator: RingInt
    norm: int
    p: int          # rational prime below
    kind: str       # 'rational' | 'split' | 'inert' | 'ramified'

    def label(self) -> str:
        a, b = self.generator
        if self.kind == "rational":
            return str(self.p)
        return f"({a}{b:+d}w)" if b else f"({a})"


def _split_generator(ctx: FieldContext, p: int) -> RingInt:
    """A generator of norm p, by direct search (norms are tiny here)."""
    bmax = math.isqrt(4 * p // -ctx.field_discriminant) + 2
    for b in range(1, bmax + 1):
        for a in range(-p, p + 1):
            if ctx.norm((a, b)) == p:
                return (a, b)
    raise AssertionError(f"no element of norm {p} in {ctx.name}")


def _ramified_generator(ctx: FieldContext) -> Dict[int, RingInt]:
    """Generators for the ramified primes (those dividing the discriminant)."""
    out = {}
    dk = ctx.field_discriminant
    for p in factor_int(abs(dk)):
        bmax = math.isqrt(4 * p // -dk) + 2
        found = None
        for b in range(0, bmax + 1):
            for a in range(-2 * p, 2 * p + 1):
                if ctx.norm((a, b)) == p:
                    found = (a, b)
                    break
            if found:
                break
        if found is None:
            # norm p not represented (p = 2 non-split, d = 1 mod 4 cases)
            raise AssertionError(f"ramified prime {p} has no norm-{p} generator")
        out[p] = found
    return out


@lru_cache(maxsize=None)
def primes_above(ctx: FieldContext, p: int) -> Tuple[PrimeIdeal, ...]:
    """The prime ideals of the ring of integers above the rational prime p."""
    if ctx.d == 0:
        return (PrimeIdeal((p, 0), p, p, "rational"),)
    dk = ctx.field_discriminant
    if dk % p == 0:
        g = _ramified_generator(ctx)[p]
        return (PrimeIdeal(g, p, p, "ramified"),)
    if _kronecker(dk, p) == 1:
        g = _split_generator(ctx, p)
        return (PrimeIdeal(g, p, p, "split"), PrimeIdeal(ctx.conj(g), p, p, "split"))
    return (PrimeIdeal((p, 0), p * p, p, "inert"),)


def _kronecker(a: int, p: int) -> int:
    if p == 2:
        a %= 8
        return 0 if a % 2 == 0 else (1 if a in (1, 7) else -1)
    r = pow(a % p, (p - 1) // 2, p)
    return r if r <= 1 else -1


def rational_primes_up_to(n: int) -> List[int]:
    """Sieve of Eratosthenes, inclusive."""
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = b"\x00" * len(range(p * p, n + 1, p))
    return [i for i, v in enumerate(sieve) if v]


def primes_up_to_norm(ctx: FieldContext, bound: int) -> List[PrimeIdeal]:
    """All prime ideals of norm <= bound, ordered by (norm, generator)."""
    cached = _load_prime_cache(ctx, bound)
    if cached is not None:
        return cached
    out: List[PrimeIdeal] = []
    for p in rational_primes_up_to(bound):
        for pr in primes_above(ctx, p):
            if pr.norm <= bound:
                out.append(pr)
    out.sort(key=lambda q: (q.norm, q.generator))
    _store_prime_cache(ctx, bound, out)
    return out


# Binary cache of prime tables, keyed by field tag and bound.
# Layout: header b'ADSP', int64 d, int64 bound, int64 count; then per
# prime one little-endian record '<q q q q B': norm, gen_a, gen_b, p,
# kind index into _KINDS.
_KINDS = ("rational", "split", "inert", "ramified")


def _cache_path(ctx: FieldContext, bound: int) -> str | None:
    root = os.environ.get("ADESIEVE_CACHE_DIR")
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"primes_d{ctx.d}_B{bound}.bin")


def _store_prime_cache(ctx: FieldContext, bound: int, primes: List[PrimeIdeal]):
    path = _cache_path(ctx, bound)
    if path is None:
        return
    with open(path, "wb") as fh:
        fh.write(b"ADSP")
        fh.write(struct.pack("<qqq", ctx.d, bound, len(primes)))
        for q in primes:
            fh.write(struct.pack("<qqqqB", q.norm, q.generator[0],
                                 q.generator[1], q.p, _KINDS.index(q.kind)))


def _load_prime_cache(ctx: FieldContext, bound: int) -> List[PrimeIdeal] | None:
    path = _cache_path(ctx, bound)
    if path is None or not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        if fh.read(4) != b"ADSP":
            return None
        d, b, count = struct.unpack("<qqq", fh.read(24))
        if d != ctx.d or b != bound:
            return None
        out = []
        for _ in range(count):
            norm, ga, gb, p, kind = struct.unpack("<qqqqB", fh.read(33))
            out.append(PrimeIdeal((ga, gb), norm, p, _KINDS[kind]))
    return out


# ---------------------------------------------------------------------------
# valuations and factorization
# ---------------------------------------------------------------------------

def valuation(ctx: FieldContext, prime: PrimeIdeal, x: RingInt) -> int:
    if x == (0, 0):
        raise ZeroPoint("valuation of 0")
    v = 0
    while True:
        q = ctx.divexact(x, prime.generator)
        if q is None:
            return v
        x = q
        v += 1


def factor(ctx: FieldContext, x: RingInt,
           trial_bound: int = 100000) -> List[Tuple[PrimeIdeal, int]]:
    """Factor the principal ideal (x) into prime ideals with exponents."""
    if x == (0, 0):
        raise ZeroPoint("cannot factor 0")
    n = ctx.norm(x)
    if n == 1:
        return []
    out = []
    for p, _ in sorted(factor_int(n, trial_bound).items()):
        for pr in primes_above(ctx, p):
            v = valuation(ctx, pr, x)
            if v:
                out.append((pr, v))
    # ideal norms must multiply back to |N(x)|
    check = 1
    for pr, v in out:
        check *= pr.norm ** v
    if check != n:
        raise AssertionError(f"factorization of {x} lost mass: {check} != {n}")
    return out


def squarefree_profile(ctx: FieldContext, x: RingInt,
                       trial_bound: int = 100000) -> dict:
    fac = factor(ctx, x, trial_bound)
    offenders = [pr for pr, v in fac if v >= 2]
    return {"squarefree": not offenders, "offending_primes": offenders,
            "factorization": fac}


# ---------------------------------------------------------------------------
# invariant points, heights and the fundamental domain
# ---------------------------------------------------------------------------

InvariantPoint = Tuple[RingInt, ...]


def point_from_ints(coords: Iterable[int]) -> InvariantPoint:
    return tuple((c, 0) for c in coords)


def scaling_ideal_valuations(ctx: FieldContext, degrees: Sequence[int],
                             b: InvariantPoint) -> List[Tuple[PrimeIdeal, int]]:
    """Valuations of the scaling ideal I_b = {a : a^{d_i} b_i integral}.

    For integral b this is supported on primes dividing every coordinate
    and the exponents are -min_i floor(v_p(b_i)/d_i) <= 0.
    """
    nz = [c for c in b if c != (0, 0)]
    if not nz:
        raise ZeroPoint("scaling ideal undefined at 0")
    out = []
    for p, _ in sorted(factor_int(ctx.norm(nz[0])).items()):
        for pr in primes_above(ctx, p):
            m = min(
                (valuation(ctx, pr, c) // d) if c != (0, 0) else 10 ** 9
                for c, d in zip(b, degrees)
            )
            if m > 0:
                out.append((pr, -m))
    return out


def height(ctx: FieldContext, degrees: Sequence[int], b: InvariantPoint) -> float:
    """Scaling-invariant size of an integral point.

    The archimedean part is max_i |b_i|_v^(1/d_i) with the normalized
    absolute value (squared modulus at the complex place); the finite
    part is the norm of the scaling ideal, trivial on primitive points.
    """
    if all(c == (0, 0) for c in b):
        return 0.0
    ni = 1.0
    for pr, e in scaling_ideal_valuations(ctx, degrees, b):
        ni *= float(pr.norm) ** e
    arch = max(ctx.abs_arch(c) ** (1.0 / d) for c, d in zip(b, degrees))
    return ni * arch


def height_lt(ctx: FieldContext, degrees: Sequence[int], b: InvariantPoint,
              x: Fraction) -> bool:
    """Exact comparison ht(b) < x for primitive integral points."""
    return all(Fraction(ctx.abs_arch_exact(c)) < x ** d
               for c, d in zip(b, degrees))


def is_primitive(ctx: FieldContext, degrees: Sequence[int],
                 b: InvariantPoint) -> bool:
    """No prime has v_p(b_i) >= d_i for all i."""
    nz = [c for c in b if c != (0, 0)]
    if not nz:
        raise ZeroPoint("primitivity undefined at 0")
    for p, _ in sorted(factor_int(ctx.norm(nz[0])).items()):
        for pr in primes_above(ctx, p):
            if all(c == (0, 0) or valuation(ctx, pr, c) >= d
                   for c, d in zip(b, degrees)):
                return False
    return True


def unit_orbit(ctx: FieldContext, degrees: Sequence[int],
               b: InvariantPoint) -> List[InvariantPoint]:
    orbit = set()
    for u in ctx.units():
        orbit.add(tuple(ctx.mul(ctx.pow(u, d), c) for c, d in zip(b, degrees)))
    return sorted(orbit)


def is_canonical_rep(ctx: FieldContext, degrees: Sequence[int],
                     b: InvariantPoint) -> bool:
    """b is the lexicographically least point of its unit orbit."""
    return b == unit_orbit(ctx, degrees, b)[0]


def in_sigma(ctx: FieldContext, degrees: Sequence[int],
             b: InvariantPoint) -> bool:
    """Membership in the fundamental domain: primitive and canonical."""
    if all(c == (0, 0) for c in b):
        raise ZeroPoint("the zero point is not in the fundamental domain")
    return is_primitive(ctx, degrees, b) and is_canonical_rep(ctx, degrees, b)
