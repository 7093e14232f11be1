"""Height-bounded scans of the fundamental domain: enumeration, exact
counts, strong/weak divisibility classification, squarefree densities,
tail statistics and slope fits.

The rational type-A(2) scan is the hot path and works on plain integers;
the generic path covers the other supported configurations through the
exact field API.  Scans are partitioned over first-coordinate ranges;
worker tallies merge commutatively, so reports are bit-identical for
any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .curvefam import CurveFamily, discriminant_A, family
from .localdens import residue_field_reps
from .numfield import (
    FactorBudgetExceeded,
    FieldContext,
    InvariantPoint,
    PrimeIdeal,
    RingInt,
    ZeroPoint,
    factor,
    factor_int,
    in_sigma,
    is_prime,
    point_from_ints,
    primes_above,
    rational_primes_up_to,
    valuation,
)
from .rootsys import DynkinType

NOT_DIVISIBLE = "not_divisible"
WEAK = "weak"
STRONG = "strong"

DEFAULT_TAIL_GRID = (10, 20, 40, 80, 160)


class ZeroDiscriminant(ValueError):
    """Classification is undefined where the discriminant vanishes."""


def default_excluded_primes(fam: CurveFamily) -> Tuple[int, ...]:
    """Primes dividing the structural leading constants of the
    discriminant (m^m and (m+1)^(m+1) for rank m); user-extendable."""
    m = fam.type.rank
    return tuple(sorted(factor_int(m * (m + 1))))


# ---------------------------------------------------------------------------
# fundamental domain enumeration and exact counts
# ---------------------------------------------------------------------------

def coordinate_bound(X: Fraction, d: int) -> int:
    """Largest integer magnitude allowed for a degree-d coordinate."""
    t = X**d
    n = math.floor(t)
    return n - 1 if n == t else n


def enumerate_sigma(ctx: FieldContext, fam: CurveFamily,
                    X: Fraction | int | str) -> Iterator[InvariantPoint]:
    """All fundamental-domain points of height < X, in lexicographic
    order over the coordinate box, each exactly once."""
    X = Fraction(X)
    if X <= 0:
        return
    degrees = fam.degrees
    if ctx.d == 0:
        axes = [[(a, 0) for a in range(-coordinate_bound(X, d), coordinate_bound(X, d) + 1)]
                for d in degrees]
    else:
        axes = [ctx.elements_in_disc(X**d) for d in degrees]
    for b in _product(axes):
        if all(c == (0, 0) for c in b):
            continue
        if in_sigma(ctx, degrees, b):
            yield b


def _product(axes: List[List[RingInt]]) -> Iterator[InvariantPoint]:
    if len(axes) == 1:
        for x in axes[0]:
            yield (x,)
        return
    for x in axes[0]:
        for rest in _product(axes[1:]):
            yield (x,) + rest


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    fac = factor_int(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def count_sigma(ctx: FieldContext, fam: CurveFamily, X: Fraction | int | str) -> int:
    """Exact number of fundamental-domain points of height < X.

    Rational base field: divisor-scaling inclusion-exclusion over the
    coordinate box, then unit-orbit counting with the fixed points of
    the sign action.  Quadratic fields: the same over ideals, with
    Burnside over the roots of unity.
    """
    X = Fraction(X)
    if X <= 0:
        return 0
    degrees = fam.degrees
    if ctx.d == 0:
        def nonzero_box(Y: Fraction, mask: Sequence[bool]) -> int:
            total = 1
            for d, keep in zip(degrees, mask):
                total *= (2 * coordinate_bound(Y, d) + 1) if keep else 1
            return total - 1

        def primitive(mask: Sequence[bool]) -> int:
            out = 0
            lam = 1
            while Fraction(X, lam) > 1:
                mu = _mobius(lam)
                if mu:
                    out += mu * nonzero_box(X / lam, mask)
                lam += 1
            return out

        full = primitive([True] * len(degrees))
        fixed_mask = [d % 2 == 0 for d in degrees]  # -1 fixes even slots
        fixed = primitive(fixed_mask)
        assert (full + fixed) % 2 == 0
        return (full + fixed) // 2

    # quadratic field: ideal-scaling inclusion-exclusion + Burnside
    units = ctx.units()

    def disc_count(B: Fraction) -> int:
        if B <= 0:
            return 0
        return len(ctx.elements_in_disc(B))

    def nonzero_box(Y: Fraction, mask: Sequence[bool]) -> int:
        total = 1
        for d, keep in zip(degrees, mask):
            total *= disc_count(Y**d) if keep else 1
        return total - 1

    sf_ideals = _squarefree_ideal_norms(ctx, math.floor(X))

    def primitive(mask) -> int:
        out = 0
        for norm, mu in sf_ideals:
            if Fraction(X, norm) <= 0:
                continue
            out += mu * nonzero_box(X / norm, mask)
        return out

    total = 0
    for u in units:
        mask = [ctx.pow(u, d) == ctx.one() for d in degrees]
        total += primitive(mask)
    assert total % len(units) == 0
    return total // len(units)


def _squarefree_ideal_norms(ctx: FieldContext, bound: int) -> List[Tuple[int, int]]:
    """(norm, mobius) for squarefree ideals of norm <= bound (norm >= 1)."""
    from .numfield import primes_up_to_norm

    out = [(1, 1)]
    for pr in primes_up_to_norm(ctx, bound):
        out += [(n * pr.norm, -mu) for n, mu in out if n * pr.norm <= bound]
    return sorted(out)


# ---------------------------------------------------------------------------
# divisibility classification
# ---------------------------------------------------------------------------

def classify(ctx: FieldContext, fam: CurveFamily, b: InvariantPoint,
             prime: PrimeIdeal) -> str:
    """Gradient-based class of (b, p): first-order expansion of the
    discriminant along the coordinate directions mod p^2."""
    delta = discriminant_A(ctx, fam.type, b)
    if delta == (0, 0):
        raise ZeroDiscriminant(f"discriminant vanishes at {b}")
    if valuation(ctx, prime, delta) <= 1:
        return NOT_DIVISIBLE
    pi = prime.generator
    for i in range(fam.rank):
        bb = list(b)
        bb[i] = ctx.add(bb[i], pi)
        diff = ctx.sub(discriminant_A(ctx, fam.type, tuple(bb)), delta)
        q = ctx.divexact(diff, pi)
        if q is None:
            raise AssertionError("difference quotient not divisible")
        if ctx.divexact(q, pi) is None:
            return WEAK
    return STRONG


def classify_brute(ctx: FieldContext, fam: CurveFamily, b: InvariantPoint,
                   prime: PrimeIdeal) -> str:
    """Definition-level oracle: enumerate all perturbations b + pi*c."""
    delta = discriminant_A(ctx, fam.type, b)
    if delta == (0, 0):
        raise ZeroDiscriminant(f"discriminant vanishes at {b}")
    if valuation(ctx, prime, delta) <= 1:
        return NOT_DIVISIBLE
    pi = prime.generator
    pi2 = ctx.mul(pi, pi)
    reps = residue_field_reps(ctx, prime)
    for c in _product([reps] * fam.rank):
        bb = tuple(ctx.add(x, ctx.mul(pi, ci)) for x, ci in zip(b, c))
        d = discriminant_A(ctx, fam.type, bb)
        if ctx.divexact(d, pi2) is None:
            return WEAK
    return STRONG


# ---------------------------------------------------------------------------
# scan reports
# ---------------------------------------------------------------------------

@dataclass
class ScanReport:
    field: str
    type: str
    X: str
    prime_bound: int
    excluded_primes: Tuple[int, ...]
    tail_grid: Tuple[int, ...]
    total: int = 0
    zero_disc: int = 0
    squarefree: int = 0
    unresolved: int = 0
    per_prime: Dict[str, Dict[str, int]] = field(default_factory=dict)
    tail_strong: Dict[int, int] = field(default_factory=dict)
    tail_weak: Dict[int, int] = field(default_factory=dict)
    tail_weak_coprime: Dict[int, int] = field(default_factory=dict)
    soundness_pairs: int = 0
    soundness_disagreements: int = 0
    dump_rows: List[tuple] = field(default_factory=list)

    @property
    def band(self) -> float:
        return self.unresolved / self.total if self.total else 0.0

    @property
    def empirical_density(self) -> float | None:
        return self.squarefree / self.total if self.total else None

    def merge(self, other: "ScanReport") -> None:
        self.total += other.total
        self.zero_disc += other.zero_disc
        self.squarefree += other.squarefree
        self.unresolved += other.unresolved
        for label, row in other.per_prime.items():
            mine = self.per_prime.setdefault(
                label, {STRONG: 0, WEAK: 0, NOT_DIVISIBLE: 0})
            for k, v in row.items():
                mine[k] += v
        for M in self.tail_grid:
            self.tail_strong[M] = self.tail_strong.get(M, 0) + other.tail_strong.get(M, 0)
            self.tail_weak[M] = self.tail_weak.get(M, 0) + other.tail_weak.get(M, 0)
            self.tail_weak_coprime[M] = (self.tail_weak_coprime.get(M, 0)
                                         + other.tail_weak_coprime.get(M, 0))
        self.soundness_pairs += other.soundness_pairs
        self.soundness_disagreements += other.soundness_disagreements
        self.dump_rows.extend(other.dump_rows)

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "type": self.type,
            "X": self.X,
            "prime_bound": self.prime_bound,
            "excluded_primes": list(self.excluded_primes),
            "total": self.total,
            "zero_disc": self.zero_disc,
            "squarefree_count": self.squarefree,
            "empirical_density": self.empirical_density,
            "unresolved": self.unresolved,
            "band": self.band,
            "per_prime": self.per_prime,
            "tail_counts": {
                str(M): {
                    "strong": self.tail_strong.get(M, 0),
                    "weak": self.tail_weak.get(M, 0),
                    "weak_coprime": self.tail_weak_coprime.get(M, 0),
                }
                for M in self.tail_grid
            },
            "soundness": {
                "pairs_checked": self.soundness_pairs,
                "disagreements": self.soundness_disagreements,
            },
        }


def _fresh_report(ctx, fam, X, prime_bound, excluded, tail_grid) -> ScanReport:
    return ScanReport(ctx.name, str(fam.type), str(Fraction(X)), prime_bound,
                      tuple(excluded), tuple(tail_grid))


# ---------------------------------------------------------------------------
# rational A2 fast lane
# ---------------------------------------------------------------------------

def _cofactor_square_analysis(c: int, trial_primes: Sequence[int],
                              floor_bound: int) -> Dict[int, int] | None:
    """Factor a cofactor whose prime factors all exceed floor_bound.

    Returns the factorization, or None if it cannot be completed (never
    at desk scales; large inputs fall back to the general factorizer).
    """
    out: Dict[int, int] = {}
    if c == 1:
        return out
    if is_prime(c):
        return {c: 1}
    r = math.isqrt(c)
    if r * r == c:
        inner = _cofactor_square_analysis(r, trial_primes, floor_bound)
        if inner is None:
            return None
        return {p: 2 * e for p, e in inner.items()}
    if c < floor_bound**3:
        # exactly two distinct primes
        try:
            return factor_int(c)
        except FactorBudgetExceeded:
            return None
    for p in trial_primes:
        if p * p * p > c:
            break
        if c % p == 0:
            e = 0
            while c % p == 0:
                c //= p
                e += 1
            out[p] = e
            rest = _cofactor_square_analysis(c, trial_primes, floor_bound)
            if rest is None:
                return None
            out.update(rest)
            return out
    # at most two prime factors remain
    try:
        out.update(factor_int(c))
    except FactorBudgetExceeded:
        return None
    return out


def _scan_chunk_a2_rational(args) -> ScanReport:
    (X_str, prime_bound, excluded, tail_grid, a_lo, a_hi,
     soundness_bound, dump) = args
    X = Fraction(X_str)
    ctx = FieldContext(0)
    fam = family(DynkinType("A", 2))
    rep = _fresh_report(ctx, fam, X, prime_bound, excluded, tail_grid)
    n3 = coordinate_bound(X, 3)
    primes = rational_primes_up_to(prime_bound)
    max_disc = 4 * max(abs(a_lo), abs(a_hi)) ** 3 + 27 * n3**2 + 16
    trial_primes = [p for p in rational_primes_up_to(
        max(1000, round(max_disc ** (1 / 3)) + 2)) if p > prime_bound]
    sound_primes = [p for p in primes if p <= soundness_bound]
    excluded = set(excluded)

    for a in range(a_lo, a_hi):
        za = -4 * a * a * a
        for bcoord in range(-n3, 1):  # canonical unit representative: b <= 0
            if a == 0 and bcoord == 0:
                continue
            if not _primitive_a2(a, bcoord):
                continue
            rep.total += 1
            delta = za - 27 * bcoord * bcoord
            if delta == 0:
                rep.zero_disc += 1
                continue
            offenders: Dict[int, str] = {}
            c = abs(delta)
            sf = True
            for p in primes:
                if c % p:
                    rep.per_prime.setdefault(
                        str(p), {STRONG: 0, WEAK: 0, NOT_DIVISIBLE: 0})[NOT_DIVISIBLE] += 1
                    continue
                v = 1
                c //= p
                while c % p == 0:
                    c //= p
                    v += 1
                row = rep.per_prime.setdefault(
                    str(p), {STRONG: 0, WEAK: 0, NOT_DIVISIBLE: 0})
                if v <= 1:
                    row[NOT_DIVISIBLE] += 1
                    continue
                sf = False
                cls = _classify_a2_int(a, bcoord, p)
                row[cls] += 1
                offenders[p] = cls
                if p in sound_primes:
                    rep.soundness_pairs += 1
                    if _brute_class_a2_int(a, bcoord, p) != cls:
                        rep.soundness_disagreements += 1
            cof = _cofactor_square_analysis(c, trial_primes, prime_bound)
            if cof is None:
                rep.unresolved += 1
                continue
            for p, e in cof.items():
                if e >= 2:
                    sf = False
                    offenders[p] = _classify_a2_int(a, bcoord, p)
            if sf:
                rep.squarefree += 1
            if offenders:
                s_prod = w_prod = wc_prod = 1
                for p, cls in offenders.items():
                    if cls == STRONG:
                        s_prod *= p
                    else:
                        w_prod *= p
                        if p not in excluded:
                            wc_prod *= p
                for M in tail_grid:
                    if s_prod > M:
                        rep.tail_strong[M] = rep.tail_strong.get(M, 0) + 1
                    if w_prod > M:
                        rep.tail_weak[M] = rep.tail_weak.get(M, 0) + 1
                    if wc_prod > M:
                        rep.tail_weak_coprime[M] = rep.tail_weak_coprime.get(M, 0) + 1
            if dump:
                rep.dump_rows.append(
                    (a, bcoord, delta, ";".join(f"{p}:{cls}" for p, cls in
                                                sorted(offenders.items()))))
    return rep


def _primitive_a2(a: int, b: int) -> bool:
    """No prime p with p^2 | a and p^3 | b."""
    if a == 0:
        # need no p with p^3 | b
        bb = abs(b)
        for p, e in factor_int(bb).items():
            if e >= 3:
                return False
        return True
    if b == 0:
        for p, e in factor_int(abs(a)).items():
            if e >= 2:
                return False
        return True
    g = math.gcd(abs(a), abs(b))
    if g == 1:
        return True
    for p in factor_int(g):
        if a % (p * p) == 0 and b % (p * p * p) == 0:
            return False
    return True


def _classify_a2_int(a: int, b: int, p: int) -> str:
    # gradient (-12 a^2, -54 b) mod p
    if (-12 * a * a) % p or (-54 * b) % p:
        return WEAK
    return STRONG


def _brute_class_a2_int(a: int, b: int, p: int) -> str:
    p2 = p * p
    for c1 in range(p):
        aa = a + p * c1
        t = -4 * aa * aa * aa
        for c2 in range(p):
            bb = b + p * c2
            if (t - 27 * bb * bb) % p2:
                return WEAK
    return STRONG


# ---------------------------------------------------------------------------
# generic scan lane
# ---------------------------------------------------------------------------

def _scan_chunk_generic(args) -> ScanReport:
    (d_tag, kind, rank, X_str, prime_bound, excluded, tail_grid,
     idx_lo, idx_hi, soundness_bound, dump) = args
    ctx = FieldContext(d_tag)
    fam = family(DynkinType(kind, rank))
    X = Fraction(X_str)
    rep = _fresh_report(ctx, fam, X, prime_bound, excluded, tail_grid)
    degrees = fam.degrees
    if ctx.d == 0:
        axes = [[(a, 0) for a in range(-coordinate_bound(X, d), coordinate_bound(X, d) + 1)]
                for d in degrees]
    else:
        axes = [ctx.elements_in_disc(X**d) for d in degrees]
    first = axes[0][idx_lo:idx_hi]
    prs = {pr.label(): pr
           for pr in _primes_norm_up_to(ctx, prime_bound)}
    excluded = set(excluded)
    for b in _product([first] + axes[1:]):
        if all(c == (0, 0) for c in b):
            continue
        if not in_sigma(ctx, degrees, b):
            continue
        rep.total += 1
        delta = discriminant_A(ctx, fam.type, b)
        if delta == (0, 0):
            rep.zero_disc += 1
            continue
        try:
            fac = factor(ctx, delta)
        except FactorBudgetExceeded:
            rep.unresolved += 1
            continue
        fac_map = {pr.label(): (pr, e) for pr, e in fac}
        offenders = {}
        sf = True
        for label, pr in prs.items():
            row = rep.per_prime.setdefault(
                label, {STRONG: 0, WEAK: 0, NOT_DIVISIBLE: 0})
            v = fac_map.get(label, (pr, 0))[1]
            if v <= 1:
                row[NOT_DIVISIBLE] += 1
                continue
            cls = classify(ctx, fam, b, pr)
            row[cls] += 1
            offenders[label] = (pr, cls)
            if pr.norm <= soundness_bound:
                rep.soundness_pairs += 1
                if classify_brute(ctx, fam, b, pr) != cls:
                    rep.soundness_disagreements += 1
        for label, (pr, e) in fac_map.items():
            if e >= 2:
                sf = False
                if label not in offenders:
                    offenders[label] = (pr, classify(ctx, fam, b, pr))
        if sf:
            rep.squarefree += 1
        if offenders:
            s_prod = w_prod = wc_prod = 1
            for label, (pr, cls) in offenders.items():
                if cls == STRONG:
                    s_prod *= pr.norm
                else:
                    w_prod *= pr.norm
                    if pr.p not in excluded:
                        wc_prod *= pr.norm
            for M in tail_grid:
                if s_prod > M:
                    rep.tail_strong[M] = rep.tail_strong.get(M, 0) + 1
                if w_prod > M:
                    rep.tail_weak[M] = rep.tail_weak.get(M, 0) + 1
                if wc_prod > M:
                    rep.tail_weak_coprime[M] = rep.tail_weak_coprime.get(M, 0) + 1
        if dump:
            rep.dump_rows.append((b, delta, sorted(offenders)))
    return rep


def _primes_norm_up_to(ctx: FieldContext, bound: int) -> List[PrimeIdeal]:
    from .numfield import primes_up_to_norm

    return primes_up_to_norm(ctx, bound)


def scan(ctx: FieldContext, fam: CurveFamily, X, prime_bound: int = 100,
         excluded_primes: Sequence[int] | None = None, workers: int = 1,
         tail_grid: Sequence[int] = DEFAULT_TAIL_GRID,
         soundness_bound: int = 13, dump: bool = False) -> ScanReport:
    """Full scan of the fundamental domain below height X.

    Squarefree verdicts always rest on a complete factorization of the
    discriminant; points whose factorization exceeds the budget are
    counted into the uncertainty band instead of aborting the scan.
    """
    X = Fraction(X)
    if excluded_primes is None:
        excluded_primes = default_excluded_primes(fam)
    if fam.type.kind != "A":
        raise ValueError("scans need a discriminant evaluator (type A)")
    fast = ctx.d == 0 and fam.type.rank == 2
    if fast:
        n2 = coordinate_bound(X, 2)
        edges = _chunk_edges(-n2, n2 + 1, max(1, workers) * 4)
        jobs = [(str(X), prime_bound, tuple(excluded_primes), tuple(tail_grid),
                 lo, hi, soundness_bound, dump) for lo, hi in edges]
        worker = _scan_chunk_a2_rational
    else:
        if ctx.d == 0:
            first_len = 2 * coordinate_bound(X, fam.degrees[0]) + 1
        else:
            first_len = len(ctx.elements_in_disc(X ** fam.degrees[0]))
        edges = _chunk_edges(0, first_len, max(1, workers) * 4)
        jobs = [(ctx.d, fam.type.kind, fam.type.rank, str(X), prime_bound,
                 tuple(excluded_primes), tuple(tail_grid), lo, hi,
                 soundness_bound, dump) for lo, hi in edges]
        worker = _scan_chunk_generic
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(worker, jobs)
    else:
        parts = [worker(j) for j in jobs]
    out = _fresh_report(ctx, fam, X, prime_bound, excluded_primes, tail_grid)
    for part in parts:
        out.merge(part)
    for M in tail_grid:
        out.tail_strong.setdefault(M, 0)
        out.tail_weak.setdefault(M, 0)
        out.tail_weak_coprime.setdefault(M, 0)
    return out


def _chunk_edges(lo: int, hi: int, n: int) -> List[Tuple[int, int]]:
    n = max(1, min(n, hi - lo))
    step = (hi - lo + n - 1) // n
    return [(a, min(a + step, hi)) for a in range(lo, hi, step)]


# ---------------------------------------------------------------------------
# tail decay and slope fits
# ---------------------------------------------------------------------------

def tail_decay(report: ScanReport) -> dict:
    """Tail table with a fitted decay exponent in the cut M.

    The fit uses the combined strong+weak counts on grid points with a
    positive count; the exponent is reported either way, asserted only
    by the acceptance gate.
    """
    rows = []
    for M in report.tail_grid:
        rows.append({
            "M": M,
            "strong": report.tail_strong.get(M, 0),
            "weak": report.tail_weak.get(M, 0),
            "weak_coprime": report.tail_weak_coprime.get(M, 0),
        })
    pts = [(math.log(r["M"]), math.log(r["strong"] + r["weak"]))
           for r in rows if r["strong"] + r["weak"] > 0]
    slope = _lsq_slope(pts) if len(pts) >= 2 else None
    return {"rows": rows, "fitted_exponent": slope}


def _lsq_slope(pts: List[Tuple[float, float]]) -> float:
    n = len(pts)
    mx = sum(p[0] for p in pts) / n
    my = sum(p[1] for p in pts) / n
    num = sum((x - mx) * (y - my) for x, y in pts)
    den = sum((x - mx) ** 2 for x, y in pts)
    return num / den


def deng_fit(ctx: FieldContext, fam: CurveFamily,
             X_grid: Sequence[Fraction | int]) -> dict:
    """Log-log slope of the fundamental-domain count against the height
    bound; the expected exponent is the sum of the invariant degrees."""
    counts = [(Fraction(x), count_sigma(ctx, fam, x)) for x in X_grid]
    pts = [(math.log(float(x)), math.log(c)) for x, c in counts if c > 0]
    slope = _lsq_slope(pts)
    return {
        "grid": [str(x) for x, _ in counts],
        "counts": [c for _, c in counts],
        "slope": slope,
        "expected": sum(fam.degrees),
    }
