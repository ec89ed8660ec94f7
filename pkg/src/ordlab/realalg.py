"""Exact real algebraic numbers and arithmetic in Q(alpha).

A ``RealAlgebraic`` is a primitive integer minimal polynomial together with an
open rational interval containing exactly one of its roots.  Signs of
rational polynomials at that root are certified by reducing modulo the minimal
polynomial and then bisecting the interval until an interval-arithmetic
enclosure excludes zero.  No floating point is involved.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import upoly
from .errors import EndpointRoot

# ---------------------------------------------------------------------------
# Sturm sequences


def sturm_sequence(p: Sequence) -> list[tuple]:
    seq = [upoly.trim(p), upoly.deriv(p)]
    while seq[-1]:
        r = upoly.rem(seq[-2], seq[-1])
        seq.append(upoly.neg(r))
    return seq[:-1]


def _variations(seq, x) -> int:
    signs = [upoly.sign(upoly.evaluate(q, x)) for q in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Sequence, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(lo, hi)``."""
    lo, hi = Fraction(lo), Fraction(hi)
    sf = upoly.squarefree_part(p)
    if not sf:
        raise ValueError("zero polynomial has no isolated roots")
    if lo >= hi:
        return 0
    if upoly.evaluate(sf, lo) == 0 or upoly.evaluate(sf, hi) == 0:
        raise EndpointRoot(f"{upoly.to_str(p)} vanishes at an endpoint of ({lo}, {hi})")
    seq = sturm_sequence(sf)
    return _variations(seq, lo) - _variations(seq, hi)


# ---------------------------------------------------------------------------
# Irreducibility screening


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend({d, n // d})
        d += 1
    return sorted(out)


def rational_roots(p: Sequence[int]) -> list[Fraction]:
    p = upoly.primitive(p)
    if not p:
        return []
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(p) if c)
        p = p[k:]
    for num in _divisors(p[0]):
        for den in _divisors(p[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and upoly.evaluate(p, cand) == 0:
                    roots.append(cand)
    return roots


def find_factor(p: Sequence[int]) -> tuple[int, ...] | None:
    """Search for a nontrivial integer factor of ``p`` (degree <= 8 only).

    Candidate factors are built from subsets of numerically approximated
    complex roots and then confirmed by exact division, so a factor that is
    returned is always genuine.  A ``None`` answer is reliable up to the
    precision of the root approximations.
    """
    import mpmath

    p = upoly.primitive(p)
    deg = len(p) - 1
    if deg <= 1:
        return None
    for r in rational_roots(p):
        return upoly.primitive((-r, 1))
    if deg <= 3 or deg > 8:
        return None
    with mpmath.workdps(60):
        roots = mpmath.polyroots(list(reversed(p)), maxsteps=400, extraprec=400)
        for k in range(2, deg // 2 + 1):
            for subset in combinations(roots, k):
                coeffs = [mpmath.mpc(1)]
                for r in subset:
                    coeffs = [(coeffs[i - 1] if i else 0) - r * (coeffs[i] if i < len(coeffs) else 0)
                              for i in range(len(coeffs) + 1)]
                for lead in _divisors(p[-1]):
                    cand = [lead * c for c in coeffs]
                    if any(abs(c.imag) > 1e-20 for c in cand):
                        break
                    ints = [int(mpmath.nint(c.real)) for c in cand]
                    if any(abs(c.real - i) > 1e-20 for c, i in zip(cand, ints)):
                        continue
                    _, r_ = upoly.divmod_(p, ints)
                    if not r_:
                        return upoly.primitive(ints)
    return None


# ---------------------------------------------------------------------------
# Real algebraic numbers


@dataclass(frozen=True)
class RealAlgebraic:
    minpoly: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        m = tuple(int(c) for c in self.minpoly)
        object.__setattr__(self, "minpoly", m)
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if len(m) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        if upoly.primitive(m) != m:
            raise ValueError(f"minimal polynomial {m} must be primitive with positive leading coefficient")
        if not self.lo < self.hi:
            raise ValueError("isolating interval needs lo < hi")
        if upoly.evaluate(m, self.lo) == 0 or upoly.evaluate(m, self.hi) == 0:
            raise EndpointRoot("minimal polynomial vanishes at an interval endpoint")
        if upoly.degree(upoly.gcd_(m, upoly.deriv(m))) > 0:
            raise ValueError("minimal polynomial must be squarefree")
        if sturm_count(m, self.lo, self.hi) != 1:
            raise ValueError(f"interval ({self.lo}, {self.hi}) does not isolate exactly one root")

    @classmethod
    def checked(cls, minpoly: Sequence[int], lo, hi) -> "RealAlgebraic":
        """Construct and additionally screen the minimal polynomial for irreducibility."""
        alpha = cls(tuple(minpoly), lo, hi)
        factor = find_factor(alpha.minpoly)
        if factor is not None:
            raise ValueError(f"minimal polynomial {alpha.minpoly} has factor {factor}")
        return alpha

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def rational_value(self) -> Fraction | None:
        if self.degree == 1:
            return Fraction(-self.minpoly[0], self.minpoly[1])
        return None

    def refine(self, width) -> "RealAlgebraic":
        """A copy whose isolating interval is narrower than ``width``."""
        lo, hi = _narrowed(self.minpoly, self.lo, self.hi, Fraction(width))
        return RealAlgebraic(self.minpoly, lo, hi)

    def mirror(self) -> "RealAlgebraic":
        """The number ``-alpha``."""
        return RealAlgebraic(upoly.primitive(upoly.reflect(self.minpoly)), -self.hi, -self.lo)

    def approx(self, digits: int = 20) -> float:
        lo, hi = _narrowed(self.minpoly, self.lo, self.hi, Fraction(1, 10**digits))
        return float((lo + hi) / 2)

    def __str__(self):
        rv = self.rational_value
        if rv is not None:
            return str(rv)
        return f"root of {upoly.to_str(self.minpoly)} in ({self.lo}, {self.hi})"

    def to_config(self) -> dict:
        return {"minpoly": list(self.minpoly), "interval": [str(self.lo), str(self.hi)]}


def _bisect(m, lo, hi):
    mid = (lo + hi) / 2
    vm = upoly.evaluate(m, mid)
    if vm == 0:
        # only possible for a rational root; shrink symmetrically around it
        q = (hi - lo) / 4
        return mid - q, mid + q
    if upoly.sign(vm) == upoly.sign(upoly.evaluate(m, lo)):
        return mid, hi
    return lo, mid


@lru_cache(maxsize=4096)
def _narrowed(m, lo, hi, width):
    while hi - lo >= width:
        lo, hi = _bisect(m, lo, hi)
    return lo, hi


def ra_from_rational(r) -> RealAlgebraic:
    r = Fraction(r)
    return RealAlgebraic((-r.numerator, r.denominator), r - 1, r + 1)


# work interval used before any per-query bisection; cached per number
_WARM_WIDTH = Fraction(1, 2**24)


def ra_sign_at(alpha: RealAlgebraic, poly: Sequence) -> int:
    """Sign of the rational polynomial ``poly`` (ascending coefficients) at ``alpha``."""
    r = upoly.rem(poly, alpha.minpoly)
    if not r:
        return 0
    if len(r) == 1:
        return upoly.sign(r[0])
    rv = alpha.rational_value
    if rv is not None:
        return upoly.sign(upoly.evaluate(r, rv))
    m = alpha.minpoly
    lo, hi = alpha.lo, alpha.hi
    a, b = upoly.interval_eval(r, lo, hi)
    if a > 0:
        return 1
    if b < 0:
        return -1
    lo, hi = _narrowed(m, lo, hi, _WARM_WIDTH)
    g = upoly.gcd_(r, m)
    if len(g) > 1 and sturm_count(g, lo, hi) == 1:
        # shared root with a reducible "minimal" polynomial
        return 0
    while True:
        a, b = upoly.interval_eval(r, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        lo, hi = _bisect(m, lo, hi)


def ra_compare_rational(alpha: RealAlgebraic, t) -> int:
    """Sign of ``alpha - t``."""
    t = Fraction(t)
    return ra_sign_at(alpha, (-t, Fraction(1)))


# ---------------------------------------------------------------------------
# The field Q(alpha)


class QAlpha:
    """An element of Q(alpha), stored as a reduced polynomial in alpha."""

    __slots__ = ("alpha", "rep")

    def __init__(self, alpha: RealAlgebraic, rep: Sequence = ()):
        self.alpha = alpha
        if len(rep) >= len(alpha.minpoly):
            rep = upoly.rem(rep, alpha.minpoly)
        self.rep = tuple(Fraction(c) for c in upoly.trim(rep))

    @classmethod
    def gen(cls, alpha: RealAlgebraic) -> "QAlpha":
        return cls(alpha, (0, 1))

    @classmethod
    def const(cls, alpha: RealAlgebraic, c) -> "QAlpha":
        return cls(alpha, (c,))

    def _lift(self, other) -> tuple:
        if isinstance(other, QAlpha):
            if other.alpha != self.alpha:
                raise ValueError("elements of different fields Q(alpha)")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return upoly.trim((Fraction(other),))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QAlpha(self.alpha, upoly.add(self.rep, o))

    __radd__ = __add__

    def __neg__(self):
        return QAlpha(self.alpha, upoly.neg(self.rep))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QAlpha(self.alpha, upoly.sub(self.rep, o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QAlpha(self.alpha, upoly.mul(self.rep, o))

    __rmul__ = __mul__

    def inverse(self) -> "QAlpha":
        if not self.rep:
            raise ZeroDivisionError("inverse of zero in Q(alpha)")
        g, s, _ = upoly.xgcd(self.rep, self.alpha.minpoly)
        # minpoly irreducible, so g == 1
        return QAlpha(self.alpha, s)

    def __truediv__(self, other):
        if isinstance(other, QAlpha):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = QAlpha(self.alpha, (1,))
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        return ra_sign_at(self.alpha, self.rep)

    def is_zero(self) -> bool:
        return not self.rep

    def __bool__(self):
        return bool(self.rep)

    def rational(self) -> Fraction | None:
        if not self.rep:
            return Fraction(0)
        if len(self.rep) == 1:
            return self.rep[0]
        return None

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.rep == tuple(Fraction(c) for c in o)

    def __hash__(self):
        if len(self.rep) <= 1:
            return hash(self.rep[0] if self.rep else Fraction(0))
        return hash((self.alpha, self.rep))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"QAlpha({upoly.to_str(self.rep, 'a')})"

    def __str__(self):
        return upoly.to_str(self.rep, "a")


def qa_arith(u: QAlpha, v: QAlpha | None, kind: str) -> QAlpha:
    if kind == "add":
        return u + v
    if kind == "mul":
        return u * v
    if kind == "inv":
        return u.inverse()
    raise ValueError(f"unknown operation {kind!r}")


def num_sign(x) -> int:
    """Sign of an int, Fraction or QAlpha."""
    if isinstance(x, QAlpha):
        return x.sign()
    return (x > 0) - (x < 0)
