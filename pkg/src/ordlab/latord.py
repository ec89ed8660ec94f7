"""Total orders on Z^k given by towers of linear forms, and comparison indices.

A tower ``[w_1, ..., w_r]`` orders integer vectors by the sign of the first
form that does not vanish on them.  Form entries are ``Fraction`` or, for
towers over a real algebraic ``alpha``, ``QAlpha`` elements.

Comparison indices are available three ways: exactly from a tower
(``ci_exact``), from the defining limit using only a sign oracle
(``ci_by_limit``), and as a certified rational bracket from a sign oracle
(``ci_bracket``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import NotPositive, NotTotal, OracleInconsistent
from .realalg import QAlpha, RealAlgebraic, num_sign

Vector = tuple
SignOracle = Callable[[Vector], int]

# Oracle-only methods cannot see infinitely large or small ratios; they
# declare them once a witness survives this magnitude.
PROBE_BOUND = 2**64


@dataclass(frozen=True)
class FormTower:
    k: int
    forms: tuple
    alpha: RealAlgebraic | None = None

    def __post_init__(self):
        if self.alpha is None:
            for w in self.forms:
                for c in w:
                    if isinstance(c, QAlpha):
                        object.__setattr__(self, "alpha", c.alpha)
        forms = tuple(tuple(self._entry(c) for c in w) for w in self.forms)
        if not forms:
            raise ValueError("a tower needs at least one form")
        for w in forms:
            if len(w) != self.k:
                raise ValueError(f"form {w} has length {len(w)}, expected {self.k}")
        object.__setattr__(self, "forms", forms)

    def _entry(self, c):
        if isinstance(c, QAlpha):
            if self.alpha is None or c.alpha != self.alpha:
                raise ValueError("QAlpha entry needs the tower's alpha")
            r = c.rational()
            return r if r is not None else c
        return Fraction(c)

    @classmethod
    def lex(cls, k: int) -> "FormTower":
        return cls(k, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))

    @classmethod
    def revlex(cls, k: int) -> "FormTower":
        """Lexicographic order with every coordinate negated."""
        return cls(k, tuple(tuple(-int(i == j) for j in range(k)) for i in range(k)))

    def values(self, u: Sequence[int]) -> tuple:
        """Values of every form on ``u``."""
        return tuple(sum((ui * wi for ui, wi in zip(u, w) if ui), Fraction(0)) for w in self.forms)

    def value(self, index: int, u: Sequence[int]):
        return sum((ui * wi for ui, wi in zip(u, self.forms[index]) if ui), Fraction(0))


def _check_len(T: FormTower, u) -> None:
    if len(u) != T.k:
        raise ValueError(f"vector of length {len(u)} for a tower on Z^{T.k}")


def first_index(T: FormTower, u: Sequence[int]) -> int | None:
    """Index of the first form not vanishing on ``u``; ``None`` for ``u == 0``."""
    _check_len(T, u)
    if not any(u):
        return None
    for j in range(len(T.forms)):
        if num_sign(T.value(j, u)):
            return j
    raise NotTotal(f"nonzero vector {tuple(u)} vanishes on every form")


def tower_sign(T: FormTower, u: Sequence[int]) -> int:
    j = first_index(T, u)
    if j is None:
        return 0
    return num_sign(T.value(j, u))


def tower_oracle(T: FormTower) -> SignOracle:
    return lambda u: tower_sign(T, u)


def rel(T: FormTower, u: Sequence[int], v: Sequence[int]) -> str:
    """Archimedean relation of ``u`` to ``v``: ``"~"``, ``"<<"`` or ``">>"``."""
    ju, jv = first_index(T, u), first_index(T, v)
    if ju is None or jv is None:
        raise ValueError("rel needs nonzero vectors")
    if ju == jv:
        return "~"
    return "<<" if ju > jv else ">>"


@dataclass(frozen=True)
class ComparisonBracket:
    """Exact value, rational bracket, or one of the two degenerate indices."""

    kind: str  # "exact" | "interval" | "zero" | "infinity"
    value: object = None
    lo: Fraction | None = None
    hi: Fraction | None = None

    def __post_init__(self):
        if self.kind == "interval":
            if not (0 <= self.lo < self.hi):
                raise ValueError("interval bracket needs 0 <= lo < hi")
        elif self.kind not in ("exact", "zero", "infinity"):
            raise ValueError(f"unknown bracket kind {self.kind!r}")

    @classmethod
    def exact(cls, v) -> "ComparisonBracket":
        return cls("exact", v)

    @classmethod
    def interval(cls, lo, hi) -> "ComparisonBracket":
        return cls("interval", None, Fraction(lo), Fraction(hi))

    def contains(self, x) -> bool:
        if self.kind == "exact":
            return self.value == x
        if self.kind == "zero":
            return x == 0
        if self.kind == "infinity":
            return x == math.inf
        if x == math.inf:
            return False
        return num_sign(x - self.lo) >= 0 and num_sign(x - self.hi) <= 0

    def reciprocal(self) -> "ComparisonBracket":
        if self.kind == "zero":
            return ComparisonBracket("infinity")
        if self.kind == "infinity":
            return ComparisonBracket("zero")
        if self.kind == "exact":
            return ComparisonBracket.exact(1 / self.value)
        if self.lo == 0:
            raise ValueError("reciprocal of an interval touching 0 is unbounded")
        return ComparisonBracket.interval(1 / self.hi, 1 / self.lo)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "exact":
            out["value"] = str(self.value)
        if self.kind == "interval":
            out["lo"], out["hi"] = str(self.lo), str(self.hi)
        return out

    def __str__(self):
        if self.kind == "exact":
            return str(self.value)
        if self.kind == "interval":
            return f"[{self.lo}, {self.hi}]"
        return "0" if self.kind == "zero" else "inf"


def ci_exact(T: FormTower, u: Sequence[int], v: Sequence[int]) -> ComparisonBracket:
    """Comparison index of positive ``u`` and ``v``: the ratio of their values on
    the first form that sees either of them."""
    if tower_sign(T, u) != 1 or tower_sign(T, v) != 1:
        raise NotPositive("ci_exact needs positive vectors")
    ju, jv = first_index(T, u), first_index(T, v)
    if ju < jv:
        return ComparisonBracket("zero")
    if ju > jv:
        return ComparisonBracket("infinity")
    return ComparisonBracket.exact(T.value(ju, v) / T.value(ju, u))


def _comb(m: int, u: Sequence[int], n: int, v: Sequence[int]) -> Vector:
    return tuple(m * a + n * b for a, b in zip(u, v))


def _require_positive(oracle: SignOracle, u, v) -> None:
    if oracle(tuple(u)) != 1 or oracle(tuple(v)) != 1:
        raise NotPositive("comparison index needs positive elements")


def ci_by_limit(oracle: SignOracle, u: Sequence[int], v: Sequence[int], n: int):
    """Return ``-m(n)/n`` where ``m(n) = min{m : m*u + n*v >= 0}``.

    ``math.inf`` means no minimum was found down to ``-PROBE_BOUND``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    _require_positive(oracle, u, v)

    def ok(m: int) -> bool:
        return oracle(_comb(m, u, n, v)) >= 0

    if not ok(0):
        raise OracleInconsistent("n*v is not positive although v is")
    hi, step = 0, 1
    while True:
        lo = -step
        if not ok(lo):
            break
        hi = lo
        if step >= PROBE_BOUND:
            return math.inf
        step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    w = _comb(hi, u, n, v)
    if oracle(tuple(-c for c in w)) != -oracle(w):
        raise OracleInconsistent("oracle is not antisymmetric")
    return Fraction(-hi, n)


def ci_bracket(oracle: SignOracle, u: Sequence[int], v: Sequence[int], denom_bound: int) -> ComparisonBracket:
    """Bracket the comparison index of positive ``u``, ``v`` from sign queries.

    Walks the Stern-Brocot tree using ``sign(q*u - p*v)``: +1 puts the index at
    or below ``q/p``, -1 at or above.  Runs of equal answers are taken by
    exponential plus binary search.  The result is an interval between Farey
    neighbours of order ``denom_bound`` (width at most ``1/denom_bound``) unless
    an endpoint is certified exact, or the index is 0 or infinite, where
    "certified" means the residual stays below ``u`` even after scaling by
    ``PROBE_BOUND``.
    """
    if denom_bound < 1:
        raise ValueError("denom_bound must be positive")
    u, v = tuple(u), tuple(v)
    _require_positive(oracle, u, v)
    if oracle(_comb(1, u, -PROBE_BOUND, v)) > 0:
        return ComparisonBracket("zero")
    if oracle(_comb(-PROBE_BOUND, u, 1, v)) > 0:
        return ComparisonBracket("infinity")

    def sgn(q: int, p: int) -> int:
        return oracle(_comb(q, u, -p, v))

    a, b, c, d = 0, 1, 1, 0  # CI lies in [a/b, c/d]
    while b + d <= denom_bound:
        q, p = a + c, b + d
        s = sgn(q, p)
        if s == 0:
            return ComparisonBracket.exact(Fraction(q, p))
        if s > 0:
            # upper end slides toward a/b along (k*a + c)/(k*b + d)
            kmax = (denom_bound - d) // b
            k, hit = _run_length(lambda k: sgn(k * a + c, k * b + d), 1, kmax, 1)
            if hit is not None:
                return ComparisonBracket.exact(Fraction(hit * a + c, hit * b + d))
            c, d = k * a + c, k * b + d
        else:
            kmax = (denom_bound - b) // d if d else None
            k, hit = _run_length(lambda k: sgn(a + k * c, b + k * d), 1, kmax, -1)
            if hit is not None:
                return ComparisonBracket.exact(Fraction(a + hit * c, b + hit * d))
            a, b = a + k * c, b + k * d
    if d == 0:
        raise OracleInconsistent("index exceeded the probe bound without being infinite")
    # an endpoint is exact when its residual is infinitesimal against u
    upper = _comb(c, u, -d, v)
    if oracle(_comb(1, u, -PROBE_BOUND, upper)) > 0:
        return ComparisonBracket.exact(Fraction(c, d))
    lower = _comb(-a, u, b, v)
    if a and oracle(_comb(1, u, -PROBE_BOUND, lower)) > 0:
        return ComparisonBracket.exact(Fraction(a, b))
    return ComparisonBracket.interval(Fraction(a, b), Fraction(c, d))


def _run_length(sign_at: Callable[[int], int], k0: int, kmax: int | None, want: int):
    """Largest ``k`` in ``[k0, kmax]`` with ``sign_at(j) == want`` for all ``j <= k``.

    ``sign_at(k0)`` is known to equal ``want``.  Returns ``(k, None)``, or
    ``(None, j)`` if some probe hit sign 0 at ``j``.
    """
    good, step = k0, 1
    bad = None
    while True:
        probe = good + step
        if kmax is not None and probe > kmax:
            probe = kmax
            if probe <= good:
                return good, None
        s = sign_at(probe)
        if s == 0:
            return None, probe
        if s == want:
            good = probe
            if kmax is not None and good >= kmax:
                return good, None
            if step > 4 * PROBE_BOUND:
                raise OracleInconsistent("sign run does not terminate")
            step *= 2
        else:
            bad = probe
            break
    while bad - good > 1:
        mid = (good + bad) // 2
        s = sign_at(mid)
        if s == 0:
            return None, mid
        if s == want:
            good = mid
        else:
            bad = mid
    return good, None


def max_subset(T: FormTower, S: Iterable[Sequence[int]]) -> list:
    """Members of ``S`` in the top Archimedean class (every other member is ``<<`` or ``~``)."""
    S = [tuple(s) for s in S]
    if not S:
        return []
    idx = [first_index(T, s) for s in S]
    if any(j is None for j in idx):
        raise ValueError("max_subset needs nonzero vectors")
    best = min(idx)
    return [s for s, j in zip(S, idx) if j == best]


def bracket_product(x: ComparisonBracket, y: ComparisonBracket):
    """Product of two exact-or-degenerate indices (``None`` for the undefined 0 * inf)."""
    kinds = {x.kind, y.kind}
    if kinds == {"zero", "infinity"}:
        return None
    if "interval" in kinds:
        raise ValueError("products are only defined for exact or degenerate indices")
    if "zero" in kinds:
        return ComparisonBracket("zero")
    if "infinity" in kinds:
        return ComparisonBracket("infinity")
    return ComparisonBracket.exact(x.value * y.value)
