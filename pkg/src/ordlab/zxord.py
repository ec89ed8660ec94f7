"""<x>-invariant orders on the Laurent polynomial ring Z(x).

An order is described by a sequence of stages.  An algebraic stage at a
positive real algebraic number ``r`` with sign ``eps`` decides every
polynomial that does not vanish at ``r`` by ``eps * sign(f(r))``; the ones
that do vanish are divided by the minimal polynomial of ``r`` and handed to
the next stage.  A final zero (infinity) stage decides by the lowest
(highest) coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import upoly
from .errors import CannotPerturb, DepthExceeded, NotPositive, OracleInconsistent, Underdetermined
from .laurent import LaurentPoly, parse_poly
from .latord import ComparisonBracket, ci_bracket
from .realalg import RealAlgebraic, ra_compare_rational, ra_from_rational, ra_sign_at

KINDS = ("algebraic", "zero", "infinity")


@dataclass(frozen=True)
class ZxStage:
    kind: str
    eps: int
    value: RealAlgebraic | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown stage kind {self.kind!r}")
        if self.eps not in (1, -1):
            raise ValueError("stage sign must be +1 or -1")
        if self.kind == "algebraic":
            if self.value is None:
                raise ValueError("algebraic stage needs a value")
            if ra_compare_rational(self.value, 0) <= 0:
                raise ValueError("algebraic stage value must be positive")
        elif self.value is not None:
            raise ValueError(f"{self.kind} stage takes no value")

    @classmethod
    def algebraic(cls, value, eps: int = 1) -> "ZxStage":
        if not isinstance(value, RealAlgebraic):
            value = ra_from_rational(value)
        return cls("algebraic", eps, value)

    @classmethod
    def zero(cls, eps: int = 1) -> "ZxStage":
        return cls("zero", eps)

    @classmethod
    def infinity(cls, eps: int = 1) -> "ZxStage":
        return cls("infinity", eps)

    def flipped(self) -> "ZxStage":
        return ZxStage(self.kind, -self.eps, self.value)

    def __str__(self):
        sgn = "+1" if self.eps > 0 else "-1"
        if self.kind == "algebraic":
            return f"{self.value} ({sgn})"
        return f"{self.kind} ({sgn})"


@dataclass(frozen=True)
class ZxOrderSpec:
    stages: tuple

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages:
            raise ValueError("an order needs at least one stage")
        for s in stages[:-1]:
            if s.kind != "algebraic":
                raise ValueError(f"a {s.kind} stage can only be the last one")
        object.__setattr__(self, "stages", stages)

    @property
    def algebraic_depth(self) -> int:
        return sum(s.kind == "algebraic" for s in self.stages)

    def __str__(self):
        return "[" + ", ".join(str(s) for s in self.stages) + "]"


def _as_poly(f) -> LaurentPoly:
    if isinstance(f, LaurentPoly):
        return f
    if isinstance(f, str):
        return parse_poly(f, 1)
    if isinstance(f, int):
        return LaurentPoly.constant(f, 1)
    raise TypeError(f"cannot use {f!r} as a polynomial")


def _exact_quotient(g: tuple, p: tuple) -> tuple:
    q, r = upoly.divmod_(g, p)
    assert not r
    return tuple(int(c) for c in q)


def zx_decide(spec: ZxOrderSpec, f) -> tuple[int, int | None]:
    """Return ``(sign, stage index that decided it)``; the index is ``None`` for f = 0."""
    f = _as_poly(f)
    if f.is_zero():
        return 0, None
    _, g = f.to_poly()
    for i, st in enumerate(spec.stages):
        if st.kind == "algebraic":
            s = ra_sign_at(st.value, g)
            if s:
                return st.eps * s, i
            g = _exact_quotient(g, st.value.minpoly)
        elif st.kind == "zero":
            return st.eps * upoly.sign(next(c for c in g if c)), i
        else:
            return st.eps * upoly.sign(g[-1]), i
    raise Underdetermined(f"{f} lies beyond the {len(spec.stages)} configured stages")


def zx_sign(spec: ZxOrderSpec, f) -> int:
    return zx_decide(spec, f)[0]


def zx_compare(spec: ZxOrderSpec, f, g) -> int:
    return zx_sign(spec, _as_poly(f) - _as_poly(g))


def zx_chain(spec: ZxOrderSpec, depth: int) -> list[LaurentPoly]:
    """Generators ``p_1 ... p_s`` of the convex subgroups ``H_s`` for ``s = 0..depth``."""
    if depth < 0 or depth > spec.algebraic_depth:
        raise DepthExceeded(f"depth {depth} exceeds the {spec.algebraic_depth} algebraic stages")
    out = [(1,)]
    for st in spec.stages[:depth]:
        out.append(upoly.mul(out[-1], st.value.minpoly))
    return [LaurentPoly.from_coeffs(p) for p in out]


def in_chain(spec: ZxOrderSpec, f, s: int) -> bool:
    """Membership of ``f`` in ``H_s``."""
    gen = zx_chain(spec, s)[-1]
    f = _as_poly(f)
    if f.is_zero():
        return True
    return not upoly.rem(f.to_poly()[1], gen.to_poly()[1])


def zx_oracle(spec: ZxOrderSpec) -> Callable[[LaurentPoly], int]:
    return lambda f: zx_sign(spec, f)


def zx_codify_probe(oracle: Callable[[LaurentPoly], int], denom_bound: int) -> tuple[int, ComparisonBracket]:
    """Recover ``eps_1`` and a bracket for ``r_1`` from a sign oracle alone."""
    one = LaurentPoly.one(1)
    eps = oracle(one)
    if eps not in (1, -1):
        raise OracleInconsistent("the oracle gave 1 no sign")

    def vec_oracle(u):
        m, n = u
        return oracle(LaurentPoly.from_coeffs((eps * m, eps * n)))

    return eps, ci_bracket(vec_oracle, (1, 0), (0, 1), denom_bound)


def _simplest_between(lo: Fraction, hi: Fraction | None) -> Fraction:
    """Rational of least denominator strictly inside ``(lo, hi)`` (``hi=None`` is +inf)."""
    fl = math.floor(lo)
    if hi is None or fl + 1 < hi:
        return Fraction(fl + 1)
    inner_hi = None if lo == fl else 1 / (lo - fl)
    return fl + 1 / _simplest_between(1 / (hi - fl), inner_hi)


def _positive_at(f: LaurentPoly, eps: int, r: Fraction) -> bool:
    _, g = f.to_poly()
    return eps * upoly.sign(upoly.evaluate(g, r)) > 0


def _candidates(stage: ZxStage):
    if stage.kind == "zero":
        for k in range(1, 65):
            yield Fraction(1, 2**k)
    elif stage.kind == "infinity":
        for k in range(1, 65):
            yield Fraction(2**k)
    else:
        alpha = stage.value
        for k in range(1, 65):
            a = alpha.refine(Fraction(1, 2**k))
            for r in (a.lo, a.hi):
                if r > 0 and r != alpha.rational_value:
                    yield r


def _flips(spec, spec2, w) -> bool:
    try:
        s1, s2 = zx_sign(spec, w), zx_sign(spec2, w)
    except Underdetermined:
        return False
    return s1 != 0 and s1 == -s2


def zx_perturb(spec: ZxOrderSpec, positive_set: Iterable, mode: str = "move_r", target=None):
    """A different order keeping every member of ``positive_set`` positive.

    Returns ``(new_spec, witness)`` where ``witness`` has opposite signs in the
    two orders.  ``target`` fixes the new first value in ``move_r`` mode.
    """
    pos = [_as_poly(f) for f in positive_set]
    decided = []
    for f in pos:
        s, idx = zx_decide(spec, f)
        if s != 1:
            raise NotPositive(f"{f} is not positive in {spec}")
        decided.append(idx)

    if mode == "flip_deepest":
        last = len(spec.stages) - 1
        if any(idx >= last for idx in decided):
            raise CannotPerturb("a positive element is decided by the final stage")
        new = ZxOrderSpec(spec.stages[:-1] + (spec.stages[-1].flipped(),))
        witness = zx_chain(spec, last)[-1]
        assert _flips(spec, new, witness)
        return new, witness

    if mode != "move_r":
        raise ValueError(f"unknown perturbation mode {mode!r}")
    first = spec.stages[0]
    eps = first.eps
    if target is not None:
        target = Fraction(target)
        if target <= 0:
            raise CannotPerturb("the new value must be positive")
        if first.kind == "algebraic" and ra_compare_rational(first.value, target) == 0:
            raise CannotPerturb("the new value equals the old one")
        cands = [target]
    else:
        cands = _candidates(first)
    r_new = next((r for r in cands if all(_positive_at(f, eps, r) for f in pos)), None)
    if r_new is None:
        raise CannotPerturb("no admissible new value found near the old one")

    stage = ZxStage.algebraic(r_new, eps)
    if first.kind == "algebraic":
        new = ZxOrderSpec((stage,) + spec.stages[1:])
    else:
        new = ZxOrderSpec((stage, ZxStage.zero(1)))

    own = LaurentPoly.from_coeffs((-r_new.numerator, r_new.denominator))
    if _flips(spec, new, own):
        return new, own
    s = _separating_rational(first, r_new)
    witness = LaurentPoly.from_coeffs((-s.numerator, s.denominator))
    assert _flips(spec, new, witness)
    return new, witness


def _separating_rational(stage: ZxStage, r: Fraction) -> Fraction:
    """A simple rational strictly between the stage's value and ``r``."""
    if stage.kind == "zero":
        return _simplest_between(Fraction(0), r)
    if stage.kind == "infinity":
        return _simplest_between(r, None)
    alpha = stage.value
    rv = alpha.rational_value
    if rv is not None:
        lo, hi = min(rv, r), max(rv, r)
        return _simplest_between(lo, hi)
    width = Fraction(1)
    while True:
        a = alpha.refine(width)
        if r > a.hi:
            return _simplest_between(a.hi, r)
        if r < a.lo:
            return _simplest_between(r, a.lo)
        width /= 2


def flatten_positive(spec: ZxOrderSpec, polys: Sequence) -> list:
    """Replace each polynomial by its absolute value under ``spec``."""
    out = []
    for f in polys:
        f = _as_poly(f)
        s = zx_sign(spec, f)
        if s:
            out.append(f if s > 0 else -f)
    return out


def zx_convexity_check(spec: ZxOrderSpec, s: int = 1, max_degree: int = 3, coeff_range: int = 3) -> dict:
    """Search all polynomials with support in ``{1..x^max_degree}`` and coefficients in
    ``[-coeff_range, coeff_range]`` for ``f < g < h`` with ``f, h`` in ``H_s`` and ``g`` not."""
    import itertools

    r = range(-coeff_range, coeff_range + 1)
    polys = [LaurentPoly.from_coeffs(c) for c in itertools.product(r, repeat=max_degree + 1)]
    inside = [f for f in polys if in_chain(spec, f, s)]
    violations = []
    for g in polys:
        if in_chain(spec, g, s):
            continue
        signs = [zx_compare(spec, f, g) for f in inside]
        if -1 in signs and 1 in signs:
            lo = inside[signs.index(-1)]
            hi = inside[signs.index(1)]
            violations.append({"f": str(lo), "g": str(g), "h": str(hi)})
    return {
        "suite": "convexity",
        "depth": s,
        "generator": str(zx_chain(spec, s)[-1]),
        "checked": len(polys),
        "members": len(inside),
        "violations": violations,
    }
