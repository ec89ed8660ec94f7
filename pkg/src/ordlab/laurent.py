"""Sparse multivariate Laurent polynomials with integer coefficients.

``LaurentPoly`` is immutable.  Terms live in a dict mapping exponent tuples to
nonzero ints; the canonical term order (used for printing and serialization)
is graded-lexicographic, highest term first.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

from . import upoly
from .errors import NotDivisible, VarCountMismatch

Monomial = tuple


def _grlex_key(exps: Monomial):
    return (sum(exps), exps)


class LaurentPoly:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Iterable[int], int] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise VarCountMismatch(f"monomial {exps} has {len(exps)} exponents, expected {nvars}")
            c = int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "LaurentPoly":
        # terms must already be clean: right length, nonzero ints
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    @classmethod
    def var(cls, i: int, nvars: int) -> "LaurentPoly":
        """The variable ``x_{i+1}`` (0-based ``i``)."""
        exps = [0] * nvars
        exps[i] = 1
        return cls._raw(nvars, {tuple(exps): 1})

    @classmethod
    def constant(cls, c: int, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def from_coeffs(cls, coeffs, low: int = 0) -> "LaurentPoly":
        """Univariate polynomial from ascending integer coefficients starting at ``x^low``."""
        return cls._raw(1, {(low + i,): int(c) for i, c in enumerate(coeffs) if c})

    # ----- inspection -------------------------------------------------
    def terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coeff(self, exps: Monomial) -> int:
        return self._terms.get(tuple(exps), 0)

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def augmentation(self) -> int:
        return sum(self._terms.values())

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, int):
            return self == LaurentPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # ----- arithmetic -------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise VarCountMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.nvars)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly._raw(self.nvars, {k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly._raw(self.nvars, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((k, c),) = self._terms.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly._raw(self.nvars, {tuple(-e * -n for e in k): c ** (-n)})
        result = LaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, q: Monomial) -> "LaurentPoly":
        """Multiply by the monomial ``x^q``."""
        q = tuple(q)
        if len(q) != self.nvars:
            raise VarCountMismatch(f"shift by {len(q)}-vector on {self.nvars} variables")
        return LaurentPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(k, q)): c for k, c in self._terms.items()}
        )

    def antipode(self) -> "LaurentPoly":
        """Substitute ``x_i -> x_i^{-1}`` for every variable."""
        return LaurentPoly._raw(self.nvars, {tuple(-e for e in k): c for k, c in self._terms.items()})

    def min_exponents(self) -> Monomial:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(k[i] for k in self._terms) for i in range(self.nvars))

    # ----- univariate views ------------------------------------------
    def _require_univariate(self):
        if self.nvars != 1:
            raise VarCountMismatch("univariate operation on a multivariate polynomial")

    def low_degree(self) -> int:
        self._require_univariate()
        return min(k[0] for k in self._terms)

    def high_degree(self) -> int:
        self._require_univariate()
        return max(k[0] for k in self._terms)

    def to_poly(self) -> tuple[int, tuple[int, ...]]:
        """Split a nonzero univariate ``f`` as ``x^low * p(x)`` with ``p(0) != 0``."""
        self._require_univariate()
        if not self._terms:
            return 0, ()
        low = self.low_degree()
        dense = [0] * (self.high_degree() - low + 1)
        for (e,), c in self._terms.items():
            dense[e - low] = c
        return low, tuple(dense)

    def __call__(self, x):
        """Evaluate a univariate polynomial at ``x`` (negative powers need an invertible x)."""
        low, dense = self.to_poly()
        if not dense:
            return 0
        val = upoly.evaluate(dense, x)
        return val * x**low if low >= 0 else val / x ** (-low)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        return format_poly(self)


# ----- module-level operations -------------------------------------

def lp_arith(p: LaurentPoly, q: LaurentPoly, kind: str) -> LaurentPoly:
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "neg":
        return -p
    raise ValueError(f"unknown operation {kind!r}")


def lp_shift(p: LaurentPoly, q: Monomial) -> LaurentPoly:
    return p.shift(q)


def lp_augmentation(p: LaurentPoly) -> int:
    return p.augmentation()


def lp_support(p: LaurentPoly) -> frozenset:
    return p.support()


def lp_divexact_uni(f: LaurentPoly, p) -> LaurentPoly:
    """Exact quotient ``f / p`` for univariate ``f`` and an integer polynomial ``p``.

    ``p`` is an ascending coefficient sequence (or a univariate LaurentPoly).
    A monomial factor is split off ``f`` first, so only ordinary division
    remains.  Raises ``NotDivisible`` when a remainder or a non-integral
    quotient is left over.
    """
    if isinstance(p, LaurentPoly):
        plow, pdense = p.to_poly()
    else:
        plow, pdense = 0, upoly.trim(p)
    if not pdense:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.nvars != 1:
        raise VarCountMismatch("lp_divexact_uni needs a univariate dividend")
    if f.is_zero():
        return f
    low, dense = f.to_poly()
    quo, rem = upoly.divmod_(dense, pdense)
    if rem or any(c.denominator != 1 for c in quo):
        raise NotDivisible(f"{format_poly(f)} is not divisible by {upoly.to_str(pdense)}")
    return LaurentPoly.from_coeffs([int(c) for c in quo], low - plow)


# ----- text form ---------------------------------------------------

def _var_name(i: int, nvars: int) -> str:
    return "x" if nvars == 1 else f"x{i + 1}"


def format_poly(p: LaurentPoly) -> str:
    terms = p.terms()
    if not terms:
        return "0"
    chunks = []
    for exps, c in terms:
        factors = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            name = _var_name(i, p.nvars)
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        chunks.append((c < 0, body))
    neg0, body0 = chunks[0]
    out = ("-" if neg0 else "") + body0
    for neg, body in chunks[1:]:
        out += (" - " if neg else " + ") + body
    return out


_ALIASES = {"x": 1, "y": 2, "z": 3}
_FACTOR = re.compile(r"\s*(?:(\d+)|([a-z])(\d*)(?:\s*\^\s*(-?\d+))?)\s*")


def _split_terms(text: str) -> list[tuple[int, str]]:
    # a sign right after '^' belongs to an exponent, not a new term
    out, sign, buf = [], 1, ""
    for ch in text.strip():
        if ch in "+-" and buf.rstrip()[-1:] != "^":
            if buf.strip():
                out.append((sign, buf))
                sign, buf = 1, ""
            elif out or buf:
                raise ValueError(f"dangling sign in {text!r}")
            sign *= -1 if ch == "-" else 1
        else:
            buf += ch
    out.append((sign, buf))
    return out


def parse_poly(text: str, nvars: int | None = None) -> LaurentPoly:
    """Parse ``3*x1^-2*x2 + 1``-style sums.  ``x``, ``y``, ``z`` alias ``x1``..``x3``."""
    parsed = []
    top = 0
    for sign, body in _split_terms(text):
        body = body.strip()
        if not body:
            raise ValueError(f"empty term in {text!r}")
        coeff = sign
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            m = _FACTOR.fullmatch(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            num, name, idx, power = m.groups()
            if num is not None:
                coeff *= int(num)
                continue
            if idx:
                if name != "x":
                    raise ValueError(f"indexed variables must be x<k>, got {factor!r}")
                k = int(idx)
            elif name in _ALIASES:
                k = _ALIASES[name]
            else:
                raise ValueError(f"unknown variable {name!r}")
            if k < 1:
                raise ValueError("variable indices start at 1")
            exps[k] = exps.get(k, 0) + (int(power) if power is not None else 1)
            top = max(top, k)
        parsed.append((coeff, exps))
    if nvars is None:
        nvars = max(top, 1)
    elif top > nvars:
        raise VarCountMismatch(f"{text!r} uses x{top} but only {nvars} variables")
    terms: dict = {}
    for coeff, exps in parsed:
        key = tuple(exps.get(i + 1, 0) for i in range(nvars))
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPoly(nvars, terms)
