"""Dense univariate polynomials over Q.

A polynomial is a tuple of coefficients in ascending degree order with no
trailing zeros; the zero polynomial is the empty tuple.  Coefficients are
``int`` or ``Fraction``.  Every function accepts any sequence and returns a
normalized tuple.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Poly = tuple


def trim(p: Sequence) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Sequence) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def neg(p: Sequence) -> Poly:
    return tuple(-c for c in p)


def sub(p: Sequence, q: Sequence) -> Poly:
    return add(p, neg(q))


def scale(p: Sequence, c) -> Poly:
    return trim(c * a for a in p)


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    """Euclidean division over Q; raises ZeroDivisionError for ``q == 0``."""
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    if len(rem) - 1 < dq:
        return (), trim(rem)
    quot = [Fraction(0)] * (len(rem) - dq)
    for k in range(len(rem) - 1 - dq, -1, -1):
        c = rem[k + dq] / lead
        quot[k] = c
        if c:
            for j in range(dq + 1):
                rem[k + j] -= c * q[j]
    return trim(quot), trim(rem[:dq])


def rem(p: Sequence, q: Sequence) -> Poly:
    return divmod_(p, q)[1]


def monic(p: Sequence) -> Poly:
    p = trim(p)
    if not p:
        return ()
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def gcd_(p: Sequence, q: Sequence) -> Poly:
    """Monic gcd over Q."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(p: Sequence, q: Sequence) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*p + t*q == g`` and ``g`` monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, r2 = divmod_(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return (), s0, t0
    lead = Fraction(r0[-1])
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def deriv(p: Sequence) -> Poly:
    return trim(i * p[i] for i in range(1, len(p)))


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def reflect(p: Sequence) -> Poly:
    """``p(-x)``."""
    return trim(c if i % 2 == 0 else -c for i, c in enumerate(p))


def primitive(p: Sequence) -> tuple[int, ...]:
    """Scale a rational polynomial to a primitive integer one with positive leading coefficient."""
    p = trim(p)
    if not p:
        return ()
    fr = [Fraction(c) for c in p]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return tuple(c // g for c in ints)


def squarefree_part(p: Sequence) -> Poly:
    p = trim(p)
    if len(p) <= 1:
        return p
    g = gcd_(p, deriv(p))
    return divmod_(p, g)[0] if len(g) > 1 else p


def sign(x) -> int:
    return (x > 0) - (x < 0)


def interval_eval(p: Sequence, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def to_str(p: Sequence, var: str = "x") -> str:
    p = trim(p)
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out
