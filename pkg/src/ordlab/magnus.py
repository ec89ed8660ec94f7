"""Free metabelian groups through the Magnus embedding into Z^n wr Z^n.

An element is stored as ``(base, t)``: ``n`` Laurent polynomials in ``n``
variables and an exponent vector.  Multiplication follows the left action
convention ``(b, t)(b', t') = (b + x^t b', t + t')``, so the generator ``a_i``
is ``(1 in slot i, e_i)``.  Two words are equal in M_n exactly when their
images agree.

Derived-subgroup elements form a module over Z[x^{+-1}]; here ``x_k`` acts as
conjugation by ``a_k``, i.e. ``d^{x_k} = a_k^{-1} d a_k``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadLetter, IndexOrder, NotDivisible, NotInDerived, RankMismatch
from .laurent import LaurentPoly, format_poly, lp_divexact_uni

_TOKEN = re.compile(r"[xX]\d+|[a-zA-Z]")


@dataclass(frozen=True)
class GroupWord:
    n: int
    letters: tuple  # (generator index 1..n, +1 or -1)

    def __post_init__(self):
        letters = tuple((int(i), int(e)) for i, e in self.letters)
        for i, e in letters:
            if not 1 <= i <= self.n or e not in (1, -1):
                raise BadLetter(f"letter {(i, e)} invalid in rank {self.n}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(max(self.n, other.n), self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.n, tuple((i, -e) for i, e in reversed(self.letters)))

    def power(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(self.n, base.letters * abs(k))

    def abelianization(self) -> tuple:
        t = [0] * self.n
        for i, e in self.letters:
            t[i - 1] += e
        return tuple(t)

    def text(self) -> str:
        return "".join(letter_text(i, e, self.n) for i, e in self.letters)

    def __str__(self):
        return self.text() or "1"


def letter_text(i: int, e: int, n: int = 26) -> str:
    if i <= 26:
        ch = chr(ord("a") + i - 1)
        return ch if e > 0 else ch.upper()
    return f"x{i}" if e > 0 else f"X{i}"


def parse_word(text: str, n: int | None = None) -> GroupWord:
    """Parse ``"abAcB"`` style words; ``x27``/``X27`` address generators past ``z``."""
    text = text.strip()
    if text in ("", "1", "e"):
        return GroupWord(n or 1, ())
    letters = []
    pos = 0
    for m in _TOKEN.finditer(text):
        if m.start() != pos and text[pos:m.start()].strip():
            raise BadLetter(f"unexpected {text[pos:m.start()]!r} at position {pos}")
        pos = m.end()
        tok = m.group()
        if len(tok) > 1:
            letters.append((int(tok[1:]), 1 if tok[0] == "x" else -1))
        else:
            letters.append((ord(tok.lower()) - ord("a") + 1, 1 if tok.islower() else -1))
    if text[pos:].strip():
        raise BadLetter(f"unexpected {text[pos:]!r} at position {pos}")
    need = max((i for i, _ in letters), default=1)
    if n is None:
        n = need
    elif need > n:
        raise BadLetter(f"generator {need} does not exist in rank {n}")
    return GroupWord(n, tuple(letters))


def random_word(rng: random.Random, n: int, max_len: int, min_len: int = 0) -> GroupWord:
    length = rng.randint(min_len, max_len)
    return GroupWord(n, tuple((rng.randint(1, n), rng.choice((1, -1))) for _ in range(length)))


@dataclass(frozen=True)
class WreathElement:
    n: int
    base: tuple
    t: tuple

    def __post_init__(self):
        if len(self.base) != self.n or len(self.t) != self.n:
            raise RankMismatch("base and exponent vector must have length n")

    def to_json(self) -> dict:
        return {"rank": self.n, "slots": [format_poly(p) for p in self.base], "t": list(self.t)}

    def __str__(self):
        slots = ", ".join(format_poly(p) for p in self.base)
        return f"[{slots}; t={self.t}]"

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return mg_mul(self, other)


def mg_identity(n: int) -> WreathElement:
    return WreathElement(n, tuple(LaurentPoly.zero(n) for _ in range(n)), (0,) * n)


def mg_generator(i: int, n: int) -> WreathElement:
    """Image of ``a_i`` (1-based)."""
    return mg_eval(GroupWord(n, ((i, 1),)))


def mg_eval(w, n: int | None = None) -> WreathElement:
    if isinstance(w, str):
        w = parse_word(w, n)
    elif n is not None and w.n != n:
        w = GroupWord(n, w.letters)
    n = w.n
    slots = [dict() for _ in range(n)]
    t = [0] * n
    for i, e in w.letters:
        k = i - 1
        if e < 0:
            t[k] -= 1
        key = tuple(t)
        d = slots[k]
        c = d.get(key, 0) + e
        if c:
            d[key] = c
        else:
            del d[key]
        if e > 0:
            t[k] += 1
    return WreathElement(n, tuple(LaurentPoly._raw(n, d) for d in slots), tuple(t))


def _same_rank(*es: WreathElement) -> int:
    n = es[0].n
    if any(e.n != n for e in es):
        raise RankMismatch("elements of different rank")
    return n


def mg_mul(e1: WreathElement, e2: WreathElement) -> WreathElement:
    n = _same_rank(e1, e2)
    if not any(e1.t):
        base = tuple(p + q for p, q in zip(e1.base, e2.base))
    else:
        base = tuple(p + q.shift(e1.t) for p, q in zip(e1.base, e2.base))
    return WreathElement(n, base, tuple(a + b for a, b in zip(e1.t, e2.t)))


def mg_inv(e: WreathElement) -> WreathElement:
    neg = tuple(-a for a in e.t)
    return WreathElement(e.n, tuple(-p.shift(neg) for p in e.base), neg)


def mg_conj(e: WreathElement, h: WreathElement) -> WreathElement:
    """``h^{-1} e h``."""
    return mg_mul(mg_mul(mg_inv(h), e), h)


def mg_commutator(e1: WreathElement, e2: WreathElement) -> WreathElement:
    """``e1^{-1} e2^{-1} e1 e2``."""
    return mg_mul(mg_mul(mg_inv(e1), mg_inv(e2)), mg_mul(e1, e2))


def mg_power(e: WreathElement, k: int) -> WreathElement:
    if not any(e.t):
        return WreathElement(e.n, tuple(p * k for p in e.base), e.t)
    out = mg_identity(e.n)
    step = e if k >= 0 else mg_inv(e)
    k = abs(k)
    while k:
        if k & 1:
            out = mg_mul(out, step)
        step = mg_mul(step, step)
        k >>= 1
    return out


def mg_product(es: Iterable[WreathElement], n: int) -> WreathElement:
    out = mg_identity(n)
    for e in es:
        out = mg_mul(out, e)
    return out


def mg_is_identity(e: WreathElement) -> bool:
    return not any(e.t) and all(p.is_zero() for p in e.base)


def mg_in_derived(e: WreathElement) -> bool:
    return not any(e.t)


def mg_in_image(e: WreathElement) -> bool:
    """Does ``sum_i slot_i (x_i - 1) == x^t - 1`` hold?"""
    n = e.n
    one = LaurentPoly.one(n)
    lhs = LaurentPoly.zero(n)
    for i, p in enumerate(e.base):
        lhs = lhs + p * (LaurentPoly.var(i, n) - one)
    return lhs == LaurentPoly.monomial(e.t) - one


def _check_pair(i: int, j: int, n: int) -> None:
    if not (1 <= i < j <= n):
        raise IndexOrder(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def mg_derived_gen(i: int, j: int, q: Sequence[int] | None = None, n: int | None = None) -> WreathElement:
    """``[a_i, a_j]`` conjugated by any word with abelianization ``q``.

    Closed form: ``x^{-q-e_i-e_j}`` times ``(1 - x_j)`` in slot i and
    ``(x_i - 1)`` in slot j.
    """
    if n is None:
        n = len(q) if q is not None else j
    q = tuple(q) if q is not None else (0,) * n
    if len(q) != n:
        raise RankMismatch("shift vector has the wrong length")
    _check_pair(i, j, n)
    s = [-c for c in q]
    s[i - 1] -= 1
    s[j - 1] -= 1
    s = tuple(s)
    sj = list(s)
    sj[j - 1] += 1
    si = list(s)
    si[i - 1] += 1
    base = [LaurentPoly.zero(n)] * n
    base[i - 1] = LaurentPoly(n, {s: 1, tuple(sj): -1})
    base[j - 1] = LaurentPoly(n, {tuple(si): 1, s: -1})
    return WreathElement(n, tuple(base), (0,) * n)


def mg_module_exp(d: WreathElement, p: LaurentPoly) -> WreathElement:
    """``d`` raised to the group-ring element ``p``: ``prod_q (d^{x^q})^{c_q}``."""
    if any(d.t):
        raise NotInDerived("module exponent needs an element of the derived subgroup")
    if p.nvars != d.n:
        raise RankMismatch("exponent polynomial has the wrong number of variables")
    act = p.antipode()
    return WreathElement(d.n, tuple(b * act for b in d.base), d.t)


def jacobi_terms(i: int, j: int, k: int, n: int) -> list[tuple[LaurentPoly, WreathElement]]:
    """The three (coefficient, generator) pairs of the relator ``J(i, j, k)``."""
    if not (1 <= i < j < k <= n):
        raise IndexOrder(f"need 1 <= i < j < k <= n, got {(i, j, k)} with n={n}")
    one = LaurentPoly.one(n)

    def x(m):
        return LaurentPoly.var(m - 1, n)

    return [
        (one - x(i), mg_derived_gen(j, k, None, n)),
        (-(one - x(j)), mg_derived_gen(i, k, None, n)),
        (one - x(k), mg_derived_gen(i, j, None, n)),
    ]


def mg_jacobi(i: int, j: int, k: int, n: int | None = None) -> WreathElement:
    """Evaluate ``(1-x_i)e_jk - (1-x_j)e_ik + (1-x_k)e_ij``; it is the identity in M_n."""
    if n is None:
        n = k
    return mg_product((mg_module_exp(g, c) for c, g in jacobi_terms(i, j, k, n)), n)


def exponent_sums(w: GroupWord) -> tuple:
    return w.abelianization()


# ----- rank two module coordinates ----------------------------------

def m2_commutator() -> WreathElement:
    """``c = [a, b]`` in M_2."""
    return mg_derived_gen(1, 2, (0, 0), 2)


def commutator_exponent(m: int, n: int) -> LaurentPoly:
    """``p`` with ``[a^m, b^n] = [a, b]^p`` in M_2 for ``m, n >= 1``:
    ``(1 + x1 + ... + x1^(m-1)) (1 + x2 + ... + x2^(n-1))``."""
    x1, x2 = LaurentPoly.var(0, 2), LaurentPoly.var(1, 2)
    s1 = sum((x1**i for i in range(m)), LaurentPoly.zero(2))
    s2 = sum((x2**i for i in range(n)), LaurentPoly.zero(2))
    return s1 * s2


def binomial_exponent(m: int, n: int) -> LaurentPoly:
    """``(1 + x1)^(m-1) (1 + x2)^(n-1)``; agrees with ``commutator_exponent`` only for ``m, n <= 2``."""
    one = LaurentPoly.one(2)
    return (one + LaurentPoly.var(0, 2)) ** (m - 1) * (one + LaurentPoly.var(1, 2)) ** (n - 1)


def m2_module_coords(d: WreathElement) -> LaurentPoly:
    """The unique ``m`` with ``d = c^m`` for ``d`` in the derived subgroup of M_2."""
    if d.n != 2:
        raise RankMismatch("module coordinates are implemented for rank 2")
    if any(d.t):
        raise NotInDerived("module coordinates need an element of the derived subgroup")
    # slot 2 of c^m is m(x^{-1}) x1^{-1} x2^{-1} (x1 - 1)
    s2 = d.base[1].shift((1, 1))
    by_col: dict[int, dict[int, int]] = {}
    for (e1, e2), c in s2.items():
        by_col.setdefault(e2, {})[e1] = c
    terms = {}
    for e2, col in by_col.items():
        f = LaurentPoly(1, {(e1,): c for e1, c in col.items()})
        try:
            g = lp_divexact_uni(f, (-1, 1))
        except NotDivisible as exc:
            raise NotInDerived("slot 2 is not divisible by x1 - 1") from exc
        for (e1,), c in g.items():
            terms[(e1, e2)] = c
    m = LaurentPoly(2, terms).antipode()
    if mg_module_exp(m2_commutator(), m) != d:
        raise NotInDerived("element is not in the image of the embedding")
    return m
