"""A context-free positive cone for M_2 over the letters a, b, c = [a, b].

Accepted strings have the shape ``v c^t1 w1 ... c^tn wn z`` (first branch:
``t1 >= 1``, ``n >= 1``) or ``v c^t1 w1 ... c^tn wn z z'`` (second branch:
all ``t_i != 0``, ``n >= 0``), where every ``w_i`` and ``z'`` is a canonical
word of the regular cone on Z^2 and ``z`` freely cancels ``v w1 ... wn``.
Recognition is a subset simulation of the pushdown machine whose stack is
the free reduction of the a/b letters read so far.

The order these strings are positive in leads by the lexicographic order on
the abelianization; on the derived subgroup it looks at the coefficient of
the conjugate ``c^h`` with the largest ``h``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .biorder import BiOrderSpec, LeadingCoeff
from .errors import BadLetter, NotPositive
from .latord import FormTower
from .magnus import (
    WreathElement,
    m2_module_coords,
    mg_eval,
    mg_identity,
    mg_inv,
    mg_is_identity,
    mg_mul,
)

T_LETTERS = "abAB"
LETTERS = "abcABC"
_INV = {"a": "A", "A": "a", "b": "B", "B": "b", "c": "C", "C": "c"}

# Canonical forms of the lexicographic cone on Z^2: a a*(b b* | B B* | empty) | b b*
LQ_START = 0
LQ_DELTA = {
    (0, "a"): 1,
    (0, "b"): 4,
    (1, "a"): 1,
    (1, "b"): 2,
    (1, "B"): 3,
    (2, "b"): 2,
    (3, "B"): 3,
    (4, "b"): 4,
}
LQ_ACCEPT = frozenset({1, 2, 3, 4})


def _check_letters(word: str, alphabet: str) -> None:
    for i, ch in enumerate(word):
        if ch not in alphabet:
            raise BadLetter(f"letter {ch!r} at position {i} is not in {alphabet!r}")


def lq_accept(word: str) -> bool:
    _check_letters(word, T_LETTERS)
    q = LQ_START
    for ch in word:
        q = LQ_DELTA.get((q, ch))
        if q is None:
            return False
    return q in LQ_ACCEPT


def lq_word(t) -> str:
    """The canonical word of a lexicographically positive ``(m, k)``."""
    m, k = t
    if m < 0 or (m == 0 and k <= 0):
        raise NotPositive(f"{t} is not lexicographically positive")
    return "a" * m + ("b" * k if k > 0 else "B" * (-k))


def free_reduce(word: str) -> str:
    out = []
    for ch in word:
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def formal_inverse(word: str) -> str:
    return "".join(_INV[ch] for ch in reversed(word))


# ----- the pushdown machine ------------------------------------------------
# configuration: (branch, phase, dfa state, block sign, stack)
# phases: V (prefix v), C (inside a c-block), W (inside some w_i),
#         Z (suffix z), P (suffix z')


def _push(stack: tuple, ch: str) -> tuple:
    if stack and stack[-1] == _INV[ch]:
        return stack[:-1]
    return stack + (ch,)


def _eps_moves(cfg):
    br, ph, q, s, st = cfg
    if ph == "V" and br == 2:
        yield (2, "Z", 0, 0, st)
    elif ph == "W" and q in LQ_ACCEPT:
        yield (br, "Z", 0, 0, st)
    elif ph == "Z" and br == 2 and not st:
        yield (2, "P", LQ_START, 0, ())


def _step(cfg, ch: str):
    br, ph, q, s, st = cfg
    if ch in "cC":
        sign = 1 if ch == "c" else -1
        if ph == "V":
            if br == 2 or sign == 1:
                yield (br, "C", 0, sign, st)
        elif ph == "C":
            if sign == s:
                yield cfg
        elif ph == "W" and q in LQ_ACCEPT:
            yield (br, "C", 0, sign, st)
        return
    if ph in ("V", "Z"):
        yield (br, ph, 0, 0, _push(st, ch))
    elif ph == "C":
        q2 = LQ_DELTA.get((LQ_START, ch))
        if q2 is not None:
            yield (br, "W", q2, 0, _push(st, ch))
    elif ph == "W":
        q2 = LQ_DELTA.get((q, ch))
        if q2 is not None:
            yield (br, "W", q2, 0, _push(st, ch))
    elif ph == "P":
        q2 = LQ_DELTA.get((q, ch))
        if q2 is not None:
            yield (br, "P", q2, 0, st)


def _is_accepting(cfg) -> bool:
    br, ph, q, s, st = cfg
    if br == 1:
        return ph == "Z" and not st
    return ph == "P" and q in LQ_ACCEPT


def _closure(cfgs: dict) -> dict:
    """Add epsilon successors; ``cfgs`` maps config -> back-pointer."""
    todo = list(cfgs)
    while todo:
        cfg = todo.pop()
        for nxt in _eps_moves(cfg):
            if nxt not in cfgs:
                cfgs[nxt] = (cfg, None)
                todo.append(nxt)
    return cfgs


INITIAL = ((1, "V", 0, 0, ()), (2, "V", 0, 0, ()))


def _initial() -> dict:
    return _closure({c: None for c in INITIAL})


def _advance(cfgs, ch: str) -> dict:
    nxt = {}
    for cfg in cfgs:
        for c2 in _step(cfg, ch):
            if c2 not in nxt:
                nxt[c2] = (cfg, ch)
    return _closure(nxt)


@dataclass
class AcceptTrace:
    branch: int
    segments: list  # [{"part": ..., "text": ...}]
    stacks: list  # stack contents after each letter
    word: str = ""

    def to_json(self) -> dict:
        return {"word": self.word, "branch": self.branch, "segments": self.segments, "stacks": self.stacks}


def cl_accept(word: str, trace: bool = False):
    """Membership in the cone language; with ``trace=True`` returns ``(bool, AcceptTrace | None)``."""
    _check_letters(word, LETTERS)
    layers = [_initial()]
    for ch in word:
        layers.append(_advance(layers[-1], ch))
        if not layers[-1]:
            break
    final = layers[-1] if len(layers) == len(word) + 1 else {}
    hit = next((c for c in sorted(final, key=repr) if _is_accepting(c)), None)
    if not trace:
        return hit is not None
    if hit is None:
        return False, None
    return True, _build_trace(word, layers, hit)


def _build_trace(word: str, layers: list, cfg) -> AcceptTrace:
    # walk back-pointers; record the configuration reached after each letter
    after = [None] * len(word)
    pos = len(word)
    while True:
        ptr = layers[pos][cfg]
        if ptr is None:
            break
        prev, ch = ptr
        if ch is not None:
            pos -= 1
            if after[pos] is None:
                after[pos] = cfg
        cfg = prev
    segments = []
    for i, ch in enumerate(word):
        ph = after[i][1]
        part = {"V": "v", "C": "c", "W": "w", "Z": "z", "P": "z'"}[ph]
        new_w = ph == "W" and (i == 0 or after[i - 1][1] != "W")
        if segments and segments[-1]["part"] == part and not new_w:
            segments[-1]["text"] += ch
        else:
            segments.append({"part": part, "text": ch})
    return AcceptTrace(after[-1][0] if word else 2, segments, ["".join(c[4]) for c in after], word)


def replay_trace(t: AcceptTrace) -> bool:
    """Independently re-check the segmentation recorded in a trace."""
    segs = t.segments
    if "".join(s["text"] for s in segs) != t.word:
        return False
    parts = [s["part"] for s in segs]
    # merge adjacent pieces of the same kind except consecutive w's
    if t.branch == 1 and "z'" in parts:
        return False
    body = [s for s in segs if s["part"] != "z'"]
    zp = "".join(s["text"] for s in segs if s["part"] == "z'")
    order = {"v": 0, "c": 1, "w": 1, "z": 2}
    last = 0
    for s in body:
        if order[s["part"]] < last:
            return False
        last = order[s["part"]]
    blocks = [s for s in body if s["part"] == "c"]
    ws = [s for s in body if s["part"] == "w"]
    # c-blocks and w's alternate, starting with a c-block
    mid = [s["part"] for s in body if s["part"] in ("c", "w")]
    if mid != ["c", "w"] * (len(mid) // 2) or len(mid) % 2:
        return False
    for b in blocks:
        if len(set(b["text"])) != 1:
            return False
    if not all(lq_accept(w["text"]) for w in ws):
        return False
    tpart = "".join(s["text"] for s in body if s["part"] != "c")
    if free_reduce(tpart):
        return False
    if t.branch == 1:
        return bool(blocks) and blocks[0]["text"][0] == "c"
    return zp != "" and lq_accept(zp)


# ----- evaluation and the matching order -------------------------------------

C_ELEMENT = mg_eval("ABab", 2)
_LETTER_ELT = {ch: mg_eval(ch, 2) for ch in T_LETTERS}
_LETTER_ELT["c"] = C_ELEMENT
_LETTER_ELT["C"] = mg_inv(C_ELEMENT)


def cone_eval(word: str) -> WreathElement:
    """Evaluate a cone-alphabet string in M_2 with ``c = a^-1 b^-1 a b``."""
    _check_letters(word, LETTERS)
    out = mg_identity(2)
    for ch in word:
        out = mg_mul(out, _LETTER_ELT[ch])
    return out


def cone_order() -> BiOrderSpec:
    """The bi-order the language recognises: lex on Z^2, then the conjugate with the
    largest conjugator, i.e. the lexicographically smallest Magnus exponent."""
    return BiOrderSpec(
        2,
        FormTower.lex(2),
        (LeadingCoeff(FormTower.revlex(2), FormTower.lex(2)),),
        name="m2cone",
    )


# ----- enumeration ----------------------------------------------------------


def _need(cfg) -> int:
    """Lower bound on the letters still needed to accept from ``cfg``."""
    br, ph, q, s, st = cfg
    k = len(st)
    if br == 1:
        if ph == "Z" or ph == "W":
            return k
        if ph == "C":
            return max(1, k)
        return 1 + max(1, k)
    if ph == "P":
        return 0 if q in LQ_ACCEPT else 1
    if ph == "C":
        return max(1, k) + 1
    return k + 1


def enumerate_accepted(maxlen: int, with_elements: bool = False):
    """Yield every accepted string of length <= maxlen (with its element if asked),
    in depth-first order of the letters ``abcABC``."""
    def walk(prefix, cfgs, elt):
        if any(_is_accepting(c) for c in cfgs):
            yield (prefix, elt) if with_elements else prefix
        room = maxlen - len(prefix)
        if room == 0:
            return
        for ch in LETTERS:
            nxt = _advance(cfgs, ch)
            if not nxt or min(_need(c) for c in nxt) > room - 1:
                continue
            yield from walk(prefix + ch, nxt, mg_mul(elt, _LETTER_ELT[ch]) if with_elements else None)

    yield from walk("", _initial(), mg_identity(2) if with_elements else None)


@dataclass
class ScanResult:
    maxlen: int
    accepted: int = 0
    by_length: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    runtime: float = 0.0

    def to_json(self) -> dict:
        return {
            "suite": "cone_soundness",
            "maxlen": self.maxlen,
            "accepted": self.accepted,
            "by_length": {str(k): v for k, v in sorted(self.by_length.items())},
            "violations": self.violations,
        }


def cl_soundness_scan(maxlen: int, order: BiOrderSpec | None = None) -> ScanResult:
    order = order or cone_order()
    start = time.perf_counter()
    res = ScanResult(maxlen)
    for word, elt in enumerate_accepted(maxlen, with_elements=True):
        res.accepted += 1
        res.by_length[len(word)] = res.by_length.get(len(word), 0) + 1
        s = order.sign(elt)
        if s != 1:
            res.violations.append({"word": word, "sign": s})
    res.runtime = time.perf_counter() - start
    return res


# ----- completeness --------------------------------------------------------


def _free_words_for(t) -> list[str]:
    """Both orderings of the letters of ``a^m b^k``."""
    m, k = t
    xa = "a" * m if m >= 0 else "A" * -m
    xb = "b" * k if k >= 0 else "B" * -k
    return sorted({xa + xb, xb + xa})


# short cone words tried as the final w_n
_TAILS = ("a", "b", "aa", "ab", "aB", "bb", "aaa", "aab", "aaB", "abb", "aBB", "bbb")


def _assemble(v: str, terms: list, tail: str, zp: str) -> str:
    parts = [v]
    for i, (q, coef) in enumerate(terms):
        parts.append(("c" if coef > 0 else "C") * abs(coef))
        if i + 1 < len(terms):
            nxt = terms[i + 1][0]
            parts.append(lq_word((q[0] - nxt[0], q[1] - nxt[1])))
        else:
            parts.append(tail)
    tword = "".join(p for p in parts if p and p[0] not in "cC")
    parts.append(formal_inverse(free_reduce(tword)))
    parts.append(zp)
    return "".join(parts)


def cl_completeness_probe(e: WreathElement, search_len: int, order: BiOrderSpec | None = None):
    """A shortest found string of the language evaluating to ``e``, or ``None`` if
    no candidate of length at most ``search_len`` works.

    ``e = D z'`` with ``z'`` canonical for the abelianization and ``D = c^m``.
    The terms of ``m`` in decreasing lexicographic order fix the c-blocks and
    the w's between them; the prefix ``v`` and the last ``w`` are searched.
    """
    order = order or cone_order()
    if e.n != 2:
        raise NotPositive("the cone language describes M_2")
    if order.sign(e) != 1:
        raise NotPositive("element is not positive")
    zp = lq_word(e.t) if any(e.t) else ""
    d = mg_mul(e, mg_inv(mg_eval(zp, 2))) if zp else e
    if mg_is_identity(d):
        cands = [zp]
    else:
        m = m2_module_coords(d)
        terms = sorted(m.items(), key=lambda kv: kv[0], reverse=True)
        top = terms[0][0]
        cands = [_assemble(v, terms, tail, zp) for v in _free_words_for((-top[0], -top[1])) for tail in _TAILS]
    for word in sorted(set(cands), key=lambda w: (len(w), w)):
        if len(word) > search_len:
            break
        if cl_accept(word) and cone_eval(word) == e:
            return word
    return None
