"""Bi-invariant orders on free metabelian groups.

``BiOrderSpec`` compares abelianizations first (a form tower on Z^n) and
hands elements of the derived subgroup to a list of stages acting on their
Magnus coordinates.  ``NonConvexSpec`` is the family in which the derived
subgroup is not convex: it leads by the quotient of Z^n that forgets one
distinguished generator ``a_d``, then by a linear functional ``psi`` on the
derived part of ``h`` in ``e = h a_d^i``, then by ``i``.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotInDerived, NotInImage, NotTotal, RankMismatch, RankTooSmall, StageDomain
from .latord import FormTower, tower_sign
from .magnus import (
    GroupWord,
    WreathElement,
    mg_derived_gen,
    mg_eval,
    mg_in_image,
    mg_inv,
    mg_is_identity,
    mg_mul,
    parse_word,
)
from .realalg import QAlpha, num_sign

# ----- derived stages ----------------------------------------------------


@dataclass(frozen=True)
class LeadingCoeff:
    """Sign of the coefficient vector at the largest support monomial."""

    q_order: FormTower
    coeff_order: FormTower
    kind = "leading_coeff"

    def __post_init__(self):
        if self.q_order.k != self.coeff_order.k:
            raise RankMismatch("q_order and coeff_order must live on the same Z^n")
        rational = all(not isinstance(c, QAlpha) for w in self.q_order.forms for c in w)
        integral = rational and all(Fraction(c).denominator == 1 for w in self.q_order.forms for c in w)
        forms = tuple(tuple(int(c) for c in w) for w in self.q_order.forms) if integral else None
        object.__setattr__(self, "_int_forms", forms)

    def _key(self, q):
        if self._int_forms is not None:
            return tuple(sum(a * b for a, b in zip(q, w)) for w in self._int_forms)
        return self.q_order.values(q)

    def leading(self, e: WreathElement):
        """The leading monomial of the combined support (``None`` when all slots vanish)."""
        best = best_key = None
        tied = False
        for p in e.base:
            for q in p._terms:
                if q == best:
                    continue
                k = self._key(q)
                if best is None or k > best_key:
                    best, best_key, tied = q, k, False
                elif k == best_key:
                    tied = True
        if tied:
            raise NotTotal(f"two support monomials tie under the q-order at {best}")
        return best

    def value_sign(self, e: WreathElement) -> int:
        q = self.leading(e)
        if q is None:
            return 0
        return tower_sign(self.coeff_order, tuple(p.coeff(q) for p in e.base))


@dataclass(frozen=True)
class Character:
    """``phi(e) = sum_i w_i sum_q c_{i,q} prod_k chi_k^{q_k}``."""

    chi: tuple
    weights: tuple
    kind = "character"

    def __post_init__(self):
        if len(self.chi) != len(self.weights):
            raise RankMismatch("chi and weights need the same length")
        for c in self.chi:
            if num_sign(c) <= 0:
                raise ValueError("character values must be positive")
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        object.__setattr__(self, "_inv", tuple(1 / c for c in self.chi))

    def value(self, e: WreathElement):
        total = Fraction(0)
        for w, p in zip(self.weights, e.base):
            if not w:
                continue
            for q, c in p._terms.items():
                term = Fraction(c)
                for k, ex in enumerate(q):
                    if ex > 0:
                        term = term * self.chi[k] ** ex
                    elif ex < 0:
                        term = term * self._inv[k] ** (-ex)
                total = total + w * term
        return total

    def value_sign(self, e: WreathElement) -> int:
        return num_sign(self.value(e))


@dataclass(frozen=True)
class LinearFunctional:
    """``psi(e) = sum_i sum_q c_{i,q} (d_i + A_i . q)``; only for derived elements."""

    A: tuple
    d: tuple
    kind = "linear_functional"

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        n = len(A)
        if any(len(row) != n for row in A) or len(self.d) != n:
            raise RankMismatch("A must be n x n and d of length n")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))

    def value(self, e: WreathElement) -> int:
        if any(e.t):
            raise StageDomain("the linear functional is only defined on the derived subgroup")
        total = 0
        for row, di, p in zip(self.A, self.d, e.base):
            for q, c in p._terms.items():
                total += c * (di + sum(a * b for a, b in zip(row, q)))
        return total

    def value_sign(self, e: WreathElement) -> int:
        v = self.value(e)
        return (v > 0) - (v < 0)


def derived_sign(stages: Sequence, e: WreathElement) -> int:
    for st in stages:
        s = st.value_sign(e)
        if s:
            return s
    return 0


# ----- quotient-leading orders -------------------------------------------


@dataclass(frozen=True)
class BiOrderSpec:
    n: int
    quotient: FormTower
    stages: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        stages = tuple(self.stages)
        object.__setattr__(self, "stages", stages)
        if not stages or not isinstance(stages[-1], LeadingCoeff):
            raise ValueError("the last derived stage must be a leading-coefficient stage")
        if self.quotient.k != self.n:
            raise RankMismatch("quotient tower must live on Z^n")
        for st in stages:
            k = st.q_order.k if isinstance(st, LeadingCoeff) else len(st.weights if isinstance(st, Character) else st.d)
            if k != self.n:
                raise RankMismatch(f"{st.kind} stage has rank {k}, expected {self.n}")

    def sign(self, e: WreathElement) -> int:
        if any(e.t):
            return tower_sign(self.quotient, e.t)
        return derived_sign(self.stages, e)


def _check(spec, e: WreathElement, check_image: bool) -> None:
    if e.n != spec.n:
        raise RankMismatch(f"element of rank {e.n} for an order on rank {spec.n}")
    if check_image and not mg_in_image(e):
        raise NotInImage("element is not in the image of the Magnus embedding")


def bo_sign(spec, e: WreathElement, check_image: bool = True) -> int:
    _check(spec, e, check_image)
    return spec.sign(e)


def bo_compare(spec, e1: WreathElement, e2: WreathElement, check_image: bool = True) -> int:
    """Sign of ``e1 e2^{-1}``."""
    _check(spec, e1, check_image)
    _check(spec, e2, check_image)
    return spec.sign(mg_mul(e1, mg_inv(e2)))


def bo_compare_left(spec, e1: WreathElement, e2: WreathElement) -> int:
    """Sign of ``e2^{-1} e1``; equals ``bo_compare`` for bi-orders."""
    return spec.sign(mg_mul(mg_inv(e2), e1))


def bo_abs(spec, e: WreathElement, check_image: bool = True) -> WreathElement:
    return e if bo_sign(spec, e, check_image) >= 0 else mg_inv(e)


# ----- the non-convex family ---------------------------------------------


def default_functional(n: int, distinguished: int = 1) -> LinearFunctional:
    """``A_ik = 1`` for ``i > k`` with neither equal to the distinguished index."""
    dd = distinguished
    A = tuple(tuple(int(i > k and dd not in (i, k)) for k in range(1, n + 1)) for i in range(1, n + 1))
    return LinearFunctional(A, (0,) * n)


def pair_value(psi: LinearFunctional, i: int, j: int, n: int) -> int:
    """``psi`` on the image of ``[a_i, a_j]``; equals ``A_ji - A_ij`` when ``d = 0``."""
    return psi.value(mg_derived_gen(i, j, None, n))


@dataclass(frozen=True)
class NonConvexSpec:
    n: int
    quotient_rest: FormTower
    psi: LinearFunctional
    tiebreak: LeadingCoeff
    distinguished: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 3:
            raise RankTooSmall("the non-convex family needs rank at least 3")
        if not 1 <= self.distinguished <= self.n:
            raise ValueError("distinguished index out of range")
        if self.quotient_rest.k != self.n - 1:
            raise RankMismatch("quotient_rest must live on Z^(n-1)")
        if len(self.psi.d) != self.n or self.tiebreak.q_order.k != self.n:
            raise RankMismatch("functional and tie-break must have rank n")
        dd = self.distinguished
        for j in range(1, self.n + 1):
            if j != dd:
                i, k = min(dd, j), max(dd, j)
                if pair_value(self.psi, i, k, self.n):
                    raise ValueError(f"psi must vanish on [a_{i}, a_{k}]")

    @classmethod
    def default(cls, n: int = 3, distinguished: int = 1) -> "NonConvexSpec":
        return cls(
            n,
            FormTower.lex(n - 1),
            default_functional(n, distinguished),
            LeadingCoeff(FormTower.lex(n), FormTower.lex(n)),
            distinguished,
        )

    def split(self, e: WreathElement) -> tuple[WreathElement, int]:
        """Write ``e = h a_d^i`` with ``h`` in the derived subgroup (projection must vanish)."""
        dd = self.distinguished - 1
        i = e.t[dd]
        h = mg_mul(e, mg_eval(GroupWord(self.n, ((self.distinguished, -1 if i > 0 else 1),) * abs(i))))
        return h, i

    def sign(self, e: WreathElement) -> int:
        dd = self.distinguished - 1
        proj = e.t[:dd] + e.t[dd + 1:]
        if any(proj):
            return tower_sign(self.quotient_rest, proj)
        h, i = self.split(e)
        v = self.psi.value(h)
        if v:
            return 1 if v > 0 else -1
        if i:
            return 1 if i > 0 else -1
        return self.tiebreak.value_sign(h)


def bo_nonconvex_sign(nc: NonConvexSpec, e: WreathElement, check_image: bool = True) -> int:
    return bo_sign(nc, e, check_image)


def bo_phi(nc: NonConvexSpec, e: WreathElement) -> int:
    if any(e.t):
        raise NotInDerived("psi is defined on the derived subgroup")
    return nc.psi.value(e)


# ----- a deliberately broken order for harness checks --------------------


@dataclass(frozen=True)
class BaseLeadingOrder:
    """Lexicographic with the base leading: left-invariant but not conjugation invariant."""

    n: int
    name: str = field(default="base-leading", compare=False)

    def sign(self, e: WreathElement) -> int:
        stage = LeadingCoeff(FormTower.lex(self.n), FormTower.lex(self.n))
        s = stage.value_sign(e)
        return s if s else tower_sign(FormTower.lex(self.n), e.t)


# ----- sampling -----------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    """Random words: free words, commutators of free words, and commutators times ``a_d^i``."""

    n: int
    mean_len: float = 5.0
    max_len: int = 12
    exp_range: int = 5
    distinguished: int = 1

    def to_json(self) -> dict:
        return {
            "rank": self.n,
            "mean_len": self.mean_len,
            "max_len": self.max_len,
            "exp_range": self.exp_range,
            "distinguished": self.distinguished,
        }


def _geometric_len(rng: random.Random, mean: float, cap: int) -> int:
    p = 1.0 / (1.0 + mean)
    k = 0
    while k < cap and rng.random() > p:
        k += 1
    return k


def _free_word(rng: random.Random, cfg: SamplerConfig, min_len: int = 0) -> GroupWord:
    length = max(min_len, _geometric_len(rng, cfg.mean_len, cfg.max_len))
    return GroupWord(cfg.n, tuple((rng.randint(1, cfg.n), rng.choice((1, -1))) for _ in range(length)))


def commutator_word(u: GroupWord, v: GroupWord) -> GroupWord:
    return u.inverse() + v.inverse() + u + v


def sample_derived_word(rng: random.Random, cfg: SamplerConfig) -> GroupWord:
    w = commutator_word(_free_word(rng, cfg, 1), _free_word(rng, cfg, 1))
    if rng.random() < 0.5:
        w = w + commutator_word(_free_word(rng, cfg, 1), _free_word(rng, cfg, 1))
    return w


def sample_word(rng: random.Random, cfg: SamplerConfig) -> GroupWord:
    kind = rng.randrange(3)
    if kind == 0:
        return _free_word(rng, cfg)
    d = sample_derived_word(rng, cfg)
    if kind == 1:
        return d
    i = rng.randint(-cfg.exp_range, cfg.exp_range)
    return d + GroupWord(cfg.n, ((cfg.distinguished, 1),)).power(i)


# ----- axiom verification -------------------------------------------------

SHARD_SIZE = 250


def _word_json(w: GroupWord) -> str:
    return w.text()


def check_pair(order, g: WreathElement, h: WreathElement) -> list[str]:
    """Names of the bi-order axioms violated by the pair ``(g, h)``."""
    bad = []
    sg, sh = order.sign(g), order.sign(h)
    if sg not in (-1, 0, 1) or (sg == 0) != mg_is_identity(g):
        bad.append("trichotomy")
    if order.sign(mg_inv(g)) != -sg:
        bad.append("inverse")
    if sg and sh:
        ag = g if sg > 0 else mg_inv(g)
        ah = h if sh > 0 else mg_inv(h)
        if order.sign(mg_mul(ag, ah)) != 1:
            bad.append("semigroup")
    if order.sign(mg_mul(mg_mul(mg_inv(h), g), h)) != sg:
        bad.append("conjugation")
    right = order.sign(mg_mul(g, mg_inv(h)))
    left = order.sign(mg_mul(mg_inv(h), g))
    if right != left:
        bad.append("left_right")
    return bad


def _run_shard(order, cfg: SamplerConfig, seed, shard: int, count: int) -> list[dict]:
    rng = random.Random(f"{seed}:{shard}")
    found = []
    for _ in range(count):
        gw, hw = sample_word(rng, cfg), sample_word(rng, cfg)
        for name in check_pair(order, mg_eval(gw), mg_eval(hw)):
            found.append({"check": name, "g": _word_json(gw), "h": _word_json(hw)})
    return found


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ORDLAB_THREADS", "1")))
    except ValueError:
        return 1


def run_sharded(fn, order, cfg, seed, trials: int) -> list[dict]:
    """Run ``fn`` over fixed shards and merge results in shard order."""
    shards = [(k, min(SHARD_SIZE, trials - k * SHARD_SIZE)) for k in range((trials + SHARD_SIZE - 1) // SHARD_SIZE)]
    workers = min(worker_count(), max(1, len(shards)))
    if workers == 1:
        parts = [fn(order, cfg, seed, k, c) for k, c in shards]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(fn, order, cfg, seed, k, c) for k, c in shards]
            parts = [f.result() for f in futs]
    return [v for part in parts for v in part]


def bo_verify_axioms(order, trials: int, seed, sampler: SamplerConfig | None = None) -> dict:
    """Check the bi-order axioms on ``trials`` random pairs; returns a report dict."""
    cfg = sampler or SamplerConfig(order.n, distinguished=getattr(order, "distinguished", 1))
    start = time.perf_counter()
    violations = run_sharded(_run_shard, order, cfg, seed, trials)
    return {
        "suite": "axioms",
        "order": getattr(order, "name", "") or type(order).__name__,
        "trials": trials,
        "seed": seed,
        "sampler": cfg.to_json(),
        "violations": violations,
        "_runtime": time.perf_counter() - start,
    }


def replay_violation(order, violation: dict) -> bool:
    """Does the recorded pair still violate the recorded check?"""
    g = mg_eval(parse_word(violation["g"], order.n))
    h = mg_eval(parse_word(violation["h"], order.n))
    return violation["check"] in check_pair(order, g, h)


# ----- convexity experiments ----------------------------------------------


def bo_sandwich_check(order, g, samples: Sequence, trials: int | None = None) -> dict:
    """Compare ``g`` against sampled elements.

    ``exceeds_all`` says ``|g|`` beat every ``|m|``; ``sandwich`` gives
    ``m1 < g < m2`` when such a pair exists among the samples.
    """
    if isinstance(g, (str, GroupWord)):
        g_word = g if isinstance(g, str) else g.text()
        g = mg_eval(parse_word(g, order.n) if isinstance(g, str) else g)
    else:
        g_word = None
    samples = list(samples)[:trials] if trials is not None else list(samples)
    abs_g = g if order.sign(g) >= 0 else mg_inv(g)
    below, above = [], []
    failures = []
    for m in samples:
        label = m if isinstance(m, str) else (m.text() if isinstance(m, GroupWord) else None)
        e = mg_eval(parse_word(m, order.n)) if isinstance(m, str) else (mg_eval(m) if isinstance(m, GroupWord) else m)
        abs_e = e if order.sign(e) >= 0 else mg_inv(e)
        if order.sign(mg_mul(abs_g, mg_inv(abs_e))) <= 0:
            failures.append(label if label is not None else e.to_json())
        c = order.sign(mg_mul(e, mg_inv(g)))
        if c < 0:
            below.append(label if label is not None else e.to_json())
        elif c > 0:
            above.append(label if label is not None else e.to_json())
    return {
        "suite": "sandwich",
        "g": g_word if g_word is not None else g.to_json(),
        "samples": len(samples),
        "exceeds_all": not failures,
        "not_exceeded_by": failures,
        "sandwich": [below[0], above[0]] if below and above else None,
    }
