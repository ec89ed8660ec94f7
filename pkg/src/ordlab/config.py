"""JSON configuration formats for numbers, towers, <x>-orders and bi-orders.

Every loader raises ``ConfigError`` naming the location of the offending
value, e.g. ``derived[0].q_order.forms[1][0]``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .biorder import BaseLeadingOrder, BiOrderSpec, Character, LeadingCoeff, LinearFunctional, NonConvexSpec
from .errors import ConfigError
from .latord import FormTower
from .realalg import QAlpha, RealAlgebraic, find_factor, ra_from_rational
from .zxord import ZxOrderSpec, ZxStage


def _fail(path: str, msg: str):
    raise ConfigError(f"{path or '<root>'}: {msg}")


def _get(d, key, path, default=...):
    if not isinstance(d, dict):
        _fail(path, "expected an object")
    if key not in d:
        if default is ...:
            _fail(path, f"missing key {key!r}")
        return default
    return d[key]


def parse_rational(x, path: str = "") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        _fail(path, f"expected an integer or a rational string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        _fail(path, f"bad rational {x!r}")


def _int_list(x, path) -> list[int]:
    if not isinstance(x, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in x):
        _fail(path, "expected a list of integers")
    return x


def load_algebraic(d, path: str = "", check: bool = True) -> RealAlgebraic:
    if isinstance(d, (int, str)):
        return ra_from_rational(parse_rational(d, path))
    mp = _int_list(_get(d, "minpoly", path), f"{path}.minpoly")
    iv = _get(d, "interval", path)
    if not isinstance(iv, list) or len(iv) != 2:
        _fail(f"{path}.interval", "expected [lo, hi]")
    lo = parse_rational(iv[0], f"{path}.interval[0]")
    hi = parse_rational(iv[1], f"{path}.interval[1]")
    try:
        alpha = RealAlgebraic(tuple(mp), lo, hi)
    except ValueError as exc:
        _fail(path, str(exc))
    if check:
        factor = find_factor(alpha.minpoly)
        if factor is not None:
            _fail(f"{path}.minpoly", f"not irreducible, has factor {list(factor)}")
    return alpha


def dump_algebraic(a: RealAlgebraic):
    rv = a.rational_value
    return str(rv) if rv is not None else a.to_config()


def _entry(x, alpha, path):
    if isinstance(x, dict):
        if alpha is None:
            _fail(path, "polynomial entry needs a tower alpha")
        coeffs = _get(x, "poly", path)
        if not isinstance(coeffs, list):
            _fail(f"{path}.poly", "expected a coefficient list")
        return QAlpha(alpha, [parse_rational(c, f"{path}.poly[{i}]") for i, c in enumerate(coeffs)])
    return parse_rational(x, path)


def _dump_entry(x):
    if isinstance(x, QAlpha):
        r = x.rational()
        if r is None:
            return {"poly": [str(c) for c in x.rep]}
        x = r
    return str(x)


def load_tower(d, path: str = "", k: int | None = None) -> FormTower:
    if isinstance(d, str):
        if k is None:
            _fail(path, f"shorthand {d!r} needs a known dimension")
        if d == "lex":
            return FormTower.lex(k)
        if d == "revlex":
            return FormTower.revlex(k)
        _fail(path, f"unknown tower shorthand {d!r}")
    alpha_cfg = _get(d, "alpha", path, None)
    alpha = load_algebraic(alpha_cfg, f"{path}.alpha") if alpha_cfg is not None else None
    forms = _get(d, "forms", path)
    if not isinstance(forms, list) or not forms:
        _fail(f"{path}.forms", "expected a nonempty list of forms")
    rows = []
    for i, w in enumerate(forms):
        if not isinstance(w, list):
            _fail(f"{path}.forms[{i}]", "expected a list")
        rows.append(tuple(_entry(x, alpha, f"{path}.forms[{i}][{j}]") for j, x in enumerate(w)))
    dim = len(rows[0])
    if k is not None and dim != k:
        _fail(f"{path}.forms", f"forms have length {dim}, expected {k}")
    try:
        return FormTower(dim, tuple(rows), alpha)
    except ValueError as exc:
        _fail(f"{path}.forms", str(exc))


def dump_tower(T: FormTower) -> dict:
    return {
        "alpha": dump_algebraic(T.alpha) if T.alpha is not None else None,
        "forms": [[_dump_entry(x) for x in w] for w in T.forms],
    }


def load_zx_spec(d, path: str = "") -> ZxOrderSpec:
    stages = _get(d, "stages", path)
    if not isinstance(stages, list) or not stages:
        _fail(f"{path}.stages", "expected a nonempty list")
    out = []
    for i, s in enumerate(stages):
        p = f"{path}.stages[{i}]"
        kind = _get(s, "kind", p)
        eps = _get(s, "eps", p, 1)
        if eps not in (1, -1):
            _fail(f"{p}.eps", "must be 1 or -1")
        try:
            if kind == "algebraic":
                out.append(ZxStage("algebraic", eps, load_algebraic(_get(s, "value", p), f"{p}.value")))
            elif kind in ("zero", "infinity"):
                out.append(ZxStage(kind, eps))
            else:
                _fail(f"{p}.kind", f"unknown stage kind {kind!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            _fail(p, str(exc))
    try:
        return ZxOrderSpec(tuple(out))
    except ValueError as exc:
        _fail(f"{path}.stages", str(exc))


def dump_zx_spec(spec: ZxOrderSpec) -> dict:
    out = []
    for st in spec.stages:
        d = {"kind": st.kind, "eps": st.eps}
        if st.kind == "algebraic":
            d["value"] = dump_algebraic(st.value)
        out.append(d)
    return {"stages": out}


def _load_stage(s, n, path):
    kind = _get(s, "kind", path)
    try:
        if kind == "leading_coeff":
            return LeadingCoeff(
                load_tower(_get(s, "q_order", path, "lex"), f"{path}.q_order", n),
                load_tower(_get(s, "coeff_order", path, "lex"), f"{path}.coeff_order", n),
            )
        if kind == "character":
            alpha_cfg = _get(s, "alpha", path, None)
            alpha = load_algebraic(alpha_cfg, f"{path}.alpha") if alpha_cfg is not None else None
            chi = _get(s, "chi", path)
            weights = _get(s, "weights", path, [1] * n)
            if not isinstance(chi, list) or len(chi) != n:
                _fail(f"{path}.chi", f"expected {n} entries")
            if not isinstance(weights, list) or len(weights) != n:
                _fail(f"{path}.weights", f"expected {n} entries")
            return Character(
                tuple(_entry(x, alpha, f"{path}.chi[{i}]") for i, x in enumerate(chi)),
                tuple(parse_rational(w, f"{path}.weights[{i}]") for i, w in enumerate(weights)),
            )
        if kind == "linear_functional":
            A = _get(s, "A", path)
            if not isinstance(A, list):
                _fail(f"{path}.A", "expected a matrix")
            rows = [_int_list(r, f"{path}.A[{i}]") for i, r in enumerate(A)]
            return LinearFunctional(tuple(map(tuple, rows)), tuple(_int_list(_get(s, "d", path, [0] * n), f"{path}.d")))
    except ConfigError:
        raise
    except ValueError as exc:
        _fail(path, str(exc))
    _fail(f"{path}.kind", f"unknown stage kind {kind!r}")


def _dump_stage(st) -> dict:
    if isinstance(st, LeadingCoeff):
        return {"kind": "leading_coeff", "q_order": dump_tower(st.q_order), "coeff_order": dump_tower(st.coeff_order)}
    if isinstance(st, Character):
        alpha = next((c.alpha for c in st.chi if isinstance(c, QAlpha)), None)
        d = {"kind": "character", "chi": [_dump_entry(c) for c in st.chi], "weights": [str(w) for w in st.weights]}
        if alpha is not None:
            d["alpha"] = dump_algebraic(alpha)
        return d
    return {"kind": "linear_functional", "A": [list(r) for r in st.A], "d": list(st.d)}


def load_order(d, path: str = "", name: str = ""):
    """A ``BiOrderSpec``, ``NonConvexSpec`` or the base-leading test order."""
    n = _get(d, "rank", path)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        _fail(f"{path}.rank", "expected a positive integer")
    kind = _get(d, "kind", path, "quotient_leading")
    try:
        if kind == "nonconvex":
            dd = _get(d, "distinguished", path, 1)
            base = NonConvexSpec.default(n, dd) if n >= 3 else None
            if base is None:
                _fail(f"{path}.rank", "the non-convex family needs rank at least 3")
            rest = load_tower(_get(d, "quotient_rest", path, "lex"), f"{path}.quotient_rest", n - 1)
            psi = base.psi
            if "A" in d or "d" in d:
                psi = _load_stage({"kind": "linear_functional", "A": _get(d, "A", path, [list(r) for r in psi.A]),
                                   "d": _get(d, "d", path, list(psi.d))}, n, path)
            tb = base.tiebreak
            if "kernel_tiebreak" in d:
                tb = _load_stage(dict(d["kernel_tiebreak"], kind="leading_coeff"), n, f"{path}.kernel_tiebreak")
            return NonConvexSpec(n, rest, psi, tb, dd, name=name)
        if kind == "base_leading":
            return BaseLeadingOrder(n, name=name or "base-leading")
        if kind != "quotient_leading":
            _fail(f"{path}.kind", f"unknown order kind {kind!r}")
        quotient = load_tower(_get(d, "quotient", path, "lex"), f"{path}.quotient", n)
        stages = _get(d, "derived", path)
        if not isinstance(stages, list) or not stages:
            _fail(f"{path}.derived", "expected a nonempty list of stages")
        loaded = tuple(_load_stage(s, n, f"{path}.derived[{i}]") for i, s in enumerate(stages))
        return BiOrderSpec(n, quotient, loaded, name=name)
    except ConfigError:
        raise
    except ValueError as exc:
        _fail(path, str(exc))


def dump_order(o) -> dict:
    if isinstance(o, NonConvexSpec):
        return {
            "rank": o.n,
            "kind": "nonconvex",
            "distinguished": o.distinguished,
            "quotient_rest": dump_tower(o.quotient_rest),
            "A": [list(r) for r in o.psi.A],
            "d": list(o.psi.d),
            "kernel_tiebreak": {"q_order": dump_tower(o.tiebreak.q_order), "coeff_order": dump_tower(o.tiebreak.coeff_order)},
        }
    if isinstance(o, BaseLeadingOrder):
        return {"rank": o.n, "kind": "base_leading"}
    return {"rank": o.n, "quotient": dump_tower(o.quotient), "derived": [_dump_stage(s) for s in o.stages]}


# ----- files and shipped configurations ------------------------------------


def shipped_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("ordlab").joinpath("data").iterdir() if p.name.endswith(".json"))


def read_json(ref: str):
    """Read JSON from a path, or from a shipped configuration name such as ``nc3``."""
    p = Path(ref)
    if p.is_file():
        text, label = p.read_text(), str(p)
    else:
        name = ref[:-5] if ref.endswith(".json") else ref
        res = resources.files("ordlab").joinpath("data", f"{name}.json")
        if not res.is_file():
            raise ConfigError(f"{ref}: no such file or shipped configuration ({', '.join(shipped_names())})")
        text, label = res.read_text(), f"{name}.json"
    try:
        return json.loads(text), label
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{label}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_order_ref(ref: str):
    d, label = read_json(ref)
    return load_order(d, "", name=Path(label).stem)


def load_zx_ref(ref: str) -> ZxOrderSpec:
    d, _ = read_json(ref)
    return load_zx_spec(d)


def load_tower_ref(ref: str) -> FormTower:
    d, _ = read_json(ref)
    return load_tower(d)
