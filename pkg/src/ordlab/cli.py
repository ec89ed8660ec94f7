"""``ordlab`` command-line interface.

Exit status: 0 success, 1 violations found, 2 usage or configuration error.
Reports are JSON with sorted keys; timings go to stderr so that identical
arguments give byte-identical reports.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .biorder import (
    SamplerConfig,
    bo_abs,
    bo_compare,
    bo_sandwich_check,
    bo_sign,
    bo_verify_axioms,
    replay_violation,
    sample_derived_word,
)
from .config import dump_zx_spec, load_order_ref, load_tower_ref, load_zx_ref, read_json, shipped_names
from .conelang import cl_accept, cl_completeness_probe, cl_soundness_scan, cone_eval
from .errors import OrdlabError
from .latord import ci_bracket, ci_by_limit, ci_exact, tower_oracle
from .laurent import parse_poly
from .magnus import (
    GroupWord,
    binomial_exponent,
    commutator_exponent,
    m2_commutator,
    mg_commutator,
    mg_eval,
    mg_is_identity,
    mg_jacobi,
    mg_module_exp,
    mg_power,
    parse_word,
)
from .zxord import zx_chain, zx_convexity_check, zx_perturb, zx_sign

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE = 0, 1, 2


def _sign_text(s: int) -> str:
    return "+1" if s > 0 else ("-1" if s < 0 else "0")


def _emit(report: dict, out) -> int:
    runtime = report.pop("_runtime", None)
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if runtime is not None:
        sys.stderr.write(f"runtime: {runtime:.3f}s\n")
    return EXIT_VIOLATIONS if report.get("violations") else EXIT_OK


def _vector(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer vector {text!r}") from None


def _word_element(order, word: str):
    return mg_eval(parse_word(word, order.n))


# ----- subcommand handlers --------------------------------------------------


def cmd_eval(args, out):
    e = mg_eval(parse_word(args.word, args.rank))
    out.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sign(args, out):
    order = load_order_ref(args.order)
    out.write(_sign_text(bo_sign(order, _word_element(order, args.word))) + "\n")
    return EXIT_OK


def cmd_cmp(args, out):
    order = load_order_ref(args.order)
    s = bo_compare(order, _word_element(order, args.w1), _word_element(order, args.w2))
    out.write(_sign_text(s) + "\n")
    return EXIT_OK


def cmd_abs(args, out):
    order = load_order_ref(args.order)
    w = parse_word(args.word, order.n)
    e = mg_eval(w)
    a = bo_abs(order, e)
    word = w.text() if a == e else w.inverse().text()
    out.write(json.dumps({"word": word, "element": a.to_json()}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_ci(args, out):
    T = load_tower_ref(args.tower)
    u, v = args.u, args.v
    if args.method == "exact":
        res = ci_exact(T, u, v).to_json()
    elif args.method == "bracket":
        res = ci_bracket(tower_oracle(T), u, v, args.denom).to_json()
    else:
        val = ci_by_limit(tower_oracle(T), u, v, args.n)
        res = {"kind": "no_minimum"} if val == float("inf") else {"kind": "limit", "value": str(val), "n": args.n}
    out.write(json.dumps(res, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_zx_sign(args, out):
    spec = load_zx_ref(args.spec)
    out.write(_sign_text(zx_sign(spec, parse_poly(args.poly, 1))) + "\n")
    return EXIT_OK


def cmd_zx_chain(args, out):
    spec = load_zx_ref(args.spec)
    for p in zx_chain(spec, args.depth):
        out.write(str(p) + "\n")
    return EXIT_OK


def cmd_perturb(args, out):
    spec = load_zx_ref(args.spec)
    pos = [parse_poly(p, 1) for p in args.positive]
    target = Fraction(args.target) if args.target is not None else None
    new, witness = zx_perturb(spec, pos, args.mode, target)
    report = {
        "mode": args.mode,
        "spec": dump_zx_spec(new),
        "witness": str(witness),
        "witness_sign_before": zx_sign(spec, witness),
        "witness_sign_after": zx_sign(new, witness),
        "positive_set": [str(p) for p in pos],
    }
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_cone(args, out):
    if args.cone_cmd == "accept":
        ok, trace = cl_accept(args.word, trace=True)
        if args.trace:
            out.write(json.dumps({"accepted": ok, "trace": trace.to_json() if trace else None}, sort_keys=True) + "\n")
        else:
            out.write(("accepted" if ok else "rejected") + "\n")
        return EXIT_OK
    if args.cone_cmd == "scan":
        order = load_order_ref(args.order)
        res = cl_soundness_scan(args.maxlen, order)
        report = res.to_json()
        report["_runtime"] = res.runtime
        return _emit(report, out)
    # find
    order = load_order_ref(args.order)
    e = cone_eval(args.word) if set(args.word) & set("cC") else mg_eval(parse_word(args.word, 2))
    rep = cl_completeness_probe(e, args.search_len, order)
    out.write((rep if rep is not None else "unknown") + "\n")
    return EXIT_OK


def _check_axioms(args, out):
    order = load_order_ref(args.order)
    cfg = SamplerConfig(order.n, args.mean_len, args.max_len, args.exp_range, getattr(order, "distinguished", 1))
    report = bo_verify_axioms(order, args.trials, args.seed, cfg)
    report["order"] = args.order
    return _emit(report, out)


def _check_convexity(args, out):
    spec = load_zx_ref(args.spec)
    start = time.perf_counter()
    report = zx_convexity_check(spec, args.depth, args.max_degree, args.coeff_range)
    report["spec"] = args.spec
    report["_runtime"] = time.perf_counter() - start
    return _emit(report, out)


def _check_jacobi(args, out):
    n = args.rank
    violations = []
    checked = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                checked += 1
                if not mg_is_identity(mg_jacobi(i, j, k, n)):
                    violations.append({"triple": [i, j, k]})
    return _emit({"suite": "jacobi", "rank": n, "checked": checked, "violations": violations}, out)


def _check_commutator_powers(args, out):
    a, b, c = mg_eval("a", 2), mg_eval("b", 2), m2_commutator()
    violations, binomial_mismatch = [], []
    for m in range(1, args.max + 1):
        for n in range(1, args.max + 1):
            lhs = mg_commutator(mg_power(a, m), mg_power(b, n))
            if lhs != mg_module_exp(c, commutator_exponent(m, n)):
                violations.append({"m": m, "n": n})
            if lhs != mg_module_exp(c, binomial_exponent(m, n)):
                binomial_mismatch.append([m, n])
    report = {
        "suite": "commutator_powers",
        "max": args.max,
        "exponent": "(1 + x1 + ... + x1^(m-1)) (1 + x2 + ... + x2^(n-1))",
        "violations": violations,
        "binomial_form_mismatches": binomial_mismatch,
    }
    return _emit(report, out)


def _check_sandwich(args, out):
    order = load_order_ref(args.order)
    rng = random.Random(str(args.seed))
    cfg = SamplerConfig(order.n, distinguished=getattr(order, "distinguished", 1))
    samples = []
    for _ in range(args.samples):
        w = sample_derived_word(rng, cfg)
        if args.cosets:
            w = w + GroupWord(order.n, ((cfg.distinguished, 1),)).power(rng.randint(-args.exp_range, args.exp_range))
        samples.append(w.text())
    start = time.perf_counter()
    report = bo_sandwich_check(order, args.word, samples)
    report.update(order=args.order, seed=args.seed, cosets=args.cosets)
    report["_runtime"] = time.perf_counter() - start
    return _emit(report, out)


def cmd_check(args, out):
    return {
        "axioms": _check_axioms,
        "convexity": _check_convexity,
        "jacobi": _check_jacobi,
        "commutator-powers": _check_commutator_powers,
        "sandwich": _check_sandwich,
    }[args.check_cmd](args, out)


def cmd_replay(args, out):
    """Re-run every violation of an axioms report; exit 0 iff all reproduce."""
    report, _ = read_json(args.report)
    order = load_order_ref(args.order or report.get("order", ""))
    results = []
    for v in report.get("violations", []):
        results.append(dict(v, reproduced=replay_violation(order, v)))
    ok = all(r["reproduced"] for r in results)
    out.write(json.dumps({"replayed": len(results), "reproduced": sum(r["reproduced"] for r in results),
                          "results": results}, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_configs(args, out):
    for name in shipped_names():
        out.write(name + "\n")
    return EXIT_OK


# ----- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ordlab {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("eval", help="Magnus normal form of a word")
    s.add_argument("--rank", type=int, default=None)
    s.add_argument("--word", required=True)
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("sign", help="sign of a word under a bi-order")
    s.add_argument("--order", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(fn=cmd_sign)

    s = sub.add_parser("cmp", help="compare two words under a bi-order")
    s.add_argument("--order", required=True)
    s.add_argument("w1")
    s.add_argument("w2")
    s.set_defaults(fn=cmd_cmp)

    s = sub.add_parser("abs", help="absolute value of a word")
    s.add_argument("--order", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(fn=cmd_abs)

    s = sub.add_parser("ci", help="comparison index of two lattice vectors")
    s.add_argument("--tower", required=True)
    s.add_argument("u", type=_vector)
    s.add_argument("v", type=_vector)
    s.add_argument("--method", choices=("exact", "bracket", "limit"), default="exact")
    s.add_argument("--denom", type=int, default=1000)
    s.add_argument("--n", type=int, default=1000)
    s.set_defaults(fn=cmd_ci)

    s = sub.add_parser("zx-sign", help="sign of a Laurent polynomial under an <x>-invariant order")
    s.add_argument("--spec", required=True)
    s.add_argument("--poly", required=True)
    s.set_defaults(fn=cmd_zx_sign)

    s = sub.add_parser("zx-chain", help="generators of the convex subgroup chain")
    s.add_argument("--spec", required=True)
    s.add_argument("--depth", type=int, required=True)
    s.set_defaults(fn=cmd_zx_chain)

    s = sub.add_parser("perturb", help="nearby different order keeping a set positive")
    s.add_argument("--spec", required=True)
    s.add_argument("--positive", action="append", default=[])
    s.add_argument("--mode", choices=("move_r", "flip_deepest"), default="move_r")
    s.add_argument("--target", default=None)
    s.set_defaults(fn=cmd_perturb)

    s = sub.add_parser("cone", help="the context-free cone language of M_2")
    cs = s.add_subparsers(dest="cone_cmd", required=True)
    c = cs.add_parser("accept")
    c.add_argument("word")
    c.add_argument("--trace", action="store_true")
    c = cs.add_parser("scan")
    c.add_argument("--maxlen", type=int, default=8)
    c.add_argument("--order", default="m2cone")
    c = cs.add_parser("find")
    c.add_argument("--word", required=True)
    c.add_argument("--search-len", type=int, default=14)
    c.add_argument("--order", default="m2cone")
    s.set_defaults(fn=cmd_cone)

    s = sub.add_parser("check", help="property suites")
    ks = s.add_subparsers(dest="check_cmd", required=True)
    c = ks.add_parser("axioms")
    c.add_argument("--order", required=True)
    c.add_argument("--trials", type=int, default=2000)
    c.add_argument("--seed", required=True)
    c.add_argument("--mean-len", type=float, default=5.0)
    c.add_argument("--max-len", type=int, default=12)
    c.add_argument("--exp-range", type=int, default=5)
    c = ks.add_parser("convexity")
    c.add_argument("--spec", default="zx_sqrt2")
    c.add_argument("--depth", type=int, default=1)
    c.add_argument("--max-degree", type=int, default=3)
    c.add_argument("--coeff-range", type=int, default=3)
    c = ks.add_parser("jacobi")
    c.add_argument("--rank", type=int, default=5)
    c = ks.add_parser("commutator-powers")
    c.add_argument("--max", type=int, default=4)
    c = ks.add_parser("sandwich")
    c.add_argument("--order", required=True)
    c.add_argument("--word", required=True)
    c.add_argument("--samples", type=int, default=500)
    c.add_argument("--seed", required=True)
    c.add_argument("--cosets", action="store_true", help="multiply samples by powers of the distinguished generator")
    c.add_argument("--exp-range", type=int, default=5)
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("replay", help="replay the violations of an axioms report")
    s.add_argument("--report", required=True)
    s.add_argument("--order", default=None)
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("configs", help="list shipped configurations")
    s.set_defaults(fn=cmd_configs)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except (OrdlabError, ValueError, ArithmeticError, KeyError) as exc:
        sys.stderr.write(f"ordlab: error: {exc}\n")
        return EXIT_USAGE


def run(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
