import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ordlab import upoly
from ordlab.errors import EndpointRoot
from ordlab.realalg import (
    QAlpha,
    RealAlgebraic,
    find_factor,
    qa_arith,
    ra_compare_rational,
    ra_from_rational,
    ra_sign_at,
    sturm_count,
)

X = sympy.Symbol("x")
SQRT2 = RealAlgebraic((-2, 0, 1), 1, 2)
CBRT2 = RealAlgebraic((-2, 0, 0, 1), 1, 2)
# root of x^3 - 3x + 1 between 0 and 1 (three real roots, irreducible)
ROOT3 = RealAlgebraic((1, -3, 0, 1), 0, 1)


def sympy_value(alpha):
    p = sympy.Poly(list(reversed(alpha.minpoly)), X)
    roots = [r for r in sympy.real_roots(p) if alpha.lo < r < alpha.hi]
    assert len(roots) == 1
    return roots[0]


def sympy_sign(alpha, coeffs):
    v = sympy.nsimplify(0) + sum(sympy.Rational(str(c)) * sympy_value(alpha) ** i for i, c in enumerate(coeffs))
    v = sympy.simplify(v)
    if v == 0:
        return 0
    return 1 if sympy.N(v, 60) > 0 else -1


def test_from_rational():
    assert ra_from_rational(2).minpoly == (-2, 1)
    assert ra_from_rational(Fraction(3, 2)).minpoly == (-3, 2)
    assert ra_from_rational(0).minpoly == (0, 1)


def test_sturm_examples():
    assert sturm_count((-2, 0, 1), 1, 2) == 1
    assert sturm_count((-2, 0, 1), -2, 2) == 2
    assert sturm_count((1, 0, 1), -10, 10) == 0
    with pytest.raises(EndpointRoot):
        sturm_count((-1, 1), 1, 2)


def test_sturm_counts_against_sympy(rng):
    for _ in range(40):
        p = [rng.randint(-5, 5) for _ in range(rng.randint(2, 6))] + [1]
        lo, hi = sorted(Fraction(rng.randint(-40, 40), 7) for _ in range(2))
        if lo == hi or upoly.evaluate(p, lo) == 0 or upoly.evaluate(p, hi) == 0:
            continue
        sp = sympy.Poly(list(reversed(p)), X)
        want = len(set(r for r in sympy.real_roots(sp) if lo < r < hi))
        assert sturm_count(p, lo, hi) == want


def test_sturm_partition_additivity(rng):
    p = (1, -3, 0, 1)
    for _ in range(50):
        a, m, b = sorted(Fraction(rng.randint(-300, 300), 97) for _ in range(3))
        if len({a, m, b}) < 3 or any(upoly.evaluate(p, t) == 0 for t in (a, m, b)):
            continue
        assert sturm_count(p, a, m) + sturm_count(p, m, b) == sturm_count(p, a, b)


def test_sign_examples():
    assert ra_sign_at(SQRT2, (-2, 0, 1)) == 0
    assert ra_sign_at(SQRT2, (-1, 1)) == 1
    assert ra_sign_at(SQRT2, (3, -2)) == 1


def test_compare_examples():
    assert ra_compare_rational(SQRT2, 1) == 1
    assert ra_compare_rational(SQRT2, Fraction(3, 2)) == -1
    assert ra_compare_rational(ra_from_rational(2), 2) == 0


@pytest.mark.parametrize("alpha", [SQRT2, CBRT2, ROOT3], ids=["sqrt2", "cbrt2", "cubic"])
def test_sign_against_sympy(alpha, rng):
    for _ in range(25):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 5))]
        assert ra_sign_at(alpha, coeffs) == sympy_sign(alpha, coeffs)


def test_sign_near_cancellation():
    # 99 - 70*sqrt2 is about 0.00505, 577 - 408*sqrt2 about 0.0006
    assert ra_sign_at(SQRT2, (99, -70)) == 1
    assert ra_sign_at(SQRT2, (-577, 408)) == -1
    assert ra_sign_at(SQRT2, (665857, -470832)) == 1


def test_minpoly_vanishes_always():
    for a in (SQRT2, CBRT2, ROOT3, ra_from_rational(Fraction(5, 3))):
        assert ra_sign_at(a, a.minpoly) == 0


def test_mirror_antisymmetry(rng):
    for alpha in (SQRT2, CBRT2, ROOT3):
        neg = alpha.mirror()
        for _ in range(30):
            t = Fraction(rng.randint(-300, 300), rng.randint(1, 60))
            assert ra_compare_rational(alpha, t) == -ra_compare_rational(neg, -t)


def test_invalid_numbers_rejected():
    with pytest.raises(ValueError):
        RealAlgebraic((-2, 0, 1), -2, 2)  # two roots
    with pytest.raises(ValueError):
        RealAlgebraic((-4, 0, 2), 1, 2)  # not primitive
    with pytest.raises(ValueError):
        RealAlgebraic.checked((6, -5, 1), Fraction(5, 2), 4)  # (x-2)(x-3)


def test_find_factor():
    assert find_factor((6, 0, -5, 0, 1)) is not None  # (x^2-2)(x^2-3)
    assert find_factor((1, 0, -10, 0, 1)) is None  # minpoly of sqrt2 + sqrt3
    assert find_factor((-2, 0, 0, 0, 0, 0, 1)) is None


def test_qalpha_examples():
    a = QAlpha.gen(SQRT2)
    assert qa_arith(a, a, "mul") == 2
    assert qa_arith(1 + a, 1 - a, "add") == 2
    assert qa_arith(a, None, "inv") == a / 2
    with pytest.raises(ZeroDivisionError):
        QAlpha(SQRT2).inverse()


def qalpha_elems():
    c = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.tuples(c, c).map(lambda t: QAlpha(SQRT2, t))


@settings(max_examples=500, deadline=None)
@given(qalpha_elems(), qalpha_elems(), qalpha_elems())
def test_field_axioms(u, v, w):
    assert (u + v) + w == u + (v + w)
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert u * v == v * u
    if u:
        assert u * u.inverse() == 1


def test_qalpha_order_consistent_with_floats():
    rng = random.Random(3)
    for _ in range(200):
        p, q = Fraction(rng.randint(-50, 50), 7), Fraction(rng.randint(-50, 50), 7)
        e = QAlpha(SQRT2, (p, q))
        approx = float(p) + float(q) * 2**0.5
        if abs(approx) > 1e-9:
            assert e.sign() == (1 if approx > 0 else -1)
