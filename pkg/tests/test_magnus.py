import itertools
import random

import pytest
import sympy

from ordlab.errors import BadLetter, IndexOrder, NotInDerived, RankMismatch
from ordlab.laurent import LaurentPoly, lp_augmentation, parse_poly
from ordlab.magnus import (
    GroupWord,
    WreathElement,
    commutator_exponent,
    m2_commutator,
    m2_module_coords,
    mg_commutator,
    mg_conj,
    mg_derived_gen,
    mg_eval,
    mg_identity,
    mg_in_derived,
    mg_in_image,
    mg_inv,
    mg_is_identity,
    mg_jacobi,
    mg_module_exp,
    mg_mul,
    parse_word,
    random_word,
)

XS = sympy.symbols("x1:6")
AS = sympy.symbols("a1:6")


def matrix_eval(w):
    """Independent Magnus oracle: generator i is [[x_i, a_i], [0, 1]]."""
    M = sympy.eye(2)
    for i, e in w.letters:
        g = sympy.Matrix([[XS[i - 1], AS[i - 1]], [0, 1]])
        M = M * (g if e > 0 else g.inv())
    return sympy.simplify(M)


def as_matrix(e):
    t = sympy.Mul(*[x**k for x, k in zip(XS, e.t)])
    top = 0
    for i, p in enumerate(e.base):
        top += AS[i] * sum(c * sympy.Mul(*[x**k for x, k in zip(XS, m)]) for m, c in p.items())
    return sympy.Matrix([[t, top], [0, 1]])


def test_eval_examples():
    e = mg_eval("a", 2)
    assert e.base == (LaurentPoly.one(2), LaurentPoly.zero(2)) and e.t == (1, 0)
    e = mg_eval("ab")
    assert e.base == (LaurentPoly.one(2), LaurentPoly.var(0, 2)) and e.t == (1, 1)
    assert mg_is_identity(mg_eval("aA"))


def test_eval_matches_matrix_oracle():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 10)
        assert sympy.simplify(as_matrix(mg_eval(w)) - matrix_eval(w)) == sympy.zeros(2)


def test_commutator_examples():
    c = mg_commutator(mg_eval("a", 2), mg_eval("b", 2))
    assert c.base == (parse_poly("x1^-1*x2^-1 - x1^-1", 2), parse_poly("x2^-1 - x1^-1*x2^-1", 2))
    assert c == mg_eval("ABab") == m2_commutator()
    e = mg_eval("abAAc")
    assert mg_conj(e, mg_identity(3)) == e
    assert mg_inv(mg_inv(e)) == e


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        mg_mul(mg_eval("a", 2), mg_eval("a", 3))


def test_derived_predicates():
    d = mg_eval("abAB")
    assert mg_in_derived(d) and not mg_is_identity(d)
    assert not mg_in_derived(mg_eval("a"))
    law = mg_commutator(mg_commutator(mg_eval("a", 2), mg_eval("b", 2)),
                        mg_commutator(mg_eval("aab", 2), mg_eval("ab", 2)))
    assert mg_is_identity(law)


def test_in_image():
    rng = random.Random(8)
    for _ in range(500):
        assert mg_in_image(mg_eval(random_word(rng, 3, 20)))
    bad = WreathElement(2, (LaurentPoly.one(2), LaurentPoly.zero(2)), (0, 0))
    assert not mg_in_image(bad)
    assert mg_in_image(mg_identity(2))


def test_derived_gen_examples():
    assert mg_derived_gen(1, 2, (0, 0)) == mg_commutator(mg_eval("a", 2), mg_eval("b", 2))
    g = mg_derived_gen(2, 3, (0, 0, 0))
    s = LaurentPoly.monomial((0, -1, -1))
    assert g.base[1] == s * parse_poly("1 - x3", 3) and g.base[2] == s * parse_poly("x2 - 1", 3)
    assert mg_in_derived(g)
    with pytest.raises(IndexOrder):
        mg_derived_gen(2, 1, (0, 0))


def test_derived_gen_is_conjugated_commutator():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(2, 4)
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        h = random_word(rng, n, 8)
        ai = mg_eval(GroupWord(n, ((i, 1),)))
        aj = mg_eval(GroupWord(n, ((j, 1),)))
        want = mg_conj(mg_commutator(ai, aj), mg_eval(h))
        assert mg_derived_gen(i, j, h.abelianization(), n) == want


def test_module_exp_examples():
    c = m2_commutator()
    assert mg_module_exp(c, LaurentPoly.one(2)) == c
    x1 = LaurentPoly.var(0, 2)
    assert mg_module_exp(c, LaurentPoly.one(2) + x1) == mg_mul(c, mg_conj(c, mg_eval("a", 2)))
    with pytest.raises(NotInDerived):
        mg_module_exp(mg_eval("a", 2), x1)


def test_module_exp_is_a_module_action():
    rng = random.Random(10)
    c = m2_commutator()
    for _ in range(50):
        p = LaurentPoly(2, {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-3, 3) for _ in range(3)})
        q = LaurentPoly(2, {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-3, 3) for _ in range(3)})
        assert mg_module_exp(mg_module_exp(c, p), q) == mg_module_exp(c, p * q)
        assert mg_module_exp(c, p + q) == mg_mul(mg_module_exp(c, p), mg_module_exp(c, q))


def test_jacobi_all_triples_rank5():
    for n in range(3, 6):
        for i, j, k in itertools.combinations(range(1, n + 1), 3):
            assert mg_is_identity(mg_jacobi(i, j, k, n))
    with pytest.raises(IndexOrder):
        mg_jacobi(1, 1, 2, 3)


def test_commutator_powers_geometric_exponent():
    c = m2_commutator()
    for m, n in itertools.product(range(1, 5), repeat=2):
        lhs = mg_commutator(mg_eval("a" * m, 2), mg_eval("b" * n, 2))
        assert lhs == mg_module_exp(c, commutator_exponent(m, n))


def test_module_coords_round_trip():
    rng = random.Random(13)
    c = m2_commutator()
    for _ in range(100):
        p = LaurentPoly(2, {(rng.randint(-3, 3), rng.randint(-3, 3)): rng.randint(-4, 4) for _ in range(4)})
        assert m2_module_coords(mg_module_exp(c, p)) == p
    with pytest.raises(NotInDerived):
        m2_module_coords(mg_eval("a", 2))


def test_homomorphism_and_inverse_words():
    rng = random.Random(14)
    for _ in range(1000):
        n = rng.randint(1, 4)
        u, v = random_word(rng, n, 20), random_word(rng, n, 20)
        assert mg_eval(u + v) == mg_mul(mg_eval(u), mg_eval(v))
        assert mg_is_identity(mg_eval(u + u.inverse()))


def test_metabelian_law():
    rng = random.Random(15)
    for _ in range(200):
        n = rng.randint(2, 4)
        u, v, w, z = (mg_eval(random_word(rng, n, 8)) for _ in range(4))
        assert mg_is_identity(mg_commutator(mg_commutator(u, v), mg_commutator(w, z)))


def test_augmentation_equals_exponent_sum():
    rng = random.Random(16)
    for _ in range(300):
        w = random_word(rng, 3, 25)
        e = mg_eval(w)
        assert tuple(lp_augmentation(p) for p in e.base) == w.abelianization() == e.t


def test_free_group_is_not_collapsed():
    # a and b do not commute; second commutators of non-derived elements survive
    assert not mg_is_identity(mg_eval("abAB"))
    assert not mg_is_identity(mg_commutator(mg_eval("abAB"), mg_eval("a", 2)))


def test_parse_word():
    assert parse_word("aBc").letters == ((1, 1), (2, -1), (3, 1))
    assert parse_word("x27X3").letters == ((27, 1), (3, -1))
    assert parse_word("1", 3) == GroupWord(3, ())
    with pytest.raises(BadLetter):
        parse_word("a-b")
    with pytest.raises(BadLetter):
        parse_word("abc", 2)
    w = parse_word("abCA")
    assert parse_word(w.text()) == w


def test_power_large_exponents():
    from ordlab.magnus import mg_power

    c = m2_commutator()
    assert mg_power(c, 2**70) == mg_module_exp(c, LaurentPoly.constant(2**70, 2))
    e = mg_eval("abA")
    assert mg_power(e, 37) == mg_eval("abA" * 37)
    assert mg_power(e, -5) == mg_inv(mg_power(e, 5))


def test_commutator_powers_conjugated():
    rng = random.Random(17)
    c = m2_commutator()
    for _ in range(50):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        h = random_word(rng, 2, 10)
        lhs = mg_conj(mg_commutator(mg_eval("a" * m, 2), mg_eval("b" * n, 2)), mg_eval(h))
        rhs = mg_module_exp(c, commutator_exponent(m, n) * LaurentPoly.monomial(h.abelianization()))
        assert lhs == rhs
