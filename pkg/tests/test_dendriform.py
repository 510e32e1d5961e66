import itertools
import math
import pickle
import random
from collections import Counter

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from omegaq.arith import RationalFunction, eval_at
from omegaq.checks import associator, random_dend_series
from omegaq.dendriform import (
    LEAF,
    NODE,
    DendriformUnitError,
    DendSeries,
    PlanarBinaryTree,
    comb_inverse_check,
    dend_prec,
    dend_prelie,
    dend_star,
    dend_succ,
    descent_set,
    dot,
    left_comb,
    left_combs,
    linear_image,
    major_index,
    omega_dend_coefficient,
    omega_q_dend_explicit,
    omega_q_dend_recursive,
    planar_trees,
    right_comb,
    right_combs,
    verify_EB,
)
from omegaq.series import suspension

from .fixtures import poly, rf

L2 = PlanarBinaryTree.from_encoding("((..).)")
R2 = PlanarBinaryTree.from_encoding("(.(..))")

planar_upto = st.integers(min_value=1, max_value=3).flatmap(lambda n: st.sampled_from(planar_trees(n)))


def basis(t, order=None):
    return DendSeries({t: mpq(1)}, order=order if order is not None else t.degree)


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


# ------------------------------------------------------------------ trees


def test_catalan_counts():
    assert [len(planar_trees(n)) for n in range(11)] == [catalan(n) for n in range(11)]
    for n in range(6):
        assert len({t.encoding for t in planar_trees(n)}) == catalan(n)
        assert all(t.degree == n for t in planar_trees(n))


def test_encoding_round_trip():
    for t in planar_trees(5):
        assert PlanarBinaryTree.from_encoding(t.encoding) is t
        assert pickle.loads(pickle.dumps(t)) is t
    assert LEAF.encoding == "." and NODE.encoding == "(..)"
    for bad in ["(..", "(...)", "x", "(..))"]:
        with pytest.raises(ValueError):
            PlanarBinaryTree.from_encoding(bad)


def test_combs():
    assert left_comb(1) is NODE and right_comb(1) is NODE
    assert left_comb(2) is L2 and right_comb(2) is R2
    assert left_comb(3) is PlanarBinaryTree(L2, LEAF)
    L = left_combs(6)
    assert L == dot(6) + dend_succ(L, dot(6), 6)
    R = right_combs(6)
    assert R == dot(6) + dend_prec(dot(6), R, 6)


# ------------------------------------------------------------------ products


def test_basic_products():
    assert dend_succ(dot(2), dot(2)) == basis(L2, 2)
    assert dend_prec(dot(2), dot(2)) == basis(R2, 2)
    assert dend_star(dot(2), dot(2)) == basis(L2, 2) + basis(R2, 2)
    assert dend_prelie(dot(2), dot(2)) == basis(L2, 2) - basis(R2, 2)


def test_unit_contract():
    one = DendSeries.one(3)
    x = dot(3)
    with pytest.raises(DendriformUnitError):
        dend_prec(one, x)
    with pytest.raises(DendriformUnitError):
        dend_succ(x, one)
    with pytest.raises(DendriformUnitError):
        dend_prelie(one + x, x)
    assert dend_prec(x, one) == x
    assert dend_succ(one, x) == x
    assert dend_star(one, x) == x and dend_star(x, one) == x
    assert dend_star(one, one) == one
    with pytest.raises(ValueError):
        DendSeries({LEAF: mpq(1)}, order=1)


def _axioms_hold(x, y, z, n):
    # (x < y) < z = x < (y * z);  (x > y) < z = x > (y < z);  (x * y) > z = x > (y > z)
    a1 = dend_prec(dend_prec(x, y, n), z, n) == dend_prec(x, dend_star(y, z, n), n)
    a2 = dend_prec(dend_succ(x, y, n), z, n) == dend_succ(x, dend_prec(y, z, n), n)
    a3 = dend_succ(dend_star(x, y, n), z, n) == dend_succ(x, dend_succ(y, z, n), n)
    return a1 and a2 and a3


def test_axioms_exhaustive_degree_6():
    trees = [t for n in range(1, 5) for t in planar_trees(n)]
    for a, b, c in itertools.product(trees, repeat=3):
        n = a.degree + b.degree + c.degree
        if n > 6:
            continue
        assert _axioms_hold(basis(a, n), basis(b, n), basis(c, n), n), (a, b, c)


def test_axioms_random_series():
    rng = random.Random(9)
    for _ in range(10):
        x, y, z = (random_dend_series(rng, 2, 0.7) for _ in range(3))
        assert _axioms_hold(x, y, z, 6)


@given(planar_upto, planar_upto, planar_upto)
def test_star_associative(a, b, c):
    n = a.degree + b.degree + c.degree
    x, y, z = basis(a, n), basis(b, n), basis(c, n)
    assert dend_star(dend_star(x, y, n), z, n) == dend_star(x, dend_star(y, z, n), n)


@given(planar_upto, planar_upto, planar_upto)
def test_prelie_axiom(a, b, c):
    n = a.degree + b.degree + c.degree
    x, y, z = basis(a, n), basis(b, n), basis(c, n)
    assert associator(dend_prelie, x, y, z, n) == associator(dend_prelie, x, z, y, n)


def test_prelie_axiom_random_series():
    rng = random.Random(10)
    for _ in range(8):
        x, y, z = (random_dend_series(rng, 2, 0.7) for _ in range(3))
        assert associator(dend_prelie, x, y, z, 6) == associator(dend_prelie, x, z, y, 6)


def test_star_is_multiplicity_free():
    # the associative product of two basis trees is a sum over a Tamari interval
    for a in [t for n in range(1, 4) for t in planar_trees(n)]:
        for b in [t for n in range(1, 4) for t in planar_trees(n)]:
            terms = dend_star(basis(a, 6), basis(b, 6)).terms
            assert set(terms.values()) == {1}


# ------------------------------------------------------------------ descents


def test_descents():
    for n in range(1, 7):
        assert descent_set(left_comb(n)) == frozenset()
        assert descent_set(right_comb(n)) == frozenset(range(1, n))
    assert descent_set(R2) == {1} and major_index(R2) == 1
    for n in range(1, 8):
        for t in planar_trees(n):
            d = descent_set(t)
            assert 0 <= len(d) <= n - 1
            assert d <= set(range(1, n))


@pytest.mark.parametrize("n", range(1, 9))
def test_descent_partition(n):
    counts = Counter(descent_set(t) for t in planar_trees(n))
    assert sum(counts.values()) == catalan(n)
    assert set(counts) <= {frozenset(s) for k in range(n) for s in itertools.combinations(range(1, n), k)}


# ------------------------------------------------------------------ the image of Omega_q


def test_explicit_small():
    assert omega_q_dend_explicit(1) == dot(1)
    want = DendSeries({NODE: RationalFunction(1), L2: rf(poly(-1), 1, 2), R2: rf(poly(1), 1, 2)}, order=2)
    assert omega_q_dend_explicit(2) == want
    assert len(omega_q_dend_explicit(8).component(8)) == catalan(8)


def test_recursive_small():
    assert omega_q_dend_recursive(1) == dot(1)
    assert omega_q_dend_recursive(2).component(2) == dend_prelie(dot(2), dot(2)).scale(rf(poly(-1), 1, 2))


@pytest.mark.parametrize("order", [3, 5, 7])
def test_recursive_equals_explicit(order):
    assert omega_q_dend_recursive(order) == omega_q_dend_explicit(order)


def test_explicit_parallel_matches_serial():
    assert omega_q_dend_explicit(6, jobs=2) == omega_q_dend_explicit(6)


def test_explicit_at_q1():
    for n in range(1, 8):
        for t in planar_trees(n):
            d = len(descent_set(t))
            want = mpq((-1) ** (n - 1), n) * mpq((-1) ** d, math.comb(n - 1, d))
            assert eval_at(omega_dend_coefficient(t), 1) == want


def test_classical_image_degree_2():
    from omegaq.omega import classical_components

    comps = classical_components(dend_prelie, dot(), 3)
    assert comps[2] == (basis(L2, 3) - basis(R2, 3)).scale(mpq(-1, 2))


# ------------------------------------------------------------------ identities


def test_comb_inverse():
    assert comb_inverse_check(10).ok
    one = DendSeries.one(4)
    assert dend_star(one - suspension(left_combs(4)), one + right_combs(4), 4) == one


def test_power_sum_identities():
    rep = verify_EB(10)
    assert rep.ok, rep
    B = linear_image(3)
    assert B.component(1) == dot(3).component(1)
    assert B.component(2) == (basis(L2, 3) - basis(R2, 3)).component(2)
