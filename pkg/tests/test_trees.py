import itertools
import pickle
import random
from collections import Counter

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from omegaq.arith import Q, RationalFunction
from omegaq.checks import associator, random_tree_series
from omegaq.series import TreeSeries, q_shift, suspension
from omegaq.trees import (
    DOT,
    EMPTY_FOREST,
    Forest,
    RootedTree,
    aut_count,
    canonical_encode,
    corolla,
    enumerate_trees,
    fork,
    fork_substitute,
    forest_series,
    graft,
    graft_series,
    linear_tree,
    multi_node_graft,
    project_pi,
    star_product,
    star_product_series,
)

from .fixtures import tree_from_child_counts


def T(enc: str) -> RootedTree:
    return RootedTree.from_encoding(enc)


def F(*encs: str) -> Forest:
    return Forest(T(e) for e in encs)


def series(*pairs, order=None):
    terms = {k: mpq(c) for k, c in pairs}
    return TreeSeries(terms, order=order or max(k.degree for k in terms))


# ------------------------------------------------------------------ oracles


def brute_force_trees(n: int) -> set[str]:
    """Grow trees by attaching a vertex everywhere, deduplicating by encoding."""
    level = {"[]"}
    for _ in range(n - 1):
        nxt = set()
        for enc in level:
            for t, _ in graft(T(enc), DOT).items():
                nxt.add(t.encoding)
        level = nxt
    return level


def rooted_tree_counts(n_max: int) -> list[int]:
    """Cayley's recurrence a(n+1) = (1/n) sum_{k=1..n} (sum_{d|k} d a(d)) a(n-k+1)."""
    a = [0, 1]
    for n in range(1, n_max):
        total = 0
        for k in range(1, n + 1):
            s = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            total += s * a[n - k + 1]
        a.append(total // n)
    return a


def aut_brute(t: RootedTree) -> int:
    """Count child permutations that map the labelled tree onto itself."""
    if not t.children:
        return 1
    out = 1
    for c in t.children:
        out *= aut_brute(c)
    perms = sum(1 for p in itertools.permutations(t.children) if list(p) == list(t.children))
    return out * perms


trees_upto = st.integers(min_value=1, max_value=5).flatmap(lambda n: st.sampled_from(enumerate_trees(n)))


# ------------------------------------------------------------------ encodings and enumeration


def test_encodings():
    assert canonical_encode(DOT) == "[]"
    assert canonical_encode(linear_tree(3)) == "[[[]]]"
    assert canonical_encode(corolla(3)) == "[[][]]"
    assert RootedTree([linear_tree(2), DOT]) is RootedTree([DOT, linear_tree(2)])
    assert T("[[][[]]]") is T("[[[]][]]")
    with pytest.raises(ValueError):
        T("[[]")


def test_pickle_preserves_identity():
    t = T("[[[]][]]")
    assert pickle.loads(pickle.dumps(t)) is t
    f = F("[]", "[[]]")
    assert pickle.loads(pickle.dumps(f)) is f
    assert Forest.from_encoding(f.encoding) is f
    assert f.encoding == "{[],[[]]}"
    assert Forest.from_encoding("{}") is EMPTY_FOREST


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_against_brute_force(n):
    got = enumerate_trees(n)
    assert [t.encoding for t in got] == sorted(brute_force_trees(n))


def test_enumeration_counts_against_recurrence():
    want = rooted_tree_counts(12)
    assert [len(enumerate_trees(n)) for n in range(1, 13)] == want[1:13]
    assert len(enumerate_trees(10)) == 719
    assert [len(enumerate_trees(n)) for n in (1, 4)] == [1, 4]


def test_special_trees():
    assert corolla(1) is DOT and linear_tree(1) is DOT
    for n in range(0, 5):
        assert fork(0, n) is corolla(n + 1)
    assert fork(4, 5).degree == 10
    assert fork(0, 0) is DOT


def test_aut_count():
    for n in range(1, 8):
        assert aut_count(linear_tree(n)) == 1
    assert aut_count(corolla(3)) == 2
    assert aut_count(corolla(5)) == 24
    for t in enumerate_trees(7):
        assert aut_count(t) == aut_brute(t)


def test_arb_codes():
    assert tree_from_child_counts("10") is linear_tree(2)
    assert tree_from_child_counts("200") is corolla(3)
    assert tree_from_child_counts("21010") is T("[[[]][[]]]")


# ------------------------------------------------------------------ grafting


def test_graft_examples():
    assert graft(DOT, DOT) == series((linear_tree(2), 1))
    assert graft(linear_tree(2), DOT) == series((linear_tree(3), 1), (corolla(3), 1))
    assert graft(corolla(3), DOT) == series((corolla(4), 1), (T("[[[]][]]"), 2))


@given(trees_upto, trees_upto)
def test_graft_grading_and_mass(t, s):
    g = graft(t, s)
    assert all(k.degree == t.degree + s.degree for k in g)
    assert sum(g.terms.values()) == t.degree


@given(trees_upto, trees_upto, trees_upto)
def test_prelie_axiom(x, y, z):
    n = x.degree + y.degree + z.degree
    xs, ys, zs = (TreeSeries({t: mpq(1)}, order=n) for t in (x, y, z))
    assert associator(graft_series, xs, ys, zs, n) == associator(graft_series, xs, zs, ys, n)


def test_prelie_axiom_exhaustive_degree_8():
    trees = [t for n in range(1, 7) for t in enumerate_trees(n)]
    for x, y, z in itertools.product(trees, repeat=3):
        n = x.degree + y.degree + z.degree
        if n > 8:
            continue
        xs, ys, zs = (TreeSeries({t: mpq(1)}, order=n) for t in (x, y, z))
        assert associator(graft_series, xs, ys, zs, n) == associator(graft_series, xs, zs, ys, n)


@pytest.mark.parametrize("side", ["left", "right"])
def test_graft_by_dot_is_injective(side):
    for n in range(1, 8):
        src = enumerate_trees(n)
        tgt = {t: i for i, t in enumerate(enumerate_trees(n + 1))}
        rows = []
        for t in src:
            img = graft(DOT, t) if side == "left" else graft(t, DOT)
            col = [0] * len(tgt)
            for k, c in img.items():
                col[tgt[k]] = int(c)
            rows.append(col)
        assert sympy.Matrix(rows).rank() == len(src)


# ------------------------------------------------------------------ forests


def test_star_examples():
    g = F("[]", "[[]]")
    assert star_product(EMPTY_FOREST, g).terms == {g: 1}
    assert star_product(g, EMPTY_FOREST).terms == {g: 1}
    assert star_product(F("[]"), F("[]")).terms == {F("[]", "[]"): 1, F("[[]]"): 1}
    assert star_product(F("[]", "[]"), F("[]")).terms == {F("[]", "[]", "[]"): 1, F("[[]]", "[]"): 2}


def forests_of_degree(n):
    out = []
    for parts in _partitions(n):
        pools = [enumerate_trees(p) for p in parts]
        for combo in itertools.product(*pools):
            out.append(Forest(combo))
    return sorted(set(out), key=lambda f: f.encoding)


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def test_star_associative():
    rng = random.Random(7)
    pool = [f for n in range(0, 4) for f in forests_of_degree(n)]
    for _ in range(150):
        a, b, c = (rng.choice(pool) for _ in range(3))
        n = a.degree + b.degree + c.degree
        if n > 7:
            continue
        sa, sb, sc = (star_product(x, EMPTY_FOREST) for x in (a, b, c))
        left = star_product_series(star_product_series(sa, sb, n), sc, n)
        right = star_product_series(sa, star_product_series(sb, sc, n), n)
        assert left == right


def test_pi_of_forest_star_tree_is_graft():
    rng = random.Random(11)
    pool = [f for n in range(1, 5) for f in forests_of_degree(n)]
    for _ in range(120):
        f = rng.choice(pool)
        t = rng.choice(enumerate_trees(rng.randint(1, 8 - f.degree) if f.degree < 8 else 1))
        n = f.degree + t.degree
        lhs = project_pi(star_product(f, Forest((t,))))
        pif = project_pi(star_product(f, EMPTY_FOREST))
        rhs = graft_series(pif, TreeSeries({t: mpq(1)}, order=n), n)
        assert lhs.with_order(n) == rhs


def test_project_pi():
    t = corolla(3)
    assert project_pi(forest_series(TreeSeries({t: mpq(1)}, order=3))) == TreeSeries({t: mpq(1)}, order=3)
    assert not project_pi(star_product(EMPTY_FOREST, EMPTY_FOREST))
    assert not project_pi(star_product(F("[]", "[]"), EMPTY_FOREST))


# ------------------------------------------------------------------ substitution


def test_multi_node_graft_examples():
    assert multi_node_graft(DOT, 0) == series((DOT, 1))
    assert multi_node_graft(DOT, 1) == series((linear_tree(2), 1))
    assert multi_node_graft(DOT, 2) == series((corolla(3), 1))
    got = multi_node_graft(linear_tree(2), 2)
    assert got == series((T("[[][][]]"), 1), (T("[[[]][]]"), 2), (T("[[[][]]]"), 1))


@pytest.mark.parametrize("n", range(0, 4))
def test_multi_node_graft_mass(n):
    for t in [x for d in range(1, 5) for x in enumerate_trees(d)]:
        assert sum(multi_node_graft(t, n).terms.values()) == t.degree**n


def test_multi_node_graft_counts_functions():
    # new leaves never receive attachments, so this is attaching n labelled leaves
    t = T("[[[]][]]")
    for n in range(4):
        want = Counter()
        for f in itertools.product(range(t.degree), repeat=n):
            want[_attach_leaves(t, Counter(f))] += 1
        assert multi_node_graft(t, n).terms == dict(want)


def _attach_leaves(t, counts, start=0):
    def rebuild(node, idx):
        mine = counts.get(idx, 0)
        idx += 1
        kids = []
        for c in node.children:
            c2, idx = rebuild(c, idx)
            kids.append(c2)
        return RootedTree(kids + [DOT] * mine), idx

    return rebuild(t, start)[0]


def test_fork_substitute_examples():
    s = random_tree_series(random.Random(3), 4)
    assert fork_substitute(0, 0, s) == s
    dot = TreeSeries({DOT: mpq(1)}, order=6)
    assert fork_substitute(1, 0, dot) == TreeSeries({linear_tree(2): mpq(1)}, order=6)
    for n in range(1, 6):
        assert fork_substitute(0, n - 1, dot) == TreeSeries({corolla(n): mpq(1)}, order=6)
    assert fork_substitute(3, 2, dot, order=6) == TreeSeries({fork(3, 2): mpq(1)}, order=6)


def test_q_shift_and_suspension():
    dot = TreeSeries({DOT: mpq(1)}, order=1)
    assert q_shift(dot) == TreeSeries({DOT: RationalFunction(Q)}, order=1)
    assert suspension(dot) == dot
    s = random_tree_series(random.Random(5), 5)
    assert suspension(q_shift(s)) == q_shift(suspension(s))
    assert suspension(suspension(s)) == s


def test_series_truncation():
    s = random_tree_series(random.Random(1), 6)
    assert all(t.degree <= 3 for t in s.truncate(3))
    assert (s + s.scale(-1)).terms == {}
    assert s.component(4).degrees() in ([4], [])
