"""Unordered rooted trees, forests, and the free pre-Lie operations on them.

Trees and forests are hash-consed: constructing a structurally equal tree
returns the same object, so equality and hashing are by identity.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator

from .series import ForestSeries, TreeSeries


class RootedTree:
    __slots__ = ("children", "encoding", "degree", "__weakref__")
    _table: dict[str, RootedTree] = {}

    def __new__(cls, children: Iterable[RootedTree] = ()):
        kids = tuple(sorted(children, key=_enc))
        encoding = "[" + "".join(c.encoding for c in kids) + "]"
        hit = cls._table.get(encoding)
        if hit is not None:
            return hit
        t = object.__new__(cls)
        t.children = kids
        t.encoding = encoding
        t.degree = 1 + sum(c.degree for c in kids)
        return cls._table.setdefault(encoding, t)

    def __reduce__(self):
        return (RootedTree.from_encoding, (self.encoding,))

    @classmethod
    def from_encoding(cls, text: str) -> RootedTree:
        hit = cls._table.get(text)
        if hit is not None:
            return hit
        stack: list[list[RootedTree]] = [[]]
        for ch in text:
            if ch == "[":
                stack.append([])
            elif ch == "]":
                kids = stack.pop()
                if not stack:
                    raise ValueError(f"unbalanced tree encoding {text!r}")
                stack[-1].append(cls(kids))
            else:
                raise ValueError(f"bad character {ch!r} in tree encoding")
        if len(stack) != 1 or len(stack[0]) != 1:
            raise ValueError(f"not a single tree: {text!r}")
        return stack[0][0]

    def sort_key(self) -> tuple[int, str]:
        return (self.degree, self.encoding)

    def __lt__(self, other: RootedTree) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"RootedTree({self.encoding})"

    def __str__(self) -> str:
        return self.encoding


def _enc(t) -> str:
    return t.encoding


def _size_then_enc(t) -> tuple[int, str]:
    return (t.degree, t.encoding)


def canonical_encode(t: RootedTree) -> str:
    return t.encoding


class Forest:
    """Multiset of rooted trees; the empty forest is the unit of U(PL)."""

    __slots__ = ("components", "encoding", "degree", "__weakref__")
    _table: dict[str, Forest] = {}

    def __new__(cls, components: Iterable[RootedTree] = ()):
        comps = tuple(sorted(components, key=_size_then_enc))
        encoding = "{" + ",".join(c.encoding for c in comps) + "}"
        hit = cls._table.get(encoding)
        if hit is not None:
            return hit
        f = object.__new__(cls)
        f.components = comps
        f.encoding = encoding
        f.degree = sum(c.degree for c in comps)
        return cls._table.setdefault(encoding, f)

    def __reduce__(self):
        return (Forest.from_encoding, (self.encoding,))

    @classmethod
    def from_encoding(cls, text: str) -> Forest:
        if not (text.startswith("{") and text.endswith("}")):
            raise ValueError(f"bad forest encoding {text!r}")
        body = text[1:-1]
        comps, depth, start = [], 0, 0
        for i, ch in enumerate(body):
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "," and depth == 0:
                comps.append(body[start:i])
                start = i + 1
        if body:
            comps.append(body[start:])
        return cls(RootedTree.from_encoding(c) for c in comps)

    def is_tree(self) -> bool:
        return len(self.components) == 1

    def sort_key(self) -> tuple[int, str]:
        return (self.degree, self.encoding)

    def __lt__(self, other: Forest) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Forest({self.encoding})"

    def __str__(self) -> str:
        return self.encoding


EMPTY_FOREST = Forest()
DOT = RootedTree()


# ---------------------------------------------------------------------------
# special trees


def linear_tree(n: int) -> RootedTree:
    if n < 1:
        raise ValueError("linear_tree requires n >= 1")
    t = DOT
    for _ in range(n - 1):
        t = RootedTree((t,))
    return t


def corolla(n: int) -> RootedTree:
    if n < 1:
        raise ValueError("corolla requires n >= 1")
    return RootedTree((DOT,) * (n - 1))


def with_trunk(t: RootedTree, length: int) -> RootedTree:
    """Put t on top of a chain of ``length`` vertices (the bottom one is the root)."""
    for _ in range(length):
        t = RootedTree((t,))
    return t


def fork(trunk: int, leaves: int) -> RootedTree:
    """Trunk of ``trunk`` vertices, one vertex on top, ``leaves`` leaves above it."""
    if trunk < 0 or leaves < 0:
        raise ValueError("fork sizes must be nonnegative")
    return with_trunk(corolla(leaves + 1), trunk)


# ---------------------------------------------------------------------------
# enumeration and automorphisms


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    if largest is None:
        largest = n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


@lru_cache(maxsize=None)
def _trees_of_degree(n: int) -> tuple[RootedTree, ...]:
    if n == 1:
        return (DOT,)
    out = []
    for parts in _partitions(n - 1):
        choices = []
        for size, mult in Counter(parts).items():
            pool = _trees_of_degree(size)
            choices.append(list(itertools.combinations_with_replacement(pool, mult)))
        for combo in itertools.product(*choices):
            out.append(RootedTree(itertools.chain.from_iterable(combo)))
    return tuple(sorted(out, key=_enc))


def enumerate_trees(n: int) -> list[RootedTree]:
    """All rooted trees with n vertices, sorted by canonical encoding."""
    if n < 1:
        raise ValueError("enumerate_trees requires n >= 1")
    return list(_trees_of_degree(n))


@lru_cache(maxsize=None)
def aut_count(t: RootedTree) -> int:
    out = 1
    for child, mult in Counter(t.children).items():
        out *= math.factorial(mult) * aut_count(child) ** mult
    return out


# ---------------------------------------------------------------------------
# grafting and the enveloping algebra


@lru_cache(maxsize=None)
def graft_terms(t: RootedTree, s: RootedTree) -> tuple[tuple[RootedTree, int], ...]:
    """Basis expansion of t <- s: attach the root of s under each vertex of t."""
    acc: Counter = Counter()
    acc[RootedTree(t.children + (s,))] += 1
    kids = t.children
    seen = set()
    for i, c in enumerate(kids):
        if c in seen:
            continue
        seen.add(c)
        mult = kids.count(c)
        rest = kids[:i] + kids[i + 1 :]
        for c2, k in graft_terms(c, s):
            acc[RootedTree(rest + (c2,))] += mult * k
    return tuple(acc.items())


def graft(t: RootedTree, s: RootedTree) -> TreeSeries:
    n = t.degree + s.degree
    return TreeSeries(dict(graft_terms(t, s)), order=n)


def graft_series(a: TreeSeries, b: TreeSeries, order: int | None = None) -> TreeSeries:
    """Bilinear extension of the grafting product, truncated at ``order``."""
    if order is None:
        order = min(a.order, b.order)
    return a.bilinear(b, graft_terms, order)


def _add_children(t: RootedTree, extra: dict[int, list[RootedTree]], start: int = 0) -> tuple[RootedTree, int]:
    """Rebuild t with extra children at preorder vertex indices; returns (tree, next index)."""
    mine = extra.get(start, ())
    idx = start + 1
    kids = []
    for c in t.children:
        c2, idx = _add_children(c, extra, idx)
        kids.append(c2)
    kids.extend(mine)
    return RootedTree(kids), idx


def star_product_terms(f: Forest, g: Forest) -> Counter:
    """F * G in the forest basis: each root of G stays a root or is hung under a vertex of F."""
    offsets = []
    n = 0
    for c in f.components:
        offsets.append(n)
        n += c.degree
    acc: Counter = Counter()
    # None keeps the root of g as a new component
    for choice in itertools.product([None, *range(n)], repeat=len(g.components)):
        loose = []
        extra: dict[int, list[RootedTree]] = {}
        for root, v in zip(g.components, choice):
            if v is None:
                loose.append(root)
            else:
                extra.setdefault(v, []).append(root)
        comps = []
        for c, off in zip(f.components, offsets):
            local = {v - off: ts for v, ts in extra.items() if off <= v < off + c.degree}
            comps.append(_add_children(c, local)[0] if local else c)
        acc[Forest(comps + loose)] += 1
    return acc


@lru_cache(maxsize=None)
def _star_terms_cached(f: Forest, g: Forest) -> tuple[tuple[Forest, int], ...]:
    return tuple(star_product_terms(f, g).items())


def star_product(f: Forest, g: Forest) -> ForestSeries:
    return ForestSeries(dict(_star_terms_cached(f, g)), order=f.degree + g.degree)


def star_product_series(a: ForestSeries, b: ForestSeries, order: int | None = None) -> ForestSeries:
    if order is None:
        order = min(a.order, b.order)
    return a.bilinear(b, _star_terms_cached, order)


def forest_series(s: TreeSeries) -> ForestSeries:
    """View a tree series inside U(PL) (each tree as a one-component forest)."""
    return ForestSeries({Forest((t,)): c for t, c in s.items()}, order=s.order)


def project_pi(s: ForestSeries) -> TreeSeries:
    """Keep the single-component forests."""
    return TreeSeries({f.components[0]: c for f, c in s.items() if f.is_tree()}, order=s.order)


@lru_cache(maxsize=None)
def multi_node_graft_terms(t: RootedTree, n: int) -> tuple[tuple[RootedTree, int], ...]:
    """Attach n labelled new leaves to vertices of t in every way (n**#t functions)."""
    if n == 0:
        return ((t, 1),)
    acc: Counter = Counter()
    nv = t.degree
    for counts in _compositions(n, nv):
        mult = math.factorial(n)
        extra = {}
        for v, a in enumerate(counts):
            if a:
                mult //= math.factorial(a)
                extra[v] = [DOT] * a
        acc[_add_children(t, extra)[0]] += mult
    return tuple(acc.items())


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of n into ``parts`` nonnegative parts."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def multi_node_graft(t: RootedTree, n: int) -> TreeSeries:
    if n < 0:
        raise ValueError("multi_node_graft requires n >= 0")
    return TreeSeries(dict(multi_node_graft_terms(t, n)), order=t.degree + n)


def fork_substitute(trunk: int, leaves: int, s: TreeSeries, order: int | None = None) -> TreeSeries:
    """Substitute s at the marked vertex of the fork with ``trunk`` and ``leaves``."""
    if order is None:
        order = s.order
    acc: dict = {}
    for t, c in s.items():
        if t.degree + trunk + leaves > order:
            continue
        for t2, k in multi_node_graft_terms(t, leaves):
            key = with_trunk(t2, trunk)
            prev = acc.get(key)
            term = c * k
            acc[key] = term if prev is None else prev + term
    return TreeSeries(acc, order=order)
