"""Free dendriform algebra on planar binary trees.

Products on basis trees follow Loday's recursion, with t = t_l v t_r and
s = s_l v s_r::

    t < s = t_l v (t_r * s)        t > s = (t * s_l) v s_r

where * = < + > and the leaf acts as the unit of *.  The adjoined unit 1 of a
series is a separate coefficient (``DendSeries.unit``), never a basis tree;
``1 < x`` and ``x > 1`` are refused.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .arith import ONE, QPolynomial, RationalFunction, q_binomial, q_integer
from .omega import classical_components, quantum_numerators, finish_numerators
from .series import Series, suspension


class DendriformUnitError(ValueError):
    """A product with the adjoined unit on the forbidden side."""


class PlanarBinaryTree:
    __slots__ = ("left", "right", "encoding", "degree", "__weakref__")
    _table: dict[str, PlanarBinaryTree] = {}

    def __new__(cls, left: PlanarBinaryTree | None = None, right: PlanarBinaryTree | None = None):
        if left is None and right is None:
            encoding = "."
        elif left is None or right is None:
            raise ValueError("a node needs both subtrees")
        else:
            encoding = "(" + left.encoding + right.encoding + ")"
        hit = cls._table.get(encoding)
        if hit is not None:
            return hit
        t = object.__new__(cls)
        t.left, t.right, t.encoding = left, right, encoding
        t.degree = 0 if left is None else 1 + left.degree + right.degree
        return cls._table.setdefault(encoding, t)

    def __reduce__(self):
        return (PlanarBinaryTree.from_encoding, (self.encoding,))

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @classmethod
    def from_encoding(cls, text: str) -> PlanarBinaryTree:
        hit = cls._table.get(text)
        if hit is not None:
            return hit
        pos = 0

        def parse():
            nonlocal pos
            ch = text[pos]
            pos += 1
            if ch == ".":
                return LEAF
            if ch != "(":
                raise ValueError(f"bad planar tree encoding {text!r}")
            left = parse()
            right = parse()
            if text[pos] != ")":
                raise ValueError(f"bad planar tree encoding {text!r}")
            pos += 1
            return cls(left, right)

        try:
            t = parse()
        except IndexError:
            raise ValueError(f"truncated planar tree encoding {text!r}") from None
        if pos != len(text):
            raise ValueError(f"trailing characters in {text!r}")
        return t

    def sort_key(self) -> tuple[int, str]:
        return (self.degree, self.encoding)

    def __lt__(self, other: PlanarBinaryTree) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"PlanarBinaryTree({self.encoding})"

    def __str__(self) -> str:
        return self.encoding


LEAF = PlanarBinaryTree()
NODE = PlanarBinaryTree(LEAF, LEAF)


def join(left: PlanarBinaryTree, right: PlanarBinaryTree) -> PlanarBinaryTree:
    return PlanarBinaryTree(left, right)


@lru_cache(maxsize=None)
def planar_trees(n: int) -> tuple[PlanarBinaryTree, ...]:
    """All planar binary trees with n internal vertices."""
    if n == 0:
        return (LEAF,)
    out = []
    for k in range(n):
        for left in planar_trees(k):
            for right in planar_trees(n - 1 - k):
                out.append(PlanarBinaryTree(left, right))
    return tuple(out)


# ---------------------------------------------------------------------------
# basis products


@lru_cache(maxsize=None)
def prec_terms(t: PlanarBinaryTree, s: PlanarBinaryTree) -> tuple:
    if t.is_leaf:
        raise DendriformUnitError("1 < x is not defined")
    if s.is_leaf:
        return ((t, 1),)
    acc = Counter()
    for r, k in star_terms(t.right, s):
        acc[PlanarBinaryTree(t.left, r)] += k
    return tuple(acc.items())


@lru_cache(maxsize=None)
def succ_terms(t: PlanarBinaryTree, s: PlanarBinaryTree) -> tuple:
    if s.is_leaf:
        raise DendriformUnitError("x > 1 is not defined")
    if t.is_leaf:
        return ((s, 1),)
    acc = Counter()
    for r, k in star_terms(t, s.left):
        acc[PlanarBinaryTree(r, s.right)] += k
    return tuple(acc.items())


@lru_cache(maxsize=None)
def star_terms(t: PlanarBinaryTree, s: PlanarBinaryTree) -> tuple:
    if t.is_leaf:
        return ((s, 1),)
    if s.is_leaf:
        return ((t, 1),)
    acc = Counter()
    for r, k in prec_terms(t, s):
        acc[r] += k
    for r, k in succ_terms(t, s):
        acc[r] += k
    return tuple(acc.items())


# ---------------------------------------------------------------------------
# series


class DendSeries(Series):
    """Series over planar binary trees, plus a coefficient on the adjoined unit."""

    __slots__ = ("unit",)

    def __init__(self, terms: dict | None = None, order: int = 0, unit=0):
        super().__init__(terms, order)
        if any(k.is_leaf for k in self.terms):
            raise ValueError("the unit is stored in DendSeries.unit, not as a leaf term")
        self.unit = unit

    @classmethod
    def _wrap(cls, terms: dict, order: int, unit=0):
        s = super()._wrap(terms, order)
        s.unit = unit
        return s

    @classmethod
    def one(cls, order: int) -> DendSeries:
        return cls._wrap({}, order, mpq(1))

    def unit_free(self) -> DendSeries:
        return self._wrap(dict(self.terms), self.order)

    def __bool__(self) -> bool:
        return bool(self.terms) or bool(self.unit)

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        out = Series.__add__(self, other)
        out.unit = self.unit + getattr(other, "unit", 0)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Series.__neg__(self)
        out.unit = -self.unit
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = Series.scale(self, c)
        out.unit = self.unit * c if c else 0
        return out

    def __mul__(self, c):
        if isinstance(c, Series):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def map_coefficients(self, fn):
        out = Series.map_coefficients(self, fn)
        out.unit = fn(self.unit) if self.unit else 0
        return out

    def map_by_degree(self, fn):
        out = Series.map_by_degree(self, fn)
        out.unit = self.unit
        return out

    def component(self, n: int):
        if n == 0:
            return self._wrap({}, self.order, self.unit)
        return Series.component(self, n)

    def truncate(self, order: int):
        out = Series.truncate(self, order)
        out.unit = self.unit
        return out

    def with_order(self, order: int):
        out = Series.with_order(self, order)
        out.unit = self.unit
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if not (self.unit == getattr(other, "unit", 0)):
            return False
        return Series.__eq__(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        base = Series.__repr__(self)
        return base if not self.unit else f"{base} + ({self.unit})*1"


def _product(op, a: DendSeries, b: DendSeries, order: int | None = None) -> DendSeries:
    if order is None:
        order = min(a.order, b.order)
    return a.unit_free().bilinear(b.unit_free(), op, order)


def dend_prec(a: DendSeries, b: DendSeries, order: int | None = None) -> DendSeries:
    """(a1 + X) < (b1 + Y) = X < Y + b X; 1 < anything is refused."""
    if a.unit and (b.unit or b.terms):
        raise DendriformUnitError("1 < x is not defined")
    out = _product(prec_terms, a, b, order)
    return out + a.unit_free().scale(b.unit).with_order(out.order) if b.unit else out


def dend_succ(a: DendSeries, b: DendSeries, order: int | None = None) -> DendSeries:
    """(a1 + X) > (b1 + Y) = X > Y + a Y; anything > 1 is refused."""
    if b.unit and (a.unit or a.terms):
        raise DendriformUnitError("x > 1 is not defined")
    out = _product(succ_terms, a, b, order)
    return out + b.unit_free().scale(a.unit).with_order(out.order) if a.unit else out


def dend_star(a: DendSeries, b: DendSeries, order: int | None = None) -> DendSeries:
    """Associative product, with the adjoined unit as a two-sided unit."""
    if order is None:
        order = min(a.order, b.order)
    out = _product(star_terms, a, b, order)
    if a.unit:
        out = out + b.unit_free().scale(a.unit).with_order(order)
    if b.unit:
        out = out + a.unit_free().scale(b.unit).with_order(order)
    if a.unit and b.unit:
        out = out + DendSeries.one(order).scale(a.unit * b.unit)
    return out


def dend_prelie(x: DendSeries, y: DendSeries, order: int | None = None) -> DendSeries:
    """x <- y = y > x - x < y."""
    if x.unit or y.unit:
        raise DendriformUnitError("the pre-Lie product is defined on unit-free series")
    return dend_succ(y, x, order) - dend_prec(x, y, order)


def dot(order: int = 1) -> DendSeries:
    return DendSeries({NODE: mpq(1)}, order=order)


# ---------------------------------------------------------------------------
# combs, descents


def left_combs(order: int) -> DendSeries:
    """L = . + L > ."""
    comb = [NODE]
    for _ in range(1, order):
        comb.append(PlanarBinaryTree(comb[-1], LEAF))
    return DendSeries({t: mpq(1) for t in comb}, order=order)


def right_combs(order: int) -> DendSeries:
    """R = . + . < R."""
    comb = [NODE]
    for _ in range(1, order):
        comb.append(PlanarBinaryTree(LEAF, comb[-1]))
    return DendSeries({t: mpq(1) for t in comb}, order=order)


def left_comb(n: int) -> PlanarBinaryTree:
    t = NODE
    for _ in range(1, n):
        t = PlanarBinaryTree(t, LEAF)
    return t


def right_comb(n: int) -> PlanarBinaryTree:
    t = NODE
    for _ in range(1, n):
        t = PlanarBinaryTree(LEAF, t)
    return t


def _leaf_sides(t: PlanarBinaryTree, side: str, out: list) -> None:
    if t.is_leaf:
        out.append(side)
        return
    _leaf_sides(t.left, "L", out)
    _leaf_sides(t.right, "R", out)


@lru_cache(maxsize=None)
def descent_set(t: PlanarBinaryTree) -> frozenset[int]:
    """Labels of inner leaves (1..n-1, leaves numbered left to right from 0) that are left children."""
    sides: list[str] = []
    _leaf_sides(t, "root", sides)
    return frozenset(i for i in range(1, len(sides) - 1) if sides[i] == "L")


def major_index(t: PlanarBinaryTree) -> int:
    return sum(descent_set(t))


# ---------------------------------------------------------------------------
# the dendriform image of Omega_q


def omega_q_dend_recursive(order: int) -> DendSeries:
    """Run the Omega / Omega_q recursions with the dendriform pre-Lie product."""
    if order < 1:
        raise ValueError("order must be >= 1")
    gen = dot()
    classical = classical_components(dend_prelie, gen, order)
    tilde, factors = quantum_numerators(dend_prelie, gen, order, classical)
    return finish_numerators(tilde, factors, DendSeries, order)


def omega_dend_coefficient(t: PlanarBinaryTree) -> RationalFunction:
    """(-1)^(n-1)/[n]_q (-1)^d qbinom(n-1, d)^-1 q^(maj - C(d+1, 2)) for the tree t."""
    n = t.degree
    d = len(descent_set(t))
    sign = (-1) ** (n - 1 + d)
    num = QPolynomial.monomial(major_index(t) - math.comb(d + 1, 2), sign)
    den = q_integer(n) * q_binomial(n - 1, d)
    # num is a monomial and den(0) = 1, so the fraction is already reduced
    return RationalFunction._trusted(num, den)


def _explicit_degree(n: int) -> list[tuple[str, list[str], list[str]]]:
    out = []
    for t in planar_trees(n):
        js = omega_dend_coefficient(t).to_json()
        out.append((t.encoding, js["num"], js["den"]))
    return out


def omega_q_dend_explicit(order: int, jobs: int = 1) -> DendSeries:
    """Closed formula over all planar binary trees of each degree.

    With ``jobs`` != 1 the degrees are evaluated in a process pool (0 = one
    worker per CPU).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    terms = {}
    if jobs == 1:
        for n in range(1, order + 1):
            for t in planar_trees(n):
                terms[t] = omega_dend_coefficient(t)
        return DendSeries(terms, order=order)
    with ProcessPoolExecutor(max_workers=jobs or None) as pool:
        for rows in pool.map(_explicit_degree, range(1, order + 1)):
            for enc, num, den in rows:
                terms[PlanarBinaryTree.from_encoding(enc)] = RationalFunction.from_json({"num": num, "den": den})
    return DendSeries(terms, order=order)


# ---------------------------------------------------------------------------
# identities


@dataclass
class IdentityReport:
    ok: bool
    first_failing_degree: int | None = None
    detail: str = ""


def _first_difference(a: DendSeries, b: DendSeries) -> int | None:
    if not (a.unit == b.unit):
        return 0
    diff = a - b
    degrees = diff.degrees()
    return degrees[0] if degrees else None


def comb_inverse_check(order: int) -> IdentityReport:
    """(1 - su(L)) * (1 + R) = 1."""
    one = DendSeries.one(order)
    lhs = dend_star(one - suspension(left_combs(order)), one + right_combs(order), order)
    bad = _first_difference(lhs, one)
    return IdentityReport(bad is None, bad)


def linear_image(order: int) -> DendSeries:
    """B: the solution of B = . + B > . - . < B (image of the sum of linear trees)."""
    gen = dot(order)
    parts = [gen]
    for _ in range(1, order):
        prev = parts[-1]
        parts.append(dend_succ(prev, gen, order) - dend_prec(gen, prev, order))
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def power_sum_series(order: int) -> DendSeries:
    """E = sum n L_n."""
    return DendSeries({left_comb(n): mpq(n) for n in range(1, order + 1)}, order=order)


def verify_EB(order: int) -> IdentityReport:
    """E = (1 + L) * B and E = L + E > ."""
    L = left_combs(order)
    B = linear_image(order)
    E = power_sum_series(order)
    first = dend_star(DendSeries.one(order) + L, B, order)
    bad = _first_difference(E, first)
    if bad is not None:
        return IdentityReport(False, bad, "E != (1+L)*B")
    second = L + dend_succ(E, dot(order), order)
    bad = _first_difference(E, second)
    if bad is not None:
        return IdentityReport(False, bad, "E != L + E > .")
    return IdentityReport(True)
