"""Truncated graded sparse series over a basis of graded objects.

Basis keys only need a ``degree`` attribute and a ``sort_key()`` method.
Coefficients are any exact ring elements (``mpq``, ``QPolynomial``,
``RationalFunction``); zero coefficients are never stored and nothing of
degree above ``order`` is kept.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable

from .arith import Q, as_rational_function


class Series:
    __slots__ = ("terms", "order")

    def __init__(self, terms: dict | None = None, order: int = 0):
        self.order = order
        self.terms = {k: c for k, c in (terms or {}).items() if c and k.degree <= order}

    @classmethod
    def _wrap(cls, terms: dict, order: int):
        s = object.__new__(cls)
        s.terms = terms
        s.order = order
        return s

    @classmethod
    def monomial(cls, key, coeff=1, order: int | None = None):
        return cls({key: coeff}, order=key.degree if order is None else order)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, key):
        return self.terms.get(key, 0)

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def degrees(self) -> list[int]:
        return sorted({k.degree for k in self.terms})

    def component(self, n: int):
        """Homogeneous part of degree n."""
        return self._wrap({k: c for k, c in self.terms.items() if k.degree == n}, self.order)

    def truncate(self, order: int):
        return self._wrap({k: c for k, c in self.terms.items() if k.degree <= order}, order)

    def with_order(self, order: int):
        return self.truncate(order) if order < self.order else self._wrap(dict(self.terms), order)

    def _coerce_other(self, other):
        if isinstance(other, Series):
            return other
        if not other:
            return type(self)({}, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        out = {k: c for k, c in self.terms.items() if k.degree <= order}
        _accumulate(out, ((k, c) for k, c in other.terms.items() if k.degree <= order))
        return self._wrap(out, order)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        if not c:
            return self._wrap({}, self.order)
        out = {}
        for k, v in self.terms.items():
            w = v * c
            if w:
                out[k] = w
        return self._wrap(out, self.order)

    def __mul__(self, c):
        if isinstance(c, Series):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def map_coefficients(self, fn: Callable):
        out = {}
        for k, v in self.terms.items():
            w = fn(v)
            if w:
                out[k] = w
        return self._wrap(out, self.order)

    def map_by_degree(self, fn: Callable):
        """Apply fn(degree, coefficient) termwise."""
        out = {}
        for k, v in self.terms.items():
            w = fn(k.degree, v)
            if w:
                out[k] = w
        return self._wrap(out, self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def difference_report(self, other: Series, limit: int = 5) -> list[str]:
        """Human-readable list of the first differing coefficients."""
        keys = sorted(set(self.terms) | set(other.terms), key=lambda k: k.sort_key())
        out = []
        for k in keys:
            a, b = self.terms.get(k, 0), other.terms.get(k, 0)
            if not (a == b):
                out.append(f"{k}: {a} != {b}")
                if len(out) >= limit:
                    break
        return out

    def bilinear(self, other: Series, op: Callable, order: int):
        """Extend a basis-level product ``op(a, b) -> [(key, int), ...]`` bilinearly."""
        by_degree = defaultdict(list)
        for k, c in other.terms.items():
            by_degree[k.degree].append((k, c))
        out: dict = {}
        for ka, ca in self.terms.items():
            room = order - ka.degree
            for d, group in by_degree.items():
                if d > room:
                    continue
                for kb, cb in group:
                    cab = ca * cb
                    for key, mult in op(ka, kb):
                        term = cab if mult == 1 else cab * mult
                        prev = out.get(key)
                        out[key] = term if prev is None else prev + term
        return type(self)._wrap({k: c for k, c in out.items() if c}, order)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{k}" for k, c in self.sorted_items()) or "0"
        return f"{type(self).__name__}[order={self.order}]({body})"


def _accumulate(out: dict, pairs: Iterable) -> None:
    for k, c in pairs:
        prev = out.get(k)
        if prev is None:
            out[k] = c
        else:
            s = prev + c
            if s:
                out[k] = s
            else:
                del out[k]


def sum_series(items: Iterable[Series], cls: type, order: int) -> Series:
    out: dict = {}
    for s in items:
        _accumulate(out, ((k, c) for k, c in s.terms.items() if k.degree <= order))
    return cls._wrap(out, order)


class TreeSeries(Series):
    """Series over rooted trees (the completed free pre-Lie algebra)."""

    __slots__ = ()


class ForestSeries(Series):
    """Series over forests (the completed enveloping algebra); may hold the empty forest."""

    __slots__ = ()


def q_shift(s: Series) -> Series:
    """Multiply the degree-n coefficients by q**n."""
    return s.map_by_degree(lambda n, c: as_rational_function(c) * Q**n)


def suspension(s: Series) -> Series:
    """Multiply the degree-n coefficients by (-1)**(n-1)."""
    return s.map_by_degree(lambda n, c: c if n % 2 else -c)


def to_rational_functions(s: Series) -> Series:
    return s.map_coefficients(as_rational_function)


__all__ = [
    "Series",
    "TreeSeries",
    "ForestSeries",
    "q_shift",
    "suspension",
    "sum_series",
    "to_rational_functions",
]
