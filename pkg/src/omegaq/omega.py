"""The series Omega and Omega_q, their specializations and quotient images.

The recursions are written against an arbitrary pre-Lie product
``product(a, b, order)`` and generator ``gen`` so that the same code runs in
the free pre-Lie algebra on rooted trees and in the free dendriform algebra.

Omega_q is carried as numerators over the fixed denominator
``prod_{d=2..N} (q**d - 1)``; every coefficient of degree <= N has such a
denominator by construction, so the inner loops only add polynomials and
multiply them by rationals.  Division by ``q**n - 1`` is then exact polynomial
division, and the final reduction is by cyclotomic trial division.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal

from gmpy2 import mpq

from .arith import (
    ONE,
    Q,
    QPolynomial,
    RationalFunction,
    as_rational_function,
    bernoulli,
    cyclotomic,
    cyclotomic_factorization,
    divisors,
    eval_at,
    infinity_limit,
    infinity_valuation,
    q_integer,
)
from .series import ForestSeries, Series, TreeSeries, sum_series
from .trees import (
    DOT,
    EMPTY_FOREST,
    Forest,
    RootedTree,
    aut_count,
    corolla,
    enumerate_trees,
    fork_substitute,
    forest_series,
    graft_series,
    graft_terms,
    linear_tree,
    project_pi,
    star_product_series,
)

Product = Callable[[Series, Series, int], Series]


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class OmegaClassical:
    series: TreeSeries
    order: int

    def component(self, n: int) -> TreeSeries:
        return self.series.component(n)


@dataclass(frozen=True)
class OmegaQ:
    series: TreeSeries
    order: int
    mode: str = "recursion"

    def component(self, n: int) -> TreeSeries:
        return self.series.component(n)

    def coefficient(self, t: RootedTree) -> RationalFunction:
        return as_rational_function(self.series.coefficient(t))


# ---------------------------------------------------------------------------
# generic recursions


def _shift_numerators(s: Series, k: int) -> Series:
    return s.map_coefficients(lambda c: c.shift(k))


def _iterate_action(P: list[dict], omega: list, product: Product, n: int) -> None:
    """Fill P[k][n] = sum_m P[k-1][n-m] <- Omega_m for k = 1..n-1."""
    for k in range(1, n):
        parts = []
        for m in range(1, n - k + 1):
            src = P[k - 1].get(n - m)
            if src:
                parts.append(product(src, omega[m], n))
        if parts:
            P[k][n] = sum_series(parts, type(parts[0]), n)


def classical_components(product: Product, gen: Series, order: int) -> list[Series]:
    """Homogeneous parts Omega_1..Omega_order (index 0 unused).

    Omega_n = sum_k B_k/k! sum_{m_1+..+m_k=n-1} ((gen <- Omega_{m_k}) ...) <- Omega_{m_1}.
    """
    comps: list = [None, gen]
    # P[k][d]: degree-d part of gen acted on k times by Omega
    P: list[dict] = [dict() for _ in range(order + 1)]
    P[0][1] = gen
    for n in range(2, order + 1):
        _iterate_action(P, comps, product, n)
        parts = []
        for k in range(1, n):
            acc = P[k].get(n)
            coeff = bernoulli(k) / math.factorial(k)
            if acc and coeff:
                parts.append(acc.scale(coeff))
        comps.append(sum_series(parts, type(gen), n).with_order(order))
    return comps


def common_denominator(order: int) -> tuple[QPolynomial, dict[int, int]]:
    """prod_{d=2..order} (q**d - 1) and its cyclotomic multiplicities."""
    factors: Counter = Counter()
    poly = ONE
    for d in range(2, order + 1):
        poly = poly * (QPolynomial.monomial(d) - ONE)
        for e in divisors(d):
            factors[e] += 1
    return poly, dict(factors)


def _exact_div_series(s: Series, divisor: QPolynomial) -> Series:
    return s.map_coefficients(lambda c: c.exact_div(divisor))


def finish_numerators(numerators: list, factors: dict[int, int], cls: type, order: int) -> Series:
    out = {}
    for n in range(1, order + 1):
        for key, num in numerators[n].items():
            out[key] = RationalFunction.over_cyclotomics(num, factors)
    return cls(out, order=order)


def quantum_numerators(product: Product, gen: Series, order: int, classical: list) -> tuple[list, dict]:
    """Numerators D*Omega_{q,n} for n = 1..order from the q-recursion.

    (q^n - 1) Omega_{q,n} = gen <- Omega_{q,n-1}
        - sum_k 1/k! sum_{m_1+..+m_k+l=n} q^l ((Omega_{q,l} <- Omega_{m_k}) ...) <- Omega_{m_1}
    """
    D, factors = common_denominator(order)
    tilde: list = [None, gen.scale(D)]
    P: list[dict] = [dict() for _ in range(order + 1)]
    for n in range(2, order + 1):
        P[0][n - 1] = _shift_numerators(tilde[n - 1], n - 1)
        _iterate_action(P, classical, product, n)
        parts = [product(gen, tilde[n - 1], n)]
        for k in range(1, n):
            acc = P[k].get(n)
            if acc:
                parts.append(acc.scale(mpq(-1, math.factorial(k))))
        rhs = sum_series(parts, type(gen), n)
        tilde.append(_exact_div_series(rhs, QPolynomial.monomial(n) - ONE))
    return tilde, factors


# ---------------------------------------------------------------------------
# rooted-tree instances


def _prefix_cached(restrict: Callable):
    """Cache the largest order computed; smaller orders are restrictions of it.

    Valid because degree n of each recursion only reads degrees below n.
    """

    def deco(fn):
        best: dict = {}

        def wrapper(order: int):
            hit = best.get("value")
            if hit is not None and best["order"] >= order:
                return hit if best["order"] == order else restrict(hit, order)
            value = fn(order)
            best.update(order=order, value=value)
            return value

        wrapper.cache_clear = best.clear
        wrapper.__wrapped__ = fn
        wrapper.__doc__ = fn.__doc__
        return wrapper

    return deco


def _restrict_parts(parts: tuple, order: int) -> tuple:
    return tuple([None] + [p.with_order(order) for p in parts[1 : order + 1]])


def _restrict_series(s: Series, order: int) -> Series:
    return s.truncate(order)


def _tree_product(a: Series, b: Series, order: int) -> Series:
    return graft_series(a, b, order)


def _gen_tree() -> TreeSeries:
    return TreeSeries({DOT: mpq(1)}, order=1)


@_prefix_cached(_restrict_parts)
def _classical_parts(order: int) -> tuple:
    return tuple(classical_components(_tree_product, _gen_tree(), order))


def omega_classical(order: int) -> OmegaClassical:
    if order < 1:
        raise ValueError("order must be >= 1")
    parts = _classical_parts(order)
    return OmegaClassical(sum_series(parts[1:], TreeSeries, order), order)


@_prefix_cached(_restrict_series)
def _omega_q_recursion(order: int) -> TreeSeries:
    classical = list(_classical_parts(order))
    tilde, factors = quantum_numerators(_tree_product, _gen_tree(), order, classical)
    return finish_numerators(tilde, factors, TreeSeries, order)


def omega_q(order: int) -> OmegaQ:
    if order < 1:
        raise ValueError("order must be >= 1")
    return OmegaQ(_omega_q_recursion(order), order, "recursion")


@_prefix_cached(_restrict_series)
def _omega_q_forks(order: int) -> TreeSeries:
    D, factors = common_denominator(order)
    tilde: list = [None]
    for n in range(1, order + 1):
        # (1 - q) (-1)^(n-1) Lnr_n
        lin = (ONE - Q) * D
        parts = [TreeSeries({linear_tree(n): lin if n % 2 else -lin}, order=n)]
        for m in range(1, n):
            shifted = _shift_numerators(tilde[m], m)
            for trunk in range(0, n - m + 1):
                leaves = n - m - trunk
                scale = mpq((-1) ** trunk, math.factorial(leaves))
                parts.append(fork_substitute(trunk, leaves, shifted, order=n).scale(scale))
        rhs = sum_series(parts, TreeSeries, n)
        # the (0, 0) fork reproduces q^n Omega_{q,n}
        tilde.append(_exact_div_series(rhs, ONE - QPolynomial.monomial(n)))
    return finish_numerators(tilde, factors, TreeSeries, order)


def omega_q_via_forks(order: int) -> OmegaQ:
    if order < 1:
        raise ValueError("order must be >= 1")
    return OmegaQ(_omega_q_forks(order), order, "forks")


# ---------------------------------------------------------------------------
# exponentials and actions


def exp_forest(s: TreeSeries, order: int) -> ForestSeries:
    """exp(s) in the completed enveloping algebra, with the star product."""
    if any(t.degree == 0 for t in s):
        raise ValueError("series must have no degree-0 part")
    s_f = forest_series(s.with_order(order))
    unit = ForestSeries({EMPTY_FOREST: mpq(1)}, order=order)
    total, power = [unit], unit
    for k in range(1, order + 1):
        power = star_product_series(power, s_f, order)
        if not power:
            break
        total.append(power.scale(mpq(1, math.factorial(k))))
    return sum_series(total, ForestSeries, order)


def iterated_graft_exp(x: TreeSeries, s: TreeSeries, order: int, start: int = 0) -> TreeSeries:
    """sum_{k >= start} 1/k! ((x <- s) ...) <- s, with k copies of s."""
    parts = []
    g = x.with_order(order)
    for k in range(0, order + 1):
        if k:
            g = graft_series(g, s, order)
        if not g:
            break
        if k >= start:
            parts.append(g.scale(mpq(1, math.factorial(k))))
    return sum_series(parts, TreeSeries, order)


def exp_star_action(s: TreeSeries, order: int) -> TreeSeries:
    """sum_{n>=1} 1/n! ((s <- s) ...) <- s with n copies of s."""
    if any(t.degree == 0 for t in s):
        raise ValueError("series must have no degree-0 part")
    parts = []
    g = s.with_order(order)
    for n in range(1, order + 1):
        if n > 1:
            g = graft_series(g, s, order)
        if not g:
            break
        parts.append(g.scale(mpq(1, math.factorial(n))))
    return sum_series(parts, TreeSeries, order)


def right_action(x: TreeSeries, u: ForestSeries, order: int) -> TreeSeries:
    """Action of an enveloping-algebra element on a tree series: pi(x * u)."""
    return project_pi(star_product_series(forest_series(x), u, order))


# ---------------------------------------------------------------------------
# specializations


def specialize(s: OmegaQ | TreeSeries, point: Literal[0, 1]) -> TreeSeries:
    series = s.series if isinstance(s, OmegaQ) else s
    if point not in (0, 1):
        raise ValueError("only q = 0 and q = 1 are supported")
    return series.map_coefficients(lambda c: eval_at(c, point))


def omega_infinity(order: int, mode: Literal["limit", "closed_form"] = "limit") -> TreeSeries:
    if mode == "limit":
        oq = omega_q(order).series
        return oq.map_by_degree(lambda n, c: infinity_limit(c, n - 1))
    if mode == "closed_form":
        terms = {}
        for n in range(1, order + 1):
            for t in enumerate_trees(n):
                terms[t] = mpq((-1) ** (n - 1), aut_count(t))
        return TreeSeries(terms, order=order)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# quotient images


def extract_qlog(s: OmegaQ) -> list[RationalFunction]:
    """Coefficients of the linear trees Lnr_1..Lnr_N."""
    return [s.coefficient(linear_tree(n)) for n in range(1, s.order + 1)]


def qlog_coefficient(n: int) -> RationalFunction:
    return RationalFunction((-1) ** (n - 1), q_integer(n))


def extract_carlitz(s: OmegaQ) -> list[RationalFunction]:
    """beta_n = n! * coefficient of the corolla with n leaves, n = 0..N-1."""
    return [s.coefficient(corolla(n + 1)) * math.factorial(n) for n in range(s.order)]


def carlitz_oracle(count: int) -> list[RationalFunction]:
    """Carlitz q-Bernoulli numbers beta_0..beta_{count-1}.

    beta_0 = 1 and q * sum_{k<=n} C(n, k) q^k beta_k - beta_n = [n == 1].
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    betas = [RationalFunction(1)]
    for n in range(1, count):
        rhs = RationalFunction(1 if n == 1 else 0)
        for k in range(n):
            rhs = rhs - betas[k] * (Q.shift(k) * math.comb(n, k))
        betas.append(rhs / (QPolynomial.monomial(n + 1) - ONE))
    return betas


# vector fields: polynomials in x with the right pre-Lie product f <- g = x f' g
_X = QPolynomial.monomial(1)


def _vf_product(f: QPolynomial, g: QPolynomial) -> QPolynomial:
    return (f.derivative() * g).shift(1)


@lru_cache(maxsize=None)
def _vf_act(forest: Forest) -> QPolynomial:
    """Image of the tree whose root carries the given forest of subtrees."""
    if not forest.components:
        return _X
    c = forest.components[-1]
    rest = forest.components[:-1]
    # rest * c = (rest + {c}) + sum over components r of rest of (rest - r + r <- c)
    out = _vf_product(_vf_act(Forest(rest)), vf_tree_image(c))
    for i, r in enumerate(rest):
        others = rest[:i] + rest[i + 1 :]
        for t, k in graft_terms(r, c):
            out = out - _vf_act(Forest(others + (t,))) * k
    return out


def vf_tree_image(t: RootedTree) -> QPolynomial:
    return _vf_act(Forest(t.children))


def vector_field_image(s: Series) -> list:
    """Coefficients of x^1..x^order in the vector-field image of a tree series.

    Computed by structural recursion and cross-checked against the per-degree
    sums of coefficients; a mismatch raises ConsistencyError.
    """
    image: dict[int, object] = {}
    sums: dict[int, object] = {}
    for t, c in s.items():
        poly = vf_tree_image(t)
        for e, a in enumerate(poly.coeffs):
            if a:
                image[e] = image.get(e, 0) + c * a
        sums[t.degree] = sums.get(t.degree, 0) + c
    structural = [image.get(n, 0) for n in range(1, s.order + 1)]
    direct = [sums.get(n, 0) for n in range(1, s.order + 1)]
    for n, (a, b) in enumerate(zip(structural, direct), start=1):
        if not (a == b):
            raise ConsistencyError(f"degree {n}: structural image {a} != coefficient sum {b}")
    return structural


# ---------------------------------------------------------------------------
# denominators


@dataclass
class DenominatorReport:
    ok: bool = True
    violations: list[str] = field(default_factory=list)
    table: list[tuple[int, str, dict[int, int]]] = field(default_factory=list)

    def format(self) -> str:
        lines = [f"denominator bound: {'pass' if self.ok else 'FAIL'}"]
        for n, enc, fac in self.table:
            den = "*".join(f"Phi{d}" + (f"^{e}" if e > 1 else "") for d, e in sorted(fac.items())) or "1"
            lines.append(f"  {n:>2}  {enc:<24} {den}")
        lines.extend(f"  violation: {v}" for v in self.violations)
        return "\n".join(lines)


def denominator_check(s: OmegaQ) -> DenominatorReport:
    """Each degree-n denominator must divide prod_{d=2..n} Phi_d."""
    report = DenominatorReport()
    bounds = {}
    for t, c in s.series.sorted_items():
        n = t.degree
        if n not in bounds:
            b = ONE
            for d in range(2, n + 1):
                b = b * cyclotomic(d)
            bounds[n] = b
        c = as_rational_function(c)
        fac, rem = cyclotomic_factorization(c.den)
        report.table.append((n, t.encoding, fac))
        if bounds[n] % c.den:
            report.ok = False
            report.violations.append(f"degree {n} tree {t.encoding}: denominator {c.den}")
    return report


def valuation_violations(s: OmegaQ) -> list[str]:
    """Trees whose coefficient has valuation at infinity below #T - 1."""
    out = []
    for t, c in s.series.sorted_items():
        v = infinity_valuation(c)
        if v < t.degree - 1:
            out.append(f"{t.encoding}: valuation {v} < {t.degree - 1}")
    return out


def clear_caches() -> None:
    """Drop the memoized Omega / Omega_q results (used for cold timings)."""
    for fn in (_classical_parts, _omega_q_recursion, _omega_q_forks):
        fn.cache_clear()
