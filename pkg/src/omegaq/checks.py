"""Registry of named verification checks, as run by ``omegaq verify``.

Every check takes a :class:`CheckContext` and returns a :class:`CheckResult`;
``ok`` is False exactly when an identity fails, and ``detail`` then names the
first counterexample.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from .arith import PoleError, bernoulli, eval_at
from .dendriform import (
    DendSeries,
    comb_inverse_check,
    dend_prelie,
    omega_q_dend_explicit,
    omega_q_dend_recursive,
    planar_trees,
    verify_EB,
)
from .omega import (
    ConsistencyError,
    carlitz_oracle,
    denominator_check,
    exp_forest,
    exp_star_action,
    extract_carlitz,
    extract_qlog,
    iterated_graft_exp,
    omega_classical,
    omega_infinity,
    omega_q,
    omega_q_via_forks,
    qlog_coefficient,
    right_action,
    specialize,
    valuation_violations,
    vector_field_image,
)
from .series import ForestSeries, Series, TreeSeries
from .trees import DOT, EMPTY_FOREST, Forest, enumerate_trees, graft_series, linear_tree, project_pi


@dataclass(frozen=True)
class CheckContext:
    order: int
    seed: int = 0
    jobs: int = 1
    samples: int = 20


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    lines: list[str] = field(default_factory=list)

    def format(self) -> str:
        head = f"{self.name}: {'pass' if self.ok else 'FAIL'}"
        if self.detail:
            head += f" ({self.detail})"
        return "\n".join([head, *self.lines])


Check = Callable[[CheckContext], CheckResult]
REGISTRY: dict[str, Check] = {}


def register(name: str):
    def deco(fn: Check) -> Check:
        REGISTRY[name] = fn
        return fn

    return deco


def run_check(name: str, ctx: CheckContext) -> CheckResult:
    if name not in REGISTRY:
        raise KeyError(name)
    return REGISTRY[name](ctx)


def _compare(name: str, a: Series, b: Series) -> CheckResult:
    diff = a.difference_report(b, limit=3)
    if isinstance(a, DendSeries) and not (a.unit == getattr(b, "unit", 0)):
        diff.insert(0, f"unit: {a.unit} != {getattr(b, 'unit', 0)}")
    return CheckResult(name, not diff, "; ".join(diff))


# ---------------------------------------------------------------------------
# random inputs


def random_tree_series(rng: random.Random, order: int, density: float = 0.5) -> TreeSeries:
    """Sparse series with small rational coefficients and no degree-0 part."""
    terms = {}
    for n in range(1, order + 1):
        for t in enumerate_trees(n):
            if rng.random() < density:
                terms[t] = mpq(rng.randint(-5, 5), rng.randint(1, 4))
    return TreeSeries(terms, order=order)


def random_dend_series(rng: random.Random, order: int, density: float = 0.5) -> DendSeries:
    terms = {}
    for n in range(1, order + 1):
        for t in planar_trees(n):
            if rng.random() < density:
                terms[t] = mpq(rng.randint(-5, 5), rng.randint(1, 4))
    return DendSeries(terms, order=order)


def associator(product, x, y, z, order):
    return product(product(x, y, order), z, order) - product(x, product(y, z, order), order)


def prelie_violation(product, basis: Callable[[int], list], make: Callable, order: int) -> str | None:
    """First basis triple of total degree <= order whose associator is not symmetric in y, z."""
    elems = [make(t) for n in range(1, order - 1) for t in basis(n)]
    for x, y, z in itertools.product(elems, repeat=3):
        deg = sum(next(iter(s.terms)).degree for s in (x, y, z))
        if deg > order:
            continue
        lhs = associator(product, x, y, z, order)
        rhs = associator(product, x, z, y, order)
        if not (lhs == rhs):
            keys = [next(iter(s.terms)).encoding for s in (x, y, z)]
            return f"associator not symmetric at {keys}"
    return None


# ---------------------------------------------------------------------------
# checks


@register("prelie-axiom")
def check_prelie(ctx: CheckContext) -> CheckResult:
    bad = prelie_violation(
        graft_series, enumerate_trees, lambda t: TreeSeries({t: mpq(1)}, order=ctx.order), ctx.order
    )
    if bad:
        return CheckResult("prelie-axiom", False, f"grafting: {bad}")
    bad = prelie_violation(
        dend_prelie, planar_trees, lambda t: DendSeries({t: mpq(1)}, order=ctx.order), ctx.order
    )
    if bad:
        return CheckResult("prelie-axiom", False, f"dendriform: {bad}")
    return CheckResult("prelie-axiom", True)


@register("pi-exp")
def check_pi_exp(ctx: CheckContext) -> CheckResult:
    rng = random.Random(ctx.seed)
    for i in range(ctx.samples):
        s = random_tree_series(rng, ctx.order, density=0.3)
        res = _compare("pi-exp", project_pi(exp_forest(s, ctx.order)), exp_star_action(s, ctx.order))
        if not res.ok:
            res.detail = f"sample {i}: {res.detail}"
            return res
    return CheckResult("pi-exp", True, f"{ctx.samples} random series")


@register("exp-star")
def check_exp_star(ctx: CheckContext) -> CheckResult:
    omega = omega_classical(ctx.order).series
    return _compare("exp-star", exp_star_action(omega, ctx.order), TreeSeries({DOT: mpq(1)}, order=ctx.order))


def dots_exponential(order: int) -> ForestSeries:
    """sum_n 1/n! times the forest of n isolated vertices."""
    terms = {EMPTY_FOREST: mpq(1)}
    coeff = mpq(1)
    for n in range(1, order + 1):
        coeff /= n
        terms[Forest((DOT,) * n)] = coeff
    return ForestSeries(terms, order=order)


@register("exp-omega-forest")
def check_exp_omega_forest(ctx: CheckContext) -> CheckResult:
    omega = omega_classical(ctx.order).series
    return _compare("exp-omega-forest", exp_forest(omega, ctx.order), dots_exponential(ctx.order))


@register("fork-equivalence")
def check_forks(ctx: CheckContext) -> CheckResult:
    a = omega_q(ctx.order).series
    b = omega_q_via_forks(ctx.order).series
    res = _compare("fork-equivalence", a, b)
    if res.ok:
        res.detail = f"{len(a)} trees"
    return res


@register("dend-formula")
def check_dend_formula(ctx: CheckContext) -> CheckResult:
    a = omega_q_dend_recursive(ctx.order)
    b = omega_q_dend_explicit(ctx.order, jobs=ctx.jobs)
    res = _compare("dend-formula", a, b)
    if res.ok:
        res.detail = f"{len(b)} planar binary trees"
    return res


@register("q1-specialization")
def check_q1(ctx: CheckContext) -> CheckResult:
    oq = omega_q(ctx.order)
    try:
        at1 = specialize(oq, 1)
        at0 = specialize(oq, 0)
    except PoleError as exc:
        return CheckResult("q1-specialization", False, f"pole at q = {exc.point}")
    res = _compare("q1-specialization", at1, omega_classical(ctx.order).series)
    if not res.ok:
        return res
    lin = TreeSeries({linear_tree(n): mpq((-1) ** (n - 1)) for n in range(1, ctx.order + 1)}, order=ctx.order)
    res = _compare("q1-specialization", at0, lin)
    if not res.ok:
        res.detail = f"q = 0: {res.detail}"
    return res


@register("denominators")
def check_denominators(ctx: CheckContext) -> CheckResult:
    report = denominator_check(omega_q(ctx.order))
    lines = report.format().splitlines()[1:]
    return CheckResult("denominators", report.ok, "; ".join(report.violations[:3]), lines)


@register("infinity")
def check_infinity(ctx: CheckContext) -> CheckResult:
    bad = valuation_violations(omega_q(ctx.order))
    if bad:
        return CheckResult("infinity", False, "; ".join(bad[:3]))
    limit = omega_infinity(ctx.order, "limit")
    res = _compare("infinity", limit, omega_infinity(ctx.order, "closed_form"))
    if not res.ok:
        return res
    # Omega_inf acted on by exp(Omega) gives the single vertex
    omega = omega_classical(ctx.order).series
    dot = TreeSeries({DOT: mpq(1)}, order=ctx.order)
    via_forest = right_action(limit, exp_forest(omega, ctx.order), ctx.order)
    res = _compare("infinity", via_forest, dot)
    if not res.ok:
        res.detail = f"Omega_inf action (forest form): {res.detail}"
        return res
    res = _compare("infinity", iterated_graft_exp(limit, omega, ctx.order), dot)
    if not res.ok:
        res.detail = f"Omega_inf action (iterated grafts): {res.detail}"
    return res


@register("carlitz")
def check_carlitz(ctx: CheckContext) -> CheckResult:
    got = extract_carlitz(omega_q(ctx.order))
    want = carlitz_oracle(ctx.order)
    for n, (a, b) in enumerate(zip(got, want)):
        if not (a == b):
            return CheckResult("carlitz", False, f"beta_{n}: {a} != {b}")
        if not (eval_at(a, 1) == bernoulli(n)):
            return CheckResult("carlitz", False, f"beta_{n}(1) = {eval_at(a, 1)} != B_{n}")
    return CheckResult("carlitz", True, f"beta_0..beta_{ctx.order - 1}")


@register("qlog")
def check_qlog(ctx: CheckContext) -> CheckResult:
    for n, c in enumerate(extract_qlog(omega_q(ctx.order)), start=1):
        if not (c == qlog_coefficient(n)):
            return CheckResult("qlog", False, f"Lnr_{n}: {c} != {qlog_coefficient(n)}")
    return CheckResult("qlog", True)


@register("comb-inverse")
def check_comb_inverse(ctx: CheckContext) -> CheckResult:
    rep = comb_inverse_check(ctx.order)
    return CheckResult("comb-inverse", rep.ok, "" if rep.ok else f"first failing degree {rep.first_failing_degree}")


@register("EB")
def check_eb(ctx: CheckContext) -> CheckResult:
    rep = verify_EB(ctx.order)
    detail = "" if rep.ok else f"{rep.detail} in degree {rep.first_failing_degree}"
    return CheckResult("EB", rep.ok, detail)


@register("vector-field")
def check_vector_field(ctx: CheckContext) -> CheckResult:
    rng = random.Random(ctx.seed)
    inputs = [("Omega", omega_classical(ctx.order).series)]
    inputs += [(f"sample {i}", random_tree_series(rng, ctx.order)) for i in range(ctx.samples // 2)]
    for label, s in inputs:
        try:
            vector_field_image(s)
        except ConsistencyError as exc:
            return CheckResult("vector-field", False, f"{label}: {exc}")
    return CheckResult("vector-field", True, f"{len(inputs)} series")


CHECK_NAMES = tuple(REGISTRY)

__all__ = [
    "CHECK_NAMES",
    "REGISTRY",
    "CheckContext",
    "CheckResult",
    "dots_exponential",
    "random_dend_series",
    "random_tree_series",
    "run_check",
]
