"""Exact arithmetic over Q and Q(q).

Rationals are ``gmpy2.mpq``.  Polynomials in ``q`` are dense tuples of
rationals in ascending degree; rational functions are kept reduced with a
monic denominator so that equality is structural.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable

from gmpy2 import mpq

BigRational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at one of its poles."""

    def __init__(self, point):
        super().__init__(f"pole at q = {point}")
        self.point = point


class DivergenceError(ArithmeticError):
    """Limit at q = infinity does not exist for the requested shift."""


def as_rational(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class QPolynomial:
    """Dense univariate polynomial in q with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list) -> QPolynomial:
        # coeffs already mpq; trims in place
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> QPolynomial:
        return cls._raw([_ZERO] * k + [as_rational(c)])

    @classmethod
    def constant(cls, c) -> QPolynomial:
        return cls._raw([as_rational(c)])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("valuation of the zero polynomial")

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, mpq)):
            return self.coeffs == QPolynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("QPolynomial", self.coeffs))
        return self._hash

    def __neg__(self) -> QPolynomial:
        return QPolynomial._raw([-c for c in self.coeffs])

    def __add__(self, other) -> QPolynomial:
        if not isinstance(other, QPolynomial):
            if isinstance(other, (int, Fraction, mpq)):
                other = QPolynomial.constant(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return QPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> QPolynomial:
        if not isinstance(other, QPolynomial):
            if isinstance(other, (int, Fraction, mpq)):
                other = QPolynomial.constant(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        out = list(a) + [_ZERO] * (len(b) - len(a))
        for i, c in enumerate(b):
            out[i] = out[i] - c
        return QPolynomial._raw(out)

    def __rsub__(self, other) -> QPolynomial:
        return (-self) + other

    def __mul__(self, other) -> QPolynomial:
        if isinstance(other, QPolynomial):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return QPolynomial._raw([])
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return QPolynomial._raw(out)
        if isinstance(other, (int, mpq)):
            if not other:
                return QPolynomial._raw([])
            return QPolynomial._raw([c * other for c in self.coeffs])
        if isinstance(other, Fraction):
            return self * mpq(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QPolynomial:
        result = QPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> QPolynomial:
        """Multiply by q**k."""
        if not self.coeffs or k == 0:
            return self
        return QPolynomial._raw([_ZERO] * k + list(self.coeffs))

    def __divmod__(self, other: QPolynomial):
        if not isinstance(other, QPolynomial):
            other = QPolynomial.constant(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = 1 / other.coeffs[-1]
        if len(rem) <= db:
            return QPolynomial._raw([]), self
        quot = [_ZERO] * (len(rem) - db)
        b = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            c = c * lead_inv
            k = i - db
            quot[k] = c
            for j in range(db + 1):
                rem[k + j] -= c * b[j]
        return QPolynomial._raw(quot), QPolynomial._raw(rem[:db])

    def __floordiv__(self, other) -> QPolynomial:
        return divmod(self, other)[0]

    def __mod__(self, other) -> QPolynomial:
        return divmod(self, other)[1]

    def exact_div(self, other: QPolynomial) -> QPolynomial:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: QPolynomial) -> bool:
        """True when self divides other."""
        return not divmod(other, self)[1]

    def monic(self) -> QPolynomial:
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        inv = 1 / lead
        return QPolynomial._raw([c * inv for c in self.coeffs])

    def derivative(self) -> QPolynomial:
        return QPolynomial._raw([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, a):
        a = as_rational(a)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def content(self) -> mpq:
        """Positive rational c such that self / c has coprime integer coefficients."""
        if not self.coeffs:
            return _ONE
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, int(c.numerator))
            den = den * int(c.denominator) // math.gcd(den, int(c.denominator))
        return mpq(num, den)

    def to_text(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"QPolynomial({self.to_text()})"

    __str__ = to_text


Q = QPolynomial.monomial(1)
ONE = QPolynomial.constant(1)


def poly_gcd(a: QPolynomial, b: QPolynomial) -> QPolynomial:
    """Monic gcd by the Euclidean algorithm over Q (gcd(0, 0) = 0)."""
    while b:
        a, b = b, divmod(a, b)[1].monic()
    return a.monic()


# ---------------------------------------------------------------------------
# memo tables

_lock = threading.Lock()
_cyclotomic: dict[int, QPolynomial] = {1: QPolynomial((-1, 1))}
_bernoulli: list[mpq] = [_ONE]


def q_integer(n: int) -> QPolynomial:
    if n < 1:
        raise ValueError("q_integer requires n >= 1")
    return QPolynomial._raw([_ONE] * n)


def q_factorial(n: int) -> QPolynomial:
    out = ONE
    for i in range(1, n + 1):
        out = out * q_integer(i)
    return out


_qbinom_cache: dict[tuple[int, int], QPolynomial] = {}


def q_binomial(n: int, k: int) -> QPolynomial:
    """Gaussian binomial coefficient, by the q-Pascal rule."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"q_binomial requires 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return ONE
    key = (n, k)
    hit = _qbinom_cache.get(key)
    if hit is None:
        hit = q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).shift(k)
        _qbinom_cache[key] = hit
    return hit


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic(d: int) -> QPolynomial:
    if d < 1:
        raise ValueError("cyclotomic requires d >= 1")
    hit = _cyclotomic.get(d)
    if hit is not None:
        return hit
    p = QPolynomial.monomial(d) - ONE
    for e in divisors(d)[:-1]:
        p = p.exact_div(cyclotomic(e))
    with _lock:
        return _cyclotomic.setdefault(d, p)


def bernoulli(k: int) -> mpq:
    """Bernoulli numbers of x/(exp(x)-1), so B_1 = -1/2."""
    if k < 0:
        raise ValueError("bernoulli requires k >= 0")
    if k < len(_bernoulli):
        return _bernoulli[k]
    with _lock:
        while len(_bernoulli) <= k:
            m = len(_bernoulli)
            # sum_{j<=m} C(m+1, j) B_j = 0
            s = sum((math.comb(m + 1, j) * _bernoulli[j] for j in range(m)), _ZERO)
            _bernoulli.append(-s / (m + 1))
    return _bernoulli[k]


def memo_tables() -> dict:
    """Serializable snapshot of the cyclotomic and Bernoulli memo tables."""
    return {
        "cyclotomic": {str(d): [str(c) for c in p.coeffs] for d, p in sorted(_cyclotomic.items())},
        "bernoulli": [str(b) for b in _bernoulli],
    }


def load_memo_tables(data: dict) -> None:
    with _lock:
        for d, coeffs in data.get("cyclotomic", {}).items():
            _cyclotomic.setdefault(int(d), QPolynomial(coeffs))
        values = [mpq(b) for b in data.get("bernoulli", [])]
        if len(values) > len(_bernoulli):
            _bernoulli[:] = values


def cyclotomic_factorization(p: QPolynomial) -> tuple[dict[int, int], QPolynomial]:
    """Trial-divide p by cyclotomic polynomials.

    Returns ``(multiplicities, remainder)`` with p = remainder * prod Phi_d**e.
    Only factors of degree <= deg(p) are tried.
    """
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    factors: dict[int, int] = {}
    rem = p
    d = 1
    # phi(d) >= sqrt(d/2), so no Phi_d with d > 2*deg^2 can divide
    limit = 2 * p.degree * p.degree + 2
    while d <= limit and rem.degree > 0:
        if totient(d) <= rem.degree:
            phi_d = cyclotomic(d)
            while rem.degree >= phi_d.degree:
                quot, r = divmod(rem, phi_d)
                if r:
                    break
                rem = quot
                factors[d] = factors.get(d, 0) + 1
        d += 1
    return factors, rem


def cyclotomic_product(factors: dict[int, int]) -> QPolynomial:
    out = ONE
    for d, e in sorted(factors.items()):
        out = out * cyclotomic(d) ** e
    return out


# ---------------------------------------------------------------------------


def _as_poly(x) -> QPolynomial:
    if isinstance(x, QPolynomial):
        return x
    return QPolynomial.constant(x)


class RationalFunction:
    """Element of Q(q): reduced fraction with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = QPolynomial._raw([]), ONE
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lead = den.leading
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _trusted(cls, num: QPolynomial, den: QPolynomial) -> RationalFunction:
        f = object.__new__(cls)
        f.num = num
        f.den = den
        f._hash = None
        return f

    @classmethod
    def over_cyclotomics(cls, num: QPolynomial, factors: dict[int, int]) -> RationalFunction:
        """num / prod Phi_d**e, reduced by trial division.

        Each Phi_d is irreducible, so cancelling every cyclotomic factor that
        divides the numerator leaves a reduced fraction.
        """
        if not num:
            return cls._trusted(num, ONE)
        left = {}
        for d, e in sorted(factors.items()):
            phi_d = cyclotomic(d)
            while e:
                quot, r = divmod(num, phi_d)
                if r:
                    break
                num = quot
                e -= 1
            if e:
                left[d] = e
        return cls._trusted(num, cyclotomic_product(left))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, mpq, QPolynomial)):
            return self.den.degree == 0 and self.num == _as_poly(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self) -> RationalFunction:
        return RationalFunction._trusted(-self.num, self.den)

    def __add__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (int, Fraction, mpq, QPolynomial)):
                return RationalFunction._trusted(self.num + _as_poly(other) * self.den, self.den)
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> RationalFunction:
        return self + (-other)

    def __rsub__(self, other) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return RationalFunction(self.num * other.num, self.den * other.den)
        if isinstance(other, (int, Fraction, mpq)):
            return RationalFunction._trusted(self.num * other, self.den) if other else RationalFunction()
        if isinstance(other, QPolynomial):
            return RationalFunction(self.num * other, self.den)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> RationalFunction:
        return RationalFunction(other) * self.inverse()

    def __call__(self, a) -> mpq:
        return eval_at(self, a)

    def to_text(self) -> str:
        return format_rational_function(self)

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()})"

    __str__ = to_text

    def to_json(self) -> dict:
        enc = lambda p: [f"{int(c.numerator)}/{int(c.denominator)}" for c in p.coeffs]
        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, data: dict) -> RationalFunction:
        return cls(QPolynomial(data["num"]), QPolynomial(data["den"]))


def as_rational_function(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(x)


def eval_at(f, a) -> mpq:
    """Exact value f(a); raises PoleError at a root of the reduced denominator."""
    f = as_rational_function(f)
    a = as_rational(a)
    d = f.den(a)
    if not d:
        raise PoleError(a)
    return f.num(a) / d


def infinity_valuation(f) -> int | float:
    """deg(den) - deg(num); math.inf for f = 0."""
    f = as_rational_function(f)
    if not f:
        return math.inf
    return f.den.degree - f.num.degree


def infinity_limit(f, shift: int) -> mpq:
    """Limit of q**shift * f as q -> infinity."""
    f = as_rational_function(f)
    v = infinity_valuation(f)
    if v < shift:
        raise DivergenceError(f"valuation {v} < shift {shift} for {f}")
    if v > shift:
        return _ZERO
    return f.num.leading / f.den.leading


def format_rational_function(f: RationalFunction) -> str:
    """Text form with the denominator written over cyclotomic factors.

    ``q/(2*Phi2*Phi3)`` style when the denominator factors completely into
    cyclotomic polynomials, expanded monic denominator otherwise.
    """
    if not f.num:
        return "0"
    if f.den.degree == 0:
        return f.num.to_text()
    factors, rem = cyclotomic_factorization(f.den)
    if rem.degree > 0:
        return f"({f.num.to_text()})/({f.den.to_text()})"
    # num = c * q^v * P with P primitive over Z, positive leading coefficient
    v = f.num.valuation()
    c = f.num.content()
    if f.num.leading < 0:
        c = -c
    prim = QPolynomial._raw([x / c for x in f.num.coeffs[v:]])
    a, b = int(c.numerator), int(c.denominator)
    numer = []
    if abs(a) != 1:
        numer.append(str(abs(a)))
    if v:
        numer.append("q" if v == 1 else f"q^{v}")
    if prim.degree > 0:
        numer.append(f"({prim.to_text()})")
    if not numer:
        numer.append("1")
    denom = [] if b == 1 else [str(b)]
    for d, e in sorted(factors.items()):
        denom.append(f"Phi{d}" if e == 1 else f"Phi{d}^{e}")
    den_text = denom[0] if len(denom) == 1 else f"({'*'.join(denom)})"
    return ("-" if a < 0 else "") + "*".join(numer) + "/" + den_text
