"""Independent decoders and oracles shared by the test modules."""

from fractions import Fraction

from omegaq.arith import QPolynomial, RationalFunction, cyclotomic
from omegaq.trees import RootedTree


def tree_from_child_counts(code: str) -> RootedTree:
    """Decode a preorder listing of child counts, e.g. "200" is the 3-vertex corolla."""
    counts = [int(ch) for ch in code]
    pos = 0

    def build():
        nonlocal pos
        k = counts[pos]
        pos += 1
        return RootedTree([build() for _ in range(k)])

    t = build()
    assert pos == len(counts), code
    return t


def poly(*coeffs) -> QPolynomial:
    """Polynomial from ascending integer coefficients."""
    return QPolynomial(list(coeffs))


def phi_product(*ds) -> QPolynomial:
    out = QPolynomial([1])
    for d in ds:
        out = out * cyclotomic(d)
    return out


def rf(num: QPolynomial, scale, *phis) -> RationalFunction:
    """num / (scale * prod Phi_d)."""
    return RationalFunction(num, phi_product(*phis) * scale)


def bernoulli_by_inversion(count: int) -> list[Fraction]:
    """B_0..B_{count-1} from inverting (e^x - 1)/x = sum x^k/(k+1)! as a power series."""
    a = [Fraction(1, _fact(k + 1)) for k in range(count)]
    inv = [Fraction(1)]
    for n in range(1, count):
        inv.append(-sum(a[k] * inv[n - k] for k in range(1, n + 1)))
    return [inv[n] * _fact(n) for n in range(count)]


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
