"""SeriesBundle: the serialized form of every series the CLI can compute.

JSON schema ``omegaq.bundle/1``::

    {
      "schema": "omegaq.bundle/1",
      "kind": "omega-q",
      "order": 5,
      "basis": "rooted-tree",
      "terms": [{"degree": 2, "key": "[[]]", "coeff": {"num": [...], "den": [...]}}, ...],
      "meta": {"version": "0.1.0", "mode": "recursion", "elapsed": 0.01}
    }

``basis`` is ``rooted-tree``, ``planar-binary-tree`` or ``index`` (for the
coefficient lists qlog and carlitz, where ``key`` is the decimal index).
Coefficients always use the rational-function JSON form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arith import RationalFunction, as_rational_function, format_rational_function

SCHEMA = "omegaq.bundle/1"
VERSION = "0.1.0"

KINDS = ("omega", "omega-q", "omega-0", "omega-inf", "qlog", "carlitz", "dend-omega-q")

BASIS = {
    "omega": "rooted-tree",
    "omega-q": "rooted-tree",
    "omega-0": "rooted-tree",
    "omega-inf": "rooted-tree",
    "qlog": "index",
    "carlitz": "index",
    "dend-omega-q": "planar-binary-tree",
}


class BundleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    degree: int
    key: str
    coeff: RationalFunction


@dataclass
class SeriesBundle:
    kind: str
    order: int
    terms: list[Term]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BundleFormatError(f"unknown kind {self.kind!r}")
        self.terms = sorted(self.terms, key=lambda t: (t.degree, t.key))

    @property
    def basis(self) -> str:
        return BASIS[self.kind]

    @classmethod
    def from_series(cls, kind: str, series, meta: dict | None = None) -> SeriesBundle:
        terms = [Term(k.degree, k.encoding, as_rational_function(c)) for k, c in series.items()]
        return cls(kind, series.order, terms, dict(meta or {}))

    @classmethod
    def from_list(cls, kind: str, values: list, start: int, meta: dict | None = None) -> SeriesBundle:
        """Coefficient list indexed from ``start``; zero entries are dropped."""
        terms = [
            Term(i, str(i), as_rational_function(v)) for i, v in enumerate(values, start=start) if v
        ]
        return cls(kind, len(values), terms, dict(meta or {}))

    def same_content(self, other: SeriesBundle) -> bool:
        """Equality ignoring meta."""
        return (self.kind, self.order, self.terms) == (other.kind, other.order, other.terms)


def to_json(bundle: SeriesBundle) -> str:
    doc = {
        "schema": SCHEMA,
        "kind": bundle.kind,
        "order": bundle.order,
        "basis": bundle.basis,
        "terms": [{"degree": t.degree, "key": t.key, "coeff": t.coeff.to_json()} for t in bundle.terms],
        "meta": bundle.meta,
    }
    return json.dumps(doc, indent=1)


def from_json(text: str) -> SeriesBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleFormatError(f"invalid JSON: {exc}") from None
    if doc.get("schema") != SCHEMA:
        raise BundleFormatError(f"unsupported schema {doc.get('schema')!r}")
    try:
        terms = [Term(int(t["degree"]), str(t["key"]), RationalFunction.from_json(t["coeff"])) for t in doc["terms"]]
        bundle = SeriesBundle(doc["kind"], int(doc["order"]), terms, dict(doc.get("meta", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleFormatError(f"malformed bundle: {exc}") from None
    if doc.get("basis", bundle.basis) != bundle.basis:
        raise BundleFormatError(f"basis {doc['basis']!r} does not match kind {bundle.kind!r}")
    return bundle


def to_text(bundle: SeriesBundle) -> str:
    """One block per degree; denominators over cyclotomic factors."""
    lines = [f"# {bundle.kind}  order {bundle.order}"]
    for key in ("version", "mode", "elapsed"):
        if key in bundle.meta:
            lines.append(f"# {key}: {bundle.meta[key]}")
    if bundle.basis == "index":
        lines.append("")
        lines.extend(f"n = {t.key:>2}:  {format_rational_function(t.coeff)}" for t in bundle.terms)
        return "\n".join(lines) + "\n"
    current = None
    for t in bundle.terms:
        if t.degree != current:
            current = t.degree
            lines.append("")
            lines.append(f"degree {current}:")
        lines.append(f"  {format_rational_function(t.coeff):>40}  {t.key}")
    return "\n".join(lines) + "\n"


__all__ = ["SCHEMA", "KINDS", "SeriesBundle", "Term", "BundleFormatError", "to_json", "from_json", "to_text"]
