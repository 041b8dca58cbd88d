"""Exact-rational graded intersection rings given by a finite multiplication table.

A ring is described by a :class:`RingSpec`: labelled basis elements with
bidegrees, structure constants for products of basis pairs, and the label of
the fundamental (top-degree) class on which integration is normalised.
Classes are sparse maps ``label -> Fraction``.

>>> R = blowup_p2_ring()
>>> H, D = R.gen("H"), R.gen("D")
>>> R.integrate((2 * H - D) * (13 * H - 11 * D))
Fraction(15, 1)
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DuplicateLabel,
    MalformedInput,
    MissingFundamental,
    MissingUnit,
    NonAssociative,
    NonCommutative,
    InvalidRingSpec,
    RingMismatch,
    UnknownLabel,
    WrongDegree,
)
from .exact import as_fraction, format_rational, parse_rational

__all__ = [
    "CohomologyClass",
    "IntersectionRing",
    "RingSpec",
    "blowup_p2_ring",
    "integrate",
    "multiply",
    "parse_class",
    "power",
    "ring_from_json",
    "ring_from_spec",
    "ring_to_json",
]

Bidegree = tuple[int, int]


@dataclass(frozen=True)
class RingSpec:
    """Raw description of a ring; validated by :func:`ring_from_spec`.

    ``products`` maps an unordered-or-ordered pair of labels to the product
    class as ``{label: rational}``. Pairs that are absent multiply to zero,
    products with the unit are implicit, and a pair given in one order only is
    filled in by symmetry (all degrees in use are even).
    """

    dim: int
    basis: tuple[tuple[str, int, int], ...]
    products: Mapping[tuple[str, str], Mapping[str, Fraction]]
    fundamental: str


class CohomologyClass:
    """An element of an :class:`IntersectionRing`. Immutable.

    Supports ``+``, ``-``, scalar ``*`` and cup product ``*`` between classes.
    """

    __slots__ = ("ring", "_coeffs", "_hash")

    def __init__(self, ring: "IntersectionRing", coeffs: Mapping[str, object] = ()):
        items = {}
        for label, c in dict(coeffs).items():
            if label not in ring.degrees:
                raise UnknownLabel(f"label {label!r} is not in the ring basis")
            c = as_fraction(c)
            if c:
                items[label] = items.get(label, Fraction(0)) + c
        self.ring = ring
        self._coeffs = tuple(sorted((k, v) for k, v in items.items() if v))
        self._hash = None

    @property
    def coeffs(self) -> dict[str, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, label: str) -> Fraction:
        if label not in self.ring.degrees:
            raise UnknownLabel(label)
        return dict(self._coeffs).get(label, Fraction(0))

    def labels(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self._coeffs)

    def bidegrees(self) -> set[Bidegree]:
        return {self.ring.degrees[k] for k, _ in self._coeffs}

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_homogeneous(self, bidegree: Bidegree) -> bool:
        """True when every nonzero component has the given bidegree (zero counts)."""
        return all(self.ring.degrees[k] == tuple(bidegree) for k, _ in self._coeffs)

    def component(self, bidegree: Bidegree) -> "CohomologyClass":
        bidegree = tuple(bidegree)
        return CohomologyClass(
            self.ring, {k: v for k, v in self._coeffs if self.ring.degrees[k] == bidegree}
        )

    def _check(self, other: "CohomologyClass"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch("classes live in different rings")

    def __add__(self, other):
        if not isinstance(other, CohomologyClass):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        out = self.coeffs
        for k, v in other._coeffs:
            out[k] = out.get(k, Fraction(0)) + v
        return CohomologyClass(self.ring, out)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return CohomologyClass(self.ring, {k: -v for k, v in self._coeffs})

    def __sub__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CohomologyClass):
            return self.ring.multiply(self, other)
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return CohomologyClass(self.ring, {k: c * v for k, v in self._coeffs})

    def __rmul__(self, other):
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return CohomologyClass(self.ring, {k: c * v for k, v in self._coeffs})

    def __truediv__(self, other):
        c = as_fraction(other)
        return CohomologyClass(self.ring, {k: v / c for k, v in self._coeffs})

    def __pow__(self, k: int):
        return self.ring.power(self, k)

    def __eq__(self, other):
        if isinstance(other, CohomologyClass):
            return (self.ring is other.ring or self.ring == other.ring) and (
                self._coeffs == other._coeffs
            )
        if other == 0:
            return not self._coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._coeffs)
        return self._hash

    def __repr__(self):
        return f"CohomologyClass({self})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        order = {lab: i for i, lab in enumerate(self.ring.labels)}
        parts = []
        for label, c in sorted(self._coeffs, key=lambda kv: order[kv[0]]):
            mag = abs(c)
            term = label if mag == 1 else f"{format_rational(mag)}{label}"
            if label == self.ring.unit_label:
                term = format_rational(mag)
            parts.append(("-" if c < 0 else "+", term))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sgn, term in parts[1:]:
            out += f" {sgn} {term}"
        return out

    def to_json(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in self._coeffs}


class IntersectionRing:
    """Validated ring with exact multiplication and integration.

    Build with :func:`ring_from_spec`; instances are immutable.
    """

    def __init__(self, spec: RingSpec, table, unit_label: str):
        self.spec = spec
        self.dim = spec.dim
        self.labels = tuple(lab for lab, _, _ in spec.basis)
        self.degrees = {lab: (p, q) for lab, p, q in spec.basis}
        self.fundamental_label = spec.fundamental
        self.unit_label = unit_label
        self._table = table

    def __eq__(self, other):
        if not isinstance(other, IntersectionRing):
            return NotImplemented
        return self is other or (
            self.dim == other.dim
            and self.degrees == other.degrees
            and self.fundamental_label == other.fundamental_label
            and self._table == other._table
        )

    def __hash__(self):
        return hash((self.dim, self.labels, self.fundamental_label))

    def __repr__(self):
        return f"IntersectionRing(dim={self.dim}, basis={list(self.labels)})"

    # constructors -----------------------------------------------------------

    def element(self, coeffs: Mapping[str, object] = (), **kw) -> CohomologyClass:
        merged = dict(coeffs)
        merged.update(kw)
        return CohomologyClass(self, merged)

    def gen(self, label: str) -> CohomologyClass:
        return CohomologyClass(self, {label: 1})

    def one(self) -> CohomologyClass:
        return self.gen(self.unit_label)

    def zero(self) -> CohomologyClass:
        return CohomologyClass(self, {})

    def pt(self) -> CohomologyClass:
        return self.gen(self.fundamental_label)

    def labels_of_degree(self, k: int) -> tuple[str, ...]:
        """Labels of bidegree ``(k, k)``."""
        return tuple(lab for lab in self.labels if self.degrees[lab] == (k, k))

    # algebra ------------------------------------------------------------------

    def _own(self, a: CohomologyClass):
        if a.ring is not self and a.ring != self:
            raise RingMismatch("class does not belong to this ring")

    def multiply(self, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
        self._own(a)
        self._own(b)
        out: dict[str, Fraction] = {}
        for la, ca in a._coeffs:
            for lb, cb in b._coeffs:
                for lr, cr in self._table.get((la, lb), ()):
                    out[lr] = out.get(lr, Fraction(0)) + ca * cb * cr
        return CohomologyClass(self, out)

    def power(self, a: CohomologyClass, k: int) -> CohomologyClass:
        if k < 0:
            raise ValueError("exponent must be non-negative")
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def integrate(self, a: CohomologyClass) -> Fraction:
        """Coefficient of the fundamental class; ``a`` must be of top degree."""
        self._own(a)
        top = (self.dim, self.dim)
        stray = [lab for lab in a.labels() if self.degrees[lab] != top]
        if stray:
            raise WrongDegree(f"cannot integrate a class with components {stray}")
        return a[self.fundamental_label]

    def pairing(self, a: CohomologyClass, b: CohomologyClass) -> Fraction:
        """``∫ a·b``, keeping only the top-degree part of the product."""
        return self.multiply(a, b)[self.fundamental_label]


def _multiply_table(table, a: dict, b: dict) -> dict:
    out: dict[str, Fraction] = {}
    for la, ca in a.items():
        for lb, cb in b.items():
            for lr, cr in table.get((la, lb), ()):
                out[lr] = out.get(lr, Fraction(0)) + ca * cb * cr
    return {k: v for k, v in out.items() if v}


def ring_from_spec(spec: RingSpec) -> IntersectionRing:
    """Validate ``spec`` and build the ring.

    Raises
    ------
    DuplicateLabel, MissingFundamental, MissingUnit
        Malformed basis.
    NonCommutative, NonAssociative
        The multiplication table fails graded commutativity or associativity
        on some basis pair or triple (checked exhaustively).
    """
    n = int(spec.dim)
    if n < 0:
        raise InvalidRingSpec("dimension must be non-negative")
    degrees: dict[str, Bidegree] = {}
    for lab, p, q in spec.basis:
        if lab in degrees:
            raise DuplicateLabel(f"duplicate basis label {lab!r}")
        if not (0 <= p <= n and 0 <= q <= n):
            raise InvalidRingSpec(f"bidegree of {lab!r} outside [0, {n}]")
        degrees[lab] = (int(p), int(q))
    tops = [lab for lab, d in degrees.items() if d == (n, n)]
    if len(tops) != 1 or spec.fundamental not in tops:
        raise MissingFundamental(
            f"need exactly one basis element of bidegree ({n},{n}) named by 'fundamental'"
        )
    units = [lab for lab, d in degrees.items() if d == (0, 0)]
    if len(units) != 1:
        raise MissingUnit("need exactly one basis element of bidegree (0,0)")
    unit = units[0]

    raw: dict[tuple[str, str], dict[str, Fraction]] = {}
    for (la, lb), res in spec.products.items():
        for lab in (la, lb, *res):
            if lab not in degrees:
                raise UnknownLabel(f"product table mentions unknown label {lab!r}")
        res = {k: as_fraction(v) for k, v in res.items() if as_fraction(v)}
        da, db = degrees[la], degrees[lb]
        total = (da[0] + db[0], da[1] + db[1])
        for lab in res:
            if sum(degrees[lab]) != sum(total):
                raise InvalidRingSpec(
                    f"{la}*{lb} has a component {lab!r} of the wrong total degree"
                )
        if total[0] > n or total[1] > n:
            res = {}
        if (la, lb) in raw and raw[(la, lb)] != res:
            raise InvalidRingSpec(f"conflicting entries for {la}*{lb}")
        raw[(la, lb)] = res

    table: dict[tuple[str, str], tuple[tuple[str, Fraction], ...]] = {}
    for la in degrees:
        for lb in degrees:
            if la == unit:
                res = {lb: Fraction(1)}
            elif lb == unit:
                res = {la: Fraction(1)}
            elif (la, lb) in raw:
                res = raw[(la, lb)]
            else:
                res = raw.get((lb, la), {})
                if (lb, la) in raw:
                    da, db = sum(degrees[la]), sum(degrees[lb])
                    sgn = -1 if (da * db) % 2 else 1
                    res = {k: sgn * v for k, v in res.items()}
            if res:
                table[(la, lb)] = tuple(sorted(res.items()))

    for la, lb in itertools.product(degrees, repeat=2):
        da, db = sum(degrees[la]), sum(degrees[lb])
        sgn = -1 if (da * db) % 2 else 1
        ab = dict(table.get((la, lb), ()))
        ba = {k: sgn * v for k, v in table.get((lb, la), ())}
        if ab != ba:
            raise NonCommutative(f"{la}*{lb} != ±{lb}*{la}")

    for la, lb, lc in itertools.product(degrees, repeat=3):
        left = _multiply_table(table, _multiply_table(table, {la: 1}, {lb: 1}), {lc: 1})
        right = _multiply_table(table, {la: 1}, _multiply_table(table, {lb: 1}, {lc: 1}))
        if left != right:
            raise NonAssociative(f"({la}*{lb})*{lc} != {la}*({lb}*{lc})")

    return IntersectionRing(spec, table, unit)


# module-level spellings of the ring operations ------------------------------

def multiply(ring: IntersectionRing, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    return ring.multiply(a, b)


def integrate(ring: IntersectionRing, a: CohomologyClass) -> Fraction:
    return ring.integrate(a)


def power(ring: IntersectionRing, a: CohomologyClass, k: int) -> CohomologyClass:
    return ring.power(a, k)


def blowup_p2_ring() -> IntersectionRing:
    """Cohomology of the blow-up of the projective plane at a point.

    Basis ``1, H, D, pt`` with ``H² = pt``, ``D² = -pt``, ``H·D = 0``.
    """
    return _BLP2


def _build_blp2() -> IntersectionRing:
    spec = RingSpec(
        dim=2,
        basis=(("1", 0, 0), ("H", 1, 1), ("D", 1, 1), ("pt", 2, 2)),
        products={
            ("H", "H"): {"pt": Fraction(1)},
            ("D", "D"): {"pt": Fraction(-1)},
            ("H", "D"): {},
        },
        fundamental="pt",
    )
    return ring_from_spec(spec)


_BLP2 = _build_blp2()


# serialisation ------------------------------------------------------------------

def ring_from_json(obj) -> IntersectionRing:
    """Build a ring from the JSON ring-spec format.

    ``{"dim": n, "basis": [{"label", "p", "q"}], "products": [{"a", "b",
    "result": {label: "num/den"}}], "fundamental": label}``
    """
    try:
        basis = tuple((str(b["label"]), int(b["p"]), int(b["q"])) for b in obj["basis"])
        products: dict[tuple[str, str], dict[str, Fraction]] = {}
        for entry in obj.get("products", []):
            key = (str(entry["a"]), str(entry["b"]))
            if key in products:
                raise DuplicateLabel(f"product {key} listed twice")
            products[key] = {str(k): parse_rational(v) for k, v in entry["result"].items()}
        spec = RingSpec(int(obj["dim"]), basis, products, str(obj["fundamental"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"malformed ring spec: {exc}") from exc
    return ring_from_spec(spec)


def ring_to_json(ring: IntersectionRing) -> dict:
    products = []
    for (la, lb), res in sorted(ring.spec.products.items()):
        products.append(
            {"a": la, "b": lb, "result": {k: format_rational(v) for k, v in sorted(res.items())}}
        )
    return {
        "dim": ring.dim,
        "basis": [{"label": lab, "p": p, "q": q} for lab, p, q in ring.spec.basis],
        "products": products,
        "fundamental": ring.fundamental_label,
    }


def class_from_json(ring: IntersectionRing, obj) -> CohomologyClass:
    if isinstance(obj, str):
        return parse_class(ring, obj)
    if not isinstance(obj, dict):
        raise MalformedInput(f"expected a class object, got {obj!r}")
    return CohomologyClass(ring, {str(k): parse_rational(v) for k, v in obj.items()})


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)?\s*")


def parse_class(ring: IntersectionRing, text: str) -> CohomologyClass:
    """Parse a linear expression such as ``"2H - D"`` or ``"13H-11D + 24/5 pt"``.

    A bare number denotes a multiple of the unit class.
    """
    s = text.strip()
    if not s:
        raise MalformedInput("empty class expression")
    pos, coeffs, first = 0, {}, True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise MalformedInput(f"cannot parse class expression {text!r}")
        sgn, num, label = m.groups()
        if sgn is None and not first:
            raise MalformedInput(f"missing operator in {text!r}")
        if num is None and label is None:
            raise MalformedInput(f"cannot parse class expression {text!r}")
        c = Fraction(num) if num else Fraction(1)
        if sgn == "-":
            c = -c
        lab = label if label is not None else ring.unit_label
        if lab not in ring.degrees:
            raise UnknownLabel(f"label {lab!r} is not in the ring basis")
        coeffs[lab] = coeffs.get(lab, Fraction(0)) + c
        pos, first = m.end(), False
    return CohomologyClass(ring, coeffs)
