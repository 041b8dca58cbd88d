"""Topological bundle data: rank and Chern character components."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .cohomology import CohomologyClass, IntersectionRing, class_from_json
from .errors import MalformedInput, OutOfRange, RingMismatch, WrongDegree
from .exact import format_rational, parse_rational

__all__ = [
    "BundleTopology",
    "CurveCone",
    "bundle_from_json",
    "bundle_to_json",
    "chern_component",
    "complement",
    "cone_from_json",
    "direct_sum",
    "is_ample_surface",
    "line_bundle",
]


@dataclass(frozen=True)
class BundleTopology:
    """Rank plus ``ch_0, ..., ch_n``; ``ch_k`` has bidegree ``(k, k)``."""

    ring: IntersectionRing
    rank: int
    ch: tuple[CohomologyClass, ...]

    def __post_init__(self):
        n = self.ring.dim
        if int(self.rank) != self.rank or self.rank < 1:
            raise OutOfRange(f"rank must be a positive integer, got {self.rank}")
        ch = tuple(self.ch)
        if len(ch) != n + 1:
            raise WrongDegree(f"expected {n + 1} Chern character components, got {len(ch)}")
        for k, c in enumerate(ch):
            if c.ring != self.ring:
                raise RingMismatch("Chern character component from another ring")
            if not c.is_homogeneous((k, k)):
                raise WrongDegree(f"ch_{k} must have bidegree ({k},{k}), got {c}")
        if ch[0] != self.rank * self.ring.one():
            raise WrongDegree(f"ch_0 = {ch[0]} does not match rank {self.rank}")
        object.__setattr__(self, "ch", ch)

    def __add__(self, other: "BundleTopology") -> "BundleTopology":
        return direct_sum(self, other)

    def c1(self) -> CohomologyClass:
        return self.ch[1] if self.ring.dim >= 1 else self.ring.zero()

    def ch_top(self) -> Fraction:
        """``∫ ch_n``."""
        return self.ring.integrate(self.ch[-1])

    def __str__(self):
        parts = ", ".join(str(c) for c in self.ch)
        return f"rank {self.rank}, ch = ({parts})"


@dataclass(frozen=True)
class CurveCone:
    generators: tuple[CohomologyClass, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a curve cone needs at least one generator")
        for g in gens:
            if not g.is_homogeneous((1, 1)) or g.is_zero():
                raise WrongDegree(f"curve class {g} is not a nonzero (1,1) class")
        object.__setattr__(self, "generators", gens)


def line_bundle(ring: IntersectionRing, c1: CohomologyClass) -> BundleTopology:
    """Line bundle with first Chern class ``c1``: ``ch_k = c1^k / k!``."""
    if not c1.is_homogeneous((1, 1)):
        raise WrongDegree(f"first Chern class must be a (1,1) class, got {c1}")
    ch = tuple(ring.power(c1, k) / factorial(k) for k in range(ring.dim + 1))
    return BundleTopology(ring, 1, ch)


def trivial_bundle(ring: IntersectionRing, rank: int = 1) -> BundleTopology:
    ch = (rank * ring.one(),) + tuple(ring.zero() for _ in range(ring.dim))
    return BundleTopology(ring, rank, ch)


def direct_sum(a: BundleTopology, b: BundleTopology) -> BundleTopology:
    if a.ring != b.ring:
        raise RingMismatch("cannot sum bundles over different rings")
    return BundleTopology(a.ring, a.rank + b.rank, tuple(x + y for x, y in zip(a.ch, b.ch)))


def complement(total: BundleTopology, sub: BundleTopology) -> BundleTopology:
    """Topology of ``total / sub``: rank and ``ch`` subtract."""
    if total.ring != sub.ring:
        raise RingMismatch("cannot subtract bundles over different rings")
    if not 0 < sub.rank < total.rank:
        raise OutOfRange("sub-bundle rank must lie strictly between 0 and the total rank")
    return BundleTopology(
        total.ring, total.rank - sub.rank, tuple(x - y for x, y in zip(total.ch, sub.ch))
    )


def chern_component(E: BundleTopology, k: int) -> CohomologyClass:
    if not 0 <= k <= E.ring.dim:
        raise OutOfRange(f"ch_{k} requested on a ring of dimension {E.ring.dim}")
    return E.ch[k]


def is_ample_surface(ring: IntersectionRing, c1: CohomologyClass, cone: CurveCone) -> bool:
    """Nakai–Moishezon test on a surface with a finitely generated curve cone.

    True iff ``∫c1² > 0`` and ``∫c1·C > 0`` for every generator ``C``;
    nef-but-not-ample classes return False.
    """
    if ring.dim != 2:
        raise WrongDegree("the surface ampleness test needs a ring of dimension 2")
    if not c1.is_homogeneous((1, 1)):
        raise WrongDegree(f"{c1} is not a (1,1) class")
    if ring.integrate(c1 * c1) <= 0:
        return False
    return all(ring.integrate(c1 * C) > 0 for C in cone.generators)


# serialisation ------------------------------------------------------------------

def bundle_from_json(ring: IntersectionRing, obj) -> BundleTopology:
    """``{"rank": r, "ch": {"0": rat, "1": {label: rat}, ...}}``; missing components are 0."""
    try:
        rank = int(obj["rank"])
        raw = obj.get("ch", {})
        ch = []
        for k in range(ring.dim + 1):
            entry = raw.get(str(k))
            if k == 0:
                c0 = parse_rational(entry) if entry is not None else Fraction(rank)
                ch.append(c0 * ring.one())
            elif entry is None:
                ch.append(ring.zero())
            else:
                ch.append(class_from_json(ring, entry))
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise MalformedInput(f"malformed bundle: {exc}") from exc
    return BundleTopology(ring, rank, tuple(ch))


def bundle_to_json(E: BundleTopology) -> dict:
    ch = {"0": format_rational(E.rank)}
    for k in range(1, E.ring.dim + 1):
        ch[str(k)] = E.ch[k].to_json()
    return {"rank": E.rank, "ch": ch}


def cone_from_json(ring: IntersectionRing, obj: Sequence) -> CurveCone:
    if not isinstance(obj, list):
        raise MalformedInput("a curve cone is a JSON list of classes")
    return CurveCone(tuple(class_from_json(ring, g) for g in obj))
