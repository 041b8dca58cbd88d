"""Local stability verdicts, stability cones and the Song criterion on surfaces.

A verdict is read off the signs of ``P_zeta(F)`` over a family of admissible
sub-bundles ``F`` of a fixed total bundle ``E``:

* semistable: ``P_zeta(F) <= 0`` for every ``F``;
* stable: every inequality is strict;
* polystable: semistable, and every ``F`` with ``P_zeta(F) = 0`` has an
  invariant complement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import blowup
from .bundles import BundleTopology, CurveCone
from .cohomology import CohomologyClass, IntersectionRing
from .equations import EquationParams, dhym_surface_rescaled, j_equation_params, p_value
from .errors import (
    ConsistencyError,
    DimensionMismatch,
    NormalizationBroken,
    OutOfRange,
    OutOfValidityBox,
    PositivityViolated,
    RingMismatch,
    Unnormalized,
    ZeroDenominator,
)
from .exact import as_fraction, format_scalar, sign

__all__ = [
    "AdmissibleFamily",
    "Example8Report",
    "Membership",
    "PolyhedralCone",
    "SongResult",
    "SubBundle",
    "Verdict",
    "VerdictKind",
    "classify",
    "classify_example_8",
    "closed_form_A",
    "closed_form_p_L1",
    "cone_membership",
    "cone_to_json",
    "example_8_families",
    "song_j_solvable",
    "stability_cone",
]


class VerdictKind(enum.Enum):
    STABLE = "stable"
    POLYSTABLE = "polystable"
    SEMISTABLE = "semistable"
    UNSTABLE = "unstable"

    @property
    def is_semistable(self) -> bool:
        return self is not VerdictKind.UNSTABLE

    @property
    def is_polystable(self) -> bool:
        return self in (VerdictKind.STABLE, VerdictKind.POLYSTABLE)

    @property
    def is_stable(self) -> bool:
        return self is VerdictKind.STABLE


@dataclass(frozen=True)
class SubBundle:
    """An admissible sub-bundle and whether its orthogonal complement is invariant.

    ``complement_invariant=None`` means the information is unavailable.
    """

    F: BundleTopology
    complement_invariant: bool | None = None
    name: str = ""
    complement: BundleTopology | None = None


@dataclass(frozen=True)
class AdmissibleFamily:
    total: BundleTopology
    subs: tuple[SubBundle, ...]

    def __post_init__(self):
        subs = tuple(self.subs)
        for i, s in enumerate(subs):
            if s.F.ring != self.total.ring:
                raise RingMismatch("sub-bundle over a different ring")
            if not 0 < s.F.rank < self.total.rank:
                raise OutOfRange(f"sub-bundle {s.name or i} must have rank in (0, {self.total.rank})")
            if s.complement is not None:
                if s.complement.rank + s.F.rank != self.total.rank or any(
                    a + b != c for a, b, c in zip(s.F.ch, s.complement.ch, self.total.ch)
                ):
                    raise ValueError(f"complement of {s.name or i} does not add up to the total bundle")
        object.__setattr__(self, "subs", subs)

    def names(self) -> list[str]:
        return [s.name or f"F{i}" for i, s in enumerate(self.subs)]


@dataclass(frozen=True)
class Witness:
    name: str
    value: object
    status: str  # "violating", "binding" or "binding-unknown-complement"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witnesses: tuple[Witness, ...] = ()
    values: dict = field(default_factory=dict, compare=False)
    warnings: tuple[str, ...] = ()

    @property
    def is_semistable(self) -> bool:
        return self.kind.is_semistable

    @property
    def is_polystable(self) -> bool:
        return self.kind.is_polystable

    @property
    def is_stable(self) -> bool:
        return self.kind.is_stable

    def to_json(self) -> dict:
        return {
            "verdict": self.kind.value,
            "witnesses": [
                {"name": w.name, "value": format_scalar(w.value), "status": w.status}
                for w in self.witnesses
            ],
            "values": {k: format_scalar(v) for k, v in self.values.items()},
            "warnings": list(self.warnings),
        }


def classify(
    ring: IntersectionRing,
    zeta: EquationParams,
    fam: AdmissibleFamily,
    simple: bool = False,
) -> Verdict:
    """Local stability verdict of the deformed bundle described by ``fam``.

    When ``simple`` is set the bundle cannot split, so a vanishing ``P_zeta(F)``
    never counts as polystable regardless of the complement flags.
    """
    if p_value(ring, zeta, fam.total) != 0:
        raise Unnormalized("P_zeta(E) must vanish on the total bundle")
    values = {}
    witnesses = []
    notes = []
    semistable = stable = polystable = True
    for name, s in zip(fam.names(), fam.subs):
        v = p_value(ring, zeta, s.F)
        values[name] = v
        sg = sign(v)
        if sg > 0:
            semistable = stable = polystable = False
            witnesses.append(Witness(name, v, "violating"))
        elif sg == 0:
            stable = False
            flag = False if simple else s.complement_invariant
            if flag is None:
                polystable = False
                witnesses.append(Witness(name, v, "binding-unknown-complement"))
                notes.append(f"{name}: P = 0 but complement invariance unknown")
            else:
                polystable = polystable and flag
                witnesses.append(Witness(name, v, "binding"))
    if not semistable:
        kind = VerdictKind.UNSTABLE
    elif stable:
        kind = VerdictKind.STABLE
    elif polystable:
        kind = VerdictKind.POLYSTABLE
    else:
        kind = VerdictKind.SEMISTABLE
    return Verdict(kind, tuple(witnesses), values, tuple(notes))


# stability cones ------------------------------------------------------------------

@dataclass(frozen=True)
class PolyhedralCone:
    """``{t : sum_j A[i][j] t_j <= c[i] for all i}`` around a basepoint ``zeta_0``.

    Row ``i`` is the inequality ``P(zeta_0 + sum_j t_j delta_j, F_i) <= 0``.
    """

    basepoint: EquationParams
    directions: tuple[EquationParams, ...]
    A: tuple[tuple, ...]
    c: tuple
    row_names: tuple[str, ...]
    direction_names: tuple[str, ...]


class Region(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class Membership(NamedTuple):
    region: Region
    binding: tuple[str, ...]
    violated: tuple[str, ...]


def stability_cone(
    ring: IntersectionRing,
    zeta0: EquationParams,
    directions: Sequence[EquationParams],
    fam: AdmissibleFamily,
    direction_names: Sequence[str] | None = None,
) -> PolyhedralCone:
    if p_value(ring, zeta0, fam.total) != 0:
        raise NormalizationBroken("the basepoint does not satisfy P(E) = 0")
    for j, d in enumerate(directions):
        if p_value(ring, d, fam.total) != 0:
            raise NormalizationBroken(f"direction {j} does not preserve P(E) = 0")
    A = tuple(tuple(p_value(ring, d, s.F) for d in directions) for s in fam.subs)
    c = tuple(-p_value(ring, zeta0, s.F) for s in fam.subs)
    names = tuple(direction_names) if direction_names else tuple(f"t{j}" for j in range(len(directions)))
    if len(names) != len(directions):
        raise DimensionMismatch("one name per direction")
    return PolyhedralCone(zeta0, tuple(directions), A, c, tuple(fam.names()), names)


def cone_membership(cone: PolyhedralCone, t: Sequence) -> Membership:
    t = [as_fraction(x) for x in t]
    if len(t) != len(cone.directions):
        raise DimensionMismatch(f"expected {len(cone.directions)} coordinates, got {len(t)}")
    binding, violated = [], []
    for name, row, ci in zip(cone.row_names, cone.A, cone.c):
        slack = ci - sum((a * x for a, x in zip(row, t)), Fraction(0))
        s = sign(slack)
        if s < 0:
            violated.append(name)
        elif s == 0:
            binding.append(name)
    if violated:
        region = Region.EXTERIOR
    elif binding:
        region = Region.BOUNDARY
    else:
        region = Region.INTERIOR
    return Membership(region, tuple(binding), tuple(violated))


def cone_point(cone: PolyhedralCone, t: Sequence) -> EquationParams:
    """``zeta_0 + sum_j t_j delta_j``."""
    out = cone.basepoint
    for tj, d in zip(t, cone.directions):
        out = out + as_fraction(tj) * d
    return out


def cone_to_json(cone: PolyhedralCone) -> dict:
    return {
        "A": [[format_scalar(a) for a in row] for row in cone.A],
        "c": [format_scalar(x) for x in cone.c],
        "directions": list(cone.direction_names),
        "rows": list(cone.row_names),
    }


# Song's criterion -------------------------------------------------------------------

class SongResult(NamedTuple):
    solvable: bool
    ratios: tuple[Fraction, ...]
    threshold: Fraction


def song_j_solvable(
    ring: IntersectionRing, omega: CohomologyClass, L: BundleTopology, cone: CurveCone
) -> SongResult:
    """J-equation solvability of a line bundle on a surface.

    Solvable iff ``∫omega·C / ∫c1(L)·C < 2 c_J`` for every curve generator ``C``.
    """
    if L.rank != 1:
        raise OutOfRange("Song's criterion applies to line bundles")
    _, c_j = j_equation_params(ring, omega, L)
    threshold = 2 * c_j
    ratios = []
    for C in cone.generators:
        den = ring.integrate(L.ch[1] * C)
        if den == 0:
            raise ZeroDenominator(f"c1(L)·{C} = 0")
        if den < 0:
            raise PositivityViolated(f"c1(L)·{C} < 0; L is not ample")
        ratios.append(ring.integrate(omega * C) / den)
    return SongResult(all(r < threshold for r in ratios), tuple(ratios), threshold)


# worked example on the blow-up -----------------------------------------------------

def closed_form_p_L1(eps1, eps2) -> Fraction:
    e1, e2 = as_fraction(eps1), as_fraction(eps2)
    return Fraction(24, 5) * e2 + Fraction(3, 80) * (1 - e2 * e2) * (5 - 11 * e2) * e1 * e1


def closed_form_A(eps1, eps2) -> Fraction:
    e1, e2 = as_fraction(eps1), as_fraction(eps2)
    return e2 + Fraction(1, 128) * (1 - e2 * e2) * (5 - 11 * e2) * e1 * e1


def example_8_families() -> dict[str, tuple[AdmissibleFamily, bool]]:
    """Admissible families of the split bundle and its two non-split extensions.

    Values are ``(family, simple)``. ``E0 = L1 ⊕ L2`` has both summands with
    invariant complements; ``E1`` (extension of ``L2`` by ``L1``) only has
    ``L1``; ``E2`` only has ``L2``.
    """
    L1, L2, E = blowup.L1, blowup.L2, blowup.E
    return {
        "E0": (AdmissibleFamily(E, (SubBundle(L1, True, "L1"), SubBundle(L2, True, "L2"))), False),
        "E1": (AdmissibleFamily(E, (SubBundle(L1, False, "L1"),)), True),
        "E2": (AdmissibleFamily(E, (SubBundle(L2, False, "L2"),)), True),
    }


@dataclass(frozen=True)
class Example8Report:
    eps1: Fraction
    eps2: Fraction
    A: Fraction
    p_L1: Fraction
    c_j: Fraction
    c_hym: Fraction
    c_const: Fraction
    verdicts: dict
    solvable: dict

    def to_json(self) -> dict:
        return {
            "eps1": format_scalar(self.eps1),
            "eps2": format_scalar(self.eps2),
            "A": format_scalar(self.A),
            "P_L1": format_scalar(self.p_L1),
            "c_J": format_scalar(self.c_j),
            "c_HYM": format_scalar(self.c_hym),
            "C": format_scalar(self.c_const),
            "solvable": dict(self.solvable),
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
        }


def check_validity_box(eps1, eps2) -> None:
    """Raise :class:`OutOfValidityBox` unless ``0 <= eps1 <= 1`` and the
    deformed Kähler class stays positive on both curve generators and on itself.

    The box is a checkable superset; correctness of the verdicts is only
    guaranteed close to the origin.
    """
    e1, e2 = as_fraction(eps1), as_fraction(eps2)
    if not 0 <= e1 <= 1:
        raise OutOfValidityBox(f"eps1 = {e1} outside [0, 1]")
    R = blowup.RING
    w = blowup.OMEGA + e2 * blowup.ALPHA
    if R.integrate(w * w) <= 0:
        raise OutOfValidityBox(f"eps2 = {e2}: the Kähler class has non-positive volume")
    for C in blowup.CURVES.generators:
        if R.integrate(w * C) <= 0:
            raise OutOfValidityBox(f"eps2 = {e2}: the Kähler class is not positive on {C}")


def classify_example_8(eps1, eps2) -> Example8Report:
    """Solvability of the rescaled dHYM equation on ``E0``, ``E1`` and ``E2``.

    ``E0`` is solvable iff ``A = 0``, ``E1`` iff ``A < 0``, ``E2`` iff ``A > 0``,
    where ``A = (5/24) P(L1)`` is computed from the invariant and checked
    against its closed form.
    """
    e1, e2 = as_fraction(eps1), as_fraction(eps2)
    check_validity_box(e1, e2)
    R = blowup.RING
    zeta, c_j, c_hym, c_const = dhym_surface_rescaled(R, blowup.OMEGA, blowup.ALPHA, e1, e2, blowup.E)
    p1 = p_value(R, zeta, blowup.L1)
    A = Fraction(5, 24) * p1
    if p1 != closed_form_p_L1(e1, e2) or A != closed_form_A(e1, e2):
        raise ConsistencyError(f"P(L1) = {p1} disagrees with the closed form at ({e1}, {e2})")
    verdicts, solvable = {}, {}
    for name, (fam, simple) in example_8_families().items():
        v = classify(R, zeta, fam, simple=simple)
        verdicts[name] = v
        solvable[name] = v.is_polystable
    return Example8Report(e1, e2, A, p1, c_j, c_hym, c_const, verdicts, solvable)
