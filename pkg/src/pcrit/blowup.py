"""Built-in data on the blow-up of the projective plane at one point.

Two ample line bundles ``L1 = O(13H - 11D)`` and ``L2 = O(6H - 2D)`` share the
J-equation constant ``5/16`` with respect to the Kähler class ``2H - D``;
their sum ``E`` is the rank-2 bundle that is deformed in the worked example.
"""

from __future__ import annotations

from .bundles import BundleTopology, CurveCone, direct_sum, line_bundle
from .cohomology import CohomologyClass, IntersectionRing, blowup_p2_ring

__all__ = ["RING", "H", "D", "OMEGA", "ALPHA", "L1", "L2", "E", "CURVES", "bundle", "named_bundles"]

RING: IntersectionRing = blowup_p2_ring()
H: CohomologyClass = RING.gen("H")
D: CohomologyClass = RING.gen("D")

OMEGA = 2 * H - D
"""Base Kähler class."""

ALPHA = H - 2 * D
"""Deformation direction of the Kähler class."""

L1: BundleTopology = line_bundle(RING, 13 * H - 11 * D)
L2: BundleTopology = line_bundle(RING, 6 * H - 2 * D)
E: BundleTopology = direct_sum(L1, L2)

CURVES = CurveCone((H - D, D))
"""Generators of the cone of curves."""


def named_bundles() -> dict[str, BundleTopology]:
    return {"L1": L1, "L2": L2, "E": E}


def bundle(name: str) -> BundleTopology:
    try:
        return named_bundles()[name]
    except KeyError:
        raise KeyError(f"unknown built-in bundle {name!r}; choose from L1, L2, E") from None
