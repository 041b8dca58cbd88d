"""Combinatorial stability oracle for models with all multiplicities equal to one.

With ``m_k = 1`` every subrepresentation is spanned by a subset of vertices,
so the verdict reduces to a finite enumeration of arrow-closed subsets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..errors import UnsupportedMultiplicity
from ..stability import Verdict, VerdictKind, Witness
from .quiver import ModelPoint, QuiverModel

__all__ = ["brute_force_verdict", "closed_subsets", "support_edges"]


def support_edges(model: QuiverModel, b: ModelPoint) -> set[tuple[int, int]]:
    """Pairs ``(i, j)`` carrying at least one nonzero arrow matrix."""
    return {(i, j) for (i, j, a), blk in b.blocks().items() if (blk != 0).any()}


def _is_closed(S: frozenset, edges) -> bool:
    return all(j in S for i, j in edges if i in S)


def closed_subsets(model: QuiverModel, b: ModelPoint) -> list[frozenset]:
    """Proper nonempty vertex subsets closed under the nonzero arrows of ``b``."""
    edges = support_edges(model, b)
    l = model.n_vertices
    out = []
    for size in range(1, l):
        for S in combinations(range(l), size):
            S = frozenset(S)
            if _is_closed(S, edges):
                out.append(S)
    return out


def brute_force_verdict(model: QuiverModel, b: ModelPoint) -> Verdict:
    """Enumerate subrepresentations and apply the sign conditions on ``P(S) = sum_(k in S) p_k``."""
    if any(m != 1 for m in model.mults):
        raise UnsupportedMultiplicity("the oracle needs every multiplicity equal to 1")
    edges = support_edges(model, b)
    everything = frozenset(range(model.n_vertices))
    values: dict[str, Fraction] = {}
    witnesses = []
    semistable = stable = polystable = True
    for S in closed_subsets(model, b):
        name = "{" + ",".join(str(k) for k in sorted(S)) + "}"
        v = sum((model.levels[k] for k in S), Fraction(0))
        values[name] = v
        if v > 0:
            semistable = stable = polystable = False
            witnesses.append(Witness(name, v, "violating"))
        elif v == 0:
            stable = False
            polystable = polystable and _is_closed(everything - S, edges)
            witnesses.append(Witness(name, v, "binding"))
    if not semistable:
        kind = VerdictKind.UNSTABLE
    elif stable:
        kind = VerdictKind.STABLE
    elif polystable:
        kind = VerdictKind.POLYSTABLE
    else:
        kind = VerdictKind.SEMISTABLE
    return Verdict(kind, tuple(witnesses), values)
