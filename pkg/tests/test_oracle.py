from collections import Counter
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcrit.errors import UnsupportedMultiplicity
from pcrit.moment_flow import (
    FlowOptions,
    ModelPoint,
    brute_force_verdict,
    build_model,
    closed_subsets,
    flow_verdict,
    random_model,
    random_point,
    subspace_p_value,
)
from pcrit.stability import VerdictKind

from strategies import seeds


def arrow_model(p=(0, 0)):
    return build_model([(1, 1, p[0]), (1, 1, p[1])], {(0, 1): 1})


def arrow_point(model, x=1.0):
    return ModelPoint.from_blocks(model, {(0, 1, 0): [[x]]})


def test_examples():
    m = arrow_model()
    v = brute_force_verdict(m, arrow_point(m))
    assert v.kind is VerdictKind.SEMISTABLE
    assert v.values == {"{1}": 0}
    m = arrow_model((1, -1))
    assert brute_force_verdict(m, arrow_point(m)).kind is VerdictKind.STABLE
    m = arrow_model()
    assert brute_force_verdict(m, ModelPoint.zeros(m)).kind is VerdictKind.POLYSTABLE


def test_unstable_witness():
    m = arrow_model((-1, 1))
    v = brute_force_verdict(m, arrow_point(m))
    assert v.kind is VerdictKind.UNSTABLE
    assert [(w.name, w.status) for w in v.witnesses] == [("{1}", "violating")]


def test_multiplicity_rejected():
    m = build_model([(1, 2, 0), (1, 1, 0)], {(0, 1): 1})
    with pytest.raises(UnsupportedMultiplicity):
        brute_force_verdict(m, ModelPoint.zeros(m))


@st.composite
def unit_models(draw):
    l = draw(st.integers(1, 4))
    p = draw(st.lists(st.integers(-2, 2), min_size=l, max_size=l))
    p[-1] -= sum(p)
    r = draw(st.lists(st.integers(1, 3), min_size=l, max_size=l))
    support = draw(st.lists(st.booleans(), min_size=l * l, max_size=l * l))
    arrows = {(i, j): 1 for (i, j), on in zip(product(range(l), repeat=2), support) if on}
    m = build_model(list(zip(r, [1] * l, p)), arrows)
    zeroed = draw(st.lists(st.booleans(), min_size=len(arrows), max_size=len(arrows)))
    blocks = {(i, j, 0): [[0.0 if z else 1.0 + 0.5j]] for (i, j), z in zip(sorted(arrows), zeroed)}
    return m, ModelPoint.from_blocks(m, blocks)


@settings(max_examples=200)
@given(unit_models())
def test_closed_subsets_are_exactly_the_subrepresentations(data):
    m, b = data
    l = m.n_vertices
    found = set(closed_subsets(m, b))
    for bits in product([0, 1], repeat=l):
        S = frozenset(k for k in range(l) if bits[k])
        if not 0 < len(S) < l:
            continue
        # S is a subrepresentation iff the coordinate subspace is mapped into itself
        inS = np.array(bits, dtype=bool)
        leak = np.any(np.abs(b.data[:, ~inS][:, :, inS]) > 0)
        assert (S in found) == (not leak)


@settings(max_examples=200)
@given(unit_models())
def test_values_are_p_of_coordinate_subspaces(data):
    m, b = data
    v = brute_force_verdict(m, b)
    for S in closed_subsets(m, b):
        name = "{" + ",".join(map(str, sorted(S))) + "}"
        dims = [1 if k in S else 0 for k in range(m.n_vertices)]
        assert v.values[name] == subspace_p_value(m, dims)
    vals = list(v.values.values())
    if any(x > 0 for x in vals):
        assert v.kind is VerdictKind.UNSTABLE
    elif all(x < 0 for x in vals):
        assert v.kind is VerdictKind.STABLE
    else:
        assert v.kind in (VerdictKind.POLYSTABLE, VerdictKind.SEMISTABLE)


@pytest.mark.slow
def test_agrees_with_flow_on_random_quivers():
    counts = Counter()
    opts = FlowOptions(grad_tol=1e-10)
    for s in seeds(30):
        rng = np.random.default_rng(s)
        m = random_model(rng)
        b = random_point(m, rng)
        oracle = brute_force_verdict(m, b).kind
        assert flow_verdict(m, b, opts).kind is oracle, s
        counts[oracle] += 1
    assert counts[VerdictKind.STABLE] and counts[VerdictKind.UNSTABLE]


@pytest.mark.slow
def test_agrees_with_flow_on_sparse_points():
    # zeroed entries and balanced levels exercise the semistable and polystable cases
    counts = Counter()
    opts = FlowOptions(grad_tol=1e-10)
    for s in seeds(40):
        rng = np.random.default_rng(10_000 + s)
        m = random_model(rng, p_range=1)
        b = random_point(m, rng)
        b = ModelPoint(m, np.where(rng.random(b.data.shape) < 0.3, 0, b.data))
        oracle = brute_force_verdict(m, b).kind
        assert flow_verdict(m, b, opts).kind is oracle, s
        counts[oracle] += 1
    assert counts[VerdictKind.SEMISTABLE] and counts[VerdictKind.POLYSTABLE]


def test_levels_with_fractions():
    m = build_model([(2, 1, Fraction(1, 2)), (1, 1, Fraction(-1, 2))], {(0, 1): 1})
    assert brute_force_verdict(m, ModelPoint.from_blocks(m, {(0, 1, 0): [[2.0]]})).is_stable
