import json
from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from pcrit.errors import LevelImbalance, MalformedInput, NotInLieAlgebra, ShapeMismatch
from pcrit.moment_flow import (
    LieElement,
    ModelPoint,
    build_model,
    energy,
    gradient,
    group_action,
    infinitesimal_action,
    lie_inner,
    model_from_json,
    model_to_json,
    moment_map,
    one_ps_limit,
    one_ps_orbit,
    random_hermitian,
    random_model,
    random_point,
    random_unitary,
    subspace_generator,
    subspace_p_value,
    weight_function,
)

from strategies import seeds


def arrow_model(p=(0, 0)):
    """Two vertices of rank 1 joined by one arrow 0 -> 1."""
    return build_model([(1, 1, p[0]), (1, 1, p[1])], {(0, 1): 1})


def arrow_point(model, x=1.0):
    return ModelPoint.from_blocks(model, {(0, 1, 0): [[x]]})


def rich_model(rng):
    return random_model(rng, max_vertices=3, max_rank=2, max_mult=3, max_arrows=2, arrow_prob=0.5)


# -- construction ----------------------------------------------------------------------

def test_build_model_examples():
    m = build_model([(1, 1, 0), (1, 1, 0)], {(0, 1): 1, (1, 0): 1})
    assert np.allclose(m.theta, [0, 0])
    m = arrow_model((-1, 1))
    assert np.allclose(m.theta, [2 * pi, -2 * pi])
    assert m.total_rank == 2


def test_level_imbalance():
    with pytest.raises(LevelImbalance):
        build_model([(1, 1, 1), (1, 1, 1)], {})


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(-3, 3)), min_size=1, max_size=4))
def test_level_balance_is_the_only_level_constraint(verts):
    total = sum(m * p for _, m, p in verts)
    if total == 0:
        m = build_model(verts, {})
        assert np.isclose(np.dot(np.array(m.ranks) * m.mults, m.theta), 0)
    else:
        with pytest.raises(LevelImbalance):
            build_model(verts, {})


def test_rational_levels_and_dims():
    m = build_model([(2, 2, Fraction(1, 2)), (1, 1, -1)], {(0, 1): 2, (1, 1): 1})
    assert m.dim == 3 and m.total_rank == 5 and m.n_layers == 2
    assert m.arrow_keys() == [(0, 1, 0), (0, 1, 1), (1, 1, 0)]
    b = random_point(m, np.random.default_rng(0))
    assert b.block(0, 1, 1).shape == (1, 2)
    assert b.block(1, 1).shape == (1, 1)


def test_shape_errors():
    m = arrow_model()
    with pytest.raises(ShapeMismatch):
        ModelPoint.from_blocks(m, {(0, 1, 0): [[1, 2]]})
    with pytest.raises(ShapeMismatch):
        ModelPoint.from_blocks(m, {(1, 0, 0): [[1]]})
    with pytest.raises(ShapeMismatch):
        LieElement(m, np.eye(3))
    other = arrow_model((1, -1))
    with pytest.raises(ShapeMismatch):
        moment_map(m, arrow_point(other))


def test_lie_algebra_checks():
    m = build_model([(1, 2, 0), (1, 1, 0)], {(0, 1): 1})
    with pytest.raises(NotInLieAlgebra):
        LieElement(m, np.ones((3, 3)), "skew")
    with pytest.raises(NotInLieAlgebra):
        LieElement.diagonal(m, [1j, 1j, 1j], "skew")  # weighted trace 3i
    with pytest.raises(NotInLieAlgebra):
        LieElement.from_blocks(m, [[[0, 1], [0, 0]], [[0]]], "hermitian")
    ok = LieElement.diagonal(m, [1, 1, -2])
    assert ok.kind == "hermitian" and ok.times_i().kind == "skew"


def test_json_round_trip():
    rng = np.random.default_rng(3)
    m = build_model([(2, 2, Fraction(1, 3)), (1, 1, Fraction(-2, 3))], {(0, 1): 2, (0, 0): 1})
    b = random_point(m, rng)
    m2, b2 = model_from_json(json.loads(json.dumps(model_to_json(m, b))))
    assert m2 == m
    assert np.array_equal(b2.data, b.data)
    assert model_from_json(model_to_json(m))[1] is None


def test_json_malformed():
    with pytest.raises(MalformedInput):
        model_from_json({"vertices": [{"r": 1}]})
    with pytest.raises(MalformedInput):
        model_from_json({"vertices": [{"r": 1, "m": 1, "p": "0"}], "point": {"a-b": []}})


# -- moment map examples -----------------------------------------------------------------

def test_infinitesimal_action_examples():
    m = arrow_model()
    b = arrow_point(m, 0.7 - 0.2j)
    xi = LieElement.diagonal(m, [1, -1])
    assert np.allclose(infinitesimal_action(m, xi, b).block(0, 1), -2 * (0.7 - 0.2j))
    assert infinitesimal_action(m, LieElement.diagonal(m, [0, 0]), b).norm() == 0
    assert infinitesimal_action(m, xi, ModelPoint.zeros(m)).norm() == 0


def test_moment_map_examples():
    m = arrow_model()
    assert moment_map(m, ModelPoint.zeros(m)).norm() == 0
    assert energy(m, ModelPoint.zeros(m)) == 0
    mu = moment_map(m, arrow_point(m))
    assert np.allclose(np.diag(mu.mat), [0.5j, -0.5j])
    assert np.isclose(energy(m, arrow_point(m)), 0.25)
    m = arrow_model((-1, 1))
    mu = moment_map(m, ModelPoint.zeros(m))
    assert np.allclose(np.diag(mu.mat), [2j * pi, -2j * pi])
    assert np.isclose(energy(m, ModelPoint.zeros(m)), 4 * pi**2)


def test_moment_map_is_skew_and_trace_free():
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b = random_point(m, rng)
        mu = moment_map(m, b)
        # re-checking with the Lie algebra validator
        LieElement(m, mu.mat, "skew")
        wtr = np.sum(m.index_weight * np.diag(mu.mat))
        assert abs(wtr) <= 1e-12 * max(1.0, b.norm() ** 2)


def test_equivariance():
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b = random_point(m, rng)
        u = random_unitary(m, rng)
        lhs = moment_map(m, group_action(m, u, b)).mat
        rhs = u @ moment_map(m, b).mat @ u.conj().T
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, b.norm() ** 2)


def test_moment_map_identity():
    h = 1e-4
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b, v = random_point(m, rng), random_point(m, rng)
        xi = random_hermitian(m, rng).times_i()
        dmu = (moment_map(m, b + h * v).mat - moment_map(m, b - h * v).mat) / (2 * h)
        lhs = lie_inner(m, LieElement(m, dmu, check=False), xi)
        rhs = -np.imag(infinitesimal_action(m, xi, b).inner(v))
        assert abs(lhs - rhs) <= 1e-6 * max(1.0, abs(rhs))


def test_gradient_matches_finite_differences():
    h = 1e-5
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b, v = random_point(m, rng), random_point(m, rng)
        fd = (energy(m, b + h * v) - energy(m, b - h * v)) / (2 * h)
        g = np.real(gradient(m, b).inner(v))
        assert abs(fd - g) <= 1e-6 * max(1.0, abs(g))


# -- one-parameter subgroups -------------------------------------------------------------

def test_one_ps_examples():
    m = arrow_model()
    b = arrow_point(m, 1.5)
    xi = LieElement.diagonal(m, [1, -1])
    for t in (0.0, 0.3, 2.0):
        assert np.isclose(one_ps_orbit(m, xi, b, t).block(0, 1)[0, 0], np.exp(-2 * t) * 1.5)
    assert np.isclose(one_ps_orbit(m, LieElement.diagonal(m, [-1, 1]), b, 0.5).block(0, 1)[0, 0], np.e * 1.5)
    assert np.array_equal(one_ps_orbit(m, xi, b, 0).data, b.data)

    lim = one_ps_limit(m, xi, b)
    assert lim.exists and lim.limit.norm() == 0
    div = one_ps_limit(m, LieElement.diagonal(m, [-1, 1]), b)
    assert not div.exists
    (key, w, mag), = div.divergent
    assert key == (0, 1, 0) and np.isclose(w, 2) and np.isclose(mag, 1.5)
    zero = one_ps_limit(m, LieElement.diagonal(m, [0, 0]), b)
    assert np.array_equal(zero.limit.data, b.data)


def test_one_ps_closed_form_vs_expm():
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b = random_point(m, rng)
        xi = random_hermitian(m, rng, scale=0.7)
        t = rng.uniform(-1, 1)
        expected = expm(t * xi.mat) @ b.data @ expm(-t * xi.mat)
        got = one_ps_orbit(m, xi, b, t).data
        assert np.abs(got - expected).max(initial=0) <= 1e-10 * max(1.0, np.abs(expected).max(initial=0))


def _limit_friendly(m, rng):
    """A diagonal Hermitian xi and a point with no positive-weight components."""
    lam = rng.standard_normal(m.dim)
    lam -= np.sum(m.index_weight * lam) / m.total_rank
    xi = LieElement.diagonal(m, lam)
    W = lam[:, None] - lam[None, :]
    b = random_point(m, rng)
    return xi, W, ModelPoint(m, np.where(W > 0, 0, b.data))


def test_norm_non_increasing_when_limit_exists():
    ts = np.linspace(0, 6, 31)
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        xi, W, b = _limit_friendly(m, rng)
        lim = one_ps_limit(m, xi, b)
        assert lim.exists
        assert np.allclose(lim.limit.data, np.where(W == 0, b.data, 0), atol=1e-12)
        norms = [one_ps_orbit(m, xi, b, t).norm() for t in ts]
        assert all(n1 <= n0 * (1 + 1e-12) + 1e-14 for n0, n1 in zip(norms, norms[1:]))


def test_interpolation_bound():
    ts = np.linspace(0, 1, 21)
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        b = random_point(m, rng)
        xi = random_hermitian(m, rng)
        bound = b.norm() ** 2 + one_ps_orbit(m, xi, b, 1.0).norm() ** 2
        for t in ts:
            assert one_ps_orbit(m, xi, b, t).norm() ** 2 <= bound * (1 + 1e-12)


# -- weight function -----------------------------------------------------------------------

def test_weight_function_examples():
    m = arrow_model()
    xi = LieElement.diagonal(m, [1, -1])
    for t in (0.0, 0.25, 1.0, 3.0):
        assert np.isclose(weight_function(m, xi, arrow_point(m), t), np.exp(-4 * t), rtol=1e-12, atol=1e-15)
    m = arrow_model((-1, 1))
    xi = subspace_generator(m, [0, 1])
    assert np.allclose(np.diag(xi.mat), [1, -1])
    assert subspace_p_value(m, [0, 1]) == 1
    for t in (0.0, 5.0):
        assert np.isclose(weight_function(m, xi, ModelPoint.zeros(m), t), 4 * pi)


def _invariant_point(m, dims, rng):
    """Random point preserving the span of the first ``dims[k]`` coordinates of each vertex."""
    inF = np.concatenate([np.arange(mk) < d for mk, d in zip(m.mults, dims)])
    b = random_point(m, rng)
    leak = (~inF)[:, None] & inF[None, :]
    return ModelPoint(m, np.where(leak, 0, b.data))


def test_weight_monotone_and_limit():
    ts = np.linspace(0, 4, 17)
    for s in seeds(100):
        rng = np.random.default_rng(s)
        m = rich_model(rng)
        dims = [int(rng.integers(0, mk + 1)) for mk in m.mults]
        if sum(dims) in (0, m.dim):
            dims[0] = 1 if dims[0] == 0 else dims[0] - 1 if m.dim > 1 else dims[0]
        xi = subspace_generator(m, dims)
        b = _invariant_point(m, dims, rng)
        assert one_ps_limit(m, xi, b).exists
        w = [weight_function(m, xi, b, t) for t in ts]
        assert all(w1 <= w0 + 1e-9 * max(1.0, abs(w0)) for w0, w1 in zip(w, w[1:]))
        target = 2 * pi * m.total_rank * float(subspace_p_value(m, dims))
        # components leaving F decay like exp(-R t)
        assert abs(weight_function(m, xi, b, 60.0 / m.total_rank) - target) <= 1e-6 * max(1.0, abs(target))
        # generic points also have non-increasing weights
        g = random_point(m, rng)
        eta = random_hermitian(m, rng)
        w = [weight_function(m, eta, g, t) for t in np.linspace(-1, 1, 11)]
        assert all(w1 <= w0 + 1e-9 * max(1.0, abs(w0)) for w0, w1 in zip(w, w[1:]))


def test_subspace_generator_from_basis():
    m = build_model([(1, 2, 0), (2, 1, 0)], {(0, 1): 1})
    q = np.array([[1], [1j]]) / np.sqrt(2)
    xi = subspace_generator(m, [q, np.zeros((1, 0))])
    # rk F = 1, rk F^perp = 3: xi = -3 on F, +1 on its complement
    assert np.allclose(np.linalg.eigvalsh(xi.block(0)), [-3, 1])
    assert np.allclose(xi.block(1), [[1]])
    with pytest.raises(ValueError):
        subspace_generator(m, [np.array([[1], [1]]), 0])
