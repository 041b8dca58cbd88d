"""Weighted multi-arrow quiver model of the deformation space.

Vertex ``k`` stands for a simple summand of rank ``r_k`` appearing with
multiplicity ``m_k`` and per-copy invariant ``p_k``. The representation space
holds one complex ``m_j x m_i`` matrix per arrow ``i -> j`` (loops allowed);
the gauge group ``prod_k GL(m_k)`` acts by ``g·b = g_j b g_i^{-1}``.

Internally a point is a stack of ``N x N`` matrices (``N = sum m_k``), one
per arrow layer ``a``, with block ``(j, i)`` of layer ``a`` holding
``b^(i,j,a)``. Lie algebra elements are block-diagonal ``N x N`` matrices.

Conventions (Vol = 1, unit weight per arrow):

* ``<xi, eta> = sum_k r_k Re tr(xi_k eta_k^†)`` on the Lie algebra,
  ``<b, c> = sum tr(b c^†)`` on the representation space;
* level ``theta_k = -2 pi p_k / r_k``;
* ``mu(b)_k = -(i / 2 r_k) H_k(b) + i theta_k Id`` with
  ``H_k = sum_(arrows into k) b b^† - sum_(arrows out of k) b^† b``,
  so that ``<mu(b), xi> = -1/2 Im <xi·b, b> + level`` and the gradient of
  ``f = 1/2 |mu|^2`` is ``i L_b mu(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import pi
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from ..errors import LevelImbalance, MalformedInput, NotInLieAlgebra, ShapeMismatch
from ..exact import as_fraction, format_rational, parse_rational

__all__ = [
    "LieElement",
    "ModelPoint",
    "OnePSLimit",
    "QuiverModel",
    "build_model",
    "energy",
    "gradient",
    "group_action",
    "infinitesimal_action",
    "lie_inner",
    "model_from_json",
    "model_to_json",
    "moment_map",
    "one_ps_limit",
    "one_ps_orbit",
    "random_hermitian",
    "random_model",
    "random_point",
    "random_unitary",
    "subspace_generator",
    "subspace_p_value",
    "weight_function",
]

LIE_TOL = 1e-12


@dataclass(frozen=True)
class QuiverModel:
    """Vertices ``(r_k, m_k, p_k)`` and arrow counts ``e_ij``."""

    ranks: tuple[int, ...]
    mults: tuple[int, ...]
    levels: tuple[Fraction, ...]
    arrows: tuple[tuple[int, int, int], ...]  # (src, dst, count) with count > 0

    # derived layout -------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.ranks)

    @cached_property
    def theta(self) -> np.ndarray:
        return np.array([-2 * pi * float(p) / r for p, r in zip(self.levels, self.ranks)])

    @cached_property
    def total_rank(self) -> int:
        """``R = sum_k r_k m_k``."""
        return sum(r * m for r, m in zip(self.ranks, self.mults))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for m in self.mults:
            out.append(acc)
            acc += m
        return tuple(out)

    @property
    def dim(self) -> int:
        return sum(self.mults)

    def slot(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k] + self.mults[k])

    @cached_property
    def n_layers(self) -> int:
        return max((c for _, _, c in self.arrows), default=0)

    @cached_property
    def vertex_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_vertices), self.mults)

    @cached_property
    def index_weight(self) -> np.ndarray:
        """``r_k`` for every row index of the big matrices."""
        return np.asarray(self.ranks, dtype=float)[self.vertex_of]

    @cached_property
    def index_theta(self) -> np.ndarray:
        return self.theta[self.vertex_of]

    @cached_property
    def block_diag_mask(self) -> np.ndarray:
        v = self.vertex_of
        return v[:, None] == v[None, :]

    @cached_property
    def arrow_mask(self) -> np.ndarray:
        mask = np.zeros((self.n_layers, self.dim, self.dim), dtype=bool)
        for i, j, c in self.arrows:
            mask[:c, self.slot(j), self.slot(i)] = True
        return mask

    def arrow_count(self, i: int, j: int) -> int:
        for s, d, c in self.arrows:
            if (s, d) == (i, j):
                return c
        return 0

    def arrow_keys(self) -> list[tuple[int, int, int]]:
        return [(i, j, a) for i, j, c in self.arrows for a in range(c)]


def build_model(vertices: Sequence, arrows: Mapping[tuple[int, int], int] | Sequence) -> QuiverModel:
    """Validate and build a model.

    ``vertices`` is a sequence of ``(r, m, p)``; ``arrows`` maps ``(src, dst)``
    to a count or is a sequence of ``(src, dst, count)``.

    Raises :class:`LevelImbalance` unless ``sum_k m_k p_k = 0``.
    """
    if not vertices:
        raise ValueError("a model needs at least one vertex")
    ranks, mults, levels = [], [], []
    for r, m, p in vertices:
        if int(r) != r or int(m) != m or r < 1 or m < 1:
            raise ValueError("ranks and multiplicities must be positive integers")
        ranks.append(int(r))
        mults.append(int(m))
        levels.append(as_fraction(p))
    if sum(m * p for m, p in zip(mults, levels)) != 0:
        raise LevelImbalance(f"sum m_k p_k = {sum(m * p for m, p in zip(mults, levels))} != 0")
    items = arrows.items() if isinstance(arrows, Mapping) else [((s, d), c) for s, d, c in arrows]
    counts: dict[tuple[int, int], int] = {}
    nv = len(ranks)
    for (s, d), c in items:
        if not (0 <= s < nv and 0 <= d < nv):
            raise ValueError(f"arrow {s}->{d} references a missing vertex")
        if int(c) != c or c < 0:
            raise ValueError("arrow counts must be non-negative integers")
        counts[(int(s), int(d))] = counts.get((int(s), int(d)), 0) + int(c)
    arr = tuple(sorted((s, d, c) for (s, d), c in counts.items() if c > 0))
    return QuiverModel(tuple(ranks), tuple(mults), tuple(levels), arr)


class ModelPoint:
    """A point ``b`` of the representation space (immutable)."""

    __slots__ = ("model", "data")

    def __init__(self, model: QuiverModel, data):
        data = np.array(data, dtype=complex)
        shape = (model.n_layers, model.dim, model.dim)
        if data.shape != shape:
            raise ShapeMismatch(f"expected array of shape {shape}, got {data.shape}")
        data[~model.arrow_mask] = 0
        data.flags.writeable = False
        self.model = model
        self.data = data

    @classmethod
    def zeros(cls, model: QuiverModel) -> "ModelPoint":
        return cls(model, np.zeros((model.n_layers, model.dim, model.dim), dtype=complex))

    @classmethod
    def from_blocks(cls, model: QuiverModel, blocks: Mapping[tuple[int, int, int], object]) -> "ModelPoint":
        data = np.zeros((model.n_layers, model.dim, model.dim), dtype=complex)
        for (i, j, a), mat in blocks.items():
            if a >= model.arrow_count(i, j):
                raise ShapeMismatch(f"no arrow ({i}, {j}, {a}) in the model")
            mat = np.atleast_2d(np.asarray(mat, dtype=complex))
            if mat.shape != (model.mults[j], model.mults[i]):
                raise ShapeMismatch(
                    f"block ({i},{j},{a}) must be {model.mults[j]}x{model.mults[i]}, got {mat.shape}"
                )
            data[a, model.slot(j), model.slot(i)] = mat
        return cls(model, data)

    def block(self, i: int, j: int, a: int = 0) -> np.ndarray:
        if a >= self.model.arrow_count(i, j):
            raise ShapeMismatch(f"no arrow ({i}, {j}, {a}) in the model")
        return self.data[a, self.model.slot(j), self.model.slot(i)]

    def blocks(self) -> dict[tuple[int, int, int], np.ndarray]:
        return {key: self.block(*key) for key in self.model.arrow_keys()}

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def inner(self, other: "ModelPoint") -> complex:
        """``<self, other> = sum tr(self other^†)``."""
        return complex(np.vdot(other.data, self.data))

    def __add__(self, other):
        return ModelPoint(self.model, self.data + other.data)

    def __sub__(self, other):
        return ModelPoint(self.model, self.data - other.data)

    def __mul__(self, c):
        return ModelPoint(self.model, self.data * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"ModelPoint(norm={self.norm():.6g}, arrows={len(self.model.arrow_keys())})"


class LieElement:
    """Block-diagonal element of the gauge Lie algebra.

    ``kind="skew"`` elements lie in the compact algebra (skew-Hermitian blocks,
    ``sum_k r_k tr xi_k = 0``); ``kind="hermitian"`` elements lie in ``i`` times it.
    ``kind="any"`` skips the checks (general complex gauge directions).
    """

    __slots__ = ("model", "mat", "kind")

    def __init__(self, model: QuiverModel, mat, kind: str = "any", check: bool = True):
        mat = np.array(mat, dtype=complex)
        if mat.shape != (model.dim, model.dim):
            raise ShapeMismatch(f"expected a {model.dim}x{model.dim} matrix, got {mat.shape}")
        if check and np.any(np.abs(mat[~model.block_diag_mask]) > 0):
            raise NotInLieAlgebra("Lie algebra elements are block diagonal")
        mat[~model.block_diag_mask] = 0
        if check and kind in ("skew", "hermitian"):
            scale = max(1.0, float(np.abs(mat).max(initial=0.0)))
            sym = mat + mat.conj().T if kind == "skew" else mat - mat.conj().T
            if np.abs(sym).max(initial=0.0) > LIE_TOL * scale:
                raise NotInLieAlgebra(f"element is not {kind}")
            wtr = np.sum(model.index_weight * np.diag(mat))
            if abs(wtr) > LIE_TOL * scale * model.dim:
                raise NotInLieAlgebra(f"weighted trace {wtr} is not zero")
        mat.flags.writeable = False
        self.model, self.mat, self.kind = model, mat, kind

    @classmethod
    def from_blocks(cls, model: QuiverModel, blocks: Sequence, kind: str = "any", check: bool = True):
        mat = np.zeros((model.dim, model.dim), dtype=complex)
        for k, blk in enumerate(blocks):
            blk = np.atleast_2d(np.asarray(blk, dtype=complex))
            if blk.shape != (model.mults[k], model.mults[k]):
                raise ShapeMismatch(f"block {k} must be {model.mults[k]}x{model.mults[k]}")
            mat[model.slot(k), model.slot(k)] = blk
        return cls(model, mat, kind, check)

    @classmethod
    def diagonal(cls, model: QuiverModel, values: Sequence, kind: str = "hermitian", check: bool = True):
        """Diagonal element with one entry per basis index (``sum m_k`` entries)."""
        values = np.asarray(values, dtype=complex)
        if values.shape != (model.dim,):
            raise ShapeMismatch(f"need {model.dim} diagonal entries")
        return cls(model, np.diag(values), kind, check)

    def block(self, k: int) -> np.ndarray:
        s = self.model.slot(k)
        return self.mat[s, s]

    def blocks(self) -> list[np.ndarray]:
        return [self.block(k) for k in range(self.model.n_vertices)]

    def norm(self) -> float:
        return float(np.sqrt(lie_inner(self.model, self, self)))

    def times_i(self) -> "LieElement":
        kind = {"skew": "hermitian", "hermitian": "skew"}.get(self.kind, "any")
        return LieElement(self.model, 1j * self.mat, kind, check=False)

    def __repr__(self):
        return f"LieElement(kind={self.kind!r}, norm={self.norm():.6g})"


def lie_inner(model: QuiverModel, xi: LieElement, eta: LieElement) -> float:
    """``sum_k r_k Re tr(xi_k eta_k^†)``."""
    return float(np.real(np.sum(model.index_weight[:, None] * xi.mat * eta.mat.conj())))


# -- the moment map and its flow --------------------------------------------------

def _hermitian_part(model: QuiverModel, data: np.ndarray) -> np.ndarray:
    """Block diagonal of ``sum_a B_a B_a^† - B_a^† B_a`` (i.e. ``H_k`` per vertex)."""
    if data.shape[0] == 0:
        return np.zeros((model.dim, model.dim), dtype=complex)
    Bh = np.conj(np.swapaxes(data, -1, -2))
    H = np.sum(data @ Bh - Bh @ data, axis=0)
    H[~model.block_diag_mask] = 0
    return H


def _moment_matrix(model: QuiverModel, data: np.ndarray) -> np.ndarray:
    H = _hermitian_part(model, data)
    M = (-0.5j / model.index_weight)[:, None] * H
    M[np.diag_indices(model.dim)] += 1j * model.index_theta
    return M


def _bracket(model: QuiverModel, M: np.ndarray, data: np.ndarray) -> np.ndarray:
    """``L_b xi``: layer-wise ``xi_j b - b xi_i``."""
    out = M @ data - data @ M
    out[~model.arrow_mask] = 0
    return out


def _energy(model: QuiverModel, M: np.ndarray) -> float:
    return 0.5 * float(np.sum(model.index_weight[:, None] * np.abs(M) ** 2))


def _check(model: QuiverModel, *objs):
    for o in objs:
        if o.model != model:
            raise ShapeMismatch("object belongs to a different model")


def infinitesimal_action(model: QuiverModel, xi: LieElement, b: ModelPoint) -> ModelPoint:
    """``(xi·b)^(i,j,a) = xi_j b^(i,j,a) - b^(i,j,a) xi_i``."""
    _check(model, xi, b)
    return ModelPoint(model, _bracket(model, xi.mat, b.data))


def moment_map(model: QuiverModel, b: ModelPoint) -> LieElement:
    _check(model, b)
    return LieElement(model, _moment_matrix(model, b.data), "skew", check=False)


def energy(model: QuiverModel, b: ModelPoint) -> float:
    """``f(b) = 1/2 |mu(b)|^2``."""
    _check(model, b)
    return _energy(model, _moment_matrix(model, b.data))


def gradient(model: QuiverModel, b: ModelPoint) -> ModelPoint:
    """Gradient of :func:`energy` for the real inner product ``Re <.,.>``: ``i L_b mu(b)``."""
    _check(model, b)
    M = _moment_matrix(model, b.data)
    return ModelPoint(model, 1j * _bracket(model, M, b.data))


def group_action(model: QuiverModel, g: np.ndarray, b: ModelPoint) -> ModelPoint:
    """``g·b = g_j b g_i^{-1}`` for an invertible block-diagonal ``g``."""
    g = np.asarray(g, dtype=complex)
    ginv = np.linalg.inv(g)
    return ModelPoint(model, g @ b.data @ ginv)


# -- one-parameter subgroups ---------------------------------------------------------

def _check_hermitian(model: QuiverModel, xi: LieElement):
    _check(model, xi)
    if xi.kind not in ("hermitian",):
        LieElement(model, xi.mat, "hermitian")  # raises if not Hermitian and trace-free


def _eigen_blocks(model: QuiverModel, xi: LieElement):
    """Per-vertex ``eigh``; returns the block-diagonal eigenvector matrix and eigenvalues."""
    U = np.zeros((model.dim, model.dim), dtype=complex)
    lam = np.zeros(model.dim)
    for k in range(model.n_vertices):
        s = model.slot(k)
        w, v = np.linalg.eigh(xi.block(k))
        U[s, s] = v
        lam[s] = w
    return U, lam


def one_ps_orbit(model: QuiverModel, xi: LieElement, b: ModelPoint, t: float) -> ModelPoint:
    """``e^{t xi}·b``, blockwise ``exp(t xi_j) b exp(-t xi_i)``."""
    _check_hermitian(model, xi)
    _check(model, b)
    U, lam = _eigen_blocks(model, xi)
    Uh = U.conj().T
    tilde = Uh @ b.data @ U
    with np.errstate(over="ignore", invalid="ignore"):
        scaled = np.where(tilde == 0, 0, tilde * np.exp(t * (lam[:, None] - lam[None, :])))
    return ModelPoint(model, U @ scaled @ Uh)


class OnePSLimit(NamedTuple):
    limit: ModelPoint | None
    divergent: tuple  # ((i, j, a), weight, magnitude) for growing components

    @property
    def exists(self) -> bool:
        return self.limit is not None


def one_ps_limit(model: QuiverModel, xi: LieElement, b: ModelPoint, tol: float = 1e-9) -> OnePSLimit:
    """Limit of ``e^{t xi}·b`` as ``t -> +inf``.

    Each block is split into joint eigencomponents of ``(xi_source, xi_target)``
    with weight ``lambda_target - lambda_source``. Components of positive weight
    (> tol) and magnitude > tol make the orbit diverge; otherwise the limit is
    the zero-weight part.
    """
    _check_hermitian(model, xi)
    _check(model, b)
    U, lam = _eigen_blocks(model, xi)
    Uh = U.conj().T
    tilde = Uh @ b.data @ U
    W = lam[:, None] - lam[None, :]
    growing = (W > tol) & (np.abs(tilde) > tol) & model.arrow_mask
    if np.any(growing):
        vertex = model.vertex_of
        found = {}
        for a, p, q in zip(*np.nonzero(growing)):
            key = (int(vertex[q]), int(vertex[p]), int(a))
            w, mag = float(W[p, q]), float(abs(tilde[a, p, q]))
            if key not in found or w > found[key][0]:
                found[key] = (w, mag)
        return OnePSLimit(None, tuple((k, w, m) for k, (w, m) in sorted(found.items())))
    kept = np.where(np.abs(W) <= tol, tilde, 0)
    return OnePSLimit(ModelPoint(model, U @ kept @ Uh), ())


def weight_function(model: QuiverModel, xi: LieElement, b: ModelPoint, t: float) -> float:
    """``w(t) = <mu(e^{t xi}·b), i xi>``; non-increasing in ``t``."""
    bt = one_ps_orbit(model, xi, b, t)
    return lie_inner(model, moment_map(model, bt), xi.times_i())


def _subspace_projector(model: QuiverModel, sub) -> tuple[np.ndarray, np.ndarray]:
    """Projector onto a graded subspace and its per-vertex dimensions.

    ``sub`` is either a sequence of dimensions ``s_k`` (first ``s_k``
    coordinates of vertex ``k``) or a sequence of ``m_k x s_k`` matrices with
    orthonormal columns.
    """
    P = np.zeros((model.dim, model.dim), dtype=complex)
    dims = []
    for k, item in enumerate(sub):
        s = model.slot(k)
        if np.ndim(item) == 0:
            d = int(item)
            if not 0 <= d <= model.mults[k]:
                raise ShapeMismatch(f"dimension {d} at vertex {k} exceeds m_k = {model.mults[k]}")
            Q = np.eye(model.mults[k], d, dtype=complex)
        else:
            Q = np.atleast_2d(np.asarray(item, dtype=complex))
            if Q.shape[0] != model.mults[k]:
                raise ShapeMismatch(f"basis at vertex {k} must have {model.mults[k]} rows")
            if not np.allclose(Q.conj().T @ Q, np.eye(Q.shape[1]), atol=1e-10):
                raise ValueError(f"basis at vertex {k} is not orthonormal")
            d = Q.shape[1]
        P[s, s] = Q @ Q.conj().T
        dims.append(d)
    if len(dims) != model.n_vertices:
        raise ShapeMismatch("one entry per vertex")
    return P, np.array(dims)


def subspace_generator(model: QuiverModel, sub) -> LieElement:
    """``xi = -rk(F^perp) Pi_F + rk(F) Pi_(F^perp)`` for a graded subspace ``F``.

    Ranks are weighted: ``rk(F) = sum_k r_k s_k``.
    """
    P, dims = _subspace_projector(model, sub)
    rk_f = float(np.dot(model.ranks, dims))
    rk_perp = model.total_rank - rk_f
    I = np.eye(model.dim)
    return LieElement(model, -rk_perp * P + rk_f * (I - P), "hermitian")


def subspace_p_value(model: QuiverModel, sub) -> Fraction:
    """``P(F) = sum_k s_k p_k``."""
    _, dims = _subspace_projector(model, sub)
    return sum((int(d) * p for d, p in zip(dims, model.levels)), Fraction(0))


# -- random sampling --------------------------------------------------------------

def random_model(
    rng: np.random.Generator,
    max_vertices: int = 4,
    max_rank: int = 3,
    max_mult: int = 1,
    max_arrows: int = 1,
    arrow_prob: float = 0.4,
    p_range: int = 2,
) -> QuiverModel:
    """Random model with integer levels balanced on the last vertex.

    Each ordered pair (loops included) carries ``1..max_arrows`` arrows with
    probability ``arrow_prob``.
    """
    l = int(rng.integers(1, max_vertices + 1))
    r = rng.integers(1, max_rank + 1, size=l)
    p = rng.integers(-p_range, p_range + 1, size=l).astype(object)
    m = rng.integers(1, max_mult + 1, size=l) if max_mult > 1 else np.ones(l, dtype=int)
    levels = [Fraction(int(x)) for x in p]
    levels[-1] = -sum((int(m[k]) * levels[k] for k in range(l - 1)), Fraction(0)) / int(m[-1])
    arrows = {}
    for i in range(l):
        for j in range(l):
            if rng.random() < arrow_prob:
                arrows[(i, j)] = int(rng.integers(1, max_arrows + 1)) if max_arrows > 1 else 1
    return build_model([(int(r[k]), int(m[k]), levels[k]) for k in range(l)], arrows)


def random_point(model: QuiverModel, rng: np.random.Generator, scale: float = 1.0) -> ModelPoint:
    shape = (model.n_layers, model.dim, model.dim)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (scale / np.sqrt(2))
    return ModelPoint(model, z)


def random_unitary(model: QuiverModel, rng: np.random.Generator) -> np.ndarray:
    """Block-diagonal Haar-random unitary."""
    U = np.zeros((model.dim, model.dim), dtype=complex)
    for k, m in enumerate(model.mults):
        z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        s = model.slot(k)
        U[s, s] = q
    return U


def random_hermitian(model: QuiverModel, rng: np.random.Generator, scale: float = 1.0) -> LieElement:
    """Random Hermitian element with zero weighted trace."""
    mat = np.zeros((model.dim, model.dim), dtype=complex)
    for k, m in enumerate(model.mults):
        z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        mat[model.slot(k), model.slot(k)] = (z + z.conj().T) / 2
    wtr = np.real(np.sum(model.index_weight * np.diag(mat)))
    mat -= np.eye(model.dim) * (wtr / model.total_rank)
    return LieElement(model, scale * mat, "hermitian")


# -- serialisation -----------------------------------------------------------------

def model_from_json(obj) -> tuple[QuiverModel, ModelPoint | None]:
    """Parse ``{"vertices": [{"r", "m", "p"}], "arrows": [{"src", "dst", "count"}], "point": {...}}``.

    Vertices are indexed from 0. Point blocks are keyed ``"src-dst-a"`` and
    hold nested ``[re, im]`` pairs.
    """
    try:
        vertices = [(int(v["r"]), int(v["m"]), parse_rational(v["p"])) for v in obj["vertices"]]
        arrows = [(int(a["src"]), int(a["dst"]), int(a.get("count", 1))) for a in obj.get("arrows", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"malformed model: {exc}") from exc
    try:
        model = build_model(vertices, arrows)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    point = None
    if obj.get("point") is not None:
        blocks = {}
        try:
            for key, rows in obj["point"].items():
                i, j, a = (int(x) for x in key.split("-"))
                blocks[(i, j, a)] = [[complex(re, im) for re, im in row] for row in rows]
        except (ValueError, TypeError, AttributeError) as exc:
            raise MalformedInput(f"malformed point: {exc}") from exc
        point = ModelPoint.from_blocks(model, blocks)
    return model, point


def model_to_json(model: QuiverModel, point: ModelPoint | None = None) -> dict:
    out = {
        "vertices": [
            {"r": r, "m": m, "p": format_rational(p)}
            for r, m, p in zip(model.ranks, model.mults, model.levels)
        ],
        "arrows": [{"src": i, "dst": j, "count": c} for i, j, c in model.arrows],
    }
    if point is not None:
        out["point"] = {
            f"{i}-{j}-{a}": [[[float(z.real), float(z.imag)] for z in row] for row in blk]
            for (i, j, a), blk in point.blocks().items()
        }
    return out
