"""Gradient flow of ``f = 1/2 |mu|^2`` and analysis of its limit.

The flow ``db/dt = -i L_b mu(b)`` is integrated with a step-doubling RK4
scheme (local Richardson extrapolation). A step is accepted only when the
error estimate is within tolerance and the energy does not increase beyond
floating-point noise, so the recorded energy trace is monotone.

Limits are classified by the moment map: ``mu = 0`` gives a polystable point
split into summands, otherwise the eigenvalue clusters of ``-i mu`` give the
Harder–Narasimhan slopes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ..errors import NoConvergence, NotCritical
from ..stability import VerdictKind
from .quiver import (
    LieElement,
    ModelPoint,
    QuiverModel,
    _bracket,
    _check,
    _energy,
    _moment_matrix,
    lie_inner,
)

__all__ = [
    "ENERGY_SLACK",
    "energy_noise",
    "FlowOptions",
    "FlowResult",
    "FlowVerdict",
    "GaugePath",
    "HNCluster",
    "LimitClassification",
    "Summand",
    "classify_limit",
    "flow",
    "flow_verdict",
    "gauge_path",
    "integrate_flow",
    "k_orbit_distance",
    "orbit_closed",
    "stabilizer_dim",
    "write_trace_csv",
]

ENERGY_SLACK = 64 * np.finfo(float).eps
"""Relative rounding allowance used by :func:`energy_noise`."""


def energy_noise(model: QuiverModel, y: np.ndarray, f: float) -> float:
    """Rounding allowance for comparing two evaluations of ``f`` near ``y``.

    ``mu`` is a difference of terms of size ``|b|^2 / r_k + |theta_k|``, so its
    absolute rounding error is ``eps`` times that, and ``f`` inherits it
    multiplied by ``|mu|``.
    """
    n = model.n_layers * model.dim * model.dim
    terms = float(np.vdot(y[:n], y[:n]).real) + float(np.abs(model.theta).max(initial=0.0))
    return ENERGY_SLACK * (f + np.sqrt(2.0 * f * model.total_rank) * terms)


@dataclass(frozen=True)
class FlowOptions:
    """Integrator and classification settings.

    ``snap_tol`` is the relative size below which a component of the limit
    counts as zero when reading off its summands and stabilizer.
    """

    dt0: float = 1e-2
    t_max: float = 1e8
    grad_tol: float = 1e-9
    eig_cluster_tol: float = 1e-6
    rtol: float = 1e-10
    atol: float = 1e-14
    max_steps: int = 200_000
    snap_tol: float = 1e-2
    record: bool = True
    method: str = "auto"
    stiff_after: int = 1000
    stiff_rtol: float = 1e-8
    stiff_atol: float = 1e-12

    def __post_init__(self):
        if self.method not in ("auto", "rk4", "bdf"):
            raise ValueError(f"unknown method {self.method!r}; choose auto, rk4 or bdf")


@dataclass(frozen=True)
class Summand:
    dims: tuple[int, ...]
    basis: tuple[np.ndarray, ...] = field(repr=False, compare=False)


@dataclass(frozen=True)
class HNCluster:
    eigenvalue: float
    slope: float
    dims: tuple[int, ...]
    basis: tuple[np.ndarray, ...] = field(repr=False, compare=False)

    def projector(self, model: QuiverModel) -> LieElement:
        P = np.zeros((model.dim, model.dim), dtype=complex)
        for k, Q in enumerate(self.basis):
            s = model.slot(k)
            P[s, s] = Q @ Q.conj().T
        return LieElement(model, P, "any", check=False)


@dataclass(frozen=True)
class LimitClassification:
    """Either ``kind == "polystable"`` with ``summands`` or ``kind == "hn"`` with ``clusters``."""

    kind: str
    summands: tuple[Summand, ...] = ()
    clusters: tuple[HNCluster, ...] = ()
    mu_norm: float = 0.0

    def to_json(self) -> dict:
        if self.kind == "polystable":
            return {"kind": "polystable", "summands": [list(s.dims) for s in self.summands]}
        return {
            "kind": "hn",
            "clusters": [
                {"eigenvalue": c.eigenvalue, "slope": c.slope, "dims": list(c.dims)} for c in self.clusters
            ],
        }


@dataclass
class FlowResult:
    limit: ModelPoint
    final_energy: float
    time: float
    iterations: int
    rejected: int
    grad_norm: float
    converged: bool
    classification: LimitClassification | None = None
    trajectory: list[tuple[float, float, float]] = field(default_factory=list, repr=False)
    energy_noise: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        from .quiver import model_to_json

        return {
            "converged": self.converged,
            "final_energy": self.final_energy,
            "time": self.time,
            "iterations": self.iterations,
            "rejected": self.rejected,
            "grad_norm": self.grad_norm,
            "classification": None if self.classification is None else self.classification.to_json(),
            "limit": model_to_json(self.limit.model, self.limit)["point"],
            "trajectory": [list(row) for row in self.trajectory],
        }


# -- integrator ----------------------------------------------------------------------

def _rk4(rhs, y, h, k1):
    k2 = rhs(y + (0.5 * h) * k1)
    k3 = rhs(y + (0.5 * h) * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _Run(NamedTuple):
    y: np.ndarray
    t: float
    f: float
    grad: float
    steps: int
    rejected: int
    converged: bool
    trajectory: list
    noise: list


def _integrate(
    rhs: Callable,
    monitor: Callable,
    noise: Callable,
    y0: np.ndarray,
    opts: FlowOptions,
    t_end: float | None = None,
    on_accept: Callable | None = None,
    max_steps: int | None = None,
) -> _Run:
    """Adaptive step-doubling RK4 with an energy-decrease acceptance test.

    ``monitor(y)`` returns ``(f, grad_norm, rhs(y))`` and ``noise(y, f)`` the
    rounding allowance for the energy comparison. The run stops when the
    gradient norm drops to ``opts.grad_tol`` or at ``t_end`` (default ``t_max``);
    when ``t_end`` is given the gradient stop is disabled.
    """
    stop_on_grad = t_end is None
    t_end = opts.t_max if t_end is None else t_end
    max_steps = opts.max_steps if max_steps is None else max_steps
    y, t, h = y0, 0.0, opts.dt0
    f, g, k1 = monitor(y)
    nz = noise(y, f)
    traj = [(t, f, g)] if opts.record else []
    noises = []
    steps = rejected = 0
    if stop_on_grad and g <= opts.grad_tol:
        return _Run(y, t, f, g, 0, 0, True, traj, noises)
    while t < t_end and steps + rejected < max_steps:
        h = min(h, t_end - t)
        big = _rk4(rhs, y, h, k1)
        half = _rk4(rhs, y, 0.5 * h, k1)
        small = _rk4(rhs, half, 0.5 * h, rhs(half))
        diff = small - big
        err = float(np.linalg.norm(diff)) / 15.0
        scale = opts.atol + opts.rtol * max(float(np.linalg.norm(y)), float(np.linalg.norm(small)))
        if err <= scale and np.all(np.isfinite(small)):
            y_new = small + diff / 15.0
            f_new, g_new, k1_new = monitor(y_new)
            if f_new <= f + nz:
                if opts.record:
                    noises.append(nz)
                y, f, g, k1 = y_new, f_new, g_new, k1_new
                nz = noise(y, f)
                t += h
                steps += 1
                if opts.record:
                    traj.append((t, f, g))
                if on_accept is not None:
                    on_accept(t, y)
                if stop_on_grad and g <= opts.grad_tol:
                    return _Run(y, t, f, g, steps, rejected, True, traj, noises)
                factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * (scale / err) ** 0.2))
                h *= factor
                continue
            rejected += 1
            h *= 0.5
        else:
            rejected += 1
            factor = 0.1 if not np.isfinite(err) or err == 0 else min(1.0, max(0.1, 0.9 * (scale / err) ** 0.2))
            h *= factor
        if h <= 1e-15 * max(t, 1.0):
            break
    return _Run(y, t, f, g, steps, rejected, not stop_on_grad and t >= t_end, traj, noises)


def _integrate_stiff(rhs: Callable, monitor: Callable, noise: Callable, start: _Run, opts: FlowOptions) -> _Run:
    """Continue a run with scipy's BDF solver on the real form of the flow.

    Each solver step is recorded like an accepted RK4 step. A step that raises
    the energy beyond rounding is discarded and the solver restarted from the
    last accepted state with a smaller first step.
    """
    from scipy.integrate import BDF

    n = start.y.size

    def real_rhs(_t, x):
        d = rhs(x[:n] + 1j * x[n:])
        return np.concatenate([d.real, d.imag])

    y, t, f, g = start.y, start.t, start.f, start.grad
    traj, noises = list(start.trajectory), list(start.noise)
    steps, rejected = start.steps, start.rejected
    first = None
    while t < opts.t_max and steps + rejected < opts.max_steps:
        solver = BDF(
            real_rhs, t, np.concatenate([y.real, y.imag]), opts.t_max,
            rtol=opts.stiff_rtol, atol=opts.stiff_atol, first_step=first,
        )
        restart = False
        nz = noise(y, f)
        while solver.status == "running" and steps + rejected < opts.max_steps:
            solver.step()
            if solver.status == "failed":
                break
            y_new = solver.y[:n] + 1j * solver.y[n:]
            f_new, g_new, _ = monitor(y_new)
            if f_new > f + nz:
                rejected += 1
                first = max(1e-12, 0.25 * (solver.t - t))
                restart = True
                break
            if opts.record:
                noises.append(nz)
                traj.append((solver.t, f_new, g_new))
            y, t, f, g = y_new, solver.t, f_new, g_new
            nz = noise(y, f)
            steps += 1
            if g <= opts.grad_tol:
                return _Run(y, t, f, g, steps, rejected, True, traj, noises)
        if not restart:
            break
    return _Run(y, t, f, g, steps, rejected, False, traj, noises)


def _flow_fns(model: QuiverModel):
    shape = (model.n_layers, model.dim, model.dim)

    def rhs(y):
        data = y.reshape(shape)
        M = _moment_matrix(model, data)
        return (-1j * _bracket(model, M, data)).ravel()

    def monitor(y):
        data = y.reshape(shape)
        M = _moment_matrix(model, data)
        d = (-1j * _bracket(model, M, data)).ravel()
        return _energy(model, M), float(np.linalg.norm(d)), d

    def noise(y, f):
        return energy_noise(model, y, f)

    return rhs, monitor, noise


def integrate_flow(model: QuiverModel, b0: ModelPoint, opts: FlowOptions = FlowOptions()) -> FlowResult:
    """Run the flow without raising; ``converged`` records whether ``grad_tol`` was met.

    With ``method="auto"`` the RK4 run hands over to a BDF solver after
    ``stiff_after`` steps. This matters for semistable points, whose slow
    polynomial tail coexists with fast relaxing directions.
    """
    _check(model, b0)
    rhs, monitor, noise = _flow_fns(model)
    y0 = b0.data.ravel().copy()
    if b0.norm() == 0:
        # exact fixed point: the flow preserves b = 0
        f, g, _ = monitor(y0)
        run = _Run(y0, 0.0, f, g, 0, 0, True, [(0.0, f, g)] if opts.record else [], [])
    elif opts.method == "bdf":
        f, g, _ = monitor(y0)
        start = _Run(y0, 0.0, f, g, 0, 0, False, [(0.0, f, g)] if opts.record else [], [])
        run = start if g <= opts.grad_tol else _integrate_stiff(rhs, monitor, noise, start, opts)
        if g <= opts.grad_tol:
            run = run._replace(converged=True)
    else:
        budget = opts.stiff_after if opts.method == "auto" else opts.max_steps
        run = _integrate(rhs, monitor, noise, y0, opts, max_steps=budget)
        if not run.converged and opts.method == "auto" and run.t < opts.t_max:
            run = _integrate_stiff(rhs, monitor, noise, run, opts)
    limit = ModelPoint(model, run.y.reshape(b0.data.shape))
    res = FlowResult(
        limit=limit,
        final_energy=run.f,
        time=run.t,
        iterations=run.steps,
        rejected=run.rejected,
        grad_norm=run.grad,
        converged=run.converged,
        trajectory=run.trajectory,
        energy_noise=run.noise,
    )
    if run.converged:
        res.classification = classify_limit(
            model,
            limit,
            eig_cluster_tol=opts.eig_cluster_tol,
            grad_tol=max(opts.grad_tol, 1e-6),
            snap_tol=opts.snap_tol,
            scale=max(1.0, b0.norm()),
        )
    return res


def flow(model: QuiverModel, b0: ModelPoint, opts: FlowOptions = FlowOptions()) -> FlowResult:
    """Integrate the flow until ``|db/dt| <= grad_tol``.

    Raises :class:`NoConvergence` (carrying the partial result) when ``t_max``
    or the step budget is exhausted first.
    """
    res = integrate_flow(model, b0, opts)
    if not res.converged:
        raise NoConvergence(opts.t_max, res)
    return res


def write_trace_csv(result: FlowResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "f", "grad_norm"])
        for t, f, g in result.trajectory:
            w.writerow([repr(float(t)), repr(float(f)), repr(float(g))])


# -- gauge path ------------------------------------------------------------------------

class GaugePath(NamedTuple):
    times: np.ndarray
    residuals: np.ndarray
    g_final: np.ndarray
    flow_final: ModelPoint

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max(initial=0.0))


def gauge_path(
    model: QuiverModel,
    b0: ModelPoint,
    opts: FlowOptions = FlowOptions(),
    t_end: float | None = None,
) -> GaugePath:
    """Integrate ``g^{-1} g' = i mu(phi(t))`` alongside the flow, ``g(0) = Id``.

    At each accepted step the residual ``|g^{-1}·b0 - phi(t)|`` is recorded,
    where ``g^{-1}·b`` acts blockwise as ``g_j^{-1} b g_i``. Without ``t_end`` the
    run lasts until the flow converges.
    """
    _check(model, b0)
    shape = (model.n_layers, model.dim, model.dim)
    nb = int(np.prod(shape))
    N = model.dim

    def rhs(y):
        data = y[:nb].reshape(shape)
        g = y[nb:].reshape(N, N)
        M = _moment_matrix(model, data)
        db = -1j * _bracket(model, M, data)
        dg = g @ (1j * M)
        return np.concatenate([db.ravel(), dg.ravel()])

    def monitor(y):
        data = y[:nb].reshape(shape)
        g = y[nb:].reshape(N, N)
        M = _moment_matrix(model, data)
        db = -1j * _bracket(model, M, data)
        dg = g @ (1j * M)
        return _energy(model, M), float(np.linalg.norm(db)), np.concatenate([db.ravel(), dg.ravel()])

    times, residuals = [0.0], [0.0]

    def on_accept(t, y):
        data = y[:nb].reshape(shape)
        g = y[nb:].reshape(N, N)
        ginv = np.linalg.inv(g)
        pulled = ginv @ b0.data @ g
        pulled[~model.arrow_mask] = 0
        times.append(t)
        residuals.append(float(np.linalg.norm(pulled - data)))

    def noise(y, f):
        return energy_noise(model, y, f)

    y0 = np.concatenate([b0.data.ravel(), np.eye(N, dtype=complex).ravel()])
    if b0.norm() == 0 and t_end is None:
        run = _Run(y0, 0.0, 0.0, 0.0, 0, 0, True, [], [])
    else:
        run = _integrate(rhs, monitor, noise, y0, opts, t_end=t_end, on_accept=on_accept)
        if not run.converged:
            raise NoConvergence(opts.t_max, run)
    return GaugePath(
        np.array(times),
        np.array(residuals),
        run.y[nb:].reshape(N, N),
        ModelPoint(model, run.y[:nb].reshape(shape)),
    )


# -- limit analysis ----------------------------------------------------------------------

def _action_matrix(model: QuiverModel, b: ModelPoint) -> np.ndarray:
    """Matrix of ``X -> X·b`` on the complex block-diagonal algebra (columns = elementary ``E_pq``)."""
    cols = []
    for k in range(model.n_vertices):
        s = model.slot(k)
        for p in range(s.start, s.stop):
            for q in range(s.start, s.stop):
                E = np.zeros((model.dim, model.dim), dtype=complex)
                E[p, q] = 1
                cols.append(_bracket(model, E, b.data)[model.arrow_mask])
    if not cols:
        return np.zeros((0, 0))
    return np.stack(cols, axis=1)


def stabilizer_dim(model: QuiverModel, b: ModelPoint, tol: float) -> int:
    """Complex dimension of ``{X : X·b = 0}``, treating singular values ``<= tol`` as zero."""
    L = _action_matrix(model, b)
    n = sum(m * m for m in model.mults)
    if L.size == 0:
        return n
    sv = np.linalg.svd(L, compute_uv=False)
    return int(n - np.sum(sv > tol))


def _summands(model: QuiverModel, b: ModelPoint, tol: float, rng: np.random.Generator) -> tuple[Summand, ...]:
    """Split ``b`` into summands using a generic Hermitian element commuting with it."""
    L = _action_matrix(model, b)
    n = sum(m * m for m in model.mults)
    if L.size:
        _, sv, vh = np.linalg.svd(L)
        rank = int(np.sum(sv > tol))
        null = vh[rank:].conj().T
    else:
        null = np.eye(n, dtype=complex)
    coeff = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
    vec = null @ coeff
    X = np.zeros((model.dim, model.dim), dtype=complex)
    idx = 0
    for k in range(model.n_vertices):
        s = model.slot(k)
        m = model.mults[k]
        X[s, s] = vec[idx : idx + m * m].reshape(m, m)
        idx += m * m
    X = 0.5 * (X + X.conj().T)
    U = np.zeros_like(X)
    lam = np.zeros(model.dim)
    for k in range(model.n_vertices):
        s = model.slot(k)
        w, v = np.linalg.eigh(X[s, s])
        U[s, s] = v
        lam[s] = w
    tilde = U.conj().T @ b.data @ U
    link = np.any(np.abs(tilde) > tol, axis=0)
    link = link | link.T
    spread = max(1.0, float(np.abs(lam).max(initial=0.0)))
    same_vertex = model.block_diag_mask & (np.abs(lam[:, None] - lam[None, :]) <= 1e-6 * spread)
    link = link | same_vertex
    # connected components of the link graph
    comp = -np.ones(model.dim, dtype=int)
    c = 0
    for start in range(model.dim):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = c
        while stack:
            p = stack.pop()
            for q in np.nonzero(link[p])[0]:
                if comp[q] < 0:
                    comp[q] = c
                    stack.append(q)
        c += 1
    out = []
    for ci in range(c):
        members = comp == ci
        dims, basis = [], []
        for k in range(model.n_vertices):
            s = model.slot(k)
            sel = members[s]
            dims.append(int(sel.sum()))
            basis.append(U[s, s][:, sel])
        out.append(Summand(tuple(dims), tuple(basis)))
    out.sort(key=lambda s: s.dims, reverse=True)
    return tuple(out)


def _hn_clusters(model: QuiverModel, M: np.ndarray, tol: float) -> tuple[HNCluster, ...]:
    A = -1j * M
    A = 0.5 * (A + A.conj().T)
    entries = []  # (lambda, vertex, eigenvector)
    for k in range(model.n_vertices):
        s = model.slot(k)
        w, v = np.linalg.eigh(A[s, s])
        entries += [(float(w[i]), k, v[:, i]) for i in range(len(w))]
    entries.sort(key=lambda e: e[0])
    groups, cur = [], [entries[0]]
    for e in entries[1:]:
        if e[0] - cur[-1][0] > tol:
            groups.append(cur)
            cur = [e]
        else:
            cur.append(e)
    groups.append(cur)
    out = []
    for grp in groups:
        lam = float(np.mean([e[0] for e in grp]))
        dims = [0] * model.n_vertices
        vecs = [[] for _ in range(model.n_vertices)]
        for _, k, v in grp:
            dims[k] += 1
            vecs[k].append(v)
        basis = tuple(
            np.stack(vecs[k], axis=1) if vecs[k] else np.zeros((model.mults[k], 0), dtype=complex)
            for k in range(model.n_vertices)
        )
        out.append(HNCluster(lam, -lam / (2 * np.pi), tuple(dims), basis))
    return tuple(out)


def classify_limit(
    model: QuiverModel,
    b_inf: ModelPoint,
    eig_cluster_tol: float = 1e-6,
    grad_tol: float = 1e-6,
    snap_tol: float = 1e-2,
    scale: float | None = None,
    seed: int = 0,
) -> LimitClassification:
    """Read off the polystable decomposition or the HN clusters at a critical point.

    ``snap_tol * scale`` is the size below which components of ``b_inf``
    count as zero when splitting into summands (``scale`` defaults to
    ``max(1, |b_inf|)``).
    """
    _check(model, b_inf)
    M = _moment_matrix(model, b_inf.data)
    grad = float(np.linalg.norm(_bracket(model, M, b_inf.data)))
    if grad > grad_tol:
        raise NotCritical(f"gradient norm {grad:.3g} exceeds {grad_tol:.3g}")
    mu_norm = float(np.sqrt(2 * _energy(model, M)))
    if mu_norm <= eig_cluster_tol:
        scale = max(1.0, b_inf.norm()) if scale is None else scale
        rng = np.random.default_rng(seed)
        return LimitClassification("polystable", summands=_summands(model, b_inf, snap_tol * scale, rng), mu_norm=mu_norm)
    return LimitClassification("hn", clusters=_hn_clusters(model, M, eig_cluster_tol), mu_norm=mu_norm)


# -- verdicts ---------------------------------------------------------------------------

class FlowVerdict(NamedTuple):
    kind: VerdictKind
    in_orbit: bool
    result: FlowResult


def flow_verdict(model: QuiverModel, b0: ModelPoint, opts: FlowOptions = FlowOptions()) -> FlowVerdict:
    """Stability verdict read from the flow alone.

    Unstable when the limit has ``mu != 0``. Otherwise the limit lies in the
    orbit of ``b0`` exactly when both have stabilizers of the same dimension
    (orbits in the boundary of an orbit closure are strictly smaller); in that
    case the verdict is Polystable, or Stable when the limit does not split.
    """
    res = flow(model, b0, opts)
    cls = res.classification
    if cls.kind == "hn":
        return FlowVerdict(VerdictKind.UNSTABLE, False, res)
    scale = max(1.0, b0.norm())
    exact_tol = 1e-9 * scale
    in_orbit = stabilizer_dim(model, res.limit, opts.snap_tol * scale) == stabilizer_dim(model, b0, exact_tol)
    if not in_orbit:
        return FlowVerdict(VerdictKind.SEMISTABLE, False, res)
    if len(cls.summands) == 1:
        return FlowVerdict(VerdictKind.STABLE, True, res)
    return FlowVerdict(VerdictKind.POLYSTABLE, True, res)


def orbit_closed(model: QuiverModel, b: ModelPoint, opts: FlowOptions = FlowOptions()) -> bool:
    """True iff the flow limit has ``mu = 0`` and lies in the orbit of ``b``."""
    return flow_verdict(model, b, opts).in_orbit


# -- K-orbit distance ---------------------------------------------------------------------

def k_orbit_distance(model: QuiverModel, a: ModelPoint, b: ModelPoint, restarts: int = 4, seed: int = 0) -> float:
    """``min_u |u·a - b|`` over block-diagonal unitaries ``u`` (local optimisation with restarts)."""
    from scipy.linalg import expm
    from scipy.optimize import minimize

    _check(model, a, b)
    sizes = [m * m for m in model.mults]

    def unitary(x):
        U = np.zeros((model.dim, model.dim), dtype=complex)
        idx = 0
        for k, m in enumerate(model.mults):
            h = x[idx : idx + m * m].reshape(m, m)
            idx += m * m
            herm = np.triu(h) + np.triu(h, 1).T + 1j * (np.tril(h, -1) - np.tril(h, -1).T)
            s = model.slot(k)
            U[s, s] = expm(1j * herm)
        return U

    def cost(x):
        U = unitary(x)
        return float(np.linalg.norm(U @ a.data @ U.conj().T - b.data) ** 2)

    rng = np.random.default_rng(seed)
    best = cost(np.zeros(sum(sizes)))
    for r in range(restarts):
        x0 = np.zeros(sum(sizes)) if r == 0 else rng.uniform(-np.pi, np.pi, sum(sizes))
        out = minimize(cost, x0, method="BFGS")
        best = min(best, float(out.fun))
    return float(np.sqrt(max(best, 0.0)))
