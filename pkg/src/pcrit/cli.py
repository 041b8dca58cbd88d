"""Command-line front end.

Every subcommand builds one report dictionary. ``--output json`` prints it as
canonical JSON (sorted keys, exact rationals as ``"num/den"``, floats with 12
significant digits); ``--output text`` prints the same values as
``path = value`` lines. Exit codes: 0 success, 1 computation error,
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import blowup
from .bundles import bundle_from_json, cone_from_json
from .cohomology import blowup_p2_ring, parse_class, ring_from_json
from .equations import (
    central_charge,
    central_charge_params,
    dhym_central_charge,
    dhym_charge_data,
    dhym_params,
    dhym_surface_rescaled,
    hym_params,
    j_equation_params,
    monge_ampere_params,
    p_value,
    params_from_json,
    params_to_json,
)
from .errors import MalformedInput, NoConvergence, PcritError
from .exact import format_rational, format_scalar, parse_rational
from .moment_flow import (
    FlowOptions,
    LieElement,
    brute_force_verdict,
    flow,
    flow_verdict,
    model_from_json,
    model_to_json,
    one_ps_limit,
    one_ps_orbit,
    random_point,
    subspace_generator,
    subspace_p_value,
    weight_function,
    write_trace_csv,
)
from .stability import (
    AdmissibleFamily,
    SubBundle,
    classify,
    classify_example_8,
    cone_membership,
    cone_to_json,
    example_8_families,
    song_j_solvable,
    stability_cone,
)

ZETA_NAMES = ("hym", "ma", "j", "dhym", "cc", "rescaled")


# -- canonical output ----------------------------------------------------------------

def canonical(obj):
    """Normalise a report: Fractions to ``"num/den"``, floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    return format_scalar(obj)


def dumps(report) -> str:
    return json.dumps(canonical(report), sort_keys=True, indent=2, ensure_ascii=False)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, "null" if obj is None else (json.dumps(obj) if isinstance(obj, bool) else str(obj))


def render_text(report) -> str:
    return "\n".join(f"{k} = {v}" for k, v in _flatten(canonical(report)))


# -- input resolution ------------------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise MalformedInput(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc


def _ring(name):
    if name == "blp2":
        return blowup_p2_ring()
    return ring_from_json(_load_json(name))


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"not a rational number: {text!r}") from exc


def _class(ring, text):
    return parse_class(ring, text)


def _bundle(ring, name):
    if ring == blowup.RING and name in blowup.named_bundles():
        return blowup.bundle(name)
    if not Path(name).exists():
        raise MalformedInput(f"unknown bundle {name!r}: not a built-in name (L1, L2, E) or a file")
    return bundle_from_json(ring, _load_json(name))


def _default_omega(ring, args):
    if args.omega:
        return _class(ring, args.omega)
    if ring == blowup.RING:
        return blowup.OMEGA
    raise MalformedInput("--omega is required for rings other than blp2")


def _total(ring, args, fallback):
    if args.total:
        return _bundle(ring, args.total)
    if ring == blowup.RING:
        return blowup.E
    return fallback


def _zeta(ring, args, total):
    name = args.zeta
    if name not in ZETA_NAMES:
        if not Path(name).exists():
            raise MalformedInput(f"unknown equation {name!r}; choose from {', '.join(ZETA_NAMES)} or a file")
        return params_from_json(ring, _load_json(name)), {}
    if name == "ma":
        return monge_ampere_params(ring, total), {}
    omega = _default_omega(ring, args)
    if name == "hym":
        return hym_params(ring, omega, total), {}
    if name == "j":
        z, c_j = j_equation_params(ring, omega, total)
        return z, {"c_J": c_j}
    if name == "dhym":
        return dhym_params(ring, omega, total), {"Z": dhym_central_charge(ring, omega, total)}
    if name == "cc":
        cc = dhym_charge_data(ring, omega)
        return central_charge_params(ring, cc, total), {"Z": central_charge(ring, cc, total)}
    alpha = _class(ring, args.alpha) if args.alpha else (blowup.ALPHA if ring == blowup.RING else None)
    if alpha is None:
        raise MalformedInput("--alpha is required for the rescaled equation off the built-in ring")
    res = dhym_surface_rescaled(ring, omega, alpha, _rational(args.eps1), _rational(args.eps2), total)
    return res.params, {"c_J": res.c_j, "c_HYM": res.c_hym, "C": res.c_const}


def _family(ring, name):
    if ring == blowup.RING and name in ("E0", "E1", "E2"):
        fam, simple = example_8_families()[name]
        return fam, simple
    obj = _load_json(name)
    try:
        total = bundle_from_json(ring, obj["total"])
        subs = []
        for i, s in enumerate(obj.get("subs", [])):
            F = bundle_from_json(ring, s["F"])
            flag = s.get("complement_invariant")
            if flag is not None and not isinstance(flag, bool):
                raise MalformedInput("complement_invariant must be true, false or null")
            subs.append(SubBundle(F, flag, s.get("name", f"F{i}")))
        simple = bool(obj.get("simple", False))
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed family: {exc}") from exc
    return AdmissibleFamily(total, tuple(subs)), simple


def _direction(ring, name):
    if name == "eps2" and ring == blowup.RING:
        # derivative in eps2 of the rescaled family at eps1 = 0
        from .equations import EquationParams

        return EquationParams.from_classes(
            ring, {2: Fraction(-7, 80) * ring.one(), 1: -blowup.ALPHA}, note="d/d eps2 at eps1 = 0"
        )
    return params_from_json(ring, _load_json(name))


def _model(path, seed):
    model, point = model_from_json(_load_json(path))
    if point is None:
        point = random_point(model, np.random.default_rng(seed))
    return model, point


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("PCRIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise MalformedInput(f"PCRIT_SEED must be an integer, got {env!r}") from exc


def _flow_opts(args):
    return FlowOptions(
        dt0=args.dt0,
        t_max=args.tmax,
        grad_tol=args.grad_tol,
        eig_cluster_tol=args.cluster_tol,
        method=args.method,
    )


# -- subcommands ----------------------------------------------------------------------

def cmd_ring_check(args):
    ring = _ring(args.ring)
    n = ring.dim
    pairing = {}
    for k in range(n + 1):
        for a in ring.labels_of_degree(k):
            for b in ring.labels_of_degree(n - k):
                if k <= n - k:
                    pairing[f"{a}*{b}"] = ring.integrate(ring.gen(a) * ring.gen(b))
    report = {
        "ok": True,
        "dim": n,
        "basis": [lab for lab, _, _ in ring.spec.basis],
        "fundamental": ring.fundamental_label,
        "pairing": pairing,
    }
    if args.integrate:
        prod = ring.one()
        for expr in args.integrate:
            prod = prod * _class(ring, expr)
        report["integral"] = ring.integrate(prod)
        report["factors"] = list(args.integrate)
    return report


def cmd_p_value(args):
    ring = _ring(args.ring)
    F = _bundle(ring, args.bundle)
    total = _total(ring, args, F)
    zeta, extra = _zeta(ring, args, total)
    return {"bundle": args.bundle, "zeta": args.zeta, "p_value": p_value(ring, zeta, F), **extra}


def cmd_classify(args):
    ring = _ring(args.ring)
    fam, simple = _family(ring, args.family)
    if args.simple:
        simple = True
    zeta, extra = _zeta(ring, args, fam.total)
    verdict = classify(ring, zeta, fam, simple=simple)
    return {"family": args.family, "zeta": args.zeta, **verdict.to_json(), **extra}


def cmd_cone(args):
    ring = _ring(args.ring)
    fam, _ = _family(ring, args.family)
    zeta, _ = _zeta(ring, args, fam.total)
    dirs = [_direction(ring, d) for d in args.direction]
    cone = stability_cone(ring, zeta, dirs, fam, direction_names=args.direction)
    report = {"cone": cone_to_json(cone), "basepoint": params_to_json(zeta)}
    if args.point is not None:
        t = [_rational(x) for x in args.point.split(",")]
        mem = cone_membership(cone, t)
        report["membership"] = {
            "point": t,
            "region": mem.region.value,
            "binding": list(mem.binding),
            "violated": list(mem.violated),
        }
    return report


def cmd_song(args):
    ring = _ring(args.ring)
    omega = _default_omega(ring, args)
    if args.cone:
        cone = cone_from_json(ring, _load_json(args.cone))
    elif ring == blowup.RING:
        cone = blowup.CURVES
    else:
        raise MalformedInput("--cone is required for rings other than blp2")
    out = {}
    for name in args.bundle:
        res = song_j_solvable(ring, omega, _bundle(ring, name), cone)
        out[name] = {"solvable": res.solvable, "ratios": list(res.ratios), "threshold": res.threshold}
    return {"omega": str(omega), "curves": [str(c) for c in cone.generators], "bundles": out}


def cmd_example(args):
    rep = classify_example_8(_rational(args.eps1), _rational(args.eps2))
    song = {}
    for name in ("L1", "L2"):
        res = song_j_solvable(blowup.RING, blowup.OMEGA, blowup.bundle(name), blowup.CURVES)
        song[name] = {"solvable": res.solvable, "ratios": list(res.ratios), "threshold": res.threshold}
    return {**rep.to_json(), "song": song}


def cmd_flow(args):
    model, b0 = _model(args.model, _seed(args))
    opts = _flow_opts(args)
    res = flow(model, b0, opts)
    if args.trace_csv:
        write_trace_csv(res, args.trace_csv)
    out = res.to_json()
    out["monotone"] = all(
        f1 <= f0 + nz for (_, f0, _), (_, f1, _), nz in zip(res.trajectory, res.trajectory[1:], res.energy_noise)
    )
    if not args.full_trajectory:
        out["trajectory"] = out["trajectory"][:: max(1, len(out["trajectory"]) // 200)]
    return out


def _parse_floats(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise MalformedInput(f"expected comma-separated numbers, got {text!r}") from exc


def cmd_one_ps(args):
    model, b = _model(args.model, _seed(args))
    if (args.xi is None) == (args.subspace is None):
        raise MalformedInput("give exactly one of --xi and --subspace")
    report = {}
    if args.xi is not None:
        vals = _parse_floats(args.xi)
        if len(vals) != model.dim:
            raise MalformedInput(f"--xi needs {model.dim} diagonal entries")
        xi = LieElement.diagonal(model, vals, "hermitian")
    else:
        dims = [int(x) for x in args.subspace.split(",")]
        xi = subspace_generator(model, dims)
        report["P_F"] = subspace_p_value(model, dims)
        report["limit_weight"] = 2 * math.pi * model.total_rank * float(report["P_F"])
    orbit = one_ps_orbit(model, xi, b, args.t)
    lim = one_ps_limit(model, xi, b)
    report.update(
        {
            "t": args.t,
            "orbit_norm": orbit.norm(),
            "weight": weight_function(model, xi, b, args.t),
            "orbit": model_to_json(model, orbit)["point"],
        }
    )
    if lim.exists:
        report["limit"] = {"exists": True, "point": model_to_json(model, lim.limit)["point"]}
    else:
        report["limit"] = {
            "exists": False,
            "divergent": [{"arrow": f"{i}-{j}-{a}", "weight": w, "magnitude": m} for (i, j, a), w, m in lim.divergent],
        }
    return report


def cmd_oracle(args):
    model, b = _model(args.model, _seed(args))
    oracle = brute_force_verdict(model, b)
    report = {"oracle": oracle.to_json()}
    if not args.no_flow:
        fv = flow_verdict(model, b, _flow_opts(args))
        report["flow"] = {
            "verdict": fv.kind.value,
            "in_orbit": fv.in_orbit,
            "classification": fv.result.classification.to_json(),
        }
        report["agree"] = fv.kind is oracle.kind
    return report


# -- parser -----------------------------------------------------------------------------

def _add_zeta_args(p, required=True):
    p.add_argument("--zeta", required=required, help=f"one of {', '.join(ZETA_NAMES)} or a JSON file")
    p.add_argument("--omega", help="Kähler class, e.g. '2H-D' (default 2H-D on blp2)")
    p.add_argument("--total", help="bundle used to normalise zeta (default E on blp2)")
    p.add_argument("--alpha", help="deformation class for the rescaled equation (default H-2D on blp2)")
    p.add_argument("--eps1", default="0")
    p.add_argument("--eps2", default="0")


def _add_flow_args(p):
    d = FlowOptions()
    p.add_argument("--dt0", type=float, default=d.dt0)
    p.add_argument("--tmax", type=float, default=d.t_max)
    p.add_argument("--grad-tol", type=float, default=d.grad_tol)
    p.add_argument("--cluster-tol", type=float, default=d.eig_cluster_tol)
    p.add_argument("--method", choices=("auto", "rk4", "bdf"), default=d.method)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcrit", description=__doc__.splitlines()[0])
    ap.add_argument("--output", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring-check", help="validate a ring spec and print its pairing")
    p.add_argument("--ring", default="blp2")
    p.add_argument("--integrate", nargs="+", metavar="CLASS", help="integrate the product of these classes")
    p.set_defaults(func=cmd_ring_check)

    p = sub.add_parser("p-value", help="evaluate P_zeta on a bundle")
    p.add_argument("--ring", default="blp2")
    p.add_argument("--bundle", required=True)
    _add_zeta_args(p)
    p.set_defaults(func=cmd_p_value)

    p = sub.add_parser("classify", help="stability verdict for an admissible family")
    p.add_argument("--ring", default="blp2")
    p.add_argument("--family", required=True, help="E0, E1, E2 on blp2 or a JSON file")
    p.add_argument("--simple", action="store_true")
    _add_zeta_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cone", help="stability cone around a basepoint")
    p.add_argument("--ring", default="blp2")
    p.add_argument("--family", required=True)
    p.add_argument("--direction", action="append", required=True, help="'eps2' on blp2 or a JSON file")
    p.add_argument("--point", help="comma-separated rational coordinates to test")
    _add_zeta_args(p)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("song", help="Song's J-equation criterion on a surface")
    p.add_argument("--ring", default="blp2")
    p.add_argument("--omega")
    p.add_argument("--cone", help="JSON list of curve classes")
    p.add_argument("--bundle", nargs="+", default=["L1", "L2"])
    p.set_defaults(func=cmd_song)

    p = sub.add_parser("example-blp2", help="solvability report for the blow-up example")
    p.add_argument("--eps1", default="0")
    p.add_argument("--eps2", default="0")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("flow", help="run the moment-map flow on a quiver model")
    p.add_argument("--model", required=True)
    p.add_argument("--trace-csv", metavar="PATH")
    p.add_argument("--full-trajectory", action="store_true", help="do not thin the trajectory in the report")
    p.add_argument("--seed", type=int, help="seed for a random point when the model has none")
    _add_flow_args(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("one-ps", help="one-parameter subgroup orbit, limit and weight")
    p.add_argument("--model", required=True)
    p.add_argument("--xi", help="comma-separated diagonal entries of a Hermitian generator")
    p.add_argument("--subspace", help="comma-separated dimensions s_k of a graded subspace")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_one_ps)

    p = sub.add_parser("oracle", help="combinatorial verdict (all m_k = 1) compared with the flow")
    p.add_argument("--model", required=True)
    p.add_argument("--no-flow", action="store_true")
    p.add_argument("--seed", type=int)
    _add_flow_args(p)
    p.set_defaults(func=cmd_oracle)
    return ap


def _emit(report, mode, stream):
    stream.write((dumps(report) if mode == "json" else render_text(report)) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.func(args)
    except MalformedInput as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.output, stderr)
        return 2
    except NoConvergence as exc:
        err = {"error": "NoConvergence", "message": str(exc), "t_max": exc.t_max}
        res = getattr(exc, "result", None)
        if res is not None and hasattr(res, "final_energy"):
            err["final_energy"] = res.final_energy
            err["grad_norm"] = res.grad_norm
            err["time"] = res.time
        _emit(err, args.output, stdout if args.output == "json" else stderr)
        return 1
    except PcritError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.output, stdout if args.output == "json" else stderr)
        return 1
    _emit(report, args.output, stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
