"""Trace the moment-map flow on the single-arrow model and compare with the closed form.

With levels ``p = (0, 0)`` and ``x(0) = x0`` the flow solves
``|x(t)|^2 = |x0|^2 / (1 + 2 |x0|^2 t)``, so ``f(t) = |x(t)|^4 / 4``. The
script writes the sampled trace with the exact value and relative error.
A JSON model file may be given instead, in which case only the trace is written.

    python3 scripts/flow_trace.py --x0 1 --out trace.csv
    python3 scripts/flow_trace.py --model model.json --seed 3
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from pcrit.moment_flow import FlowOptions, ModelPoint, build_model, flow, model_from_json, random_point


@dataclass
class TraceConfig:
    x0: float = 1.0
    model: str | None = None
    seed: int = 0
    t_max: float = 1e8
    grad_tol: float = 1e-9
    method: str = "auto"
    out: str = "-"


def closed_form(x0: float, t: float) -> float:
    s = abs(x0) ** 2 / (1 + 2 * abs(x0) ** 2 * t)
    return s * s / 4


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = TraceConfig()
    ap.add_argument("--x0", type=float, default=d.x0)
    ap.add_argument("--model")
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--tmax", type=float, default=d.t_max)
    ap.add_argument("--grad-tol", type=float, default=d.grad_tol)
    ap.add_argument("--method", choices=("auto", "rk4", "bdf"), default=d.method)
    ap.add_argument("--out", default=d.out)
    a = ap.parse_args(argv)
    cfg = TraceConfig(a.x0, a.model, a.seed, a.tmax, a.grad_tol, a.method, a.out)

    if cfg.model:
        with open(cfg.model) as fh:
            model, b0 = model_from_json(json.load(fh))
        if b0 is None:
            b0 = random_point(model, np.random.default_rng(cfg.seed))
        exact = None
    else:
        model = build_model([(1, 1, 0), (1, 1, 0)], {(0, 1): 1})
        b0 = ModelPoint.from_blocks(model, {(0, 1, 0): [[cfg.x0]]})
        exact = lambda t: closed_form(cfg.x0, t)  # noqa: E731

    res = flow(model, b0, FlowOptions(t_max=cfg.t_max, grad_tol=cfg.grad_tol, method=cfg.method))
    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    worst = 0.0
    try:
        w = csv.writer(fh)
        w.writerow(["t", "f", "grad_norm"] + (["f_exact", "rel_error"] if exact else []))
        for t, f, g in res.trajectory:
            row = [f"{t:.12g}", f"{f:.12g}", f"{g:.12g}"]
            if exact:
                fe = exact(t)
                err = abs(f - fe) / fe if fe > 0 else abs(f)
                worst = max(worst, err)
                row += [f"{fe:.12g}", f"{err:.3e}"]
            w.writerow(row)
    finally:
        if fh is not sys.stdout:
            fh.close()
    summary = (
        f"steps {res.iterations} (rejected {res.rejected}), t = {res.time:.6g}, "
        f"f = {res.final_energy:.3e}, limit {res.classification.kind}"
    )
    if exact:
        summary += f", worst relative error {worst:.2e}"
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
