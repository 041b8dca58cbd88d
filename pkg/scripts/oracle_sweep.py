"""Compare flow-based verdicts with the combinatorial oracle on random quivers.

Each seed draws a model with at most ``max_vertices`` vertices (all
multiplicities 1, at most one arrow per ordered pair) and a random point,
optionally zeroing a fraction of its entries to reach the semistable and
polystable strata. One CSV row per seed; a summary goes to stderr.

    python3 scripts/oracle_sweep.py --seeds 400 --sparse 0.3 --out sweep.csv
"""

import argparse
import csv
import sys
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from pcrit.moment_flow import FlowOptions, ModelPoint, brute_force_verdict, flow_verdict, random_model, random_point


@dataclass
class SweepConfig:
    seeds: int = 100
    first_seed: int = 0
    max_vertices: int = 4
    p_range: int = 2
    sparse: float = 0.0
    grad_tol: float = 1e-10
    out: str = "-"


def sample(cfg: SweepConfig, seed: int):
    rng = np.random.default_rng(seed)
    m = random_model(rng, max_vertices=cfg.max_vertices, p_range=cfg.p_range)
    b = random_point(m, rng)
    if cfg.sparse > 0:
        b = ModelPoint(m, np.where(rng.random(b.data.shape) < cfg.sparse, 0, b.data))
    return m, b


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SweepConfig()
    ap.add_argument("--seeds", type=int, default=d.seeds)
    ap.add_argument("--first-seed", type=int, default=d.first_seed)
    ap.add_argument("--max-vertices", type=int, default=d.max_vertices)
    ap.add_argument("--p-range", type=int, default=d.p_range)
    ap.add_argument("--sparse", type=float, default=d.sparse, help="probability of zeroing an entry")
    ap.add_argument("--grad-tol", type=float, default=d.grad_tol)
    ap.add_argument("--out", default=d.out)
    a = ap.parse_args(argv)
    cfg = SweepConfig(a.seeds, a.first_seed, a.max_vertices, a.p_range, a.sparse, a.grad_tol, a.out)
    opts = FlowOptions(grad_tol=cfg.grad_tol)

    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    counts, disagreements, t0 = Counter(), 0, time.perf_counter()
    try:
        w = csv.writer(fh)
        w.writerow(["seed", "vertices", "oracle", "flow", "agree", "flow_time", "steps", "seconds"])
        for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
            m, b = sample(cfg, seed)
            t1 = time.perf_counter()
            oracle = brute_force_verdict(m, b).kind
            fv = flow_verdict(m, b, opts)
            agree = fv.kind is oracle
            counts[oracle.value] += 1
            disagreements += not agree
            w.writerow([
                seed, m.n_vertices, oracle.value, fv.kind.value, agree,
                f"{fv.result.time:.6g}", fv.result.iterations, f"{time.perf_counter() - t1:.3f}",
            ])
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(
        f"{cfg.seeds} seeds, {disagreements} disagreements, verdicts {dict(counts)}, "
        f"{time.perf_counter() - t0:.1f} s",
        file=sys.stderr,
    )
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
