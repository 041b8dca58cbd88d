"""Sweep the deformation parameters of the blow-up example and tabulate solvability.

Writes one CSV row per grid point with the exact invariant ``A``, ``P(L1)`` and
which of ``E0``, ``E1``, ``E2`` is solvable there. Points outside the
validity box are skipped.

    python3 scripts/blp2_phase_diagram.py --n1 41 --n2 61 --out phase.csv
"""

import argparse
import csv
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from pcrit.errors import OutOfValidityBox
from pcrit.exact import format_rational
from pcrit.stability import classify_example_8


@dataclass
class PhaseConfig:
    n1: int = 21
    n2: int = 31
    eps1_max: Fraction = Fraction(1)
    eps2_min: Fraction = Fraction(-2, 5)
    eps2_max: Fraction = Fraction(2, 5)
    out: str = "-"


def grid(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(k, n - 1) for k in range(n)]


def sweep(cfg: PhaseConfig):
    for e1 in grid(Fraction(0), cfg.eps1_max, cfg.n1):
        for e2 in grid(cfg.eps2_min, cfg.eps2_max, cfg.n2):
            try:
                rep = classify_example_8(e1, e2)
            except OutOfValidityBox:
                continue
            (solvable,) = [k for k, ok in rep.solvable.items() if ok]
            yield rep, solvable


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n1", type=int, default=PhaseConfig.n1)
    ap.add_argument("--n2", type=int, default=PhaseConfig.n2)
    ap.add_argument("--eps1-max", type=Fraction, default=PhaseConfig.eps1_max)
    ap.add_argument("--eps2-min", type=Fraction, default=PhaseConfig.eps2_min)
    ap.add_argument("--eps2-max", type=Fraction, default=PhaseConfig.eps2_max)
    ap.add_argument("--out", default=PhaseConfig.out, help="CSV path, '-' for stdout")
    a = ap.parse_args(argv)
    cfg = PhaseConfig(a.n1, a.n2, a.eps1_max, a.eps2_min, a.eps2_max, a.out)

    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    counts = Counter()
    try:
        w = csv.writer(fh)
        w.writerow(["eps1", "eps2", "A", "A_float", "P_L1", "solvable"])
        for rep, solvable in sweep(cfg):
            counts[solvable] += 1
            w.writerow([
                format_rational(rep.eps1), format_rational(rep.eps2), format_rational(rep.A),
                f"{float(rep.A):.12g}", format_rational(rep.p_L1), solvable,
            ])
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(f"solvable counts: {dict(sorted(counts.items()))}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
