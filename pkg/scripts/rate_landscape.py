"""Map the U(1) conversion-rate landscape over pairs of coherence angles.

For states psi(a) = cos(a)|0> + sin(a)|1> under the number action diag(0, 1),
the exact rate is the variance ratio V(a_in) / V(a_out). This script sweeps a
grid of (a_in, a_out), computes the rate through the full pencil machinery,
cross-checks it against the closed form, and tags each cell as reversible or
not. Output is a CSV on stdout; pipe it to a file for plotting.

Usage: python scripts/rate_landscape.py [--steps 13] [--check-reversibility]
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from asymkit.ratekit import SymCheckOptions, conversion_rate, reversibility_check
from asymkit.repkit import RepPair, Representation, U1Spec


def coherent_state(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)], dtype=complex)


def variance(angle: float) -> float:
    # V(psi, H) for H = diag(0, 1)
    s2 = math.sin(angle) ** 2
    return s2 * (1.0 - s2)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=13, help="grid points per axis")
    parser.add_argument(
        "--check-reversibility",
        action="store_true",
        help="also run the two-sided check per cell (slower)",
    )
    args = parser.parse_args()

    h = np.diag([0.0, 1.0]).astype(complex)
    rep = Representation(2, (h,), label="number")
    pair = RepPair(rep, rep)
    spec = U1Spec((0, 1))
    options = SymCheckOptions(u1=(spec, spec))

    # avoid the exact endpoints: eigenstates have zero variance and infinite rate
    angles = np.linspace(0.15, math.pi / 2 - 0.15, args.steps)
    header = ["a_in", "a_out", "rate", "closed_form", "abs_error"]
    if args.check_reversibility:
        header.append("reversible")
    print(",".join(header))
    worst = 0.0
    for a_in in angles:
        for a_out in angles:
            report = conversion_rate(
                pair, coherent_state(a_in), coherent_state(a_out), options, False
            )
            closed = variance(a_in) / variance(a_out)
            err = abs(report.rate - closed)
            worst = max(worst, err)
            row = [f"{a_in:.6f}", f"{a_out:.6f}", repr(report.rate), repr(closed), f"{err:.3e}"]
            if args.check_reversibility:
                rev = reversibility_check(
                    pair, coherent_state(a_in), coherent_state(a_out), options
                )
                row.append(str(rev.reversible))
            print(",".join(row))
    print(f"worst |pencil - closed form| over the grid: {worst:.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
