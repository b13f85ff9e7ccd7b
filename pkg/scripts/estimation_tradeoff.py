"""Study the estimate-and-convert split: copies spent estimating vs converting.

Runs the pipeline on the shipped u1_coherence_bit problem for a range of total
copy counts and several split exponents (n_est ~ n^(1-alpha), so the
estimation share is sublinear and conversion dominates as n grows). For each
cell it reports how many copies went to estimation, the frame-estimation
error, and the final per-protocol distance to the target. Larger alpha hands
more copies to conversion at the price of a coarser frame estimate; the table
makes the tradeoff concrete. Deterministic under --seed.

Usage: python scripts/estimation_tradeoff.py [--copies 4:14] [--shift 0.5]
"""

from __future__ import annotations

import argparse

import numpy as np

from asymkit.chankit import estimate_and_convert
from asymkit.problemfile import load_problem, shipped_path


def parse_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--copies", default="4:14", help="total copy counts, A:B or comma list")
    parser.add_argument("--shift", type=float, default=0.5, help="hidden frame angle")
    parser.add_argument("--exponents", default="0.2,0.3,0.5", help="split exponents to compare")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    problem = load_problem(shipped_path("u1_coherence_bit"))
    copies = parse_range(args.copies)
    exponents = [float(t) for t in args.exponents.split(",")]

    print("alpha,n,n_est,n_conv,frame_error,distance_to_target,fidelity_to_target")
    for alpha in exponents:
        for n in copies:
            report = estimate_and_convert(
                problem.pair,
                problem.state_in_vector,
                problem.state_out_vector,
                n,
                alpha,
                (args.shift,),
                args.seed,
                problem.tol,
            )
            frame_err = float(
                np.linalg.norm(np.array(report.estimate_theta) - np.array(report.true_theta))
            )
            print(
                f"{alpha},{n},{report.n_est},{report.n_conv},"
                f"{frame_err:.6e},{report.distance_to_target:.6e},{report.fidelity_to_target:.12f}"
            )


if __name__ == "__main__":
    main()
