"""Correlation study on a synthetic cohort of systems.

Prints the PCC matrix between measures (one point per system and machine)
and the alpha sweep of bounded F1-EV.  The cohort is generated, not real
challenge submissions, so only the ordering of correlations is meaningful.

    python scripts/cohort_correlations.py --systems 50 --seed 7
"""

from __future__ import annotations

import argparse

from f1ev import compare
from f1ev.synth import gen_cohort


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--systems", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--alphas", default="0.05,0.1,0.2,0.5,1.0,2.0")
    args = ap.parse_args()

    cohort = gen_cohort(args.systems, args.seed)
    evaluation = compare.evaluate_cohort(cohort.submissions, cohort.truth)
    for system, reason in evaluation.excluded:
        print(f"excluded {system}: {reason}")
    print(f"{len(evaluation.systems)} systems, {len(evaluation.points)} points\n")

    matrix = compare.pcc_matrix(evaluation)
    width = max(map(len, compare.MEASURES))
    print(" " * width + "".join(f"{m:>15}" for m in compare.MEASURES))
    for a in compare.MEASURES:
        print(f"{a:<{width}}" + "".join(f"{matrix[a, b]:15.3f}" for b in compare.MEASURES))

    alphas = [float(a) for a in args.alphas.split(",")]
    print(f"\n{'alpha':>6} {'PCC auc':>9} {'PCC f1_sub':>11} {'PCC f1_opt':>11}")
    for row in compare.alpha_sweep(cohort.submissions, cohort.truth, alphas):
        print(f"{row.alpha:6.2f} {row.pcc_auc:9.3f} {row.pcc_f1_submitted:11.3f} {row.pcc_f1_optimal:11.3f}")


if __name__ == "__main__":
    main()
