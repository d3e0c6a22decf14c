"""Run the three desk-scale experiments and print a short table for each.

    python scripts/run_experiments.py [--seed 0] [--spacing 0.01]
"""

import argparse

from tgeom import (
    TubeGrid,
    convexity_demo,
    distorted_sigma,
    euclidean_sigma,
    find_intransitivity,
    gram_report,
    sample_tube,
    sphere_sigma,
)

U_REGION = [(0, 0), (3, 0), (3, 3), (1.6, 3), (1.6, 1), (1.4, 1), (1.4, 3), (0, 3)]
U_BASE = (0.5, 2.5)
U_PROBES = [(2.5, 2.5), (0.5, 0.5), (2.5, 0.5), (1.5, 0.5)]


def tubes(spacing, seed):
    print("tube through (0,0)-(1,0), tol 1e-9")
    print(f"{'d':>6} {'width':>8} {'members':>8}")
    eu = euclidean_sigma(2)
    grid = TubeGrid(extent=1.0, spacing=spacing)
    for d in (0.0, 0.02, 0.05, 0.1, 0.2):
        rep = sample_tube(distorted_sigma(eu, d), (0, 0), (1, 0), grid, tol=1e-9, seed=seed)
        print(f"{d:>6} {rep.width:>8.4f} {rep.member_count:>8}")


def parallelism(seed):
    print("\nremote parallelism, 10^4 trials in [-3, 3]^n")
    cases = [
        (euclidean_sigma(2), 1e-9),
        (euclidean_sigma(3), 1e-9),
        (distorted_sigma(euclidean_sigma(2), 0.2), 1e-3),
        (sphere_sigma(1.0), 1e-3),
    ]
    for wf, tol in cases:
        rep = find_intransitivity(wf, trials=10_000, box=3.0, tol=tol, seed=seed)
        detail = ""
        if rep.found:
            detail = f"trial {rep.trial_index}: cos uv={rep.cos_uv:.4f} vw={rep.cos_vw:.4f} uw={rep.cos_uw:.4f}"
        print(f"  {wf.name:<34} tol={tol:g}  intransitive={rep.found}  {detail}")


def convexity():
    print("\nGram spectrum at", U_BASE, "for probes", U_PROBES)
    for label, rep in (
        ("U-shaped region", convexity_demo(U_REGION, U_BASE, U_PROBES)),
        ("euclidean plane", gram_report(euclidean_sigma(2), U_BASE, U_PROBES)),
    ):
        eig = ", ".join(f"{e:.6g}" for e in rep.eigenvalues)
        print(f"  {label:<16} embeddable={rep.embeddable!s:<5} rank={rep.rank}  eigenvalues=[{eig}]")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--spacing", type=float, default=0.01)
    args = parser.parse_args()
    tubes(args.spacing, args.seed)
    parallelism(args.seed)
    convexity()


if __name__ == "__main__":
    main()
