"""Measured kernel-bound constants per branch on random global pairs, at two s-grid sizes."""
import argparse

from gvlp.harness.experiments import kernel_bound_constants


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for d in (1, 2):
        base = kernel_bound_constants(d, args.pairs, args.seed, 200)
        fine = kernel_bound_constants(d, args.pairs, args.seed, 400)
        for branch in sorted(base):
            print(f"d={d} {branch:<14} C = {base[branch]:.6f}  (400-point grid: {fine[branch]:.6f})")


if __name__ == "__main__":
    main()
