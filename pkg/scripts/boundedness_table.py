"""Table of sup_f ||Op f|| / ||f|| for each operator and a few exponents.

Each column is the measured constant over the 20-function suite at the base
quadrature orders, followed by the value after doubling them.
"""
import math

from gvlp.exponents import constant, rational_decay
from gvlp.harness import ExperimentConfig
from gvlp.harness.experiments import run_boundedness_experiment

EXPONENTS = [constant(2.0), constant(3.0), rational_decay(3.0, 1.0), rational_decay(1.5, 2.0), rational_decay(4.0, 0.5)]
OPS = ("T_t", "T*", "P_t", "J_beta")


def main():
    cfg = ExperimentConfig()
    print(f"{'exponent':<32}" + "".join(f"{op:>22}" for op in OPS))
    for p in EXPONENTS:
        rep = run_boundedness_experiment(cfg, p)
        cells = []
        for op in OPS:
            a = rep.constants.get(f"C[{op}]({p.ident})", math.nan)
            b = rep.constants.get(f"C[{op}]({p.ident}).refined", math.nan)
            cells.append(f"{a:9.6f} / {b:9.6f}")
        print(f"{p.ident:<32}" + "".join(f"{c:>22}" for c in cells))


if __name__ == "__main__":
    main()
