"""How the Laguerre rule for the Poisson subordination converges.

The Bochner integrand e^{-k t^2 / 4u} is flat but not analytic at u = 0, so
Gauss-Laguerre converges only algebraically. This prints the worst relative
gap over k <= 9 and t in [0.1, 2] for growing node counts, and the same for
the Bessel rule, whose integrand e^{-s sqrt k} is entire.
"""
import numpy as np

from gvlp.subordination import bessel_discrepancy, poisson_discrepancy

TS = np.linspace(0.1, 2.0, 20)
BETAS = np.linspace(0.5, 4.0, 15)


def main():
    print(f"{'nodes':>6} {'poisson gap':>14} {'bessel gap':>14}")
    prev = None
    for n in (8, 16, 32, 64, 128, 256):
        pg = max(poisson_discrepancy(t, 9, n) for t in TS)
        bg = max(bessel_discrepancy(b, 9, n) for b in BETAS)
        rate = "" if prev is None else f"  (x{prev / pg:.2f})"
        print(f"{n:>6} {pg:>14.4e} {bg:>14.4e}{rate}")
        prev = pg
    worst_t = TS[np.argmax([poisson_discrepancy(t, 9, 64) for t in TS])]
    print(f"worst t at 64 nodes: {worst_t:.2f}")


if __name__ == "__main__":
    main()
