"""Instability certificates for the equatorial map over a grid of (n, p)."""

import argparse

from katolab.equatorial_stability import build_certificate, certificate_grid, ode_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=50)
    args = ap.parse_args()

    print(f"{'n':>2} {'p':>8} {'eps':>9} {'mu':>9} {'r0':>10} {'integral':>13} {'|diff|/err':>10} {'ode res':>9}")
    for n, p in certificate_grid(args.points):
        c = build_certificate(n, p)
        ratio = abs(c.integral_value - c.analytic_value) / c.quad_error
        print(f"{n:2d} {p:8.4f} {c.eps:9.4f} {c.mu:9.4f} {c.r0:10.3e} "
              f"{c.integral_value:13.6e} {ratio:10.2e} {ode_residual(c):9.1e}")


if __name__ == "__main__":
    main()
