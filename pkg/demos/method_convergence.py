"""Convergence of the two capacity routes toward each other.

The quadrature route is effectively exact (its error is set by the
Gauss-Hermite order and the integral tolerance), so the Monte Carlo error
should shrink like 1/sqrt(n) around it, with the reported standard error
tracking the actual deviation.
"""
import math

from plcrelay import (
    McSettings,
    analytic_hybrid_capacity,
    default_system,
    gauss_hermite,
    mc_hybrid_capacity,
)


def main():
    sys = default_system()

    print("quadrature order sensitivity (integral tolerance 1e-10)")
    prev = None
    for order in (4, 8, 16, 32, 64):
        c = analytic_hybrid_capacity(sys, gauss_hermite(order), rel_tol=1e-10)
        drift = "" if prev is None else f"  change {abs(c.bits_per_s_per_hz - prev):.2e}"
        print(f"  order {order:3d}: {c.bits_per_s_per_hz:.12f}{drift}")
        prev = c.bits_per_s_per_hz
    reference = prev

    print("\nMonte Carlo convergence toward the quadrature value")
    print(f"  {'n':>9s} {'estimate':>12s} {'actual dev':>11s} {'reported SE':>12s}")
    for n in (10**3, 10**4, 10**5, 10**6, 4 * 10**6):
        est = mc_hybrid_capacity(sys, McSettings(n_samples=n, seed=1, workers=4))
        dev = abs(est.bits_per_s_per_hz - reference)
        print(f"  {n:9d} {est.bits_per_s_per_hz:12.6f} {dev:11.2e} {est.std_error:12.2e}")
    print("\nThe deviation column should hover around one SE; the SE column")
    print(f"should fall by sqrt(10) per decade of n (ideal: {1 / math.sqrt(10):.3f}x).")


if __name__ == "__main__":
    main()
