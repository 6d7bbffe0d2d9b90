"""Quadrature rules and special functions used by the capacity integrals.

Three primitives live here: physicists' Gauss-Hermite rules (expectations
over Gaussians in the dB domain), the modified Bessel function K1 (Laplace
transform of the reciprocal of an exponential variate), and an adaptive
integrator for smooth integrands on (0, inf) that are localized in log z.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureRule",
    "ConvergenceError",
    "gauss_hermite",
    "bessel_k1",
    "integrate_semi_infinite",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite nodes/weights for integrals against exp(-x^2).

    Weights sum to sqrt(pi); nodes are symmetric about zero and ascending.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_hermite(order: int) -> QuadratureRule:
    """Build the physicists' Gauss-Hermite rule of the given order.

    The rule integrates f(x) exp(-x^2) exactly for polynomial f up to degree
    2*order - 1.

    Args:
        order: number of nodes, 1 to 200.

    Raises:
        ValueError: order outside [1, 200].
    """
    if int(order) != order or not 1 <= order <= 200:
        raise ValueError("order must be an integer in [1, 200]")
    nodes, weights = np.polynomial.hermite.hermgauss(int(order))
    return QuadratureRule(order=int(order), nodes=nodes, weights=weights)


# Chebyshev fit of exp(x) sqrt(x) K1(x) on u = 4/x - 1, x in [2, inf).
# Generated offline from 50-digit reference values; max relative error of the
# evaluated branch is < 4e-16 on [2, 700].
_K1_CHEB = np.array([
    1.36031309524222133e+00,
    1.03923736576817236e-01,
    -2.85781685962277921e-03,
    1.95215518471351620e-04,
    -1.93619797416608301e-05,
    2.40648494783721699e-06,
    -3.50196060308781256e-07,
    5.74108412545004947e-08,
    -1.03457624656780968e-08,
    2.01504975519703466e-09,
    -4.19035475934192542e-10,
    9.21831518760531460e-11,
    -2.12996783842779092e-11,
    5.13963967348234321e-12,
    -1.28917396094982285e-12,
    3.34841966605224312e-13,
    -8.97670518201014629e-14,
    2.47715442421959878e-14,
    -7.01983708921476847e-15,
    2.03870316623986097e-15,
    -6.05704727064301766e-16,
    1.83809357524304548e-16,
    -5.68946284919364841e-17,
    1.79405104788635718e-17,
    -5.75674448207330252e-18,
    1.87786519016232677e-18,
])

_DIGAMMA_1 = -0.5772156649015328606


def _k1_series(x: np.ndarray) -> np.ndarray:
    # Ascending series for x <= 2:
    #   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k c_k (psi(k+1)+psi(k+2))
    # with c_k = (x^2/4)^k / (k! (k+1)!), which is also the I1 series core.
    half = 0.5 * x
    q = half * half
    i1 = np.zeros_like(x)
    s = np.zeros_like(x)
    term = np.ones_like(x)
    psi_a = _DIGAMMA_1
    psi_b = _DIGAMMA_1 + 1.0
    for k in range(1, 19):
        i1 += term
        s += term * (psi_a + psi_b)
        term *= q / (k * (k + 1))
        psi_a += 1.0 / k
        psi_b += 1.0 / (k + 1)
    return np.log(half) * half * i1 + 1.0 / x - 0.25 * x * s


def _k1_large(x: np.ndarray) -> np.ndarray:
    # Clenshaw evaluation of the Chebyshev fit, then undo the exp/sqrt scaling.
    t = 4.0 / x - 1.0
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for a in _K1_CHEB[:0:-1]:
        b1, b2 = 2.0 * t * b1 - b2 + a, b1
    f = t * b1 - b2 + _K1_CHEB[0]
    with np.errstate(under="ignore"):
        return f * np.exp(-x) / np.sqrt(x)


def bessel_k1(x):
    """Modified Bessel function of the second kind, order 1.

    Accurate to ~1e-15 relative over [1e-8, 700]; for larger x the exp(-x)
    scale underflows and the result degrades to 0.0, which is fine for the
    integrals here.

    Args:
        x: positive scalar or array.

    Raises:
        ValueError: any element <= 0 or NaN.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise ValueError("bessel_k1 is defined for x > 0 only")
    out = np.empty_like(arr)
    small = arr <= 2.0
    if small.any():
        out[small] = _k1_series(arr[small])
    big = ~small
    if big.any():
        out[big] = _k1_large(arr[big])
    return float(out) if out.ndim == 0 else out


class ConvergenceError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    Carries the best available estimate and its error bound so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


_PANEL_NODES, _PANEL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _panel_sum(g, lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (hi - lo) / panels
    t = (mids[:, None] + half * _PANEL_NODES[None, :]).ravel()
    vals = np.asarray(g(t), dtype=float).reshape(panels, _PANEL_NODES.size)
    return float(half * np.sum(vals @ _PANEL_WEIGHTS))


def integrate_semi_infinite(f: Callable, rel_tol: float = 1e-8, max_panels: int = 4096) -> float:
    """Integrate f over (0, inf) for integrands localized in log z.

    Substitutes z = exp(t) and integrates g(t) = f(exp(t)) exp(t) over a
    window found by expanding until g is below 1e-16 of its running peak at
    both ends, then refines composite 16-point Gauss-Legendre panels until
    two successive panel counts agree to rel_tol. Fully deterministic for a
    given f and tolerance.

    Args:
        f: integrand; must accept a 1-D numpy array of z values.
        rel_tol: relative agreement required between refinements.
        max_panels: refinement cap.

    Raises:
        ConvergenceError: tolerance not reached within max_panels, or the
            integrand is not finite on the probe window.
    """

    def g(t):
        t = np.asarray(t, dtype=float)
        z = np.exp(t)
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(f(z), dtype=float) * z

    lo, hi = -40.0, 40.0
    probe = g(np.linspace(lo, hi, 81))
    if not np.all(np.isfinite(probe)):
        raise ConvergenceError("integrand is not finite on the probe window", float("nan"), float("inf"))
    peak = float(np.max(np.abs(probe)))
    if peak == 0.0:
        return 0.0

    # Push each end out until the transformed integrand is negligible there.
    while lo > -700.0:
        v = abs(float(g(np.array([lo]))[0]))
        peak = max(peak, v)
        if v <= 1e-16 * peak:
            break
        lo -= 5.0
    while hi < 700.0:
        v = abs(float(g(np.array([hi]))[0]))
        if not np.isfinite(v):
            raise ConvergenceError("integrand diverges at large z", float("nan"), float("inf"))
        peak = max(peak, v)
        if v <= 1e-16 * peak:
            break
        hi += 5.0

    panels = 8
    prev = cur = _panel_sum(g, lo, hi, panels)
    diff = float("inf")
    while panels < max_panels:
        panels *= 2
        cur = _panel_sum(g, lo, hi, panels)
        diff = abs(cur - prev)
        if diff <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise ConvergenceError(f"no convergence after {max_panels} panels", cur, diff)
