"""Ergodic capacity of the relay chain and of a direct power-line run.

Analytic route: with the end-to-end SNR written as K / (L + M) for
independent nonnegative K (power-line signal term) and L + M (relay plus
referred destination noise), the identity

    E[ln(1 + K/(L+M))] = int_0^inf (1 - M_K(z)) M_{L+M}(z) / z dz

holds for Laplace-domain MGFs M_X(z) = E[exp(-z X)]. Both MGFs have closed
forms here: a Gauss-Hermite sum over the log-normal dB fading for M_K, and
exp(-z sigma_r^2) * 2 sqrt(c) K1(2 sqrt(c)) for M_{L+M}, since the referred
noise M is an inverse-exponential variate. The direct power-line capacity has
its own one-dimensional Gauss-Hermite form. Monte Carlo estimators of the
same quantities provide the cross-check.

Monte Carlo determinism: sampling is split into fixed 65536-draw blocks,
block i gets its own substream seeded by (seed, i), and block sums are
reduced in index order, so estimates are bit-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import HybridSystem, PlcLink, attenuation_coefficient
from .specfun import QuadratureRule, bessel_k1, integrate_semi_infinite

__all__ = [
    "CapacityEstimate",
    "McSettings",
    "mgf_k",
    "mgf_lm",
    "analytic_hybrid_capacity",
    "mc_hybrid_capacity",
    "analytic_plc_capacity",
    "mc_plc_capacity",
]

_LN2 = math.log(2.0)
_BLOCK = 65536


@dataclass(frozen=True)
class CapacityEstimate:
    """Ergodic capacity value plus how it was obtained.

    Attributes:
        bits_per_s_per_hz: the capacity estimate.
        method: "analytic" or "monte_carlo".
        std_error: standard error of the estimate (0 for analytic).
        samples: number of Monte Carlo draws (0 for analytic).
    """

    bits_per_s_per_hz: float
    method: str
    std_error: float = 0.0
    samples: int = 0

    def __post_init__(self):
        if self.method not in ("analytic", "monte_carlo"):
            raise ValueError("method must be 'analytic' or 'monte_carlo'")
        if self.bits_per_s_per_hz < 0 or self.std_error < 0 or self.samples < 0:
            raise ValueError("capacity, std_error and samples must be nonnegative")
        if self.method == "analytic" and (self.std_error != 0.0 or self.samples != 0):
            raise ValueError("analytic estimates carry no sampling error")


@dataclass(frozen=True)
class McSettings:
    """Monte Carlo controls.

    workers only changes scheduling, never the estimate; see the module
    docstring for the block-substream contract.
    """

    n_samples: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def _plc_power_terms(link: PlcLink, src_power_w: float, rule: QuadratureRule) -> np.ndarray:
    # Values of K = P_s exp(-2 alpha d1) |h_P|^2 at the Gauss-Hermite nodes:
    # the dB-domain gain is 2 mu + 2 sqrt(2) sigma x_n after absorbing the
    # exp(-x^2) weight's change of variables.
    alpha = attenuation_coefficient(link)
    scale = src_power_w * math.exp(-2.0 * alpha * link.length_m)
    g_db = 2.0 * math.sqrt(2.0) * link.fading_sigma_db * rule.nodes + 2.0 * link.fading_mu_db
    return scale * 10.0 ** (g_db / 10.0)


def mgf_k(z, sys: HybridSystem, rule: QuadratureRule):
    """Laplace-domain MGF E[exp(-z K)] of the power-line signal term.

    Evaluated as a Gauss-Hermite sum over the dB-domain Gaussian. Accepts a
    scalar or array z >= 0; the result lies in (0, 1] and is 1 at z = 0 up to
    the quadrature weight normalization.
    """
    z = np.asarray(z, dtype=float)
    terms = _plc_power_terms(sys.plc, sys.src_power_w, rule)
    w = rule.weights / math.sqrt(math.pi)
    with np.errstate(over="ignore"):
        vals = np.exp(-z[..., None] * terms)
    out = vals @ w
    return float(out) if out.ndim == 0 else out


def _referred_noise_scale(sys: HybridSystem) -> float:
    # b in M = b / |h_w|^2: destination noise referred through the wireless
    # hop and the relay amplifier.
    w = sys.wireless
    return w.noise_var * w.dist_m**w.pathloss_exp / (sys.relay_power_w * sys.relay_gain**2)


def mgf_lm(z, sys: HybridSystem):
    """MGF E[exp(-z (L+M))] of the total noise term of the relay chain.

    L = sigma_r^2 is deterministic. M = b / |h_w|^2 with |h_w|^2 ~ Exp(1)
    gives E[exp(-z M)] = 2 sqrt(z b) K1(2 sqrt(z b)), which tends to 1 as
    z -> 0 and is defined as exactly 1 at z = 0.

    Raises:
        ValueError: relay gain or relay power is zero (no wireless hop; the
            chain capacity is 0 and callers handle that case directly).
    """
    if sys.relay_gain == 0.0 or sys.relay_power_w == 0.0:
        raise ValueError("degenerate relay: gain and power must be positive")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    b = _referred_noise_scale(sys)
    out = np.ones_like(z)
    pos = z > 0.0
    if pos.any():
        v = 2.0 * np.sqrt(z[pos] * b)
        with np.errstate(under="ignore"):
            out[pos] = np.exp(-z[pos] * sys.plc.noise_var) * v * bessel_k1(v)
    return float(out[0]) if scalar else out


def analytic_hybrid_capacity(
    sys: HybridSystem,
    rule: QuadratureRule,
    rel_tol: float = 1e-8,
    _noise_sign: float = 1.0,
) -> CapacityEstimate:
    """Half-duplex ergodic capacity of the relay chain, bits/s/Hz.

    Evaluates the MGF integral from the module docstring, converts nats to
    bits, and applies the two-phase 1/2. A relay with zero gain or power (or
    a silent source) short-circuits to capacity 0 instead of evaluating the
    degenerate MGF.

    The private _noise_sign flips the relay-noise exponent and exists only as
    a fault-injection hook for the self-validation command; leave it at 1.0.
    """
    if sys.src_power_w == 0.0 or sys.relay_gain == 0.0 or sys.relay_power_w == 0.0:
        return CapacityEstimate(0.0, "analytic")
    terms = _plc_power_terms(sys.plc, sys.src_power_w, rule)
    w = rule.weights / math.sqrt(math.pi)
    b = _referred_noise_scale(sys)
    sr2 = sys.plc.noise_var * _noise_sign

    def integrand(z):
        # overflow/invalid can only appear on diverging inputs; the
        # integrator checks finiteness and raises, so no need to warn here
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            # 1 - M_K via expm1 so the z -> 0 tail stays accurate.
            one_minus_mk = -(np.expm1(-z[:, None] * terms) @ w)
            v = 2.0 * np.sqrt(z * b)
            mlm = np.exp(-z * sr2) * v * bessel_k1(v)
            return one_minus_mk * mlm / z

    value = integrate_semi_infinite(integrand, rel_tol)
    return CapacityEstimate(value / (2.0 * _LN2), "analytic")


def _finish_mc(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    if n > 1:
        var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
        return mean, math.sqrt(var / n)
    return mean, 0.0


def _run_blocks(block_fn, mc: McSettings) -> tuple[float, float]:
    n_blocks = -(-mc.n_samples // _BLOCK)
    counts = [min(_BLOCK, mc.n_samples - i * _BLOCK) for i in range(n_blocks)]
    seed = mc.seed % (1 << 64)

    def job(i):
        rng = np.random.default_rng([seed, i])
        return block_fn(rng, counts[i])

    if mc.workers > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            results = list(pool.map(job, range(n_blocks)))
    else:
        results = [job(i) for i in range(n_blocks)]

    total = 0.0
    total_sq = 0.0
    for s, ss in results:  # fixed reduction order, independent of scheduling
        total += s
        total_sq += ss
    return total, total_sq


def mc_hybrid_capacity(sys: HybridSystem, mc: McSettings) -> CapacityEstimate:
    """Monte Carlo estimate of the half-duplex relay-chain capacity."""
    plc, w = sys.plc, sys.wireless
    alpha = attenuation_coefficient(plc)
    a = sys.relay_gain**2 * sys.relay_power_w * w.dist_m ** (-w.pathloss_exp)
    sig = sys.src_power_w * math.exp(-2.0 * alpha * plc.length_m)

    def block(rng, count):
        g_db = 2.0 * plc.fading_mu_db + 2.0 * plc.fading_sigma_db * rng.standard_normal(count)
        hp = 10.0 ** (g_db / 10.0)
        hw = -np.log1p(-rng.random(count))
        snr = a * sig * hp * hw / (a * hw * plc.noise_var + w.noise_var)
        c = 0.5 * np.log2(1.0 + snr)
        return float(c.sum()), float((c * c).sum())

    total, total_sq = _run_blocks(block, mc)
    mean, se = _finish_mc(total, total_sq, mc.n_samples)
    return CapacityEstimate(mean, "monte_carlo", se, mc.n_samples)


def analytic_plc_capacity(
    link: PlcLink,
    src_power_w: float,
    rule: QuadratureRule,
    half_duplex: bool = False,
) -> CapacityEstimate:
    """Ergodic capacity of a direct power-line run, bits/s/Hz.

    E[log2(1 + snr_scale * |h|^2)] over the log-normal fading reduces to a
    Gauss-Hermite sum with node values log2(1 + exp((sqrt(8) sigma x_n +
    2 mu + zeta ln(snr_scale)) / zeta)), zeta = 10/ln 10 being the dB scale
    constant. The direct link is single-phase, so no rate halving unless
    half_duplex is set (for comparisons against two-phase schemes under a
    shared time budget).
    """
    if src_power_w == 0.0:
        return CapacityEstimate(0.0, "analytic")
    alpha = attenuation_coefficient(link)
    snr_scale = src_power_w * math.exp(-2.0 * alpha * link.length_m) / link.noise_var
    zeta = 10.0 / math.log(10.0)
    u = (math.sqrt(8.0) * link.fading_sigma_db * rule.nodes + 2.0 * link.fading_mu_db) / zeta
    u = u + math.log(snr_scale)
    # log2(1 + e^u) without overflow for large u
    vals = np.logaddexp(0.0, u) / _LN2
    cap = float(rule.weights @ vals) / math.sqrt(math.pi)
    if half_duplex:
        cap *= 0.5
    return CapacityEstimate(cap, "analytic")


def mc_plc_capacity(
    link: PlcLink,
    src_power_w: float,
    mc: McSettings,
    half_duplex: bool = False,
) -> CapacityEstimate:
    """Monte Carlo estimate of the direct power-line capacity."""
    alpha = attenuation_coefficient(link)
    scale = src_power_w * math.exp(-2.0 * alpha * link.length_m) / link.noise_var
    factor = 0.5 if half_duplex else 1.0

    def block(rng, count):
        g_db = 2.0 * link.fading_mu_db + 2.0 * link.fading_sigma_db * rng.standard_normal(count)
        hp = 10.0 ** (g_db / 10.0)
        c = factor * np.log2(1.0 + scale * hp)
        return float(c.sum()), float((c * c).sum())

    total, total_sq = _run_blocks(block, mc)
    mean, se = _finish_mc(total, total_sq, mc.n_samples)
    return CapacityEstimate(mean, "monte_carlo", se, mc.n_samples)
