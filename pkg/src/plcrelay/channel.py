"""Link-budget and fading models for a two-hop power-line/wireless link.

The first hop is a power-line cable with frequency-dependent attenuation
exp(-alpha(f) * d) and log-normal amplitude fading. The second hop is an
indoor wireless link with d^(-m) path loss and Rayleigh fading, driven by a
fixed-gain amplify-and-forward relay. A direct power-line run (no relay) is
also modeled for baseline comparisons.

All types are immutable values and all samplers take an explicit generator,
so everything here is safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PlcLink",
    "WirelessLink",
    "HybridSystem",
    "ChannelSample",
    "attenuation_coefficient",
    "plc_amplitude_gain",
    "db_to_gain",
    "sample_plc_gain",
    "sample_wireless_gain",
    "hybrid_snr",
    "snr_terms",
    "plc_only_snr",
]


@dataclass(frozen=True)
class PlcLink:
    """Power-line hop.

    Attributes:
        freq_hz: carrier frequency in Hz.
        atten_k: exponent of the frequency term in the attenuation law.
        atten_a0: constant part of the attenuation law, nepers/m.
        atten_a1: frequency-dependent part, nepers/m per Hz^atten_k.
        length_m: cable length in meters (source to relay, or source to
            destination for a direct link).
        fading_mu_db: mean of 10*log10|h| of the fading amplitude, dB.
        fading_sigma_db: standard deviation of 10*log10|h|, dB.
        noise_var: noise variance at the receiving end of this hop, W.
    """

    freq_hz: float
    atten_k: float
    atten_a0: float
    atten_a1: float
    length_m: float
    fading_mu_db: float
    fading_sigma_db: float
    noise_var: float

    def __post_init__(self):
        if self.freq_hz <= 0:
            raise ValueError("freq_hz must be positive")
        if self.atten_a0 < 0 or self.atten_a1 < 0:
            raise ValueError("attenuation constants must be nonnegative")
        if self.length_m < 0:
            raise ValueError("length_m must be nonnegative")
        if self.fading_sigma_db < 0:
            raise ValueError("fading_sigma_db must be nonnegative")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be positive")


@dataclass(frozen=True)
class WirelessLink:
    """Wireless hop: relay to destination.

    Attributes:
        dist_m: relay-destination distance in meters.
        pathloss_exp: path-loss exponent m (power decays as dist^-m).
        noise_var: destination noise variance, W.
    """

    dist_m: float
    pathloss_exp: float
    noise_var: float

    def __post_init__(self):
        if self.dist_m <= 0:
            raise ValueError("dist_m must be positive")
        if self.pathloss_exp < 0:
            raise ValueError("pathloss_exp must be nonnegative")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be positive")


@dataclass(frozen=True)
class HybridSystem:
    """Complete source -> power line -> relay -> wireless -> destination chain.

    Attributes:
        src_power_w: source transmit power P_s, W.
        relay_power_w: relay transmit power P_r, W.
        relay_gain: relay amplification G as a linear amplitude factor.
        plc: power-line hop parameters.
        wireless: wireless hop parameters.
    """

    src_power_w: float
    relay_power_w: float
    relay_gain: float
    plc: PlcLink
    wireless: WirelessLink

    def __post_init__(self):
        if self.src_power_w < 0:
            raise ValueError("src_power_w must be nonnegative")
        if self.relay_power_w < 0:
            raise ValueError("relay_power_w must be nonnegative")
        if self.relay_gain < 0:
            raise ValueError("relay_gain must be nonnegative")


@dataclass(frozen=True)
class ChannelSample:
    """One joint fading draw: power gains of both hops."""

    hp_sq: float
    hw_sq: float

    def __post_init__(self):
        if self.hp_sq < 0 or self.hw_sq < 0:
            raise ValueError("power gains must be nonnegative")


def attenuation_coefficient(link: PlcLink) -> float:
    """Cable attenuation alpha = a0 + a1 * f^k, nepers per meter."""
    return link.atten_a0 + link.atten_a1 * link.freq_hz**link.atten_k


def plc_amplitude_gain(alpha: float, d: float) -> float:
    """Amplitude gain exp(-alpha * d) of a cable run of d meters."""
    return math.exp(-alpha * d)


def db_to_gain(gain_db: float, convention: str = "amplitude") -> float:
    """Convert a relay gain quoted in dB to the linear amplitude factor G.

    Args:
        gain_db: gain in dB.
        convention: "amplitude" reads the figure as 20*log10(G), "power" as
            10*log10(G^2) so the linear amplitude factor is 10^(dB/10). Gains
            quoted in dB without further context are ambiguous between the
            two, hence the switch.
    """
    if convention == "amplitude":
        return 10.0 ** (gain_db / 20.0)
    if convention == "power":
        return 10.0 ** (gain_db / 10.0)
    raise ValueError("convention must be 'amplitude' or 'power'")


def sample_plc_gain(link: PlcLink, rng: np.random.Generator, size=None):
    """Draw the power gain |h|^2 of the log-normal power-line fading.

    The fading amplitude in dB is Normal(mu, sigma^2), so the power gain in
    dB is Normal(2*mu, (2*sigma)^2) and the linear value is 10^(dB/10).

    Args:
        link: hop carrying the dB-domain fading parameters.
        rng: numpy Generator (seeded by the caller for reproducibility).
        size: optional sample shape; None draws a scalar.
    """
    g_db = 2.0 * link.fading_mu_db + 2.0 * link.fading_sigma_db * rng.standard_normal(size)
    return 10.0 ** (g_db / 10.0)


def sample_wireless_gain(rng: np.random.Generator, size=None):
    """Draw the power gain |h|^2 of the Rayleigh-faded wireless hop.

    Rayleigh amplitude means the power gain is Exponential(mean=1); sampling
    goes through the inverse CDF -log(1 - u) so a given uniform stream maps
    to one reproducible gain stream.
    """
    u = rng.random(size)
    return -np.log1p(-u)


def hybrid_snr(sample: ChannelSample, sys: HybridSystem) -> float:
    """Instantaneous end-to-end SNR of the relay chain for one fading draw.

    The relay scales its noisy input by G and the destination sees the
    amplified signal through the d2^-m wireless loss, so both the signal and
    the forwarded relay noise carry the factor G^2 * P_r * d2^-m.
    """
    a = sys.relay_gain**2 * sys.relay_power_w * sys.wireless.dist_m ** (-sys.wireless.pathloss_exp)
    alpha = attenuation_coefficient(sys.plc)
    cable = math.exp(-2.0 * alpha * sys.plc.length_m)
    num = a * sys.src_power_w * cable * sample.hp_sq * sample.hw_sq
    den = a * sample.hw_sq * sys.plc.noise_var + sys.wireless.noise_var
    return num / den


def snr_terms(sample: ChannelSample, sys: HybridSystem) -> tuple[float, float, float]:
    """Split the end-to-end SNR into (K, L, M) with snr = K / (L + M).

    K is the power-line signal term P_s exp(-2 alpha d1) |h_P|^2, L the relay
    noise sigma_r^2, and M the destination noise referred back through the
    wireless hop, sigma_d^2 d2^m / (G^2 P_r |h_w|^2). Useful because K and
    L + M are independent random variables, which is what the analytic
    capacity route exploits.
    """
    alpha = attenuation_coefficient(sys.plc)
    k = sys.src_power_w * math.exp(-2.0 * alpha * sys.plc.length_m) * sample.hp_sq
    l = sys.plc.noise_var
    a = sys.relay_gain**2 * sys.relay_power_w * sys.wireless.dist_m ** (-sys.wireless.pathloss_exp)
    if sample.hw_sq > 0:
        m = sys.wireless.noise_var / (a * sample.hw_sq)
    else:
        m = math.inf
    return k, l, m


def plc_only_snr(hp_sq: float, link: PlcLink, src_power_w: float) -> float:
    """SNR of a direct power-line run of link.length_m meters (no relay)."""
    alpha = attenuation_coefficient(link)
    return src_power_w * math.exp(-2.0 * alpha * link.length_m) * hp_sq / link.noise_var
