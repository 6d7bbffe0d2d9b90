"""Walk through the link budget of the two-hop power-line/wireless chain.

Prints how the cable attenuation coefficient moves with carrier frequency,
how the end-to-end SNR decomposes into signal and noise terms, and where the
relay-noise-limited ceiling sits once the relay gain gets large.
"""
import math
from dataclasses import replace

from plcrelay import (
    ChannelSample,
    attenuation_coefficient,
    db_to_gain,
    default_system,
    hybrid_snr,
    plc_amplitude_gain,
    snr_terms,
)


def main():
    sys = default_system()
    link = sys.plc

    print("cable attenuation vs carrier frequency")
    print(f"  {'f (kHz)':>9s} {'alpha (Np/m)':>13s} {'gain @10m':>10s} {'gain @100m':>11s}")
    for f_khz in (100, 250, 500, 1000, 2000):
        a = attenuation_coefficient(replace(link, freq_hz=f_khz * 1e3))
        print(
            f"  {f_khz:9d} {a:13.4e} {plc_amplitude_gain(a, 10):10.4f}"
            f" {plc_amplitude_gain(a, 100):11.4f}"
        )

    # a nominal fading draw: mean power gains (1 for Rayleigh, E[|h_P|^2]
    # for the log-normal cable)
    s_db = 2.0 * link.fading_sigma_db * math.log(10.0) / 10.0
    hp_mean = math.exp(0.5 * s_db * s_db)
    draw = ChannelSample(hp_sq=hp_mean, hw_sq=1.0)

    print("\nSNR decomposition at mean fading, snr = K / (L + M)")
    print(f"  {'G (dB)':>7s} {'K':>9s} {'L':>7s} {'M':>10s} {'snr':>9s} {'snr (dB)':>9s}")
    for g_db in (0, 6, 12, 20, 40):
        cfg = replace(sys, relay_gain=db_to_gain(g_db))
        k, l, m = snr_terms(draw, cfg)
        snr = hybrid_snr(draw, cfg)
        print(
            f"  {g_db:7d} {k:9.4f} {l:7.3f} {m:10.5f} {snr:9.4f}"
            f" {10 * math.log10(snr):9.2f}"
        )
    print("\nM falls off as 1/G^2: past ~20 dB the relay noise L dominates and")
    print("more gain buys nothing. That ceiling is K/L = "
          f"{snr_terms(draw, sys)[0] / link.noise_var:.4f} here.")


if __name__ == "__main__":
    main()
