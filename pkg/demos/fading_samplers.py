"""Check the two fading samplers against their defining distributions.

The cable fading is log-normal specified in the dB domain (power gain dB is
Normal(2*mu, (2*sigma)^2)); the wireless hop is Rayleigh, so its power gain
is a unit-mean exponential. Both claims are verified on a large sample.
"""
import math

import numpy as np

from plcrelay import default_system, sample_plc_gain, sample_wireless_gain

N = 400_000


def main():
    rng = np.random.default_rng(2024)
    link = default_system().plc

    hp = sample_plc_gain(link, rng, size=N)
    hp_db = 10.0 * np.log10(hp)
    print("power-line fading, |h_P|^2 in dB")
    print(f"  target  mean {2 * link.fading_mu_db:7.3f}  std {2 * link.fading_sigma_db:6.3f}")
    print(f"  sample  mean {hp_db.mean():7.3f}  std {hp_db.std():6.3f}")
    # linear-domain mean has the usual log-normal lift exp(s^2/2)
    s = 2.0 * link.fading_sigma_db * math.log(10.0) / 10.0
    print(f"  E[|h_P|^2] model {math.exp(0.5 * s * s):.4f}  sample {hp.mean():.4f}")

    hw = sample_wireless_gain(rng, size=N)
    print("\nwireless fading, |h_w|^2 ~ Exp(1)")
    print(f"  mean   model 1.0000  sample {hw.mean():.4f}")
    print(f"  median model {math.log(2):.4f}  sample {np.median(hw):.4f}")
    for q in (1.0, 2.0, 4.0):
        print(f"  P(>|{q:.0f}|) model {math.exp(-q):.4f}  sample {(hw > q).mean():.4f}")

    # quick tail sanity in dB bins: counts should drop geometrically
    print("\n|h_P|^2 dB histogram (2 dB bins around the mean)")
    edges = 2 * link.fading_mu_db + np.arange(-6, 8, 2.0)
    counts, _ = np.histogram(hp_db, bins=edges)
    peak = counts.max()
    for lo, c in zip(edges[:-1], counts):
        bar = "#" * int(40.0 * c / peak)
        print(f"  [{lo:+5.1f}, {lo + 2:+5.1f}) {bar}")


if __name__ == "__main__":
    main()
