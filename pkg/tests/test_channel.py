"""Channel-layer tests: attenuation law, fading samplers, SNR algebra.

Oracle values are frozen from direct arithmetic (attenuation, gains) or
large-sample statistics of the documented distributions.
"""
import math

import numpy as np
import pytest

from plcrelay import (
    HybridSystem,
    PlcLink,
    WirelessLink,
    attenuation_coefficient,
    db_to_gain,
    hybrid_snr,
    plc_amplitude_gain,
    plc_only_snr,
    sample_plc_gain,
    sample_wireless_gain,
    snr_terms,
)
from plcrelay.channel import ChannelSample

# alpha = a0 + a1 * f^k at the default cable constants, 500 kHz
ALPHA_500K = 0.005688560749337915


def make_link(**kw):
    base = dict(
        freq_hz=500e3,
        atten_k=0.7,
        atten_a0=2.03e-3,
        atten_a1=3.75e-7,
        length_m=10.0,
        fading_mu_db=0.0,
        fading_sigma_db=3.0,
        noise_var=0.1,
    )
    base.update(kw)
    return PlcLink(**base)


def make_system(**kw):
    base = dict(
        src_power_w=1.0,
        relay_power_w=1.0,
        relay_gain=1.0,
        plc=make_link(),
        wireless=WirelessLink(dist_m=1.0, pathloss_exp=2.0, noise_var=0.1),
    )
    base.update(kw)
    return HybridSystem(**base)


class TestAttenuation:
    def test_zero_constants(self):
        link = make_link(atten_a0=0.0, atten_a1=0.0)
        assert attenuation_coefficient(link) == 0.0

    def test_default_constants(self):
        assert attenuation_coefficient(make_link()) == pytest.approx(
            ALPHA_500K, rel=1e-14
        )

    def test_low_frequency_limit(self):
        # f^0.7 -> 0, only the constant term survives
        link = make_link(freq_hz=1e-300)
        assert attenuation_coefficient(link) == pytest.approx(2.03e-3, rel=1e-12)

    def test_gain_at_zero_distance(self):
        assert plc_amplitude_gain(0.123, 0.0) == 1.0

    def test_gain_frozen_values(self):
        assert plc_amplitude_gain(ALPHA_500K, 10.0) == pytest.approx(
            0.9447021300304046, rel=1e-14
        )
        assert plc_amplitude_gain(ALPHA_500K, 50.0) == pytest.approx(
            0.7524445013280688, rel=1e-14
        )
        # four-digit sanity reads with the rounded alpha
        assert plc_amplitude_gain(5.689e-3, 10.0) == pytest.approx(0.9447, abs=5e-4)
        assert plc_amplitude_gain(5.689e-3, 50.0) == pytest.approx(0.7523, abs=2e-4)

    def test_gain_composes_over_distance(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            alpha = rng.uniform(0.0, 0.02)
            d1, d2 = rng.uniform(0.0, 300.0, size=2)
            whole = plc_amplitude_gain(alpha, d1 + d2)
            split = plc_amplitude_gain(alpha, d1) * plc_amplitude_gain(alpha, d2)
            assert whole == pytest.approx(split, rel=1e-12)


class TestDbConversion:
    def test_amplitude_convention(self):
        assert db_to_gain(20.0) == pytest.approx(10.0, rel=1e-14)
        assert db_to_gain(0.0) == 1.0

    def test_power_convention(self):
        assert db_to_gain(20.0, convention="power") == pytest.approx(100.0, rel=1e-14)

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            db_to_gain(3.0, convention="decibels")


class TestValidation:
    def test_plc_link_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            make_link(freq_hz=0.0)
        with pytest.raises(ValueError):
            make_link(length_m=-1.0)
        with pytest.raises(ValueError):
            make_link(fading_sigma_db=-0.1)
        with pytest.raises(ValueError):
            make_link(noise_var=0.0)

    def test_wireless_link_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            WirelessLink(dist_m=0.0, pathloss_exp=2.0, noise_var=0.1)
        with pytest.raises(ValueError):
            WirelessLink(dist_m=1.0, pathloss_exp=-0.1, noise_var=0.1)
        with pytest.raises(ValueError):
            WirelessLink(dist_m=1.0, pathloss_exp=2.0, noise_var=-0.1)

    def test_system_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            make_system(src_power_w=-1.0)
        with pytest.raises(ValueError):
            make_system(relay_gain=-0.5)
        # boundary values are legal: a switched-off relay is a valid system
        make_system(relay_gain=0.0)
        make_system(src_power_w=0.0)

    def test_sample_rejects_negative_gain(self):
        with pytest.raises(ValueError):
            ChannelSample(hp_sq=-1e-9, hw_sq=1.0)


class TestSamplers:
    def test_plc_gain_degenerate_sigma(self):
        rng = np.random.default_rng(0)
        link = make_link(fading_sigma_db=0.0)
        assert sample_plc_gain(link, rng) == 1.0
        link = make_link(fading_sigma_db=0.0, fading_mu_db=-5.0)
        # power gain 10^(2*mu/10) = 0.1
        assert sample_plc_gain(link, rng, size=3) == pytest.approx(0.1, rel=1e-14)

    def test_plc_gain_db_statistics(self):
        # |h_P|^2 in dB is N(2*mu, (2*sigma)^2)
        rng = np.random.default_rng(1234)
        link = make_link(fading_mu_db=0.0, fading_sigma_db=3.0)
        n = 1_000_000
        g_db = 10.0 * np.log10(sample_plc_gain(link, rng, size=n))
        se_mean = 6.0 / math.sqrt(n)
        assert abs(g_db.mean() - 0.0) < 3.0 * se_mean
        assert g_db.std() == pytest.approx(6.0, rel=0.01)

    def test_wireless_gain_is_unit_exponential(self):
        rng = np.random.default_rng(99)
        n = 1_000_000
        w = sample_wireless_gain(rng, size=n)
        assert np.all(w >= 0.0)
        assert abs(w.mean() - 1.0) < 3.0 / math.sqrt(n)
        p_tail = np.mean(w > 1.0)
        se_tail = math.sqrt(math.e ** -1 * (1 - math.e ** -1) / n)
        assert abs(p_tail - math.exp(-1.0)) < 3.0 * se_tail

    def test_wireless_gain_median_via_inverse_cdf(self):
        class HalfRng:
            def random(self, size=None):
                return 0.5 if size is None else np.full(size, 0.5)

        assert sample_wireless_gain(HalfRng()) == pytest.approx(math.log(2.0), rel=1e-14)


class TestHybridSnr:
    def test_zero_gains_kill_snr(self):
        sys = make_system()
        assert hybrid_snr(ChannelSample(hp_sq=0.0, hw_sq=1.0), sys) == 0.0
        assert hybrid_snr(ChannelSample(hp_sq=1.0, hw_sq=0.0), sys) == 0.0

    def test_relay_noise_limited_regime(self):
        # sigma_d^2 -> 0 leaves gamma -> P_s e^{-2 alpha d1} hp / sigma_r^2
        sys = make_system(
            wireless=WirelessLink(dist_m=1.0, pathloss_exp=2.0, noise_var=1e-300)
        )
        got = hybrid_snr(ChannelSample(hp_sq=2.0, hw_sq=0.7), sys)
        want = 2.0 * math.exp(-2 * ALPHA_500K * 10.0) / 0.1
        assert got == pytest.approx(want, rel=1e-12)

    def test_grouped_form_matches_ratio_form(self):
        # gamma from the full expression must equal K / (L + M)
        rng = np.random.default_rng(42)
        for _ in range(10_000):
            sys = make_system(
                src_power_w=rng.uniform(0.01, 10),
                relay_power_w=rng.uniform(0.1, 5),
                relay_gain=rng.uniform(0.1, 20),
                plc=make_link(
                    length_m=rng.uniform(1, 300),
                    noise_var=rng.uniform(0.001, 1),
                ),
                wireless=WirelessLink(
                    dist_m=rng.uniform(1, 30),
                    pathloss_exp=rng.uniform(2, 4),
                    noise_var=rng.uniform(0.001, 1),
                ),
            )
            s = ChannelSample(hp_sq=rng.exponential(), hw_sq=rng.exponential())
            k, l, m = snr_terms(s, sys)
            assert hybrid_snr(s, sys) == pytest.approx(k / (l + m), rel=1e-12)

    def test_snr_terms_handles_dead_wireless(self):
        k, l, m = snr_terms(ChannelSample(hp_sq=1.0, hw_sq=0.0), make_system())
        assert m == math.inf

    def test_monotonicity(self):
        rng = np.random.default_rng(5)
        base = dict(
            src_power_w=1.0, relay_power_w=1.0, relay_gain=2.0,
            length_m=50.0, dist_m=5.0, pathloss_exp=2.5,
            relay_noise=0.1, dest_noise=0.1, hp=1.5, hw=0.8,
        )

        def snr(p):
            sys = make_system(
                src_power_w=p["src_power_w"],
                relay_power_w=p["relay_power_w"],
                relay_gain=p["relay_gain"],
                plc=make_link(length_m=p["length_m"], noise_var=p["relay_noise"]),
                wireless=WirelessLink(
                    dist_m=p["dist_m"],
                    pathloss_exp=p["pathloss_exp"],
                    noise_var=p["dest_noise"],
                ),
            )
            return hybrid_snr(ChannelSample(hp_sq=p["hp"], hw_sq=p["hw"]), sys)

        increasing = ("src_power_w", "relay_power_w", "relay_gain", "hp", "hw")
        decreasing = ("length_m", "dist_m", "pathloss_exp", "relay_noise", "dest_noise")
        for _ in range(300):
            p = dict(base)
            for key in p:
                p[key] *= rng.uniform(0.5, 2.0)
            p["dist_m"] = max(p["dist_m"], 1.0)  # pathloss ordering needs d2 >= 1
            for key in increasing:
                q = dict(p)
                q[key] = p[key] * 1.3
                assert snr(q) >= snr(p) - 1e-15
            for key in decreasing:
                q = dict(p)
                q[key] = p[key] * 1.3
                assert snr(q) <= snr(p) + 1e-15


class TestPlcOnlySnr:
    def test_zero_fading(self):
        assert plc_only_snr(0.0, make_link(), 1.0) == 0.0

    def test_unit_gain_point(self):
        link = make_link(length_m=0.0)
        assert plc_only_snr(1.0, link, 1.0) == pytest.approx(10.0, rel=1e-14)

    def test_hundred_meter_point(self):
        link = make_link(length_m=100.0)
        assert plc_only_snr(1.0, link, 1.0) == pytest.approx(
            3.205515574540703, rel=1e-13
        )
