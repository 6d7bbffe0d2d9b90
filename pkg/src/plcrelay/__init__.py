"""Ergodic capacity of two-hop power-line/wireless relay links.

A power-line cable feeds a fixed-gain amplify-and-forward relay that
bridges the final stretch over an indoor wireless hop. The package models
both hops (frequency-dependent cable attenuation with log-normal fading,
path-loss wireless hop with Rayleigh fading), computes the half-duplex
ergodic capacity analytically (MGF integral plus Gauss-Hermite closed
forms) and by Monte Carlo, and ships a sweep engine plus CLI for the
standard parameter studies, including the comparison against a direct
power-line run.
"""

from .capacity import (
    CapacityEstimate,
    McSettings,
    analytic_hybrid_capacity,
    analytic_plc_capacity,
    mc_hybrid_capacity,
    mc_plc_capacity,
    mgf_k,
    mgf_lm,
)
from .channel import (
    ChannelSample,
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
from .experiments import (
    PRESETS,
    SweepResult,
    SweepRow,
    SweepSpec,
    default_system,
    emit_csv,
    emit_plot,
    preset_sweep,
    run_sweep,
)
from .specfun import (
    ConvergenceError,
    QuadratureRule,
    bessel_k1,
    gauss_hermite,
    integrate_semi_infinite,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityEstimate",
    "ChannelSample",
    "ConvergenceError",
    "HybridSystem",
    "McSettings",
    "PlcLink",
    "PRESETS",
    "QuadratureRule",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "WirelessLink",
    "analytic_hybrid_capacity",
    "analytic_plc_capacity",
    "attenuation_coefficient",
    "bessel_k1",
    "db_to_gain",
    "default_system",
    "emit_csv",
    "emit_plot",
    "gauss_hermite",
    "hybrid_snr",
    "integrate_semi_infinite",
    "mc_hybrid_capacity",
    "mc_plc_capacity",
    "mgf_k",
    "mgf_lm",
    "plc_amplitude_gain",
    "plc_only_snr",
    "preset_sweep",
    "run_sweep",
    "sample_plc_gain",
    "sample_wireless_gain",
    "snr_terms",
    "__version__",
]
