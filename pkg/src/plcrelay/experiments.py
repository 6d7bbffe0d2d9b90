"""Parameter sweeps over the relay link, with CSV and SVG plot output.

A sweep varies one axis parameter (optionally crossed with a family
parameter, one curve per family value) and evaluates the requested capacity
methods at every point. Four canned presets cover the usual studies on this
system:

    fig2  capacity vs source power, one curve per cable length
    fig3  capacity vs wireless distance, one curve per path-loss exponent
    fig4  capacity vs relay gain in dB, one curve per wireless distance
    fig5  relay chain vs direct power line over total distance, one curve
          pair per relay gain

Output is deterministic byte-for-byte for a fixed spec and seed: rows are
sorted by (axis, family, method) regardless of evaluation order, and the SVG
writer pins the salt and drops timestamps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .capacity import (
    McSettings,
    analytic_hybrid_capacity,
    analytic_plc_capacity,
    mc_hybrid_capacity,
)
from .channel import HybridSystem, PlcLink, WirelessLink, db_to_gain
from .specfun import ConvergenceError, gauss_hermite

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "PRESETS",
    "default_system",
    "preset_sweep",
    "run_sweep",
    "emit_csv",
    "emit_plot",
]

AXES = ("src_power_w", "dist_d2", "relay_gain_db", "total_distance")
FAMILIES = ("length_d1", "dist_d2", "pathloss_exp", "relay_gain_db")
METHODS = ("analytic", "monte_carlo", "plc_only_analytic")
PRESETS = ("fig2", "fig3", "fig4", "fig5")


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep.

    Attributes:
        base: system evaluated at every grid point, with the axis/family
            parameters substituted in.
        axis: swept parameter, one of AXES.
        grid: strictly increasing axis values.
        family: optional second parameter, one of FAMILIES; one curve per
            value in family_values.
        methods: subset of METHODS. plc_only_analytic evaluates the direct
            power-line baseline (at the full total_distance when that is the
            axis, else at the cable length in effect).
        mc: Monte Carlo settings, required when monte_carlo is requested.
        gain_convention: how relay_gain_db values convert to linear gain.
        plc_noise_var: destination noise for the direct-line baseline;
            defaults to the wireless destination noise.
        plc_half_duplex: halve the direct-line rate (two-phase accounting).
        quad_order: Gauss-Hermite order for the analytic methods.
        rel_tol: tolerance of the capacity integral.
        label: name used for output files and plot titles.
    """

    base: HybridSystem
    axis: str
    grid: tuple[float, ...]
    family: str | None = None
    family_values: tuple[float, ...] = ()
    methods: tuple[str, ...] = ("analytic",)
    mc: McSettings | None = None
    gain_convention: str = "amplitude"
    plc_noise_var: float | None = None
    plc_half_duplex: bool = False
    quad_order: int = 32
    rel_tol: float = 1e-8
    label: str = "sweep"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        if len(self.grid) == 0:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.family is not None:
            if self.family not in FAMILIES:
                raise ValueError(f"family must be one of {FAMILIES}")
            if len(set(self.family_values)) != len(self.family_values) or not self.family_values:
                raise ValueError("family_values must be nonempty and distinct")
        elif self.family_values:
            raise ValueError("family_values given without a family parameter")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ValueError(f"methods must be a nonempty subset of {METHODS}")
        if "monte_carlo" in self.methods and self.mc is None:
            raise ValueError("monte_carlo requested but no McSettings given")


class SweepRow(NamedTuple):
    axis_value: float
    family_value: float | None
    method: str
    capacity: float
    std_err: float


@dataclass(frozen=True)
class SweepResult:
    """Rows of one completed sweep, sorted by (axis, family, method)."""

    rows: tuple[SweepRow, ...]
    axis: str
    family: str | None
    label: str
    errors: tuple[str, ...] = ()


def default_system() -> HybridSystem:
    """Baseline operating point used by the presets and the CLI defaults.

    500 kHz carrier on a 10 m cable, 1 m wireless hop with inverse-square
    loss, unit transmit powers and relay gain, and 0.1 W noise floors (10 dB
    input SNR at 1 W). Fading: 0 dB mean, 3 dB sigma log-normal amplitude on
    the cable, Rayleigh on the wireless hop.
    """
    return HybridSystem(
        src_power_w=1.0,
        relay_power_w=1.0,
        relay_gain=1.0,
        plc=PlcLink(
            freq_hz=500e3,
            atten_k=0.7,
            atten_a0=2.03e-3,
            atten_a1=3.75e-7,
            length_m=10.0,
            fading_mu_db=0.0,
            fading_sigma_db=3.0,
            noise_var=0.1,
        ),
        wireless=WirelessLink(dist_m=1.0, pathloss_exp=2.0, noise_var=0.1),
    )


def _geomspace(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n == 1:
        return (lo,)
    r = (hi / lo) ** (1.0 / (n - 1))
    return tuple(lo * r**i for i in range(n))


def _linspace(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n == 1:
        return (lo,)
    step = (hi - lo) / (n - 1)
    return tuple(lo + step * i for i in range(n))


def preset_sweep(
    name: str,
    mc: McSettings | None = None,
    points: int = 20,
    gain_db: tuple[float, ...] | None = None,
) -> SweepSpec:
    """Build the spec for one canned sweep.

    Args:
        name: one of PRESETS.
        mc: adds a monte_carlo method with these settings.
        points: grid size along the axis.
        gain_db: override for the relay-gain family of fig5.

    Notes:
        fig5 quotes its relay gains as power dB (linear gain 10^(dB/10)):
        under the amplitude reading the 20 dB relay never catches the direct
        line inside the plotted 20-500 m span, so the comparison would be
        empty. The direct-line curve keeps the full-rate (no 1/2) accounting.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; valid: {', '.join(PRESETS)}")
    base = default_system()
    methods: tuple[str, ...] = ("analytic",)
    if mc is not None:
        methods += ("monte_carlo",)
    if name == "fig2":
        return SweepSpec(
            base=base,
            axis="src_power_w",
            grid=_geomspace(0.01, 10.0, points),
            family="length_d1",
            family_values=(1.0, 10.0, 50.0),
            methods=methods,
            mc=mc,
            label="fig2",
        )
    if name == "fig3":
        return SweepSpec(
            base=base,
            axis="dist_d2",
            grid=_linspace(1.0, 30.0, points),
            family="pathloss_exp",
            family_values=(2.0, 2.5, 3.0, 3.5),
            methods=methods,
            mc=mc,
            label="fig3",
        )
    if name == "fig4":
        return SweepSpec(
            base=base,
            axis="relay_gain_db",
            grid=_linspace(1.0, 20.0, points),
            family="dist_d2",
            family_values=(1.0, 5.0, 15.0, 30.0),
            methods=methods,
            mc=mc,
            gain_convention="amplitude",
            label="fig4",
        )
    base5 = replace(base, plc=replace(base.plc, noise_var=0.01))
    return SweepSpec(
        base=base5,
        axis="total_distance",
        grid=_linspace(20.0, 500.0, points),
        family="relay_gain_db",
        family_values=tuple(gain_db) if gain_db is not None else (0.0, 10.0, 20.0),
        methods=methods + ("plc_only_analytic",),
        mc=mc,
        gain_convention="power",
        plc_noise_var=0.1,
        label="fig5",
    )


def _apply(sys: HybridSystem, name: str, value: float, convention: str) -> HybridSystem:
    if name == "src_power_w":
        return replace(sys, src_power_w=value)
    if name == "dist_d2":
        return replace(sys, wireless=replace(sys.wireless, dist_m=value))
    if name == "length_d1":
        return replace(sys, plc=replace(sys.plc, length_m=value))
    if name == "pathloss_exp":
        return replace(sys, wireless=replace(sys.wireless, pathloss_exp=value))
    if name == "relay_gain_db":
        return replace(sys, relay_gain=db_to_gain(value, convention))
    if name == "total_distance":
        return replace(
            sys,
            plc=replace(sys.plc, length_m=value / 2.0),
            wireless=replace(sys.wireless, dist_m=value / 2.0),
        )
    raise ValueError(f"unknown sweep parameter {name!r}")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every (grid x family x method) point of the spec.

    A numerical failure in one point annotates that row (capacity NaN) and is
    reported in SweepResult.errors; the sweep itself continues.
    """
    rule = gauss_hermite(spec.quad_order)
    family_values: tuple[float | None, ...] = spec.family_values if spec.family else (None,)
    rows = []
    errors = []
    plc_cache: dict[tuple, tuple[float, float]] = {}
    for x in spec.grid:
        for fam in family_values:
            sys = _apply(spec.base, spec.axis, x, spec.gain_convention)
            if fam is not None:
                sys = _apply(sys, spec.family, fam, spec.gain_convention)
            for method in sorted(spec.methods):
                try:
                    if method == "analytic":
                        est = analytic_hybrid_capacity(sys, rule, spec.rel_tol)
                        cap, se = est.bits_per_s_per_hz, 0.0
                    elif method == "monte_carlo":
                        est = mc_hybrid_capacity(sys, spec.mc)
                        cap, se = est.bits_per_s_per_hz, est.std_error
                    else:
                        # Direct line spans the whole path when the axis is
                        # the total distance. It ignores the relay-side
                        # parameters, so identical (length, noise, power)
                        # combinations are computed once.
                        length = x if spec.axis == "total_distance" else sys.plc.length_m
                        noise = spec.plc_noise_var
                        if noise is None:
                            noise = sys.wireless.noise_var
                        key = (length, noise, sys.src_power_w)
                        if key in plc_cache:
                            cap, se = plc_cache[key]
                        else:
                            link = replace(sys.plc, length_m=length, noise_var=noise)
                            est = analytic_plc_capacity(
                                link, sys.src_power_w, rule, spec.plc_half_duplex
                            )
                            cap, se = est.bits_per_s_per_hz, 0.0
                            plc_cache[key] = (cap, se)
                except ConvergenceError as exc:
                    cap, se = math.nan, math.nan
                    errors.append(f"{spec.axis}={x:g} {method}: {exc}")
                rows.append(SweepRow(x, fam, method, cap, se))
    rows.sort(key=lambda r: (r.axis_value, -math.inf if r.family_value is None else r.family_value, r.method))
    return SweepResult(tuple(rows), spec.axis, spec.family, spec.label, tuple(errors))


def emit_csv(result: SweepResult, path) -> None:
    """Write the sweep rows as CSV, byte-deterministic for identical input."""
    lines = ["axis,family,method,capacity_bits_s_hz,std_err"]
    for r in result.rows:
        fam = "" if r.family_value is None else "%.17e" % r.family_value
        lines.append(
            "%.17e,%s,%s,%.17e,%.17e" % (r.axis_value, fam, r.method, r.capacity, r.std_err)
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_AXIS_LABELS = {
    "src_power_w": "source power (W)",
    "dist_d2": "relay-destination distance (m)",
    "relay_gain_db": "relay gain (dB)",
    "total_distance": "source-destination distance (m)",
}
_FAMILY_LABELS = {
    "length_d1": "d1=%g m",
    "dist_d2": "d2=%g m",
    "pathloss_exp": "m=%g",
    "relay_gain_db": "G=%g dB",
}
_METHOD_LABELS = {
    "analytic": "relay chain",
    "monte_carlo": "relay chain (MC)",
    "plc_only_analytic": "direct line",
}


def emit_plot(result: SweepResult, path) -> None:
    """Render the sweep as a static SVG.

    Analytic methods draw as polylines (dashed for the direct-line
    baseline), Monte Carlo as points with 95% error bars. Output bytes
    depend only on the result: the SVG id salt is pinned and the metadata
    timestamp is dropped.
    """
    plt.rcParams["svg.hashsalt"] = "plcrelay"
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    try:
        groups: dict[tuple, list[SweepRow]] = {}
        for r in result.rows:
            groups.setdefault((r.family_value, r.method), []).append(r)
        for (fam, method), rows in sorted(
            groups.items(), key=lambda kv: (-math.inf if kv[0][0] is None else kv[0][0], kv[0][1])
        ):
            x = [r.axis_value for r in rows]
            y = [r.capacity for r in rows]
            label = _METHOD_LABELS.get(method, method)
            if fam is not None and result.family is not None:
                label = _FAMILY_LABELS.get(result.family, result.family + "=%g") % fam + ", " + label
            if method == "monte_carlo":
                err = [1.96 * r.std_err for r in rows]
                ax.errorbar(x, y, yerr=err, fmt="o", markersize=3.5, capsize=2.5, label=label)
            elif method == "plc_only_analytic":
                ax.plot(x, y, "--", label=label)
            else:
                ax.plot(x, y, "-", label=label)
        if result.axis == "src_power_w":
            ax.set_xscale("log")
        ax.set_xlabel(_AXIS_LABELS.get(result.axis, result.axis))
        ax.set_ylabel("ergodic capacity (bits/s/Hz)")
        ax.set_title(result.label)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
