"""Command-line front end for the relay-link capacity tools.

Subcommands:
    eval      print the link budget and capacity at one operating point
    sweep     run a canned or custom sweep, writing CSV and SVG files
    validate  cross-check analytic vs Monte Carlo capacity on a random grid
    tables    dump Gauss-Hermite nodes and weights as CSV

Configuration is a flat ``key = value`` file (``#`` starts a comment); every
key has a matching ``--key-with-dashes`` flag that overrides the file, and
the PLCRELAY_CONFIG environment variable names a default file. The relay
gain is given either linear (``relay_gain``) or in dB (``relay_gain_db``
interpreted per ``gain_convention``), never both.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 validation failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .capacity import (
    McSettings,
    analytic_hybrid_capacity,
    mc_hybrid_capacity,
    mgf_lm,
)
from .channel import HybridSystem, PlcLink, WirelessLink, attenuation_coefficient, db_to_gain
from .experiments import (
    PRESETS,
    SweepSpec,
    emit_csv,
    emit_plot,
    preset_sweep,
    run_sweep,
)
from .specfun import ConvergenceError, gauss_hermite, integrate_semi_infinite

__all__ = ["Config", "ConfigError", "main"]

ENV_CONFIG = "PLCRELAY_CONFIG"


class ConfigError(ValueError):
    """Bad configuration key, value, or combination."""


@dataclass
class Config:
    """Flat bag of every tunable, mirroring the config file keys."""

    src_power_w: float = 1.0
    relay_power_w: float = 1.0
    relay_gain: float = 1.0
    relay_gain_db: float | None = None
    gain_convention: str = "amplitude"
    freq_hz: float = 500e3
    atten_k: float = 0.7
    atten_a0: float = 2.03e-3
    atten_a1: float = 3.75e-7
    length_d1_m: float = 10.0
    fading_mu_db: float = 0.0
    fading_sigma_db: float = 3.0
    relay_noise_var: float = 0.1
    dist_d2_m: float = 1.0
    pathloss_exp: float = 2.0
    dest_noise_var: float = 0.1
    half_duplex: bool = False
    quad_order: int = 32
    rel_tol: float = 1e-8
    mc_samples: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def effective_relay_gain(self) -> float:
        if self.relay_gain_db is not None:
            return db_to_gain(self.relay_gain_db, self.gain_convention)
        return self.relay_gain

    def to_system(self) -> HybridSystem:
        return HybridSystem(
            src_power_w=self.src_power_w,
            relay_power_w=self.relay_power_w,
            relay_gain=self.effective_relay_gain(),
            plc=PlcLink(
                freq_hz=self.freq_hz,
                atten_k=self.atten_k,
                atten_a0=self.atten_a0,
                atten_a1=self.atten_a1,
                length_m=self.length_d1_m,
                fading_mu_db=self.fading_mu_db,
                fading_sigma_db=self.fading_sigma_db,
                noise_var=self.relay_noise_var,
            ),
            wireless=WirelessLink(
                dist_m=self.dist_d2_m,
                pathloss_exp=self.pathloss_exp,
                noise_var=self.dest_noise_var,
            ),
        )

    def to_mc(self) -> McSettings:
        return McSettings(n_samples=self.mc_samples, seed=self.seed, workers=self.workers)


def _parse_bool(text: str) -> bool:
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        f = float(text)  # allow 1e6 style
        if f != int(f):
            raise ValueError(f"not an integer: {text!r}") from None
        return int(f)


_PARSERS = {float: float, int: _parse_int, bool: _parse_bool, str: str}


def _field_parser(name: str):
    for f in fields(Config):
        if f.name == name:
            if f.type in ("float", "float | None"):
                return float
            return _PARSERS[{"int": int, "bool": bool, "str": str}[f.type]]
    raise KeyError(name)


_CONFIG_KEYS = tuple(f.name for f in fields(Config))


def _parse_kv_file(path: str) -> dict[str, str]:
    """Read a flat key = value file into a raw string dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _typed_config_entries(raw: dict[str, str], source: str) -> dict:
    typed = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        try:
            typed[key] = _field_parser(key)(value)
        except ValueError as exc:
            raise ConfigError(f"{source}: bad value for {key}: {exc}") from exc
    return typed


def load_config(args: argparse.Namespace) -> tuple[Config, set[str]]:
    """Merge defaults, config file, and CLI flags (in that order).

    Returns the effective Config and the set of explicitly provided keys.
    """
    path = args.config or os.environ.get(ENV_CONFIG)
    file_entries: dict = {}
    if path:
        file_entries = _typed_config_entries(_parse_kv_file(path), path)
    cli_entries = {
        name: getattr(args, name)
        for name in _CONFIG_KEYS
        if getattr(args, name, None) is not None
    }
    explicit = set(file_entries) | set(cli_entries)
    if "relay_gain" in explicit and "relay_gain_db" in explicit:
        raise ConfigError("give either relay_gain or relay_gain_db, not both")
    merged = {**file_entries, **cli_entries}
    try:
        cfg = Config(**merged)
        cfg.to_system()  # range checks live in the value types
        cfg.to_mc()
        gauss_hermite(cfg.quad_order)
        if cfg.gain_convention not in ("amplitude", "power"):
            raise ValueError("gain_convention must be 'amplitude' or 'power'")
        if cfg.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg, explicit


def _dump_config(cfg: Config, out) -> None:
    print("# effective configuration", file=out)
    for f in fields(Config):
        if f.name == "relay_gain_db":
            continue  # the linear relay_gain line already carries the value
        value = getattr(cfg, f.name)
        if f.name == "relay_gain":
            value = cfg.effective_relay_gain()
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = "%.17g" % value
        print(f"{f.name} = {value}", file=out)


def cmd_eval(cfg: Config, args: argparse.Namespace) -> int:
    if args.dump_config:
        _dump_config(cfg, sys.stdout)
        return 0
    system = cfg.to_system()
    rule = gauss_hermite(cfg.quad_order)
    alpha = attenuation_coefficient(system.plc)
    cable_gain = math.exp(-alpha * system.plc.length_m)
    path_loss = system.wireless.dist_m ** (-system.wireless.pathloss_exp)
    # E[|h_P|^2] for the log-normal dB fading
    s = 2.0 * system.plc.fading_sigma_db * math.log(10.0) / 10.0
    m = 2.0 * system.plc.fading_mu_db * math.log(10.0) / 10.0
    e_hp2 = math.exp(m + 0.5 * s * s)

    print("operating point")
    print(f"  alpha               = {alpha:.6e} Np/m")
    print(f"  cable gain exp(-ad) = {cable_gain:.6f}  (d1 = {system.plc.length_m:g} m)")
    print(
        f"  wireless path loss  = {path_loss:.6e}  "
        f"(d2 = {system.wireless.dist_m:g} m, m = {system.wireless.pathloss_exp:g})"
    )
    print(f"  relay gain G        = {system.relay_gain:.6g} (linear amplitude)")
    print(f"  E[|h_P|^2]          = {e_hp2:.6f}")

    mean_snr = None
    if system.relay_gain > 0 and system.relay_power_w > 0:
        e_k = system.src_power_w * cable_gain**2 * e_hp2
        # E[1/(L+M)] = integral of the noise MGF over z
        e_inv_noise = integrate_semi_infinite(lambda z: mgf_lm(z, system), cfg.rel_tol)
        mean_snr = e_k * e_inv_noise
        print(f"  mean end-to-end SNR = {mean_snr:.4f} ({10.0 * math.log10(mean_snr):.2f} dB)"
              if mean_snr > 0 else "  mean end-to-end SNR = 0")

    est = analytic_hybrid_capacity(system, rule, cfg.rel_tol)
    print("capacity")
    print(f"  analytic            = {est.bits_per_s_per_hz:.6f} bits/s/Hz")
    mc_est = None
    if args.mc:
        mc_est = mc_hybrid_capacity(system, cfg.to_mc())
        ci = 1.96 * mc_est.std_error
        print(
            f"  monte carlo         = {mc_est.bits_per_s_per_hz:.6f} +/- {ci:.6f} "
            f"bits/s/Hz (95% CI, n={mc_est.samples})"
        )
    if args.csv:
        mc_cap = "%.17e" % mc_est.bits_per_s_per_hz if mc_est else ""
        mc_se = "%.17e" % mc_est.std_error if mc_est else ""
        print("alpha,cable_gain,path_loss,analytic_bits_s_hz,mc_bits_s_hz,mc_std_err")
        print(
            "%.17e,%.17e,%.17e,%.17e,%s,%s"
            % (alpha, cable_gain, path_loss, est.bits_per_s_per_hz, mc_cap, mc_se)
        )
    return 0


_SWEEP_KEYS = ("axis", "grid", "family", "family_values", "methods", "label",
               "plc_noise_var", "plc_half_duplex")


def _parse_grid(text: str) -> tuple[float, ...]:
    """Grids are 'a,b,c' lists or 'lo:hi:n' / 'lo:hi:n:log' ranges."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ValueError(f"bad grid spec {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ValueError("grid needs at least one point")
        if len(parts) == 4:
            return tuple(np.geomspace(lo, hi, n).tolist())
        return tuple(np.linspace(lo, hi, n).tolist())
    return tuple(float(v) for v in text.split(","))


def _custom_sweep_spec(path: str, cfg: Config, mc: McSettings | None) -> tuple[SweepSpec, Config]:
    raw = _parse_kv_file(path)
    sweep_raw = {k: raw.pop(k) for k in list(raw) if k in _SWEEP_KEYS}
    overlay = _typed_config_entries(raw, path)
    if "relay_gain" in overlay and "relay_gain_db" in overlay:
        raise ConfigError(f"{path}: give either relay_gain or relay_gain_db, not both")
    cfg = replace(cfg, **overlay)
    if "axis" not in sweep_raw or "grid" not in sweep_raw:
        raise ConfigError(f"{path}: a sweep spec needs 'axis' and 'grid' keys")
    try:
        methods = tuple(sweep_raw.get("methods", "analytic").replace(" ", "").split(","))
        spec = SweepSpec(
            base=cfg.to_system(),
            axis=sweep_raw["axis"],
            grid=_parse_grid(sweep_raw["grid"]),
            family=sweep_raw.get("family"),
            family_values=tuple(
                float(v) for v in sweep_raw.get("family_values", "").split(",") if v
            ),
            methods=methods if mc is None else tuple(dict.fromkeys(methods + ("monte_carlo",))),
            mc=mc,
            gain_convention=cfg.gain_convention,
            plc_noise_var=float(sweep_raw["plc_noise_var"]) if "plc_noise_var" in sweep_raw else None,
            plc_half_duplex=_parse_bool(sweep_raw.get("plc_half_duplex", "false")),
            quad_order=cfg.quad_order,
            rel_tol=cfg.rel_tol,
            label=sweep_raw.get("label", os.path.splitext(os.path.basename(path))[0]),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return spec, cfg


def cmd_sweep(cfg: Config, args: argparse.Namespace) -> int:
    mc = cfg.to_mc() if (args.mc_samples is not None or args.with_mc) else None
    target = args.target
    if target in PRESETS:
        gain_db = None
        if args.gain_db:
            gain_db = tuple(float(v) for v in args.gain_db.split(","))
        spec = preset_sweep(target, mc=mc, points=args.points, gain_db=gain_db)
    elif os.path.exists(target):
        spec, cfg = _custom_sweep_spec(target, cfg, mc)
    else:
        print(
            f"unknown preset or spec file {target!r}; valid presets: {', '.join(PRESETS)}",
            file=sys.stderr,
        )
        return 2
    result = run_sweep(spec)
    if result.errors:
        for line in result.errors:
            print(f"numerical error: {line}", file=sys.stderr)
        return 3
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, f"{spec.label}.csv")
    svg_path = os.path.join(args.out_dir, f"{spec.label}.svg")
    written = []
    try:
        emit_csv(result, csv_path)
        written.append(csv_path)
        emit_plot(result, svg_path)
        written.append(svg_path)
    except OSError as exc:
        for p in written + [csv_path, svg_path]:
            if os.path.exists(p):
                os.unlink(p)
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    return 0


def cmd_validate(cfg: Config, args: argparse.Namespace) -> int:
    if args.grid_size == 0:
        print("warning: validation grid is empty, vacuous pass")
        return 0
    if args.grid_size < 0:
        raise ConfigError("grid-size must be nonnegative")
    samples = args.samples if args.samples is not None else cfg.mc_samples
    rule = gauss_hermite(cfg.quad_order)
    rng = np.random.default_rng(cfg.seed % (1 << 64))
    base = cfg.to_system()
    noise_sign = -1.0 if args.corrupt_mgf_sign else 1.0

    worst_se = 0.0
    worst_rel = 0.0
    worst_desc = ""
    failed = False
    print(f"validate: {args.grid_size} random operating points, {samples} samples each")
    for i in range(args.grid_size):
        ps = 10.0 ** rng.uniform(-1.0, 1.0)
        d1 = rng.uniform(1.0, 50.0)
        gain = 10.0 ** rng.uniform(0.0, 1.0)
        d2 = rng.uniform(1.0, 10.0)
        system = replace(
            base,
            src_power_w=ps,
            relay_gain=gain,
            plc=replace(base.plc, length_m=d1),
            wireless=replace(base.wireless, dist_m=d2),
        )
        mc = McSettings(
            n_samples=samples, seed=int(rng.integers(1 << 62)), workers=cfg.workers
        )
        analytic = analytic_hybrid_capacity(system, rule, cfg.rel_tol, _noise_sign=noise_sign)
        sampled = mc_hybrid_capacity(system, mc)
        delta = abs(analytic.bits_per_s_per_hz - sampled.bits_per_s_per_hz)
        se_units = delta / sampled.std_error if sampled.std_error > 0 else math.inf
        rel = delta / analytic.bits_per_s_per_hz if analytic.bits_per_s_per_hz > 0 else math.inf
        ok = delta <= max(3.0 * sampled.std_error, 0.01 * analytic.bits_per_s_per_hz)
        desc = f"P_s={ps:.3f} d1={d1:.1f} G={gain:.3f} d2={d2:.1f}"
        print(
            f"  [{i + 1:2d}] {desc:44s} analytic={analytic.bits_per_s_per_hz:.5f} "
            f"mc={sampled.bits_per_s_per_hz:.5f} delta={se_units:.2f} SE ({100 * rel:.3f}%)"
            + ("" if ok else "  FAIL")
        )
        if not ok:
            failed = True
            worst_desc = desc
        worst_se = max(worst_se, se_units)
        worst_rel = max(worst_rel, rel)
    print(f"max deviation: {worst_se:.2f} SE, {100 * worst_rel:.3f}% relative")
    if failed:
        print(f"validation FAILED, worst offender: {worst_desc}", file=sys.stderr)
        return 4
    print("validation passed")
    return 0


def cmd_tables(args: argparse.Namespace) -> int:
    try:
        rule = gauss_hermite(args.order)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = open(args.out, "w", encoding="ascii", newline="\n") if args.out else sys.stdout
    try:
        print("n,node,weight", file=out)
        for i, (x, w) in enumerate(zip(rule.nodes, rule.weights), 1):
            print("%d,%.17e,%.17e" % (i, x, w), file=out)
        print("# sum_weights = %.17e" % rule.weights.sum(), file=out)
    finally:
        if args.out:
            out.close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"config file (default: ${ENV_CONFIG})")
    for f in fields(Config):
        flag = "--" + f.name.replace("_", "-")
        if f.type == "bool":
            common.add_argument(flag, type=_parse_bool, default=None, metavar="BOOL")
        elif f.type == "int":
            common.add_argument(flag, type=_parse_int, default=None, metavar="N")
        elif f.type == "str":
            common.add_argument(flag, default=None)
        else:
            common.add_argument(flag, type=float, default=None, metavar="X")

    parser = argparse.ArgumentParser(
        prog="plcrelay",
        description="Ergodic capacity of a two-hop power-line/wireless relay link.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate one operating point")
    p_eval.add_argument("--mc", action="store_true", help="also run the Monte Carlo estimate")
    p_eval.add_argument("--csv", action="store_true", help="append a single-line CSV summary")
    p_eval.add_argument("--dump-config", action="store_true", help="print the effective config and exit")

    p_sweep = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    p_sweep.add_argument("target", help=f"preset ({', '.join(PRESETS)}) or sweep spec file")
    p_sweep.add_argument("--out-dir", default=".", help="output directory (default: .)")
    p_sweep.add_argument("--points", type=int, default=20, help="grid points per axis (presets)")
    p_sweep.add_argument("--gain-db", help="comma list of relay gains in dB (fig5 family)")
    p_sweep.add_argument(
        "--with-mc",
        action="store_true",
        help="add Monte Carlo rows (implied by an explicit --mc-samples)",
    )

    p_val = sub.add_parser("validate", parents=[common], help="analytic vs Monte Carlo self-check")
    p_val.add_argument("--grid-size", type=int, default=8, help="number of random operating points")
    p_val.add_argument("--samples", type=_parse_int, default=None, help="MC samples per point")
    p_val.add_argument("--corrupt-mgf-sign", action="store_true", help=argparse.SUPPRESS)

    p_tab = sub.add_parser("tables", help="dump Gauss-Hermite nodes/weights as CSV")
    p_tab.add_argument("order", type=int)
    p_tab.add_argument("--out", help="write to a file instead of stdout")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.cmd == "tables":
        return cmd_tables(args)
    try:
        cfg, _ = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.cmd == "eval":
            return cmd_eval(cfg, args)
        if args.cmd == "sweep":
            return cmd_sweep(cfg, args)
        return cmd_validate(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical error: {exc} (estimate {exc.estimate:g}, error {exc.error:g})", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
