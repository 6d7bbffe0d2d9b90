"""Run the four canned parameter sweeps and write CSV + SVG for each.

Outputs land in ./sweep_outputs (or the directory given as the first
argument). With --mc the sweeps also carry Monte Carlo rows, which show up
as error-bar points in the plots; expect a couple of minutes in that mode.
"""
import os
import sys

from plcrelay import McSettings, PRESETS, emit_csv, emit_plot, preset_sweep, run_sweep


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    with_mc = "--mc" in argv
    dirs = [a for a in argv if not a.startswith("-")]
    out_dir = dirs[0] if dirs else "sweep_outputs"
    os.makedirs(out_dir, exist_ok=True)

    mc = McSettings(n_samples=200_000, seed=0, workers=4) if with_mc else None
    for name in PRESETS:
        result = run_sweep(preset_sweep(name, mc=mc))
        csv_path = os.path.join(out_dir, f"{name}.csv")
        svg_path = os.path.join(out_dir, f"{name}.svg")
        emit_csv(result, csv_path)
        emit_plot(result, svg_path)
        n_curves = len({(r.family_value, r.method) for r in result.rows})
        print(f"{name}: {len(result.rows)} rows, {n_curves} curves -> {csv_path}, {svg_path}")
    if not with_mc:
        print("tip: rerun with --mc for error-bar points on every curve")


if __name__ == "__main__":
    main()
