"""Open-loop vs Fuzzy-PI force-controlled run on the packaged benchmark surface.

Writes both traces as CSV and, when matplotlib is available, a force-vs-step
plot comparing them.

    python scripts/run_benchmark.py --out-dir runs/benchmark
"""

import argparse
from pathlib import Path

from pathforge import cli_io
from pathforge.contact_sim import run_force_controlled, run_open_loop

HERE = Path(__file__).resolve().parent
DEFAULT_SPEC = HERE.parent / "tests" / "fixtures" / "line.json"


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--spec", default=str(DEFAULT_SPEC))
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", default="runs/benchmark")
    p.add_argument("--no-plot", action="store_true")
    args = p.parse_args()

    cfg = cli_io.read_run_config(args.config)
    path = cli_io.read_path_spec(args.spec).discretize()
    surface = cfg.surface_model()
    traces = {
        "open": run_open_loop(path, surface),
        "closed": run_force_controlled(path, surface, cfg.controller(), cfg.f_setpoint),
    }
    out = Path(args.out_dir)
    for name, tr in traces.items():
        cli_io.atomic_write_text(out / f"{name}.csv", cli_io.trace_to_csv(tr))
        print(f"{name:>6}: peak {tr.peak_force:6.1f} N  contact lost {tr.contact_loss_steps:3d} steps  aborts {tr.aborts}")

    if args.no_plot:
        return
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot")
        return
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(9, 6))
    for ax, (name, tr) in zip(axes, traces.items()):
        ax.plot(tr.force, lw=0.8)
        ax.axhline(cfg.f_setpoint, color="k", ls=":", lw=0.8)
        ax.axhline(cfg.f_max, color="r", ls="--", lw=0.8)
        ax.set_ylabel("normal force [N]")
        ax.set_title(f"{name} loop")
    axes[-1].set_xlabel("discrete time (trajectory sample)")
    fig.tight_layout()
    fig.savefig(out / "force.png", dpi=120)
    print(f"plot -> {out / 'force.png'}")


if __name__ == "__main__":
    main()
