"""``pathforge`` command line: calibrate, discretize, simulate, errors."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import cli_io
from .arc_error import nagata_error_profile
from .contact_sim import run_force_controlled, run_open_loop
from .errors import PathforgeError
from .geometry import as_vec3, frame_from_three_points


def _point(text: str):
    try:
        return as_vec3([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z: {exc}") from None


def _load_spec(args):
    spec = cli_io.read_path_spec(args.spec)
    if args.frame is not None:
        spec = cli_io.express_in_frame(spec, cli_io.read_frame(args.frame))
    return spec


def cmd_calibrate(args) -> int:
    pts = (args.origin, args.x_point, args.xy_point)
    frame = frame_from_three_points(*pts)
    cli_io.atomic_write_text(args.out, cli_io.frame_to_json(frame, pts))
    return 0


def cmd_discretize(args) -> int:
    traj = _load_spec(args).discretize()
    cli_io.atomic_write_text(args.out, cli_io.trajectory_to_csv(traj))
    print(f"{len(traj)} poses -> {args.out}")
    return 0


def cmd_simulate(args) -> int:
    cfg = cli_io.read_run_config(args.config)
    traj = _load_spec(args).discretize()
    surface = cfg.surface_model()
    open_trace = run_open_loop(traj, surface)
    closed_trace = run_force_controlled(traj, surface, cfg.controller(), cfg.f_setpoint)
    out_dir = Path(args.out_dir)
    cli_io.atomic_write_text(out_dir / args.open_name, cli_io.trace_to_csv(open_trace))
    cli_io.atomic_write_text(out_dir / args.closed_name, cli_io.trace_to_csv(closed_trace))
    for name, tr in (("open", open_trace), ("closed", closed_trace)):
        print(f"{name:>6}: steps={len(tr)} peak={tr.peak_force:.1f} N contact_loss={tr.contact_loss_steps} aborts={tr.aborts}")
    return 0


def cmd_errors(args) -> int:
    prof = nagata_error_profile(args.alpha, args.sections, args.samples)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "eta", "path_pct", "radial_pct", "parametric_pct"])
    for e in prof:
        w.writerow([e.section, f"{e.eta:.4f}", f"{e.path_pct:.2f}", f"{e.radial_pct:.4f}", f"{e.parametric_pct:.4f}"])
    if args.out:
        cli_io.atomic_write_text(args.out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    worst = max(prof, key=lambda e: abs(e.radial_pct))
    print(f"max radial error: {worst.radial_pct:.4f}% of r at {worst.path_pct:.1f}% of section {worst.section}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pathforge", description="Discretize robot paths and simulate Fuzzy-PI force-controlled contact.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("calibrate", help="fit a frame from three taught points and write it as JSON")
    c.add_argument("--origin", type=_point, required=True, help="frame origin, X,Y,Z in mm")
    c.add_argument("--x-point", type=_point, required=True, help="a point on the frame +x axis")
    c.add_argument("--xy-point", type=_point, required=True, help="a point in the frame's positive xOy quadrant")
    c.add_argument("--out", required=True, help="output frame JSON")
    c.set_defaults(func=cmd_calibrate)

    for name, helptext, func in (
        ("discretize", "sample a path spec into a trajectory CSV", cmd_discretize),
        ("simulate", "run open-loop and force-controlled contact simulations", cmd_simulate),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--spec", required=True, help="path spec JSON")
        s.add_argument("--frame", help="frame JSON from `calibrate`; waypoints are re-expressed in it")
        s.set_defaults(func=func)
        if name == "discretize":
            s.add_argument("--out", required=True, help="output trajectory CSV")
        else:
            s.add_argument("--config", help=f"run config JSON (default: ${cli_io.CONFIG_ENV}, else packaged default)")
            s.add_argument("--out-dir", default=".", help="directory for trace CSVs (default: .)")
            s.add_argument("--open-name", default="open.csv", help="open-loop trace file name")
            s.add_argument("--closed-name", default="closed.csv", help="closed-loop trace file name")

    e = sub.add_parser("errors", help="tabulate Nagata interpolation error against a true arc")
    e.add_argument("--alpha", type=float, required=True, help="total arc angle, degrees")
    e.add_argument("--sections", type=int, default=1, help="number of equal Nagata sections (default 1)")
    e.add_argument("--samples", type=int, default=11, help="samples per section (default 11)")
    e.add_argument("--out", help="write the table here instead of stdout")
    e.set_defaults(func=cmd_errors)
    return p


def cli_dispatch(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PathforgeError, OSError) as exc:
        print(f"pathforge {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
