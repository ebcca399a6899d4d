"""Maximum radial error of a single Nagata section as the section angle shrinks."""

import argparse

from pathforge.arc_error import max_radial_error_pct, nagata_error_profile


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--angles", type=float, nargs="+", default=[90, 60, 45, 33, 21, 10, 5])
    p.add_argument("--profile", type=float, help="also print the full profile for this section angle")
    args = p.parse_args()

    print(f"{'alpha [deg]':>12} {'max radial err [% r]':>22}")
    for a in args.angles:
        print(f"{a:12.1f} {max_radial_error_pct(a):22.6f}")

    if args.profile:
        print()
        print(f"{'eta':>6} {'path %':>8} {'radial %':>10} {'parametric %':>13}")
        for e in nagata_error_profile(args.profile, sections=1, samples=11):
            print(f"{e.eta:6.2f} {e.path_pct:8.2f} {e.radial_pct:10.4f} {e.parametric_pct:13.4f}")


if __name__ == "__main__":
    main()
