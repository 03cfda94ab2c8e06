"""Write the covariogram of a polygon on a grid as CSV for an external plotter.

Usage: python3 scripts/cov_grid_plotdata.py OUT.csv [--res 41] [--float]
"""
import argparse

from covlab.covariogram import cov_grid
from covlab.exactgeom import convex_hull


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out")
    parser.add_argument("--res", type=int, default=41)
    parser.add_argument("--float", action="store_true")
    args = parser.parse_args()
    K = convex_hull([(0, 0), (3, 0), (1, 2)])
    field = cov_grid(K, args.res)
    field.to_csv(args.out, as_float=args.float)
    print(f"{len(field.values)} nodes, max {max(field.values)} (the area of K)")


if __name__ == "__main__":
    main()
