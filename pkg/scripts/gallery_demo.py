"""Build every gallery family into a directory and check its manifest.

Usage: python3 scripts/gallery_demo.py [OUT_DIR] [--seed N]
"""
import argparse
import tempfile
from pathlib import Path

from covlab.cli import main as cli_main
from covlab.gallery import FAMILIES
from covlab.verify import manifest_checks


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out", nargs="?", help="output directory (default: a temporary one)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    root = Path(args.out or tempfile.mkdtemp(prefix="covlab-gallery-"))
    failed = 0
    for name in sorted(FAMILIES):
        cli_main(["gallery", "build", name, "--out", str(root / name)])
        report = manifest_checks(root / name, args.seed)
        for line in report.lines():
            print(line)
        failed += not report.passed
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
