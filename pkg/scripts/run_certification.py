"""Run all twelve acceptance checks and write them as a CSV table.

    python scripts/run_certification.py --out results/
"""
import argparse
import csv
import sys
import time
from pathlib import Path

from subordlab import certify


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("."), help="directory for certification.csv")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    rows = []
    for check in certify.CRITERIA:
        start = time.perf_counter()
        result = check()
        elapsed = time.perf_counter() - start
        print(f"{result.line()}  ({elapsed:.1f}s)")
        rows.append(result.row() | {"seconds": round(elapsed, 2)})

    with open(args.out / "certification.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    return 0 if all(r["pass"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
