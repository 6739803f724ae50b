#!/usr/bin/env python3
"""Regenerate the twelve built-in demonstration tables and print them.

Usage:
    python3 scripts/reproduce_tables.py [--out DIR] [--full-precision]
"""

import argparse
import csv
import pathlib

from bonusmalus.tables import build_table


def fmt(value, full):
    if isinstance(value, float) and not full:
        return f"{value:.4f}"
    return str(value)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path, help="also write CSVs here")
    parser.add_argument("--full-precision", action="store_true")
    args = parser.parse_args()

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)

    for number in range(1, 13):
        table = build_table(number)
        header = table.header()
        rows = [
            [str(int(row[0]))] + [fmt(v, args.full_precision) for v in row[1:]]
            for row in table.rows()
        ]
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
        print(f"table {number}")
        print("  " + "  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for row in rows:
            print("  " + "  ".join(v.rjust(w) for v, w in zip(row, widths)))
        print()
        if args.out:
            with open(args.out / f"table_{number:02d}.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                writer.writerows(rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
