"""Exact values on the desk-scale grid, written to results/exact_table.csv."""

import sys
from pathlib import Path

from loctree.cli import main

OUT = Path(__file__).resolve().parents[1] / "results" / "exact_table.csv"

if __name__ == "__main__":
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    max_k = int(sys.argv[2]) if len(sys.argv) > 2 else 3
    sys.exit(main(["table", "--max-n", str(max_n), "--max-k", str(max_k),
                   "--max-seconds", "300", "-o", str(OUT)]))
