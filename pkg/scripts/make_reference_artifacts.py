#!/usr/bin/env python3
"""Regenerate every reference dataset (tables, figure data, medical case)
into an output directory and summarize the verification results.

Usage: python scripts/make_reference_artifacts.py [outdir]
"""

import sys
from pathlib import Path

from diffprop.cli import main

TARGETS = ("table1", "table2", "figure1a", "figure1b", "medical")


def run(outdir: str) -> int:
    Path(outdir).mkdir(parents=True, exist_ok=True)
    worst_rc = 0
    for target in TARGETS:
        print(f"=== {target} ===")
        rc = main(["reproduce", "--target", target, "--out", outdir])
        worst_rc = max(worst_rc, rc)
    return worst_rc


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else "out"))
