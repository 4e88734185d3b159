"""Reference datasets shipped with the package.

CSV resources carrying the published tables and figure data that the
`reproduce` command and the acceptance suite verify against.  The Wang
column of table2 is inert reference data only; no implementation of that
construction exists here.
"""

from __future__ import annotations

import csv
from importlib import resources


def _rows(name: str) -> list[dict[str, str]]:
    ref = resources.files("diffprop.refdata").joinpath(name)
    with ref.open("r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def table1() -> list[dict]:
    """Columns n1, n2, u, lower, upper for two designs x 21 observed values."""
    return [
        {"n1": int(r["n1"]), "n2": int(r["n2"]), "u": float(r["u"]),
         "lower": float(r["lower"]), "upper": float(r["upper"])}
        for r in _rows("table1.csv")
    ]


def table2() -> list[dict]:
    """Seven experiments at (50, 10): counts, observed difference, and the
    Wang / pooled / unpooled reference intervals."""
    out = []
    for r in _rows("table2.csv"):
        out.append({
            "x1": int(r["x1"]), "x2": int(r["x2"]),
            "theta_hat": float(r["theta_hat"]),
            "wang": (float(r["wang_lower"]), float(r["wang_upper"])),
            "k1": (float(r["k1_lower"]), float(r["k1_upper"])),
            "k2": (float(r["k2_lower"]), float(r["k2_upper"])),
        })
    return out


def figure(name: str) -> list[tuple[float, float]]:
    """201 (theta_diff, coverage) pairs; name is 'figure1a' or 'figure1b'."""
    if name not in ("figure1a", "figure1b"):
        raise ValueError(f"unknown figure dataset {name!r}")
    return [(float(r["theta_diff"]), float(r["coverage"]))
            for r in _rows(f"{name}.csv")]


def medical() -> list[dict]:
    """The two reference intervals of the medical application."""
    return [
        {"n1": int(r["n1"]), "n2": int(r["n2"]), "u": float(r["u"]),
         "lower": float(r["lower"]), "upper": float(r["upper"])}
        for r in _rows("medical.csv")
    ]
