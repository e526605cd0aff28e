"""Deterministic file exports and figures for scan and verification output.

JSON reports follow the schema {"meta": {"version", "argv"}, "data": {...}}.
Only the meta block may vary between runs (it records the invocation); the
data block of two identical invocations is byte-identical.  CSV summaries
carry a header row and full-precision scientific notation (17 significant
digits) so residual regressions are bit-stable.  Figures are SVG, residual
magnitude against k on a log ordinate, rendered without pyplot state and
with timestamp metadata stripped.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import List, Optional

import matplotlib
from matplotlib.figure import Figure

from . import __version__
from .commutant import ScanResult

__all__ = [
    "fmt17",
    "scan_data_payload",
    "render_json_report",
    "write_json_report",
    "scan_csv_rows",
    "write_scan_csv",
    "plot_scan_residuals",
    "plot_residual_curve",
]


def fmt17(x: float) -> str:
    return format(float(x), ".17e")


def scan_data_payload(result: ScanResult, per_k: Optional[dict] = None) -> dict:
    """The data block of a scan report (config, cells, verdicts, residuals).

    ``per_k`` optionally maps (m, l) to a per-k residual array to embed.
    """
    cells = []
    for c in result.cells:
        cell = {
            "m": c.m,
            "l": c.l,
            "feasible": c.feasible,
            "degenerate": c.degenerate,
            "exceptional": c.exceptional,
            "min_residual": fmt17(c.min_residual) if c.min_residual != float("inf") else "inf",
            "best_c1": [fmt17(c.best_c1.real), fmt17(c.best_c1.imag)],
            "best_c2": [fmt17(c.best_c2.real), fmt17(c.best_c2.imag)],
            "error": c.error,
        }
        if per_k is not None and (c.m, c.l) in per_k:
            cell["per_k_residual"] = [fmt17(v) for v in per_k[(c.m, c.l)]]
        cells.append(cell)
    return {
        "config": {
            "p": result.p, "s": result.s, "n": result.n, "d": result.d,
            "m_max": result.m_max, "K": result.K, "tol": fmt17(result.tol),
        },
        "cells": cells,
        "feasible_set": [list(t) for t in result.feasible_set()],
        "degenerate_set": [list(t) for t in result.degenerate_set()],
        "all_degenerate": result.all_degenerate(),
    }


def render_json_report(data: dict, argv: List[str]) -> str:
    payload = {
        "meta": {"version": __version__, "argv": list(argv)},
        "data": data,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json_report(data: dict, argv: List[str], path) -> None:
    Path(path).write_text(render_json_report(data, argv))


_SCAN_HEADER = [
    "m", "l", "feasible", "degenerate", "exceptional",
    "min_residual", "best_c1_re", "best_c1_im", "best_c2_re", "best_c2_im", "error",
]


def scan_csv_rows(result: ScanResult) -> List[List[str]]:
    rows = [list(_SCAN_HEADER)]
    for c in result.cells:
        rows.append([
            str(c.m), str(c.l), str(int(c.feasible)), str(int(c.degenerate)),
            str(int(c.exceptional)),
            fmt17(c.min_residual) if c.min_residual != float("inf") else "inf",
            fmt17(c.best_c1.real), fmt17(c.best_c1.imag),
            fmt17(c.best_c2.real), fmt17(c.best_c2.imag),
            c.error or "",
        ])
    return rows


def write_scan_csv(result: ScanResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(scan_csv_rows(result))


def _new_figure() -> Figure:
    matplotlib.rcParams["svg.hashsalt"] = "bergshift"
    return Figure(figsize=(6.0, 4.0))


def _save_svg(fig: Figure, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_residual_curve(per_k, title: str, path) -> None:
    """One residual-vs-k curve on a log ordinate, written as SVG."""
    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    ks = range(len(per_k))
    floor = 1e-300
    ax.semilogy(list(ks), [max(abs(v), floor) for v in per_k], marker=".", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("residual magnitude")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    _save_svg(fig, path)


def plot_scan_residuals(result: ScanResult, per_k: dict, out_dir) -> List[Path]:
    """Residual figures for a scan: one per cell plus a cell summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for c in result.cells:
        key = (c.m, c.l)
        if key not in per_k:
            continue
        path = out / f"residual_m{c.m}_l{c.l}.svg"
        plot_residual_curve(
            per_k[key],
            f"p={result.p} s={result.s} n={result.n} d={result.d}  cell m={c.m} l={c.l}",
            path,
        )
        written.append(path)

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    ms = [c.m for c in result.cells if c.error is None]
    rs = [max(c.min_residual, 1e-300) for c in result.cells if c.error is None]
    flags = [c for c in result.cells if c.error is None]
    ax.semilogy(ms, rs, "o-", lw=0.8)
    for m, r, c in zip(ms, rs, flags):
        if c.degenerate:
            ax.annotate("deg", (m, r), textcoords="offset points", xytext=(0, 6), fontsize=7)
    ax.axhline(result.tol, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("m  (l = m + s - p)")
    ax.set_ylabel("min residual over unit-sphere constants")
    ax.set_title(f"scan p={result.p} s={result.s} n={result.n} d={result.d}")
    ax.grid(True, which="both", alpha=0.3)
    summary = out / "scan_summary.svg"
    _save_svg(fig, summary)
    written.append(summary)
    return written
