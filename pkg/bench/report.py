"""Report — CSV tables and SVG figures for studies and figures.

CSV numbers use 17 significant digits so they round-trip; SVG output is
rendered by matplotlib's Agg/SVG backend with a fixed hash salt and no
date metadata, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Iterator, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402

from core.errors import ConfigError, ReportError  # noqa: E402
from core.problem import ConvergenceReport, Solution  # noqa: E402

if TYPE_CHECKING:
    from bench.study import SolutionProfile

_SVG_RC = {
    "svg.hashsalt": "gencaputo",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}
_SVG_METADATA = {"Date": None}


class ReportFormat(str, Enum):
    CSV = "csv"
    SVG = "svg"


def fmt_number(x: float | None) -> str:
    """17-significant-digit text; empty for a missing value."""
    if x is None:
        return ""
    return format(float(x), ".17g")


def nominal_order(scheme_id: str, alpha: float) -> float | None:
    """Textbook order of *scheme_id* for smooth ū, used for guide lines."""
    return {
        "l1": 2.0 - alpha,
        "l2sigma": 3.0 - alpha,
        "euler": alpha,
    }.get(scheme_id)


# ── Low-level writers ────────────────────────────────────────────


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create {path.parent}: {exc}") from exc
    return path


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[float | None]]) -> Path:
    path = _prepare(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt_number(v) for v in row])
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    logger.debug(f"Wrote {path}")
    return path


@contextmanager
def _figure(width: float = 5.0, height: float = 3.6, ncols: int = 1) -> Iterator[tuple[plt.Figure, Any]]:
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(1, ncols, figsize=(width, height))
        try:
            yield fig, ax
        finally:
            plt.close(fig)


def _save_svg(fig: plt.Figure, path: str | Path) -> Path:
    path = _prepare(path)
    try:
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    logger.debug(f"Wrote {path}")
    return path


# ── Convergence reports ──────────────────────────────────────────


def _report_svg(report: ConvergenceReport, path: Path) -> Path:
    Ns = np.asarray(report.Ns, dtype=float)
    errors = np.asarray(report.errors, dtype=float)
    with _figure() as (fig, ax):
        positive = errors > 0
        ax.loglog(Ns[positive], errors[positive], "o-", label="error")
        order = nominal_order(report.scheme_id, report.alpha)
        if order is not None and positive.any():
            anchor_N, anchor_e = Ns[positive][0], errors[positive][0]
            ax.loglog(Ns, anchor_e * (Ns / anchor_N) ** (-order), "k--", lw=0.8,
                      label=f"slope {order:.2f}")
        ax.set_xlabel("N")
        ax.set_ylabel(r"$\ell^\infty$ error")
        ax.set_title(f"{report.problem} {report.scheme_id}  alpha={report.alpha:g} rho={report.rho:.4g}")
        ax.legend()
        fig.tight_layout()
        return _save_svg(fig, path)


def emit_report(report: ConvergenceReport, fmt: ReportFormat | str, path: str | Path) -> Path:
    """Write one convergence report as CSV (``N,error,order``) or SVG."""
    if not report.rows:
        raise ReportError("cannot emit an empty convergence report")
    try:
        fmt = ReportFormat(fmt)
    except ValueError:
        raise ConfigError(f"unknown report format '{fmt}' (csv or svg)") from None

    if fmt is ReportFormat.CSV:
        return write_csv(path, ("N", "error", "order"), ((r.N, r.error, r.order) for r in report.rows))
    return _report_svg(report, Path(path))


def cell_stem(report: ConvergenceReport) -> str:
    return f"{report.problem}_{report.scheme_id}_alpha{report.alpha:g}_rho{report.rho:.6g}"


def emit_study(reports: Sequence[ConvergenceReport], name: str, out_dir: str | Path) -> list[Path]:
    """Per-cell CSV + SVG plus one combined ``<name>.csv`` in report order."""
    if not reports:
        raise ReportError(f"study {name} produced no reports")
    out_dir = Path(out_dir)
    written: list[Path] = []
    for report in reports:
        stem = cell_stem(report)
        written.append(emit_report(report, ReportFormat.CSV, out_dir / f"{stem}.csv"))
        written.append(emit_report(report, ReportFormat.SVG, out_dir / f"{stem}.svg"))

    combined = (
        (rep.alpha, rep.rho, row.N, row.error, row.order)
        for rep in reports for row in rep.rows
    )
    written.append(write_csv(out_dir / f"{name}.csv", ("alpha", "rho", "N", "error", "order"), combined))
    logger.info(f"Study {name}: wrote {len(written)} files to {out_dir}")
    return written


# ── Figures ──────────────────────────────────────────────────────


def emit_solution_profiles(profiles: Sequence[SolutionProfile], out_dir: str | Path, stem: str = "fig1") -> list[Path]:
    """Closed form (line) against the numerical nodes (circles), one panel per ρ."""
    if not profiles:
        raise ReportError("no solution profiles to report")
    out_dir = Path(out_dir)
    rows = (
        (p.solution.mesh.rho, t, u, e)
        for p in profiles
        for t, u, e in zip(p.solution.mesh.nodes, p.solution.values, p.exact)
    )
    csv_path = write_csv(out_dir / f"{stem}.csv", ("rho", "t", "u", "exact"), rows)
    with _figure(width=4.0 * len(profiles), ncols=len(profiles)) as (fig, axes):
        for ax, p in zip(np.atleast_1d(axes), profiles):
            ax.plot(*p.curve, "r-", lw=1.0, label="exact")
            ax.plot(p.solution.mesh.nodes, p.solution.values, "bo", ms=3, mfc="none", label="numerical")
            ax.set_title(rf"$\rho$ = {p.solution.mesh.rho:.4g}")
            ax.set_xlabel("t")
            ax.legend()
        fig.tight_layout()
        svg_path = _save_svg(fig, out_dir / f"{stem}.svg")
    return [csv_path, svg_path]


def emit_almeida_comparison(almeida: Solution, l1: Solution, out_dir: str | Path, stem: str = "fig2") -> list[Path]:
    """Both solutions against t, sharing the graded nodes."""
    out_dir = Path(out_dir)
    t = almeida.mesh.nodes
    csv_path = write_csv(
        out_dir / f"{stem}.csv", ("t", "u_almeida", "u_l1"),
        zip(t, almeida.values, l1.values),
    )
    with _figure() as (fig, ax):
        ax.plot(t, almeida.values, "-", label="Almeida")
        ax.plot(l1.mesh.nodes, l1.values, "--", label="L1 (transformed)")
        ax.set_xlabel("t")
        ax.set_ylabel("u(t)")
        ax.legend()
        fig.tight_layout()
        svg_path = _save_svg(fig, out_dir / f"{stem}.svg")
    return [csv_path, svg_path]


def emit_hadamard_limit(points: Sequence[tuple[float, float]], out_dir: str | Path, stem: str = "fig3") -> list[Path]:
    if not points:
        raise ReportError("no Hadamard-limit points to report")
    out_dir = Path(out_dir)
    csv_path = write_csv(out_dir / f"{stem}.csv", ("rho", "error"), points)
    rhos, errors = (np.asarray(col, dtype=float) for col in zip(*points))
    with _figure() as (fig, ax):
        ax.loglog(rhos, errors, "o-")
        ax.invert_xaxis()
        ax.set_xlabel(r"$\rho$")
        ax.set_ylabel(r"$L^\infty$ error vs log t")
        fig.tight_layout()
        svg_path = _save_svg(fig, out_dir / f"{stem}.svg")
    return [csv_path, svg_path]


def emit_hadamard_profile(solution: Solution, reference: np.ndarray, out_dir: str | Path, stem: str = "fig4") -> list[Path]:
    out_dir = Path(out_dir)
    t = solution.mesh.nodes
    csv_path = write_csv(out_dir / f"{stem}.csv", ("t", "u", "log_t"), zip(t, solution.values, reference))
    with _figure() as (fig, ax):
        ax.plot(t, reference, "-", label="log t")
        ax.plot(t, solution.values, "o", ms=3, label=f"numerical, rho={solution.mesh.rho:g}")
        ax.set_xlabel("t")
        ax.legend()
        fig.tight_layout()
        svg_path = _save_svg(fig, out_dir / f"{stem}.svg")
    return [csv_path, svg_path]


def emit_solution(solution: Solution, path: str | Path) -> Path:
    """Node table ``t,t_bar,u`` for one solve."""
    return write_csv(path, ("t", "t_bar", "u"), solution.to_rows())
