"""Study — convergence-study harness over (α, ρ, N) grids.

A study runs one scheme on one registered example for every (α, ρ) cell
and every N, measuring the ℓ∞ error against the closed form in
transformed coordinates.  Cells are independent and dispatched to worker
threads; report assembly is ordered ρ-major, α-minor (the table layout).
"""

from __future__ import annotations

import asyncio
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from loguru import logger

from bench.dispatcher import Cell, CellDispatcher
from bench.problems import get_example
from core.errors import ConfigError, ReportError
from core.problem import ConvergenceReport, Solution, linf_error
from core.settings import Settings, get_settings
from schemes.almeida import DEFAULT_N_TRUNC
from schemes.nonlinear import NonlinearSolveConfig
from schemes.registry import SchemeId, parse_scheme, solve

REFERENCE_TABLES_PATH = Path(__file__).resolve().parent.parent / "data" / "reference_tables.json"


@dataclass(frozen=True)
class StudySpec:
    """One convergence study: a problem, a scheme and the (α, ρ, N) grid."""

    problem: str
    alphas: tuple[float, ...]
    rhos: tuple[float, ...]
    Ns: tuple[int, ...]
    scheme: str = SchemeId.L1.value
    output_dir: Path | None = None
    params: dict[str, float] = field(default_factory=dict)
    name: str = "study"
    max_workers: int = 4

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))
        object.__setattr__(self, "Ns", tuple(int(n) for n in self.Ns))
        object.__setattr__(self, "scheme", parse_scheme(self.scheme).value)
        if not self.alphas or not self.rhos or not self.Ns:
            raise ConfigError(f"study '{self.name}' needs at least one alpha, rho and N")
        if any(n < 2 for n in self.Ns):
            raise ConfigError(f"every N must be >= 2, got {list(self.Ns)}")
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ConfigError(f"N list must be strictly increasing, got {list(self.Ns)}")

    @classmethod
    def from_config(
        cls, table_id: str, settings: Settings | None = None, output_dir: Path | None = None,
    ) -> "StudySpec":
        """Build the study for ``bench.tables.<table_id>`` in config.yaml."""
        settings = settings or get_settings()
        section = settings.section("bench", "tables", str(table_id))
        if not section:
            raise ConfigError(f"no bench table '{table_id}' in {settings.config_path}")
        try:
            return cls(
                problem=section["problem"],
                alphas=section["alphas"],
                rhos=section["rhos"],
                Ns=section["Ns"],
                scheme=section.get("scheme", SchemeId.L1.value),
                output_dir=output_dir or settings.output_dir,
                params=dict(section.get("params", {})),
                name=f"table{table_id}",
                max_workers=int(settings.section("bench").get("max_workers", 4)),
            )
        except KeyError as exc:
            raise ConfigError(f"bench table '{table_id}' is missing key {exc}") from None

    def cells(self) -> list[tuple[float, float]]:
        """(α, ρ) pairs in report order."""
        return [(alpha, rho) for rho in self.rhos for alpha in self.alphas]


@dataclass(frozen=True)
class StudyResult:
    reports: tuple[ConvergenceReport, ...]
    failures: tuple[dict, ...] = ()


# ── Cells ────────────────────────────────────────────────────────


def run_cell(
    spec: StudySpec, alpha: float, rho: float, cfg: NonlinearSolveConfig | None = None,
) -> ConvergenceReport:
    """Errors and orders for one (α, ρ) cell over ``spec.Ns``."""
    example = get_example(spec.problem)
    if not example.has_closed_form:
        raise ConfigError(
            f"{spec.problem} has no closed-form solution; use the Almeida comparison instead"
        )
    caputo = example.equivalent(alpha, rho, **spec.params)

    errors = []
    for N in spec.Ns:
        sol = solve(caputo, N, spec.scheme, cfg)
        errors.append(linf_error(sol, caputo.exact_bar, transformed=True))
        logger.debug(f"{spec.name}: alpha={alpha} rho={rho} N={N} error={errors[-1]:.4e}")

    return ConvergenceReport.from_errors(
        spec.Ns, errors,
        problem=spec.problem, scheme_id=spec.scheme, alpha=alpha, rho=rho,
    )


async def run_study_async(
    spec: StudySpec, cfg: NonlinearSolveConfig | None = None,
) -> StudyResult:
    cells = [
        Cell(label=f"cell alpha={alpha:g} rho={rho:.6g}", run=lambda a=alpha, r=rho: run_cell(spec, a, r, cfg))
        for alpha, rho in spec.cells()
    ]
    logger.info(f"Study {spec.name}: {spec.problem} / {spec.scheme}, {len(cells)} cells")
    results = await CellDispatcher(spec.max_workers).dispatch(cells)

    reports = tuple(r["result"] for r in results if r["success"])
    failures = tuple(r for r in results if not r["success"])
    if not reports:
        raise ReportError(
            f"every cell of {spec.name} failed; first error: {failures[0]['error']}"
        )
    if failures:
        logger.warning(f"Study {spec.name}: {len(failures)} of {len(results)} cells failed")
    return StudyResult(reports=reports, failures=failures)


def run_convergence_study(spec: StudySpec, cfg: NonlinearSolveConfig | None = None) -> StudyResult:
    """Blocking entry point; use ``run_study_async`` inside a running loop."""
    return asyncio.run(run_study_async(spec, cfg))


# ── Almeida vs L1 ────────────────────────────────────────────────


@dataclass(frozen=True)
class AlmeidaComparison:
    """Both solutions on the same graded nodes and their sup-node distance."""

    almeida: Any
    l1: Any
    distance: float


def run_almeida_comparison(
    alpha: float = 0.5,
    rho: float = 0.75,
    a: float = 0.25,
    T: float = 4.0,
    u_a: float = 1.0,
    N: int = 256,
    n_trunc: int = DEFAULT_N_TRUNC,
    coefficients: str = "consistent",
    cfg: NonlinearSolveConfig | None = None,
) -> AlmeidaComparison:
    """Solve the nonlinear sine example by Almeida's method and by L1."""
    example = get_example("example4")
    generalized = example.generalized(alpha, rho, a=a, T=T, u_a=u_a)
    almeida = solve(generalized, N, SchemeId.ALMEIDA, cfg, n_trunc=n_trunc, coefficients=coefficients)
    l1 = solve(example.equivalent(alpha, rho, a=a, T=T, u_a=u_a), N, SchemeId.L1)
    distance = float(np.max(np.abs(almeida.values - l1.values)))
    logger.info(f"Almeida vs L1 (alpha={alpha}, rho={rho}, N={N}): sup distance {distance:.4e}")
    return AlmeidaComparison(almeida=almeida, l1=l1, distance=distance)


# ── Exact vs numerical profiles ──────────────────────────────────


@dataclass(frozen=True)
class SolutionProfile:
    """One solve on its graded nodes next to the closed form.

    ``curve`` samples the closed form on a fine uniform grid in t for plotting.
    """

    solution: Solution
    exact: np.ndarray
    curve: tuple[np.ndarray, np.ndarray]

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.solution.values - self.exact)))


def run_solution_profiles(
    problem: str = "example2",
    alpha: float = 0.5,
    rhos: Sequence[float] = (5.0 * math.log(2.0) / 4.0, 1.0 / 6.0),
    N: int = 16,
    scheme: SchemeId | str = SchemeId.L2SIGMA,
    curve_points: int = 201,
    **params: float,
) -> list[SolutionProfile]:
    """Solve *problem* once per ρ and pair each solution with its closed form."""
    example = get_example(problem)
    if not example.has_closed_form:
        raise ConfigError(f"{problem} has no closed-form solution to plot against")
    if not rhos:
        raise ConfigError("run_solution_profiles needs at least one rho")

    profiles = []
    for rho in rhos:
        caputo = example.equivalent(alpha, rho, **params)
        sol = solve(caputo, N, scheme)
        exact = np.asarray(caputo.exact_bar(sol.mesh.nodes_bar), dtype=float)
        t = np.linspace(caputo.a, caputo.T, curve_points)
        curve = np.asarray(caputo.exact_bar(np.power(t, rho)), dtype=float)
        profile = SolutionProfile(solution=sol, exact=exact, curve=(t, curve))
        logger.info(
            f"{problem} {sol.scheme_id} alpha={alpha} rho={rho:.6g} N={N}: "
            f"max deviation {profile.max_deviation:.4e}"
        )
        profiles.append(profile)
    return profiles


# ── Reference tables ─────────────────────────────────────────────


def load_reference_tables(path: Path | None = None) -> dict[str, Any]:
    path = Path(path or REFERENCE_TABLES_PATH)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"reference tables not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid reference tables {path}: {exc}") from exc


def reference_cell(table_id: str, alpha: float, rho: float, tables: dict | None = None) -> dict:
    """The printed block for (α, ρ); ρ and α are matched to 1e−9."""
    tables = tables or load_reference_tables()
    table = tables.get(str(table_id))
    if table is None:
        raise ConfigError(f"no reference table '{table_id}'")
    for cell in table["cells"]:
        if math.isclose(cell["alpha"], alpha, abs_tol=1e-9) and math.isclose(cell["rho"], rho, abs_tol=1e-9):
            return cell
    raise ConfigError(f"table {table_id} has no cell alpha={alpha}, rho={rho}")


def compare_to_reference(
    report: ConvergenceReport, table_id: str, tables: dict | None = None,
) -> list[dict[str, Any]]:
    """Per-row relative error deviation and absolute order deviation."""
    tables = tables or load_reference_tables()
    cell = reference_cell(table_id, report.alpha, report.rho, tables)
    printed = dict(zip(tables[str(table_id)]["Ns"], zip(cell["errors"], cell["orders"])))

    rows = []
    for row in report.rows:
        if row.N not in printed:
            continue
        ref_error, ref_order = printed[row.N]
        order_dev = None
        if row.order is not None and ref_order is not None:
            order_dev = abs(row.order - ref_order)
        rows.append({
            "N": row.N,
            "error": row.error,
            "reference_error": ref_error,
            "relative_deviation": abs(row.error - ref_error) / ref_error,
            "order": row.order,
            "reference_order": ref_order,
            "order_deviation": order_dev,
        })
    return rows
