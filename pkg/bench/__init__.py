"""Bench layer for gencaputo — example registry, convergence studies, figures."""

from .dispatcher import Cell, CellDispatcher
from .hadamard import HadamardProfile, hadamard_profile, run_hadamard_limit
from .problems import REGISTRY, ExampleProblem, get_example
from .report import ReportFormat, emit_report, emit_solution, emit_solution_profiles, emit_study
from .study import (
    AlmeidaComparison,
    SolutionProfile,
    StudyResult,
    StudySpec,
    compare_to_reference,
    load_reference_tables,
    run_almeida_comparison,
    run_cell,
    run_convergence_study,
    run_solution_profiles,
    run_study_async,
)

__all__ = [
    "AlmeidaComparison",
    "Cell",
    "CellDispatcher",
    "ExampleProblem",
    "HadamardProfile",
    "REGISTRY",
    "ReportFormat",
    "SolutionProfile",
    "StudyResult",
    "StudySpec",
    "compare_to_reference",
    "emit_report",
    "emit_solution",
    "emit_solution_profiles",
    "emit_study",
    "get_example",
    "hadamard_profile",
    "load_reference_tables",
    "run_almeida_comparison",
    "run_cell",
    "run_convergence_study",
    "run_solution_profiles",
    "run_hadamard_limit",
    "run_study_async",
]
