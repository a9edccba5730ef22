"""Commands — ``solve``, ``bench``, ``eval-deriv``, ``ml`` and ``series``.

``run(argv)`` parses the arguments, dispatches, and maps failures to exit
codes through ErrorClassifier.  It returns 0 only when every requested
output was produced.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from loguru import logger

from bench.hadamard import hadamard_profile, run_hadamard_limit
from bench.report import (
    emit_almeida_comparison,
    emit_hadamard_limit,
    emit_hadamard_profile,
    emit_solution,
    emit_solution_profiles,
    emit_study,
    fmt_number,
    write_csv,
)
from bench.study import (
    StudySpec,
    compare_to_reference,
    run_almeida_comparison,
    run_convergence_study,
    run_solution_profiles,
)
from cli.config import ProblemConfig
from cli.expression import parse_expression
from core.error_classifier import ErrorClassifier
from core.errors import ConfigError
from core.operators import QuadratureSpec, gen_caputo_derivative
from core.problem import build_graded_mesh, linf_error, order_count
from core.series import eval_series, series_solve
from core.settings import Settings, load_settings
from core.special import Tolerance, mittag_leffler
from schemes.almeida import DEFAULT_N_TRUNC
from schemes.nonlinear import NonlinearSolveConfig
from schemes.registry import SchemeId, solve

LoggingHook = Callable[[Settings, str | None], None]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gencaputo",
        description="Generalized Caputo fractional IVP solvers and convergence benchmarks.",
    )
    parser.add_argument("--config", help="config.yaml path (default: config/config.yaml)")
    parser.add_argument("--output-dir", help="directory for CSV/SVG output")
    parser.add_argument("--log-level", help="loguru level, e.g. DEBUG or WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a JSON problem config")
    p.add_argument("problem", help="problem config (JSON)")
    p.add_argument("--scheme", choices=[s.value for s in SchemeId])
    p.add_argument("--N", type=int, nargs="+", help="number of steps (one or more)")
    p.add_argument("--n-trunc", type=int, help="Almeida truncation order")
    p.add_argument("--coefficients", choices=["consistent", "printed"])
    p.add_argument("--consistent-tail", action="store_true", help="Euler-trapezoid local term Δ^α/Γ(α+1)")

    p = sub.add_parser("bench", help="reproduce a table or figure")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--table", choices=["1", "2", "3"])
    group.add_argument("--figure", choices=["1", "2", "3", "4"])

    p = sub.add_parser("eval-deriv", help="evaluate D^{alpha,rho}_a u(t) by quadrature")
    p.add_argument("--u", required=True, help="u(t) as an expression in t")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--at", type=float, nargs="+", required=True, help="evaluation points t > a")

    p = sub.add_parser("ml", help="Mittag-Leffler function E_{alpha,beta}(z)")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("z", type=float)

    p = sub.add_parser("series", help="series solution of a rational-order config")
    p.add_argument("problem", help="problem config (JSON) with a 'series' block")
    p.add_argument("--points", type=int, default=64, help="graded nodes for the output table")
    return parser


# ── Subcommands ──────────────────────────────────────────────────


def _nonlinear(settings: Settings, scheme: str) -> NonlinearSolveConfig:
    if scheme == SchemeId.ALMEIDA.value:
        section = {**settings.section("nonlinear"), **{"method": settings.section("almeida").get("method", "aitken")}}
        return NonlinearSolveConfig.from_config(section)
    return NonlinearSolveConfig.from_config(settings.section("nonlinear"))


def cmd_solve(args: argparse.Namespace, settings: Settings, out_dir: Path) -> int:
    config = ProblemConfig.from_json(args.problem)
    scheme = args.scheme or config.scheme
    Ns = args.N or list(config.N)
    problem = config.to_problem()
    almeida = settings.section("almeida")
    options = {
        "n_trunc": args.n_trunc or int(almeida.get("n_trunc", DEFAULT_N_TRUNC)),
        "coefficients": args.coefficients or almeida.get("coefficients", "consistent"),
        "consistent_tail": args.consistent_tail,
    }
    cfg = _nonlinear(settings, scheme)

    for N in Ns:
        sol = solve(problem, N, scheme, cfg, **options)
        path = emit_solution(sol, out_dir / f"{config.name}_{scheme}_N{N}.csv")
        line = f"N={N} wrote {path}"
        if problem.exact is not None:
            line += f" linf_error={linf_error(sol, problem.exact):.4e}"
        print(line)
    return 0


def cmd_bench(args: argparse.Namespace, settings: Settings, out_dir: Path) -> int:
    if args.table:
        spec = StudySpec.from_config(args.table, settings, out_dir)
        result = run_convergence_study(spec, _nonlinear(settings, spec.scheme))
        emit_study(result.reports, spec.name, out_dir)
        for report in result.reports:
            try:
                worst = max(r["relative_deviation"] for r in compare_to_reference(report, args.table))
                logger.info(f"  {spec.name} alpha={report.alpha:g} rho={report.rho:.4g}: max deviation {worst:.2%}")
            except ConfigError as exc:
                logger.warning(f"  no reference for comparison: {exc}")
        for failure in result.failures:
            print(f"cell {failure['label']} failed: {ErrorClassifier.describe(failure['exception'])}", file=sys.stderr)
        if result.failures:
            return ErrorClassifier.classify_cell_result(result.failures[0]).exit_code
        return 0

    fig = settings.section("bench", "figures", args.figure)
    if args.figure == "1":
        profiles = run_solution_profiles(
            problem=fig.get("problem", "example2"), alpha=fig.get("alpha", 0.5),
            rhos=fig.get("rhos", [0.8664339756999316, 1.0 / 6.0]), N=int(fig.get("N", 16)),
            scheme=fig.get("scheme", SchemeId.L2SIGMA.value),
        )
        emit_solution_profiles(profiles, out_dir)
        for profile in profiles:
            print(f"rho={profile.solution.mesh.rho:.6g} max |u - exact| = {profile.max_deviation:.4e}")
    elif args.figure == "2":
        comparison = run_almeida_comparison(
            alpha=fig.get("alpha", 0.5), rho=fig.get("rho", 0.75), a=fig.get("a", 0.25),
            T=fig.get("T", 4.0), u_a=fig.get("u_a", 1.0), N=int(fig.get("N", 256)),
            n_trunc=int(settings.section("almeida").get("n_trunc", DEFAULT_N_TRUNC)),
            coefficients=settings.section("almeida").get("coefficients", "consistent"),
            cfg=_nonlinear(settings, SchemeId.ALMEIDA.value),
        )
        emit_almeida_comparison(comparison.almeida, comparison.l1, out_dir)
        print(f"sup distance Almeida vs L1: {comparison.distance:.4e}")
    elif args.figure == "3":
        points = run_hadamard_limit(
            fig.get("rhos", [10.0**-k for k in range(1, 8)]),
            alpha=fig.get("alpha", 0.5), T=fig.get("T", 100.0), N=int(fig.get("N", 256)),
        )
        emit_hadamard_limit(points, out_dir)
        for rho, err in points:
            print(f"rho={rho:g} error={err:.4e}")
    else:
        profile = hadamard_profile(
            alpha=fig.get("alpha", 0.5), rho=fig.get("rho", 1e-7),
            T=fig.get("T", 100.0), N=int(fig.get("N", 64)),
        )
        emit_hadamard_profile(profile.solution, profile.reference, out_dir)
        print(f"max |u - log t| = {profile.max_deviation:.4e}")
    return 0


def cmd_eval_deriv(args: argparse.Namespace, settings: Settings, out_dir: Path) -> int:
    expr = parse_expression(args.u, {"alpha": args.alpha, "rho": args.rho, "a": args.a})
    if expr.depends_on_u:
        raise ConfigError("--u must be a function of t only")
    derivs = expr.derivative_stack(order_count(args.alpha))
    quad = QuadratureSpec.from_config(settings.section("quadrature"))
    for t in args.at:
        value = gen_caputo_derivative(derivs, args.alpha, args.rho, args.a, t, quad)
        print(f"{fmt_number(t)} {fmt_number(value)}")
    return 0


def cmd_ml(args: argparse.Namespace, settings: Settings, out_dir: Path) -> int:
    special = settings.section("special")
    tol = Tolerance.from_config(special.get("tolerance"))
    max_abs_z = float(special.get("mittag_leffler_max_abs_z", 30.0))
    print(repr(mittag_leffler(args.alpha, args.beta, args.z, tol, max_abs_z)))
    return 0


def cmd_series(args: argparse.Namespace, settings: Settings, out_dir: Path) -> int:
    config = ProblemConfig.from_json(args.problem)
    s = series_solve(config.to_series_problem())
    mesh = build_graded_mesh(config.a, config.T, config.rho, args.points)
    values = np.asarray(eval_series(s, mesh.nodes), dtype=float)

    write_csv(out_dir / f"{config.name}_series_coeffs.csv", ("i", "coeff"), enumerate(s.coeffs))
    exact = config.exact_expression()
    if exact is not None:
        reference = np.asarray(exact(mesh.nodes), dtype=float)
        write_csv(out_dir / f"{config.name}_series_M{s.M}.csv", ("t", "u", "exact"),
                  zip(mesh.nodes, values, reference))
        print(f"M={s.M} max |series - exact| = {float(np.max(np.abs(values - reference))):.4e}")
    else:
        write_csv(out_dir / f"{config.name}_series_M{s.M}.csv", ("t", "u"), zip(mesh.nodes, values))
        print(f"M={s.M} u(T) = {fmt_number(values[-1])}")
    return 0


_COMMANDS = {
    "solve": cmd_solve,
    "bench": cmd_bench,
    "eval-deriv": cmd_eval_deriv,
    "ml": cmd_ml,
    "series": cmd_series,
}


def run(argv: Sequence[str] | None = None, configure_logging: LoggingHook | None = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = load_settings(args.config)
        if configure_logging is not None:
            configure_logging(settings, args.log_level)
        out_dir = Path(args.output_dir) if args.output_dir else settings.output_dir
        logger.debug(f"gencaputo {args.command}: output to {out_dir}")
        return _COMMANDS[args.command](args, settings, out_dir)
    except Exception as exc:
        strategy = ErrorClassifier.classify(exc)
        logger.opt(exception=exc).debug(f"{args.command} failed")
        print(f"error [{strategy.error_type.value}]: {ErrorClassifier.describe(exc)}", file=sys.stderr)
        return strategy.exit_code
