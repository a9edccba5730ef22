"""Problem config — JSON problem descriptions for the command line.

Schema::

    {"alpha": 0.5, "rho": 0.9, "a": 0, "T": 1, "init": [0],
     "rhs": "t^2", "exact": "...",            # exact is optional
     "scheme": "l1", "N": 16 | [16, 32],
     "name": "example1",                      # optional
     "series": {"p": 1, "q": 2, "M": 20, "f_jk": [[...], ...]}}   # optional

Expressions may use ``alpha``, ``rho``, ``a`` and ``T`` as constants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from core.errors import ConfigError
from core.problem import GeneralizedIVP
from core.series import SeriesProblem
from schemes.registry import SchemeId, parse_scheme
from cli.expression import Expression, parse_expression

_REQUIRED = ("alpha", "rho", "a", "T", "init", "rhs")
_OPTIONAL = ("exact", "scheme", "N", "name", "series")
_SERIES_KEYS = ("p", "q", "M", "f_jk")


def _number(data: dict[str, Any], key: str) -> float:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"'{key}' must be finite, got {value!r}")
    return float(value)


def _integer(data: dict[str, Any], key: str) -> int:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SeriesConfig:
    p: int
    q: int
    M: int
    f_jk: tuple[tuple[float, ...], ...]

    @classmethod
    def from_dict(cls, data: Any) -> "SeriesConfig":
        if not isinstance(data, dict):
            raise ConfigError("'series' must be an object")
        unknown = set(data) - set(_SERIES_KEYS)
        missing = [k for k in _SERIES_KEYS if k not in data]
        if unknown or missing:
            raise ConfigError(f"series block: unknown keys {sorted(unknown)}, missing {missing}")
        table = data["f_jk"]
        if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
            raise ConfigError("series.f_jk must be a list of rows")
        try:
            rows = tuple(tuple(float(v) for v in row) for row in table)
        except (TypeError, ValueError):
            raise ConfigError("series.f_jk entries must be numbers") from None
        return cls(p=_integer(data, "p"), q=_integer(data, "q"), M=_integer(data, "M"), f_jk=rows)

    def to_dict(self) -> dict[str, Any]:
        return {"p": self.p, "q": self.q, "M": self.M, "f_jk": [list(row) for row in self.f_jk]}


@dataclass(frozen=True)
class ProblemConfig:
    alpha: float
    rho: float
    a: float
    T: float
    init: tuple[float, ...]
    rhs: str
    exact: str | None = None
    scheme: str = SchemeId.L1.value
    N: tuple[int, ...] = (64,)
    name: str = "problem"
    series: SeriesConfig | None = None

    # ── Loading ──────────────────────────────────────────────────

    @classmethod
    def from_dict(cls, data: Any) -> "ProblemConfig":
        """Validate *data* and check it builds a GeneralizedIVP."""
        if not isinstance(data, dict):
            raise ConfigError("problem config must be a JSON object")
        unknown = set(data) - set(_REQUIRED) - set(_OPTIONAL)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = [k for k in _REQUIRED if k not in data]
        if missing:
            raise ConfigError(f"missing config keys: {missing}")

        init = data["init"]
        if not isinstance(init, list) or not init:
            raise ConfigError("'init' must be a non-empty list of numbers")
        for key in ("rhs", "exact", "name", "scheme"):
            if key in data and data[key] is not None and not isinstance(data[key], str):
                raise ConfigError(f"'{key}' must be a string")

        raw_N = data.get("N", list(cls.N))
        Ns = raw_N if isinstance(raw_N, list) else [raw_N]
        if not Ns:
            raise ConfigError("'N' must not be empty")
        N = tuple(_integer({"N": n}, "N") for n in Ns)
        if any(n < 1 for n in N):
            raise ConfigError(f"every N must be >= 1, got {list(N)}")

        config = cls(
            alpha=_number(data, "alpha"),
            rho=_number(data, "rho"),
            a=_number(data, "a"),
            T=_number(data, "T"),
            init=tuple(_number({"init": v}, "init") for v in init),
            rhs=data["rhs"],
            exact=data.get("exact"),
            scheme=parse_scheme(data.get("scheme", SchemeId.L1.value)).value,
            N=N,
            name=data.get("name", "problem"),
            series=SeriesConfig.from_dict(data["series"]) if data.get("series") is not None else None,
        )
        config.to_problem()
        if config.series is not None:
            config.to_series_problem()
        return config

    @classmethod
    def from_json(cls, path: str | Path) -> "ProblemConfig":
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if isinstance(data, dict):
            data.setdefault("name", path.stem)
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "alpha": self.alpha,
            "rho": self.rho,
            "a": self.a,
            "T": self.T,
            "init": list(self.init),
            "rhs": self.rhs,
            "scheme": self.scheme,
            "N": self.N[0] if len(self.N) == 1 else list(self.N),
            "name": self.name,
        }
        if self.exact is not None:
            data["exact"] = self.exact
        if self.series is not None:
            data["series"] = self.series.to_dict()
        return data

    # ── Building ─────────────────────────────────────────────────

    @property
    def constants(self) -> dict[str, float]:
        return {"alpha": self.alpha, "rho": self.rho, "a": self.a, "T": self.T}

    def rhs_expression(self) -> Expression:
        return parse_expression(self.rhs, self.constants)

    def exact_expression(self) -> Expression | None:
        if self.exact is None:
            return None
        expr = parse_expression(self.exact, self.constants)
        if expr.depends_on_u:
            raise ConfigError("the exact solution may depend on t only")
        return expr

    def to_problem(self) -> GeneralizedIVP:
        rhs = self.rhs_expression()
        exact = self.exact_expression()
        return GeneralizedIVP(
            alpha=self.alpha,
            rho=self.rho,
            a=self.a,
            T=self.T,
            init=self.init,
            rhs=rhs,
            rhs_series=self.series.f_jk if self.series else None,
            exact=exact,
            depends_on_u=rhs.depends_on_u,
            name=self.name,
        )

    def to_series_problem(self) -> SeriesProblem:
        if self.series is None:
            raise ConfigError("config has no 'series' block")
        s = self.series
        if not math.isclose(s.p / s.q, self.alpha, rel_tol=1e-12):
            raise ConfigError(f"series p/q = {s.p}/{s.q} does not match alpha = {self.alpha}")
        if self.a != 0:
            raise ConfigError("the series solution is built at a = 0")
        return SeriesProblem.from_problem(self.to_problem(), s.p, s.q, s.M)
