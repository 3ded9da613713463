"""Scenario files: which operators to build and which checks to run on them.

A scenario is a JSON object::

    {
      "name": "smoke",
      "seed": 7,
      "settings": {"tol": 1e-3, "density": 1e-3, "radius": 4.0, "dim": null,
                   "format": "json", "out": "report.json", "jobs": 1},
      "operators": {
        "box": {"catalog": "box1"},
        "skew": {"type": "linear", "matrix": [[0, -1], [1, 0]]}
      },
      "checks": [
        {"theorem_id": "RegularityGap", "operator": "skew", "params": {"queries": 20}},
        {"theorem_id": "Thm8", "operator": "box",
         "params": {"eps_list": [0.1, 0.7, 2], "grid": {"lo": -1, "hi": 2, "count": 41}}}
      ]
    }

Every setting has a command-line flag of the same name; flags win.
``settings.tol`` (or ``--tol``) replaces the tolerance of every check that
has a sampling tolerance; structural checks (Thm7c, Thm8, Monotone) keep
theirs.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from . import theorems as th
from .enlargements import interval_grid
from .errors import InvalidInput, MonotoneError
from .operators import (FiniteGraph, Linear, OperatorSpec, SmoothGradient, named_operator,
                        operator_from_dict, sample_graph, validate_monotone)
from .verdict import Verdict

SEED_ENV = "MONOTONE_SEED"
SETTING_KEYS = ("tol", "density", "radius", "dim", "format", "out", "jobs", "timings")

_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_COUNT = {"type": "integer", "minimum": 1, "maximum": 100_000}
_GRID = {
    "type": "object",
    "properties": {"lo": {"type": "number"}, "hi": {"type": "number"},
                   "count": {"type": "integer", "minimum": 1, "maximum": 10_001}},
    "required": ["lo", "hi", "count"],
    "additionalProperties": False,
}
_EPS_LIST = {"type": "array", "items": _NONNEG, "minItems": 1}

# documented parameters of every check and their ranges
CHECK_PARAMS: dict[str, dict] = {
    "Monotone": {"radius": _POS, "density": _POS},
    "RegularityGap": {"queries": _COUNT, "tol": _POS, "density": _POS},
    "Cor5": {"queries": _COUNT, "tol": _POS, "density": _POS},
    "Thm1": {"trials": _COUNT, "radius": _POS, "density": _POS,
             "summand": {"type": "string", "enum": ["sqrt1p"]}},
    "Thm2Identity": {"queries": _COUNT, "tol": _POS, "density": _POS},
    "Thm4SM2": {"count": _COUNT, "tol": _POS, "density": _POS},
    "Lemma6": {"trials": _COUNT, "eps_max": _NONNEG},
    "Thm7": {"eps": _NONNEG, "trials": _COUNT, "tol": _POS, "density": _POS,
             "eps_list": _EPS_LIST, "points": _COUNT},
    "RemarkChain": {"queries": _COUNT, "tol": _POS, "density": _POS, "eps_max": _NONNEG},
    "Thm8": {"eps_list": _EPS_LIST, "grid": _GRID, "points_per_axis": _COUNT},
    "Thm9": {"eps_list": _EPS_LIST, "grid": _GRID, "tol": _POS, "points_per_axis": _COUNT},
}

SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "settings": {
            "type": "object",
            "properties": {
                "tol": _POS, "density": _POS, "radius": _POS,
                "dim": {"type": ["integer", "null"], "minimum": 1, "maximum": 4},
                "format": {"enum": ["json", "csv"]},
                "out": {"type": ["string", "null"]},
                "jobs": {"type": "integer", "minimum": 1, "maximum": 64},
                "timings": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "operators": {"type": "object", "minProperties": 1,
                      "additionalProperties": {"type": "object"}},
        "checks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "theorem_id": {"enum": sorted(CHECK_PARAMS)},
                    "operator": {"type": "string"},
                    "params": {"type": "object"},
                },
                "required": ["theorem_id", "operator"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["operators", "checks"],
    "additionalProperties": False,
}


@dataclass
class CheckSpec:
    theorem_id: str
    operator: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    operators: dict[str, dict]
    checks: list[CheckSpec]
    seed: int | None = None
    settings: dict[str, Any] = field(default_factory=dict)

    def resolved(self, overrides: dict[str, Any] | None = None) -> tuple[int, dict]:
        """(seed, settings) after flags > scenario > environment > defaults."""
        overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        settings = {"format": "json", "out": None, "jobs": 1, "timings": False}
        settings.update(self.settings)
        settings.update({k: v for k, v in overrides.items() if k in SETTING_KEYS})
        if "seed" in overrides:
            seed = int(overrides["seed"])
        elif self.seed is not None:
            seed = self.seed
        else:
            seed = env_seed()
        return seed, settings

    def build_operators(self, dim: int | None = None) -> dict[str, OperatorSpec]:
        ops = {}
        for key, desc in self.operators.items():
            try:
                ops[key] = build_operator(desc, dim)
            except MonotoneError as exc:
                raise InvalidInput(f"operators.{key}: {exc}") from None
        return ops


def env_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise InvalidInput(f"{SEED_ENV}={raw!r} is not an integer") from None
    if seed < 0:
        raise InvalidInput(f"{SEED_ENV} must be >= 0, got {seed}")
    return seed


def build_operator(desc: dict, dim: int | None = None) -> OperatorSpec:
    """``{"catalog": name[, "dim": n]}`` or a serialized operator."""
    if "catalog" in desc:
        extra = set(desc) - {"catalog", "dim"}
        if extra:
            raise InvalidInput(f"unexpected fields {sorted(extra)}")
        return named_operator(desc["catalog"], desc.get("dim", dim))
    return operator_from_dict(desc)


def _where(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parse and validate; errors carry line/column or the offending field."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(SCHEMA).iter_errors(raw))
    if err is not None:
        raise InvalidInput(f"{source}: field {_where(err.absolute_path)}: {err.message}")
    checks = []
    for i, c in enumerate(raw["checks"]):
        where = f"{source}: field checks[{i}]"
        if c["operator"] not in raw["operators"]:
            raise InvalidInput(f"{where}.operator: unknown operator id {c['operator']!r}")
        schema = {"type": "object", "properties": CHECK_PARAMS[c["theorem_id"]],
                  "additionalProperties": False}
        err = jsonschema.exceptions.best_match(
            jsonschema.Draft202012Validator(schema).iter_errors(c.get("params", {})))
        if err is not None:
            raise InvalidInput(f"{where}.params{'.' if err.absolute_path else ''}"
                               f"{_where(err.absolute_path) if err.absolute_path else ''}: "
                               f"{err.message}")
        checks.append(CheckSpec(c["theorem_id"], c["operator"], dict(c.get("params", {}))))
    return Scenario(raw.get("name", Path(source).stem), raw["operators"], checks,
                    raw.get("seed"), raw.get("settings", {}))


def bundled_scenarios() -> list[str]:
    return sorted(p.name for p in resources.files("monotone").joinpath("scenarios").iterdir()
                  if p.name.endswith(".json"))


def load_scenario(path: str | os.PathLike) -> Scenario:
    """Read a scenario file; a bare name falls back to the bundled scenarios."""
    p = Path(path)
    if p.exists():
        return parse_scenario(p.read_text(), str(p))
    bundled = resources.files("monotone").joinpath("scenarios", p.name)
    if p.parent == Path(".") and bundled.is_file():
        return parse_scenario(bundled.read_text(), p.name)
    raise InvalidInput(f"scenario file {str(path)!r} not found "
                       f"(bundled: {', '.join(bundled_scenarios())})")


# ---------------------------------------------------------------------------
# Check registry
# ---------------------------------------------------------------------------

def _tol(p, settings, default):
    return float(settings["tol"]) if settings.get("tol") is not None else p.get("tol", default)


def _density(p, settings, default):
    if settings.get("density") is not None:
        return float(settings["density"])
    return p.get("density", default)


def _grid(T, p):
    g = p.get("grid", {"lo": -1.0, "hi": 2.0, "count": 41})
    return interval_grid(g["lo"], g["hi"], g["count"], T.dim)


def monotone_check(T, p, seed, s):
    if isinstance(T, FiniteGraph):
        sample = T.sample
    else:
        radius = s.get("radius") or p.get("radius", 3.0)
        sample = sample_graph(T, radius, _density(p, s, radius / (40 if T.dim == 1 else 6)))
    v = validate_monotone(sample)
    v.params.update(operator=T.label, seed=seed)
    return [v]


def _regularity(T, p, seed, s):
    q = th.random_queries(T, p.get("queries", 200), seed, "RegularityGap")
    return [th.check_regularity(T, q, _tol(p, s, 1e-3), _density(p, s, 1e-3), seed)]


def _cor5(T, p, seed, s):
    if not isinstance(T, Linear):
        raise InvalidInput(f"Cor5 needs a linear operator, got {T.label}")
    q = th.random_queries(T, p.get("queries", 50), seed, "Cor5")
    v = th.check_cor5(T, q, _tol(p, s, 1e-3), _density(p, s, 1e-3))
    v.params["seed"] = seed
    return [v]


def _thm1(T, p, seed, s):
    S = SmoothGradient(p.get("summand", "sqrt1p"), T.dim)
    radius = s.get("radius") or p.get("radius", 4.0)
    density = _density(p, s, None)
    return [th.check_thm1(T, S, p.get("trials", 500), seed, radius, density)]


def _thm2(T, p, seed, s):
    q = th.random_queries(T, p.get("queries", 8), seed, "Thm2Identity", in_domain=True)
    return [th.check_thm2_identity(T, q, _tol(p, s, 1e-3), _density(p, s, 1e-3), seed)]


def _sm2(T, p, seed, s):
    return [th.sm2_battery(T, p.get("count", 200), seed, _tol(p, s, 1e-6), _density(p, s, 1e-3))]


def _lemma6(T, p, seed, s):
    v = th.check_lemma6(T, p.get("trials", 1000), seed, p.get("eps_max", 2.0))
    v.params["seed"] = seed
    return [v]


def _thm7(T, p, seed, s):
    return th.check_thm7(T, p.get("eps", 0.5), p.get("trials", 200), seed, _tol(p, s, 1e-3),
                         _density(p, s, 1e-3), tuple(p.get("eps_list", (0.0, 0.25, 1.0))),
                         p.get("points", 3))


def _remark(T, p, seed, s):
    rng = th.theorem_rng(seed, "RemarkChainEps")
    q = [(x, xs, float(rng.uniform(0.0, p.get("eps_max", 2.0))))
         for x, xs in th.random_queries(T, p.get("queries", 15), seed, "RemarkChain")]
    return [th.check_remark_chain(T, q, _tol(p, s, 1e-3), _density(p, s, 1e-3), seed)]


def _thm8(T, p, seed, s):
    v = th.check_thm8(T, p.get("eps_list", [0.1, 0.7, 2.0]), _grid(T, p),
                      p.get("points_per_axis"))
    v.params["seed"] = seed
    return [v]


def _thm9(T, p, seed, s):
    v = th.check_thm9(T, p.get("eps_list", [1.0]), _grid(T, p), _tol(p, s, 1e-9),
                      p.get("points_per_axis"))
    v.params["seed"] = seed
    return [v]


CHECKS = {
    "Monotone": monotone_check, "RegularityGap": _regularity, "Cor5": _cor5, "Thm1": _thm1,
    "Thm2Identity": _thm2, "Thm4SM2": _sm2, "Lemma6": _lemma6, "Thm7": _thm7,
    "RemarkChain": _remark, "Thm8": _thm8, "Thm9": _thm9,
}


@dataclass
class CheckResult:
    index: int
    check: CheckSpec
    verdicts: list[Verdict]
    runtime_ms: float | None = None


def _run_one(job) -> CheckResult:
    index, check, T, seed, settings = job
    t0 = time.perf_counter()
    verdicts = CHECKS[check.theorem_id](T, check.params, seed, settings)
    ms = (time.perf_counter() - t0) * 1e3 if settings.get("timings") else None
    for v in verdicts:
        v.params.setdefault("operator", T.label)
        v.params["check_index"] = index
    return CheckResult(index, check, verdicts, ms)


def validate_operators(ops: dict[str, OperatorSpec]) -> None:
    """Fail fast: every operator must pass the monotonicity screen."""
    for key, T in ops.items():
        try:
            th.ensure_monotone(T)
        except InvalidInput as exc:
            raise InvalidInput(f"operators.{key}: {exc}") from None


def run_checks(sc: Scenario, overrides: dict[str, Any] | None = None) -> list[CheckResult]:
    """Validate every operator, then run the checks (in parallel when jobs > 1).

    Results come back sorted by check index whatever the scheduling.
    """
    seed, settings = sc.resolved(overrides)
    ops = sc.build_operators(settings.get("dim"))
    validate_operators(ops)
    jobs = [(i, c, ops[c.operator], seed, settings) for i, c in enumerate(sc.checks)]
    if settings.get("jobs", 1) > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=settings["jobs"]) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return sorted(results, key=lambda r: r.index)


def worst_failure(results: list[CheckResult]):
    """The failing verdict with the largest violation relative to its tol."""
    worst, key = None, -math.inf
    for r in results:
        for v in r.verdicts:
            if v.holds:
                continue
            tol = float(v.params.get("tol", 0.0)) or 1.0
            k = v.worst_violation / tol
            if worst is None or k > key:
                worst, key = (r, v), k
    return worst


__all__ = [
    "Scenario", "CheckSpec", "CheckResult", "CHECKS", "CHECK_PARAMS", "SCHEMA",
    "parse_scenario", "load_scenario", "bundled_scenarios", "build_operator",
    "run_checks", "validate_operators", "worst_failure", "env_seed", "SEED_ENV",
]
