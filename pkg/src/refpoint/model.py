"""Data model for single- and multi-objective linear programs.

A model is a set of bounded continuous/binary variables, linear
constraints over them, and one or more linear objectives, all canonically
maximized. Models are immutable after construction and safe to share
across concurrent solves. The JSON form produced here is the one wire and
file format of the project (see ``schema/model.schema.json``).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")


class ValidationError(ValueError):
    """Raised when a document or model violates the model invariants."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class VarKind(str, Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"


class Sense(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class VariableDef:
    """A decision variable with (possibly infinite) bounds."""

    name: str
    lower: float = 0.0
    upper: float = math.inf
    kind: VarKind = VarKind.CONTINUOUS


@dataclass(frozen=True)
class LinearExpr:
    """A linear expression ``sum(coef * var) + constant``.

    ``terms`` maps variable names to coefficients; a dict cannot hold
    duplicate keys, so duplicate-variable forms are unrepresentable.
    """

    terms: Mapping[str, float]
    constant: float = 0.0

    def evaluate(self, assignment: Mapping[str, float]) -> float:
        return sum(coef * assignment[name] for name, coef in self.terms.items()) + self.constant

    def negated(self) -> "LinearExpr":
        return LinearExpr({name: -coef for name, coef in self.terms.items()}, -self.constant)

    @staticmethod
    def combine(parts: Iterable[tuple[float, "LinearExpr"]], constant: float = 0.0) -> "LinearExpr":
        "Weighted sum of expressions."
        terms: dict[str, float] = {}
        for weight, expr in parts:
            constant += weight * expr.constant
            for name, coef in expr.terms.items():
                terms[name] = terms.get(name, 0.0) + weight * coef
        return LinearExpr(terms, constant)


@dataclass(frozen=True)
class Constraint:
    expr: LinearExpr
    sense: Sense
    rhs: float


@dataclass(frozen=True)
class Objective:
    """A named objective, always stored in maximization orientation.

    Objectives ingested as minimizations are stored negated with
    ``minimize=True`` so reported values can be un-negated for display.
    """

    name: str
    expr: LinearExpr
    minimize: bool = False

    def user_value(self, stored_value: float) -> float:
        "Map a canonical (maximized) criterion value back to the user's orientation."
        return -stored_value if self.minimize else stored_value


@dataclass(frozen=True)
class MoLpModel:
    """An immutable multi-objective linear program."""

    variables: tuple[VariableDef, ...]
    constraints: tuple[Constraint, ...]
    objectives: tuple[Objective, ...]
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "_var_index", {v.name: i for i, v in enumerate(self.variables)})

    @property
    def num_objectives(self) -> int:
        return len(self.objectives)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def has_binaries(self) -> bool:
        return any(v.kind is VarKind.BINARY for v in self.variables)

    def objective_values(self, assignment: Mapping[str, float]) -> tuple[float, ...]:
        "Evaluate every objective at an assignment, in canonical (max) orientation."
        return tuple(obj.expr.evaluate(assignment) for obj in self.objectives)


def _check_expr(terms: Mapping[str, float], constant: float, where: str,
                known: Mapping[str, int], out: list[str]) -> None:
    for name, coef in terms.items():
        if name not in known:
            out.append(f"unknown variable {name} in {where}")
        if not math.isfinite(coef):
            out.append(f"non-finite coefficient for {name} in {where}")
    if not math.isfinite(constant):
        out.append(f"non-finite constant in {where}")


def validate(model: MoLpModel) -> list[str]:
    """Check every model invariant; returns one description per violation.

    Total: never raises on bad data, the violations are the result.
    """
    out: list[str] = []
    seen: dict[str, int] = {}
    for i, var in enumerate(model.variables):
        if not IDENTIFIER_RE.match(var.name):
            out.append(f"invalid variable identifier {var.name!r}")
        if var.name in seen:
            out.append(f"duplicate variable {var.name}")
        seen[var.name] = i
        lower, upper = var.lower, var.upper
        if math.isnan(lower) or math.isnan(upper):
            out.append(f"NaN bound on variable {var.name}")
        elif lower > upper:
            out.append(f"empty bound interval on variable {var.name}")
        if var.kind is VarKind.BINARY and not (0.0 <= lower and upper <= 1.0):
            out.append(f"binary variable {var.name} has bounds outside [0,1]")
    index = {v.name: i for i, v in enumerate(model.variables)}
    for i, con in enumerate(model.constraints):
        _check_expr(con.expr.terms, con.expr.constant, f"constraint {i}", index, out)
        if not math.isfinite(con.rhs):
            out.append(f"non-finite rhs in constraint {i}")
    if model.num_objectives < 1:
        out.append("model declares no objectives")
    names = set()
    for obj in model.objectives:
        if not obj.name or not IDENTIFIER_RE.match(obj.name):
            out.append(f"invalid objective name {obj.name!r}")
        if obj.name in names:
            out.append(f"duplicate objective name {obj.name}")
        names.add(obj.name)
        _check_expr(obj.expr.terms, obj.expr.constant, f"objective {obj.name}", index, out)
    return out


def with_objectives(model: MoLpModel, objectives: Iterable[Objective]) -> MoLpModel:
    "A copy of the model with the objective list replaced (variables/constraints shared)."
    return MoLpModel(model.variables, model.constraints, tuple(objectives), model.meta)


def single_objective(model: MoLpModel, expr: LinearExpr, name: str = "objective") -> MoLpModel:
    "The single-objective relaxation used by solver calls."
    return with_objectives(model, (Objective(name, expr),))


# --- JSON serialization ----------------------------------------------------
#
# Top-level keys: variables, constraints, objectives, meta. Infinite bounds
# are encoded as null; numbers are IEEE-754 doubles in decimal text.

def _bound_out(value: float) -> float | None:
    return None if math.isinf(value) else value


def _bound_in(value, default: float) -> float:
    return default if value is None else float(value)


def to_json(model: MoLpModel) -> bytes:
    "Serialize a valid model; raises ValidationError when invariants fail."
    violations = validate(model)
    if violations:
        raise ValidationError(violations)
    doc = {
        "variables": [
            {
                "name": v.name,
                "lower": _bound_out(v.lower),
                "upper": _bound_out(v.upper),
                "kind": v.kind.value,
            }
            for v in model.variables
        ],
        "constraints": [
            {
                "terms": dict(c.expr.terms),
                "constant": c.expr.constant,
                "sense": c.sense.value,
                "rhs": c.rhs,
            }
            for c in model.constraints
        ],
        "objectives": [
            {
                # written in the user's original orientation
                "name": o.name,
                "sense": "min" if o.minimize else "max",
                "terms": dict((o.expr.negated() if o.minimize else o.expr).terms),
                "constant": (o.expr.negated() if o.minimize else o.expr).constant,
            }
            for o in model.objectives
        ],
        "meta": dict(model.meta),
    }
    return json.dumps(doc, indent=2).encode("utf-8")


def _require(condition: bool, message: str, out: list[str]) -> bool:
    if not condition:
        out.append(message)
    return condition


def from_json(data: bytes | str) -> MoLpModel:
    """Parse a model document.

    Malformed JSON propagates as ``json.JSONDecodeError`` (position-bearing);
    well-formed JSON that violates the schema or model invariants raises
    ``ValidationError``.
    """
    doc = json.loads(data)
    problems: list[str] = []
    if not _require(isinstance(doc, dict), "top-level document must be an object", problems):
        raise ValidationError(problems)
    for key in ("variables", "constraints", "objectives"):
        _require(isinstance(doc.get(key), list), f"missing or non-array key {key!r}", problems)
    if problems:
        raise ValidationError(problems)

    variables = []
    for i, item in enumerate(doc["variables"]):
        if not _require(isinstance(item, dict) and "name" in item, f"variables[{i}] malformed", problems):
            continue
        kind = item.get("kind", "continuous")
        if kind not in (k.value for k in VarKind):
            problems.append(f"variables[{i}] has unknown kind {kind!r}")
            continue
        variables.append(
            VariableDef(
                name=str(item["name"]),
                lower=_bound_in(item.get("lower", 0.0), -math.inf),
                upper=_bound_in(item.get("upper"), math.inf),
                kind=VarKind(kind),
            )
        )

    constraints = []
    for i, item in enumerate(doc["constraints"]):
        ok = isinstance(item, dict) and isinstance(item.get("terms"), dict) and "rhs" in item
        if not _require(ok, f"constraints[{i}] malformed", problems):
            continue
        sense = item.get("sense", "<=")
        if sense not in (s.value for s in Sense):
            problems.append(f"constraints[{i}] has unknown sense {sense!r}")
            continue
        expr = LinearExpr({str(k): float(v) for k, v in item["terms"].items()},
                          float(item.get("constant", 0.0)))
        constraints.append(Constraint(expr, Sense(sense), float(item["rhs"])))

    objectives = []
    for i, item in enumerate(doc["objectives"]):
        ok = isinstance(item, dict) and isinstance(item.get("terms"), dict) and "name" in item
        if not _require(ok, f"objectives[{i}] malformed", problems):
            continue
        sense = item.get("sense", "max")
        if sense not in ("max", "min"):
            problems.append(f"objectives[{i}] has unknown sense {sense!r}")
            continue
        expr = LinearExpr({str(k): float(v) for k, v in item["terms"].items()},
                          float(item.get("constant", 0.0)))
        if sense == "min":
            objectives.append(Objective(str(item["name"]), expr.negated(), minimize=True))
        else:
            objectives.append(Objective(str(item["name"]), expr))

    if problems:
        raise ValidationError(problems)
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ValidationError(["meta must be an object"])
    model = MoLpModel(tuple(variables), tuple(constraints), tuple(objectives), meta)
    violations = validate(model)
    if violations:
        raise ValidationError(violations)
    return model
