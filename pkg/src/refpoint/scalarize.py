"""Reference-point scalarization over multi-objective linear programs.

The central operation projects an aspiration vector (feasible or not) onto
the set of non-dominated criterion vectors by maximizing an achievement
function: a free-signed level variable bounded by every normalized
criterion deviation, plus a small positive multiple of the deviation sum
so that weakly non-dominated outputs are never returned. The weighted-sum
baseline and the two sweep procedures used for method comparisons live
here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .model import (
    Constraint,
    LinearExpr,
    MoLpModel,
    Objective,
    Sense,
    VariableDef,
    single_objective,
    validate,
)
from .simplex import LpSolution, SolveStatus, Tolerances, solve_lp, solve_milp

CriterionVector = tuple[float, ...]
ReferencePoint = Sequence[float]


class InfeasibleModelError(RuntimeError):
    pass


class UnboundedObjectiveError(RuntimeError):
    def __init__(self, objective_name: str):
        self.objective_name = objective_name
        super().__init__(f"objective {objective_name} is unbounded over the feasible set")


class DegenerateCriterionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs shared by every scalarization call.

    `node_limit` caps branch-and-bound effort: binary models that exhaust
    it return their best incumbent with IterationLimit status instead of a
    proven optimum, which is how large interactive solves stay responsive.
    """

    tolerances: Tolerances = Tolerances()
    iteration_limit: int = 200_000
    node_limit: int = 200_000

    def solve(self, model: MoLpModel, initial: Mapping[str, float] | None = None) -> LpSolution:
        if model.has_binaries():
            return solve_milp(model, self.tolerances, self.node_limit,
                              self.iteration_limit, initial=initial)
        return solve_lp(model, self.tolerances, self.iteration_limit)


@dataclass(frozen=True)
class CriterionBounds:
    """Per-criterion attainable ranges and the derived normalizing factors."""

    z_min: tuple[float, ...]
    z_max: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.z_min)

    @property
    def spans(self) -> tuple[float, ...]:
        return tuple(zmax - zmin for zmin, zmax in zip(self.z_min, self.z_max))

    @property
    def degenerate(self) -> tuple[bool, ...]:
        "Criteria whose range collapses to a point cannot discriminate."
        return tuple(span <= 1e-9 * max(1.0, abs(zmax))
                     for span, zmax in zip(self.spans, self.z_max))

    @property
    def lambdas(self) -> tuple[float, ...]:
        "1/range per criterion; fixed to 1 for degenerate criteria."
        return tuple(1.0 if deg else 1.0 / span
                     for span, deg in zip(self.spans, self.degenerate))


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    assignment: dict[str, float]
    criteria: CriterionVector


@dataclass(frozen=True)
class ScalarizationResult:
    outcome: SolveOutcome
    achievement: float
    rho_used: float
    reference: CriterionVector


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    "True iff a >= b componentwise with at least one strict improvement."
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def nondominated_filter(points: Sequence[Sequence[float]]) -> list[int]:
    """Indices of the mutually non-dominated points, in stable input order.

    Duplicates do not dominate each other, so identical points are all kept.
    """
    if not len(points):
        return []
    pts = np.asarray(points, dtype=float)
    ge = (pts[:, None, :] >= pts[None, :, :]).all(axis=2)
    gt = (pts[:, None, :] > pts[None, :, :]).any(axis=2)
    dominated = (ge & gt).any(axis=0)
    return [int(i) for i in np.nonzero(~dominated)[0]]


def criterion_bounds(model: MoLpModel, config: SolverConfig | None = None) -> CriterionBounds:
    """Attainable [min, max] of every criterion via 2p single-objective solves."""
    config = config or SolverConfig()
    z_min, z_max = [], []
    for obj in model.objectives:
        top = config.solve(single_objective(model, obj.expr, name=obj.name))
        if top.status is SolveStatus.INFEASIBLE:
            raise InfeasibleModelError("empty feasible set")
        if top.status is SolveStatus.UNBOUNDED:
            raise UnboundedObjectiveError(obj.name)
        if top.status is not SolveStatus.OPTIMAL:
            raise RuntimeError(f"bound solve for {obj.name} failed: {top.status}")
        bottom = config.solve(single_objective(model, obj.expr.negated(), name=obj.name))
        if bottom.status is SolveStatus.UNBOUNDED:
            raise UnboundedObjectiveError(obj.name)
        if bottom.status is not SolveStatus.OPTIMAL:
            raise RuntimeError(f"bound solve for {obj.name} failed: {bottom.status}")
        z_max.append(top.objective_value)
        z_min.append(-bottom.objective_value)
    return CriterionBounds(tuple(z_min), tuple(z_max))


def rho_bound(bounds: CriterionBounds) -> float:
    """Largest augmentation coefficient that still excludes weakly
    non-dominated outputs: min_j lambda_j / sum_j(range_j)."""
    if any(bounds.degenerate):
        raise DegenerateCriterionError("rho bound undefined with a degenerate criterion")
    return min(bounds.lambdas) / sum(bounds.spans)


def _rho_default(bounds: CriterionBounds) -> float:
    # degenerate criteria are excluded from both the min and the sum; the
    # bound only needs criteria that can actually trade off
    live = [(lam, span) for lam, span, deg
            in zip(bounds.lambdas, bounds.spans, bounds.degenerate) if not deg]
    if not live:
        raise DegenerateCriterionError("every criterion is constant over the feasible set")
    return 0.5 * min(lam for lam, _ in live) / sum(span for _, span in live)


def _unique_aux_name(model: MoLpModel) -> str:
    name = "ach.z"
    taken = set(model.variable_names)
    while name in taken:
        name = "_" + name
    return name


def _augmented_model(model: MoLpModel, reference: Sequence[float],
                     bounds: CriterionBounds, rho: float) -> MoLpModel:
    lambdas = bounds.lambdas
    zname = _unique_aux_name(model)
    variables = model.variables + (VariableDef(zname, -math.inf, math.inf),)
    rows = list(model.constraints)
    for obj, lam, ref in zip(model.objectives, lambdas, reference):
        # z <= lam * (f_j(x) - ref_j), written as z - lam*f_terms <= lam*(const - ref)
        terms = {zname: 1.0}
        for nm, coef in obj.expr.terms.items():
            terms[nm] = terms.get(nm, 0.0) - lam * coef
        rows.append(Constraint(LinearExpr(terms), Sense.LE, lam * (obj.expr.constant - ref)))
    parts = [(rho * lam, obj.expr) for obj, lam in zip(model.objectives, lambdas)]
    achievement = LinearExpr.combine(parts, constant=-rho * sum(
        lam * ref for lam, ref in zip(lambdas, reference)))
    full = LinearExpr({**achievement.terms, zname: achievement.terms.get(zname, 0.0) + 1.0},
                      achievement.constant)
    return MoLpModel(variables, tuple(rows), (Objective("achievement", full),), model.meta)


def solve_reference_point(
    model: MoLpModel,
    reference: ReferencePoint,
    bounds: CriterionBounds,
    config: SolverConfig | None = None,
    warm_assignment: Mapping[str, float] | None = None,
) -> ScalarizationResult:
    """Project an aspiration vector onto the non-dominated set.

    The reference point may lie inside or outside the feasible region; the
    level variable is free-signed so unreachable aspirations stay feasible.
    Optimal outcomes are non-dominated within the feasible set; solver
    statuses propagate, with Infeasible possible only for an empty model.
    A known feasible decision can be passed as `warm_assignment` to seed
    the branch-and-bound incumbent on binary models.
    """
    if len(reference) != model.num_objectives:
        raise ValueError(f"reference has {len(reference)} entries, model has "
                         f"{model.num_objectives} objectives")
    config = config or SolverConfig()
    rho = _rho_default(bounds)
    lambdas = bounds.lambdas
    augmented = _augmented_model(model, reference, bounds, rho)
    sol = config.solve(augmented, initial=warm_assignment)
    if sol.status not in (SolveStatus.OPTIMAL, SolveStatus.ITERATION_LIMIT) or not sol.assignment:
        outcome = SolveOutcome(sol.status, {}, ())
        return ScalarizationResult(outcome, math.nan, rho, tuple(map(float, reference)))
    assignment = {nm: sol.assignment[nm] for nm in model.variable_names}
    criteria = model.objective_values(assignment)
    achievement = min(lam * (val - ref)
                      for lam, val, ref in zip(lambdas, criteria, reference))
    outcome = SolveOutcome(sol.status, assignment, criteria)
    return ScalarizationResult(outcome, achievement, rho, tuple(map(float, reference)))


def solve_weighted_sum(
    model: MoLpModel,
    weights: Sequence[float],
    bounds: CriterionBounds,
    config: SolverConfig | None = None,
) -> SolveOutcome:
    """Maximize the weighted sum of the normalized criteria.

    The classic baseline: it can only reach the convex-hull extremes of the
    frontier, which is exactly what the sweep comparison illustrates.
    """
    if len(weights) != model.num_objectives:
        raise ValueError("one weight per objective required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    if not any(w > 0 for w in weights):
        raise ValueError("weights must not all be zero")
    config = config or SolverConfig()
    expr = LinearExpr.combine(
        [(w * lam, obj.expr) for w, lam, obj in zip(weights, bounds.lambdas, model.objectives)])
    sol = config.solve(single_objective(model, expr, name="weighted_sum"))
    if sol.status is not SolveStatus.OPTIMAL or not sol.assignment:
        return SolveOutcome(sol.status, {}, ())
    assignment = {nm: sol.assignment[nm] for nm in model.variable_names}
    return SolveOutcome(sol.status, assignment, model.objective_values(assignment))


def _lexicographic_extreme(model: MoLpModel, first: int, second: int,
                           config: SolverConfig) -> CriterionVector:
    "Criterion vector maximizing objective `first`, then `second` among ties."
    top = config.solve(single_objective(model, model.objectives[first].expr))
    if top.status is SolveStatus.INFEASIBLE:
        raise InfeasibleModelError("empty feasible set")
    if top.status is not SolveStatus.OPTIMAL:
        raise UnboundedObjectiveError(model.objectives[first].name)
    v1 = top.objective_value
    slack = 1e-7 * max(1.0, abs(v1))
    pinned = MoLpModel(
        model.variables,
        model.constraints + (Constraint(model.objectives[first].expr, Sense.GE, v1 - slack),),
        model.objectives,
        model.meta,
    )
    tie = config.solve(single_objective(pinned, model.objectives[second].expr))
    if tie.status is not SolveStatus.OPTIMAL:
        raise UnboundedObjectiveError(model.objectives[second].name)
    assignment = {nm: tie.assignment[nm] for nm in model.variable_names}
    return model.objective_values(assignment)


def sweep_reference_points(
    model: MoLpModel,
    n: int,
    bounds: CriterionBounds | None = None,
    config: SolverConfig | None = None,
    seed: int = 0,
) -> list[ScalarizationResult]:
    """One projection per reference point on an n-point aspiration grid.

    For two criteria the points subdivide the segment between the two
    lexicographic extreme non-dominated points A and B. For more criteria
    there is no segment; points are drawn inside the bounds box from a
    seeded Halton sequence instead.
    """
    if n < 2:
        raise ValueError("a sweep needs at least 2 points")
    config = config or SolverConfig()
    if bounds is None:
        bounds = criterion_bounds(model, config)
    p = model.num_objectives
    if p == 2:
        a = np.array(_lexicographic_extreme(model, 0, 1, config))
        b = np.array(_lexicographic_extreme(model, 1, 0, config))
        refs = [a + (k / (n - 1)) * (b - a) for k in range(n)]
    else:
        u = qmc.Halton(d=p, seed=seed).random(n)
        z_min = np.array(bounds.z_min)
        z_max = np.array(bounds.z_max)
        refs = [z_min + u[k] * (z_max - z_min) for k in range(n)]
    return [solve_reference_point(model, tuple(map(float, ref)), bounds, config)
            for ref in refs]


def sweep_weights(
    model: MoLpModel,
    n: int,
    bounds: CriterionBounds | None = None,
    config: SolverConfig | None = None,
) -> list[SolveOutcome]:
    "n equally spaced weight pairs from (0,1) to (1,0); two criteria only."
    if model.num_objectives != 2:
        raise ValueError("the weight sweep is defined for exactly 2 criteria")
    if n < 2:
        raise ValueError("a sweep needs at least 2 points")
    config = config or SolverConfig()
    if bounds is None:
        bounds = criterion_bounds(model, config)
    out = []
    for k in range(n):
        t = k / (n - 1)
        out.append(solve_weighted_sum(model, (t, 1.0 - t), bounds, config))
    return out
