"""Grid-based spatial resource allocation with runoff-aware criteria.

A terrain raster induces a runoff forest: every cell drains from its
highest 8-neighbor (its antecedent), peaks drain from nowhere. Managing a
cell delays the water crossing it, adds carbon sequestration and helps
three species, and costs money against a shared budget. The five criteria
(total water travel time, carbon, three species counts) are all maximized.

Per-cell parameters are drawn on a 1/16 grid so every criterion value is a
dyadic rational: sums and differences are exact in double precision, which
makes the travel-time delta law (managing q adds d(q) * (1 + descendants))
hold to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import Constraint, LinearExpr, MoLpModel, Objective, Sense, VariableDef, VarKind
from .scalarize import (
    CriterionBounds,
    ScalarizationResult,
    SolverConfig,
    criterion_bounds,
    nondominated_filter,
    solve_reference_point,
)

Cell = tuple[int, int]
Decision = frozenset

_NEIGHBORS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]

SPECIES = 3


@dataclass(frozen=True, eq=False)
class GridInstance:
    """Terrain, runoff forest, per-cell parameters and the budget."""

    elevation: np.ndarray        # (rows, cols)
    antecedent: np.ndarray       # (rows, cols) flat index of the uphill neighbor, -1 at peaks
    stay_time: np.ndarray        # t(i,j), unmanaged time on the cell
    delay: np.ndarray            # d(i,j), extra time when managed
    carbon: np.ndarray
    species: np.ndarray          # (SPECIES, rows, cols)
    cost: np.ndarray
    budget: float
    cardinality: int | None = None

    @property
    def rows(self) -> int:
        return self.elevation.shape[0]

    @property
    def cols(self) -> int:
        return self.elevation.shape[1]

    def cells(self) -> list[Cell]:
        return [(i, j) for i in range(self.rows) for j in range(self.cols)]

    def antecedent_of(self, cell: Cell) -> Cell | None:
        flat = int(self.antecedent[cell])
        if flat < 0:
            return None
        return divmod(flat, self.cols)

    def check(self) -> list[str]:
        out = []
        for arr, name in ((self.stay_time, "stay_time"), (self.delay, "delay"),
                          (self.carbon, "carbon"), (self.cost, "cost")):
            if arr.shape != self.elevation.shape or np.any(arr <= 0):
                out.append(f"{name} must be positive and grid-shaped")
        if self.species.shape != (SPECIES,) + self.elevation.shape or np.any(self.species <= 0):
            out.append("species gains must be positive and grid-shaped")
        if self.budget <= 0:
            out.append("budget must be positive")
        for cell in self.cells():
            up = self.antecedent_of(cell)
            neighbors = [(cell[0] + di, cell[1] + dj) for di, dj in _NEIGHBORS
                         if 0 <= cell[0] + di < self.rows and 0 <= cell[1] + dj < self.cols]
            highest = max(self.elevation[n] for n in neighbors)
            if up is None:
                if highest > self.elevation[cell]:
                    out.append(f"cell {cell} marked peak but has a higher neighbor")
            else:
                if up not in neighbors:
                    out.append(f"antecedent of {cell} is not a neighbor")
                elif self.elevation[up] <= self.elevation[cell]:
                    out.append(f"antecedent of {cell} is not strictly higher")
                elif self.elevation[up] < highest:
                    out.append(f"antecedent of {cell} is not the highest neighbor")
        return out


def _quantized_uniform(rng: np.random.Generator, low: float, high: float, shape) -> np.ndarray:
    "Uniform draws snapped to multiples of 1/16 (exactly representable)."
    return rng.integers(round(low * 16), round(high * 16), size=shape, endpoint=True) / 16.0


def generate_instance(
    seed: int,
    rows: int,
    cols: int,
    parameter_range: tuple[float, float] = (1.0, 10.0),
    budget: float | None = None,
    cardinality: int | None = None,
) -> GridInstance:
    """Seeded instance with a smooth bump-field elevation map.

    The elevation is a sum of radial bumps, which keeps the number of peaks
    small and the runoff trees deep. Ties for the highest neighbor are
    broken by a seeded random pick. When no budget is given it is set from
    the cost table so that it binds: generous enough that most decisions of
    the default size fit, tight enough that some do not.
    """
    if rows < 2 or cols < 2:
        raise ValueError("grid must be at least 2x2")
    rng = np.random.default_rng(seed)
    ii, jj = np.meshgrid(np.arange(rows, dtype=float), np.arange(cols, dtype=float),
                         indexing="ij")
    elevation = np.zeros((rows, cols))
    for _ in range(max(2, (rows * cols) // 50)):
        ci, cj = rng.random() * (rows - 1), rng.random() * (cols - 1)
        height = 0.5 + 1.5 * rng.random()
        sigma = max(rows, cols) * (0.15 + 0.25 * rng.random())
        elevation += height * np.exp(-((ii - ci) ** 2 + (jj - cj) ** 2) / (2 * sigma**2))

    antecedent = np.full((rows, cols), -1, dtype=int)
    for i in range(rows):
        for j in range(cols):
            neighbors = [(i + di, j + dj) for di, dj in _NEIGHBORS
                         if 0 <= i + di < rows and 0 <= j + dj < cols]
            top = max(elevation[n] for n in neighbors)
            if top > elevation[i, j]:
                ties = [n for n in neighbors if elevation[n] == top]
                pick = ties[int(rng.integers(len(ties)))] if len(ties) > 1 else ties[0]
                antecedent[i, j] = pick[0] * cols + pick[1]

    lo, hi = parameter_range
    stay = _quantized_uniform(rng, lo, hi, (rows, cols))
    delay = _quantized_uniform(rng, lo, hi, (rows, cols))
    carbon = _quantized_uniform(rng, lo, hi, (rows, cols))
    species = _quantized_uniform(rng, lo, hi, (SPECIES, rows, cols))
    cost = _quantized_uniform(rng, lo, hi, (rows, cols))
    if budget is None:
        if cardinality is not None:
            budget = float(cardinality) * (lo + 0.62 * (hi - lo))
        else:
            budget = 0.25 * float(cost.sum())
    return GridInstance(elevation, antecedent, stay, delay, carbon, species, cost,
                        float(budget), cardinality)


def _downhill_order(inst: GridInstance) -> list[Cell]:
    "Cells sorted from peaks downward; a topological order of the runoff forest."
    cells = inst.cells()
    cells.sort(key=lambda c: -inst.elevation[c])
    return cells


def descendant_counts(inst: GridInstance) -> dict[Cell, int]:
    "Number of cells strictly downstream of each cell in the runoff forest."
    counts = {cell: 0 for cell in inst.cells()}
    for cell in reversed(_downhill_order(inst)):  # lowest first
        up = inst.antecedent_of(cell)
        if up is not None:
            counts[up] += counts[cell] + 1
    return counts


def travel_times(inst: GridInstance, decision: Decision) -> dict[Cell, float]:
    "Per-cell time for water to arrive and clear the cell, by runoff recursion."
    managed = set(decision)
    T: dict[Cell, float] = {}
    for cell in _downhill_order(inst):
        up = inst.antecedent_of(cell)
        base = T[up] if up is not None else 0.0
        T[cell] = base + float(inst.stay_time[cell]) + (
            float(inst.delay[cell]) if cell in managed else 0.0
        )
    return T


def water_travel_time(inst: GridInstance, decision: Decision) -> float:
    "Total travel time over all cells (the WTT criterion)."
    return float(sum(travel_times(inst, decision).values()))


def decision_cost(inst: GridInstance, decision: Decision) -> float:
    return float(sum(inst.cost[c] for c in decision))


def decision_feasible(inst: GridInstance, decision: Decision) -> bool:
    if inst.cardinality is not None and len(decision) != inst.cardinality:
        return False
    return decision_cost(inst, decision) <= inst.budget + 1e-9


def evaluate_decision(inst: GridInstance, decision: Decision) -> tuple[float, ...]:
    "Criterion vector (WTT, carbon, species 1..3) of a feasible decision."
    if not decision_feasible(inst, decision):
        raise ValueError("decision violates the budget or cardinality constraint")
    cells = list(decision)
    carbon = float(sum(inst.carbon[c] for c in cells))
    species = [float(sum(inst.species[s][c] for c in cells)) for s in range(SPECIES)]
    return (water_travel_time(inst, decision), carbon, *species)


def _x(i: int, j: int) -> str:
    return f"x.{i}.{j}"


def _t(i: int, j: int) -> str:
    return f"T.{i}.{j}"


def build_grid_model(inst: GridInstance) -> MoLpModel:
    """The mixed-binary allocation model.

    One binary per cell, one continuous arrival-time variable per cell with
    its runoff row, the budget row, the optional cardinality row, and the
    five maximized criteria. The instance rides in model.meta["grid"].
    """
    variables = []
    for i, j in inst.cells():
        variables.append(VariableDef(_x(i, j), 0.0, 1.0, VarKind.BINARY))
    for i, j in inst.cells():
        variables.append(VariableDef(_t(i, j), 0.0, math.inf))
    rows = []
    for i, j in inst.cells():
        terms = {_t(i, j): 1.0, _x(i, j): -float(inst.delay[i, j])}
        up = inst.antecedent_of((i, j))
        if up is not None:
            terms[_t(*up)] = -1.0
        rows.append(Constraint(LinearExpr(terms), Sense.LE, float(inst.stay_time[i, j])))
    rows.append(Constraint(
        LinearExpr({_x(i, j): float(inst.cost[i, j]) for i, j in inst.cells()}),
        Sense.LE, inst.budget))
    if inst.cardinality is not None:
        rows.append(Constraint(
            LinearExpr({_x(i, j): 1.0 for i, j in inst.cells()}),
            Sense.EQ, float(inst.cardinality)))
    objectives = [
        Objective("wtt", LinearExpr({_t(i, j): 1.0 for i, j in inst.cells()})),
        Objective("carbon", LinearExpr({_x(i, j): float(inst.carbon[i, j])
                                        for i, j in inst.cells()})),
    ]
    for s in range(SPECIES):
        objectives.append(Objective(
            f"species_{s + 1}",
            LinearExpr({_x(i, j): float(inst.species[s][i, j]) for i, j in inst.cells()})))
    return MoLpModel(tuple(variables), tuple(rows), tuple(objectives),
                     {"grid": grid_to_meta(inst)})


def decision_from_assignment(inst: GridInstance, assignment: Mapping[str, float]) -> Decision:
    return frozenset((i, j) for i, j in inst.cells() if assignment[_x(i, j)] > 0.5)


def mask_lines(inst: GridInstance, decision: Decision) -> list[str]:
    "Row-major 0/1 text rows of the managed-cell mask."
    managed = set(decision)
    return ["".join("1" if (i, j) in managed else "0" for j in range(inst.cols))
            for i in range(inst.rows)]


def sample_decisions(inst: GridInstance, samples: int, seed: int) -> list[Decision]:
    """Seeded feasible decisions: uniform K-subsets filtered by the budget,
    or a shuffled greedy fill under the budget when no cardinality is set.

    Aborts when fewer than 0.1% of the first 1e5 draws are feasible.
    """
    rng = np.random.default_rng(seed)
    cells = inst.cells()
    out: list[Decision] = []
    draws = 0
    while len(out) < samples:
        draws += 1
        if draws >= 100_000 and len(out) < max(1, draws // 1000):
            raise RuntimeError("feasibility rate below 0.1%; sampler aborted")
        if inst.cardinality is not None:
            picks = rng.choice(len(cells), size=inst.cardinality, replace=False)
            decision = frozenset(cells[k] for k in picks)
            if decision_cost(inst, decision) <= inst.budget:
                out.append(decision)
        else:
            order = rng.permutation(len(cells))
            chosen, total = [], 0.0
            for k in order:
                price = float(inst.cost[cells[k]])
                if total + price <= inst.budget:
                    chosen.append(cells[k])
                    total += price
            if chosen:
                out.append(frozenset(chosen))
    return out


def explicit_baseline(
    inst: GridInstance, samples: int, keep: int, seed: int
) -> list[tuple[Decision, tuple[float, ...]]]:
    """The sampling comparison method: draw feasible decisions, evaluate
    them, drop dominated ones, keep the first `keep` survivors."""
    if samples < keep:
        raise ValueError("cannot keep more points than were sampled")
    decisions = sample_decisions(inst, samples, seed)
    evaluated = [(d, evaluate_decision(inst, d)) for d in decisions]
    kept = nondominated_filter([vec for _, vec in evaluated])
    return [evaluated[i] for i in kept[:keep]]


@dataclass(frozen=True)
class ProjectionRecord:
    explicit: tuple[float, ...]
    projected: tuple[float, ...]
    min_gap: float
    result: ScalarizationResult


@dataclass(frozen=True)
class ProjectionReport:
    records: tuple[ProjectionRecord, ...]
    mean_min_gap: float


def min_relative_gap(explicit: Sequence[float], projected: Sequence[float]) -> float:
    "Smallest per-criterion relative improvement of the projection."
    return min((p - e) / e for e, p in zip(explicit, projected))


def project_and_gap(
    inst: GridInstance,
    explicit_points: Iterable[tuple[Decision, tuple[float, ...]]],
    config: SolverConfig | None = None,
    bounds: CriterionBounds | None = None,
) -> ProjectionReport:
    """Project every explicit point onto the frontier and report the gaps.

    Each explicit criterion vector becomes a reference point; the projection
    weakly dominates it, so every gap is non-negative up to solver tolerance.
    """
    config = config or SolverConfig()
    model = build_grid_model(inst)
    if bounds is None:
        bounds = criterion_bounds(model, config)
    records = []
    for decision, vector in explicit_points:
        if any(v <= 0 for v in vector):
            raise ValueError("explicit criterion values must be positive for relative gaps")
        # the sampled decision seeds the incumbent, so the projection weakly
        # dominates its reference even when the node budget runs out
        warm = {_x(i, j): 1.0 for i, j in decision}
        res = solve_reference_point(model, vector, bounds, config, warm_assignment=warm)
        gap = min_relative_gap(vector, res.outcome.criteria)
        records.append(ProjectionRecord(tuple(vector), res.outcome.criteria, gap, res))
    mean = float(np.mean([r.min_gap for r in records])) if records else math.nan
    return ProjectionReport(tuple(records), mean)


def grid_to_meta(inst: GridInstance) -> dict:
    "Nested-list form carried under the model JSON's `grid` key."
    return {
        "rows": inst.rows,
        "cols": inst.cols,
        "elevation": inst.elevation.tolist(),
        "antecedent": inst.antecedent.tolist(),
        "stay_time": inst.stay_time.tolist(),
        "delay": inst.delay.tolist(),
        "carbon": inst.carbon.tolist(),
        "species": inst.species.tolist(),
        "cost": inst.cost.tolist(),
        "budget": inst.budget,
        "cardinality": inst.cardinality,
    }


def grid_from_meta(meta: Mapping) -> GridInstance:
    return GridInstance(
        np.asarray(meta["elevation"], dtype=float),
        np.asarray(meta["antecedent"], dtype=int),
        np.asarray(meta["stay_time"], dtype=float),
        np.asarray(meta["delay"], dtype=float),
        np.asarray(meta["carbon"], dtype=float),
        np.asarray(meta["species"], dtype=float),
        np.asarray(meta["cost"], dtype=float),
        float(meta["budget"]),
        meta.get("cardinality"),
    )
