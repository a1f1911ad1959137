"""Numerical core: bounded-variable simplex and branch-and-bound.

This is the only module performing numerical linear algebra. Constraints
are rewritten as equalities with one bounded slack per row; variable
bounds are handled directly by the pivoting rules rather than as explicit
rows, so models with thousands of bounded variables stay compact. A dense
basis inverse is maintained by product-form updates and refactorized
periodically for numerical hygiene.

Pricing is Dantzig's rule with Bland's rule as an anti-cycling fallback
after a stall-detection threshold; all tie-breaks are by lowest variable
index, which makes every solve bit-deterministic for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, TextIO

import numpy as np

from .model import MoLpModel, Sense, VarKind

_BASIC, _AT_LOWER, _AT_UPPER, _FREE, _FIXED = range(5)

_REFACTOR_EVERY = 128
_STALL_THRESHOLD = 200
_DUAL_ITER_LIMIT = 4000


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class Tolerances:
    """Solver tolerances; defaults are standard for double precision."""

    feasibility: float = 1e-9
    integrality: float = 1e-6
    optimality: float = 1e-9  # relative branch-and-bound gap


@dataclass
class LpSolution:
    status: SolveStatus
    assignment: dict[str, float]
    objective_value: float
    iterations: int = 0
    nodes: int = 0
    best_bound: float | None = None
    incumbents: tuple[float, ...] = ()


class _Program:
    "Dense standardized arrays for one single-objective model."

    def __init__(self, model: MoLpModel):
        if model.num_objectives != 1:
            raise ValueError("solver expects a single-objective relaxation")
        names = [v.name for v in model.variables]
        index = {nm: i for i, nm in enumerate(names)}
        n, m = len(names), len(model.constraints)
        N = n + 2 * m  # structurals, slacks, artificials
        A = np.zeros((m, N))
        b = np.zeros(m)
        lo = np.full(N, -np.inf)
        hi = np.full(N, np.inf)
        for j, v in enumerate(model.variables):
            lo[j], hi[j] = v.lower, v.upper
        for i, con in enumerate(model.constraints):
            for nm, coef in con.expr.terms.items():
                A[i, index[nm]] += coef
            b[i] = con.rhs - con.expr.constant
            s = n + i
            A[i, s] = 1.0
            if con.sense is Sense.LE:
                lo[s], hi[s] = 0.0, np.inf
            elif con.sense is Sense.GE:
                lo[s], hi[s] = -np.inf, 0.0
            else:
                lo[s], hi[s] = 0.0, 0.0
            # artificial column, pinned at zero except inside phase 1
            A[i, n + m + i] = 1.0
            lo[n + m + i] = 0.0
            hi[n + m + i] = 0.0
        c = np.zeros(N)
        for nm, coef in model.objectives[0].expr.terms.items():
            c[index[nm]] += coef
        self.A, self.b, self.c = A, b, c
        self.lo, self.hi = lo, hi
        self.n, self.m, self.N = n, m, N
        self.names = names
        self.obj_constant = model.objectives[0].expr.constant
        self.binaries = np.array(
            [j for j, v in enumerate(model.variables) if v.kind is VarKind.BINARY],
            dtype=int,
        )


class _Simplex:
    """Pivoting engine over a standardized program with mutable bounds."""

    def __init__(self, prog: _Program, tol: Tolerances, trace: TextIO | None = None):
        self.prog = prog
        self.tol = tol
        self.trace = trace
        self.lo = prog.lo.copy()
        self.hi = prog.hi.copy()
        self.iterations = 0
        m, N = prog.m, prog.N
        self.basis = np.arange(prog.n + m, prog.n + 2 * m)
        self.vstat = np.empty(N, dtype=np.int8)
        self.x = np.zeros(N)
        self.Binv = np.eye(m)
        self._art_sign = np.ones(m)

    # -- setup ---------------------------------------------------------

    def start_from_scratch(self) -> None:
        "All-artificial basis; nonbasics rest at their nearest finite bound."
        prog = self.prog
        n, m = prog.n, prog.m
        for j in range(prog.n + m):
            if self.lo[j] == self.hi[j]:
                self.vstat[j] = _FIXED
                self.x[j] = self.lo[j]
            elif math.isfinite(self.lo[j]):
                self.vstat[j] = _AT_LOWER
                self.x[j] = self.lo[j]
            elif math.isfinite(self.hi[j]):
                self.vstat[j] = _AT_UPPER
                self.x[j] = self.hi[j]
            else:
                self.vstat[j] = _FREE
                self.x[j] = 0.0
        resid = prog.b - prog.A[:, : n + m] @ self.x[: n + m]
        self._art_sign = np.where(resid >= 0.0, 1.0, -1.0)
        for i in range(m):
            j = n + m + i
            if resid[i] >= 0.0:
                self.lo[j], self.hi[j] = 0.0, np.inf
            else:
                self.lo[j], self.hi[j] = -np.inf, 0.0
            self.x[j] = resid[i]
            self.vstat[j] = _BASIC
        self.basis = np.arange(n + m, n + 2 * m)
        self.Binv = np.eye(m)

    def seal_artificials(self) -> None:
        "After phase 1 the artificial columns are pinned at zero for good."
        n, m = self.prog.n, self.prog.m
        art = slice(n + m, n + 2 * m)
        self.lo[art] = 0.0
        self.hi[art] = 0.0
        for j in range(n + m, n + 2 * m):
            if self.vstat[j] != _BASIC:
                self.vstat[j] = _FIXED
                self.x[j] = 0.0

    def refactor(self) -> bool:
        B = self.prog.A[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(self.Binv)):
            return False
        self.recompute_basics()
        return True

    def recompute_basics(self) -> None:
        xn = np.where(self.vstat != _BASIC, self.x, 0.0)
        rhs = self.prog.b - self.prog.A @ xn
        self.x[self.basis] = self.Binv @ rhs

    # -- shared pivot mechanics -----------------------------------------

    def _pivot(self, row: int, enter: int, w: np.ndarray) -> int:
        leave = self.basis[row]
        pivot_row = self.Binv[row] / w[row]
        self.Binv -= np.outer(w, pivot_row)
        self.Binv[row] = pivot_row
        self.basis[row] = enter
        self.vstat[enter] = _BASIC
        return leave

    def _snap_to_bound(self, j: int, at_lower: bool) -> None:
        if self.lo[j] == self.hi[j]:
            self.vstat[j] = _FIXED
            self.x[j] = self.lo[j]
        elif at_lower:
            self.vstat[j] = _AT_LOWER
            self.x[j] = self.lo[j]
        else:
            self.vstat[j] = _AT_UPPER
            self.x[j] = self.hi[j]

    # -- primal iteration ------------------------------------------------

    def primal(self, c: np.ndarray, iteration_limit: int) -> str:
        """Bounded primal simplex; returns optimal/unbounded/iteration_limit."""
        prog = self.prog
        scale_c = max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
        dual_tol = 1e-9 * scale_c
        piv_tol = 1e-9
        stall = 0
        bland = False
        since_refactor = 0
        while True:
            if self.iterations >= iteration_limit:
                return "iteration_limit"
            y = c[self.basis] @ self.Binv
            d = c - y @ prog.A
            up = (self.vstat == _AT_LOWER) & (d > dual_tol)
            down = (self.vstat == _AT_UPPER) & (d < -dual_tol)
            free = (self.vstat == _FREE) & (np.abs(d) > dual_tol)
            eligible = np.nonzero(up | down | free)[0]
            if eligible.size == 0:
                return "optimal"
            if bland:
                enter = int(eligible[0])
            else:
                enter = int(eligible[np.argmax(np.abs(d[eligible]))])
            sigma = 1.0 if d[enter] > 0.0 else -1.0
            w = self.Binv @ prog.A[:, enter]
            step_basic = -sigma * w  # basic change per unit of entering move

            xb = self.x[self.basis]
            lob = self.lo[self.basis]
            hib = self.hi[self.basis]
            ratios = np.full(prog.m, np.inf)
            inc = step_basic > piv_tol
            dec = step_basic < -piv_tol
            with np.errstate(invalid="ignore"):
                ratios[inc] = (hib[inc] - xb[inc]) / step_basic[inc]
                ratios[dec] = (lob[dec] - xb[dec]) / step_basic[dec]
            ratios = np.maximum(ratios, 0.0)
            own = self.hi[enter] - self.lo[enter]  # inf for free/one-sided
            row = int(np.argmin(ratios)) if prog.m else -1
            best = ratios[row] if prog.m else np.inf
            if not math.isfinite(best) and not math.isfinite(own):
                return "unbounded"
            self.iterations += 1
            if own <= best:
                # bound flip: entering jumps to its opposite bound, no pivot
                self.x[self.basis] += step_basic * own
                self._snap_to_bound(enter, at_lower=(sigma < 0.0))
                stall = 0
                bland = False
                continue
            # tie-break among blocking rows: largest pivot magnitude, then
            # lowest variable index, for determinism and stability
            tie = np.nonzero(ratios <= best + 1e-12 * (1.0 + best))[0]
            if tie.size > 1:
                best_abs = np.max(np.abs(w[tie]))
                tie = tie[np.abs(w[tie]) >= best_abs * 0.5]
                row = int(tie[np.argmin(self.basis[tie])])
            step = ratios[row]
            hits_lower = step_basic[row] < 0.0
            self.x[self.basis] += step_basic * step
            self.x[enter] += sigma * step
            leave = self._pivot(row, enter, w)
            self._snap_to_bound(leave, at_lower=hits_lower)
            if step <= 1e-12:
                stall += 1
                if stall >= _STALL_THRESHOLD:
                    bland = True
            else:
                stall = 0
                bland = False
            since_refactor += 1
            if since_refactor >= _REFACTOR_EVERY:
                since_refactor = 0
                if not self.refactor():
                    return "iteration_limit"
            if self.trace and self.iterations % 256 == 0:
                self.trace.write(
                    f"primal it={self.iterations} obj={float(c @ self.x):.12g}\n"
                )

    # -- dual iteration ----------------------------------------------------

    def dual(self, c: np.ndarray) -> str:
        """Bounded dual simplex; assumes a dual-feasible warm basis.

        Returns primal_feasible/infeasible/stalled. A stall is not an
        answer: the caller falls back to a cold primal solve.
        """
        prog = self.prog
        feastol = self.tol.feasibility
        piv_tol = 1e-9
        d = None
        since_refresh = 0
        for _ in range(_DUAL_ITER_LIMIT):
            xb = self.x[self.basis]
            lob = self.lo[self.basis]
            hib = self.hi[self.basis]
            below = lob - xb
            above = xb - hib
            viol = np.maximum(below, above)
            tol_row = feastol * (1.0 + np.maximum(np.abs(lob), np.abs(hib)))
            tol_row[~np.isfinite(tol_row)] = feastol
            bad = viol > tol_row
            if not bad.any():
                return "primal_feasible"
            row = int(np.argmax(np.where(bad, viol, -np.inf)))
            leaving_low = below[row] > above[row]  # basic sits below its lower bound
            rho = self.Binv[row]
            alpha = rho @ prog.A
            if d is None or since_refresh >= 64:
                y = c[self.basis] @ self.Binv
                d = c - y @ prog.A
                since_refresh = 0
            # entering must move the leaving basic back toward its bound and
            # keep reduced-cost signs valid after the pivot
            if leaving_low:
                ok = ((self.vstat == _AT_LOWER) & (alpha < -piv_tol)) | (
                    (self.vstat == _AT_UPPER) & (alpha > piv_tol)
                ) | ((self.vstat == _FREE) & (np.abs(alpha) > piv_tol))
            else:
                ok = ((self.vstat == _AT_LOWER) & (alpha > piv_tol)) | (
                    (self.vstat == _AT_UPPER) & (alpha < -piv_tol)
                ) | ((self.vstat == _FREE) & (np.abs(alpha) > piv_tol))
            cand = np.nonzero(ok)[0]
            if cand.size == 0:
                return "infeasible"
            with np.errstate(divide="ignore", invalid="ignore"):
                theta = np.abs(d[cand]) / np.abs(alpha[cand])
            best = float(np.min(theta))
            tie = cand[theta <= best + 1e-12 * (1.0 + best)]
            if tie.size > 1:
                tie = tie[np.argmax(np.abs(alpha[tie]))]
                enter = int(tie)
            else:
                enter = int(tie[0])
            gap = (lob[row] - xb[row]) if leaving_low else (hib[row] - xb[row])
            sigma = 1.0 if self.vstat[enter] == _AT_LOWER else -1.0
            if self.vstat[enter] == _FREE:
                sigma = 1.0 if (-alpha[enter] * gap) > 0.0 else -1.0
            step = gap / (-sigma * alpha[enter])
            if step < 0.0:
                step = 0.0
            w = self.Binv @ prog.A[:, enter]
            self.x[self.basis] += (-sigma * w) * step
            self.x[enter] += sigma * step
            leave = self._pivot(row, enter, w)
            self._snap_to_bound(leave, at_lower=leaving_low)
            # standard dual update of the reduced costs; the leaving column
            # has alpha = 1 (identity column of the old basis), so it lands
            # on -shift as required
            shift = d[enter] / alpha[enter]
            d -= shift * alpha
            d[enter] = 0.0
            since_refresh += 1
            self.iterations += 1
        return "stalled"

    # -- full solves ---------------------------------------------------------

    def solve_cold(self, iteration_limit: int) -> str:
        "Phase-1 artificial start, then phase 2 with the true objective."
        prog = self.prog
        self.start_from_scratch()
        c1 = np.zeros(prog.N)
        c1[prog.n + prog.m :] = -self._art_sign
        status = self.primal(c1, iteration_limit)
        if status != "optimal":
            return status
        art = self.x[prog.n + prog.m :]
        scale_b = 1.0 + float(np.max(np.abs(prog.b))) if prog.m else 1.0
        if float(np.sum(np.abs(art))) > self.tol.feasibility * scale_b:
            return "infeasible"
        self.seal_artificials()
        self.recompute_basics()
        return self.primal(prog.c, iteration_limit)

    def resolve_after_bound_change(self, iteration_limit: int) -> str:
        """Re-optimize in place after bound edits anywhere in the problem.

        The current factorization is kept: nonbasics snap onto their (new)
        bounds, the dual simplex repairs primal feasibility, the primal
        pass restores optimality. The dual's infeasibility certificate is a
        single-row bound argument, so it stays valid even when the entering
        reduced costs are stale. A cold restart is the safety net.
        """
        self._snap_nonbasics()
        self.recompute_basics()
        outcome = self.dual(self.prog.c)
        if outcome == "infeasible":
            return "infeasible"
        if outcome == "primal_feasible":
            status = self.primal(self.prog.c, iteration_limit)
            if status == "optimal" and self.feasible():
                return "optimal"
            if status == "unbounded":
                return "unbounded"
        return self.solve_cold(iteration_limit)

    def _snap_nonbasics(self) -> None:
        "Vectorized re-snap of every nonbasic variable onto a feasible bound."
        nb = self.vstat != _BASIC
        lo_fin = np.isfinite(self.lo)
        hi_fin = np.isfinite(self.hi)
        fixed = nb & (self.lo == self.hi)
        stay_up = nb & ~fixed & (self.vstat == _AT_UPPER) & hi_fin
        to_low = nb & ~fixed & ~stay_up & lo_fin
        to_up = nb & ~fixed & ~stay_up & ~lo_fin & hi_fin
        free = nb & ~fixed & ~stay_up & ~lo_fin & ~hi_fin
        self.vstat[fixed] = _FIXED
        self.x[fixed] = self.lo[fixed]
        self.x[stay_up] = self.hi[stay_up]
        self.vstat[to_low] = _AT_LOWER
        self.x[to_low] = self.lo[to_low]
        self.vstat[to_up] = _AT_UPPER
        self.x[to_up] = self.hi[to_up]
        self.vstat[free] = _FREE
        self.x[free] = 0.0

    def feasible(self) -> bool:
        tol = self.tol.feasibility * (1.0 + np.maximum(np.abs(self.lo), np.abs(self.hi)))
        tol[~np.isfinite(tol)] = self.tol.feasibility
        return bool(np.all(self.x >= self.lo - tol) and np.all(self.x <= self.hi + tol))

    def polish(self) -> None:
        "Fresh factorization of the final basis to shrink accumulated error."
        B = self.prog.A[:, self.basis]
        xn = np.where(self.vstat != _BASIC, self.x, 0.0)
        rhs = self.prog.b - self.prog.A @ xn
        try:
            self.x[self.basis] = np.linalg.solve(B, rhs)
        except np.linalg.LinAlgError:
            pass

    def objective(self) -> float:
        prog = self.prog
        return float(np.dot(prog.c[: prog.n], self.x[: prog.n]) + prog.obj_constant)

    def structural_assignment(self) -> dict[str, float]:
        return {nm: float(self.x[j]) for j, nm in enumerate(self.prog.names)}


def _solution(spx: _Simplex, status: SolveStatus, **extra) -> LpSolution:
    if status is SolveStatus.OPTIMAL:
        spx.polish()
        return LpSolution(status, spx.structural_assignment(), spx.objective(),
                          iterations=spx.iterations, **extra)
    value = math.inf if status is SolveStatus.UNBOUNDED else math.nan
    return LpSolution(status, {}, value, iterations=spx.iterations, **extra)


def solve_lp(
    model: MoLpModel,
    tolerances: Tolerances | None = None,
    iteration_limit: int = 50_000,
    trace: TextIO | None = None,
) -> LpSolution:
    """Solve the continuous relaxation of a single-objective model.

    Binary declarations are ignored beyond their [0,1] bounds. The returned
    assignment is a basic feasible solution when the status is Optimal.
    """
    tol = tolerances or Tolerances()
    spx = _Simplex(_Program(model), tol, trace)
    outcome = spx.solve_cold(iteration_limit)
    mapping = {
        "optimal": SolveStatus.OPTIMAL,
        "infeasible": SolveStatus.INFEASIBLE,
        "unbounded": SolveStatus.UNBOUNDED,
        "iteration_limit": SolveStatus.ITERATION_LIMIT,
    }
    return _solution(spx, mapping[outcome])


class _Node:
    __slots__ = ("overrides", "bound")

    def __init__(self, overrides, bound):
        self.overrides = overrides  # tuple of (var index, lo, hi)
        self.bound = bound          # parent relaxation value


def solve_milp(
    model: MoLpModel,
    tolerances: Tolerances | None = None,
    node_limit: int = 200_000,
    iteration_limit: int = 200_000,
    trace: TextIO | None = None,
    initial: Mapping[str, float] | None = None,
) -> LpSolution:
    """Depth-first branch-and-bound over the binary variables.

    Branching picks the most fractional binary (ties to the lowest index);
    children are explored nearest-side first and the open-node stack is
    re-sorted by best bound every 1000 nodes. Nodes warm start in place via
    the dual simplex; incumbents additionally come from a largest-fractions
    rounding heuristic and from the optional `initial` assignment (a known
    feasible point whose binary values seed the first incumbent). Exhausting
    the node limit returns the incumbent with IterationLimit status and a
    best-bound gap.
    """
    tol = tolerances or Tolerances()
    prog = _Program(model)
    spx = _Simplex(prog, tol, trace)
    root_lo, root_hi = spx.lo.copy(), spx.hi.copy()
    outcome = spx.solve_cold(iteration_limit)
    if outcome == "infeasible":
        return _solution(spx, SolveStatus.INFEASIBLE)
    if outcome == "unbounded":
        return _solution(spx, SolveStatus.UNBOUNDED)
    if outcome == "iteration_limit":
        return _solution(spx, SolveStatus.ITERATION_LIMIT)

    binaries = prog.binaries
    best_x: np.ndarray | None = None
    best_val = -math.inf
    incumbents: list[float] = []
    nodes = 0
    hit_limit = False

    def gap_slack(value: float) -> float:
        return tol.optimality * max(1.0, abs(value))

    # root reduced costs support variable fixing: any binary whose root
    # reduced cost proves it cannot beat the incumbent is pinned globally,
    # which collapses the near-tie plateaus these selection models produce
    root_value = spx.objective()
    y_root = prog.c[spx.basis] @ spx.Binv
    d_root = prog.c - y_root @ prog.A
    stat_root = spx.vstat.copy()

    def apply_reduced_cost_fixing(lower: float) -> None:
        margin = 1e-9 * max(1.0, abs(lower))
        for j in binaries:
            if root_lo[j] == root_hi[j]:
                continue
            if stat_root[j] == _AT_LOWER and root_value + d_root[j] < lower - margin:
                root_hi[j] = root_lo[j]
            elif stat_root[j] == _AT_UPPER and root_value - d_root[j] < lower - margin:
                root_lo[j] = root_hi[j]

    def fractional(x: np.ndarray) -> np.ndarray:
        if binaries.size == 0:
            return np.empty(0, dtype=int)
        frac = np.abs(x[binaries] - np.round(x[binaries]))
        return binaries[frac > tol.integrality]

    def record_incumbent() -> None:
        nonlocal best_val, best_x
        spx.polish()
        x = spx.x.copy()
        x[binaries] = np.round(x[binaries])
        cand = float(np.dot(prog.c[: prog.n], x[: prog.n]) + prog.obj_constant)
        if cand > best_val:
            best_val = cand
            best_x = x
            incumbents.append(cand)
            apply_reduced_cost_fixing(best_val)
            if trace:
                trace.write(f"incumbent node={nodes} value={cand:.12g}\n")

    def try_fixed_binaries(values: np.ndarray) -> None:
        "Solve with the binaries pinned to 0/1 values; keep any incumbent found."
        lo_save = spx.lo[binaries].copy()
        hi_save = spx.hi[binaries].copy()
        spx.lo[binaries] = values
        spx.hi[binaries] = values
        if spx.resolve_after_bound_change(iteration_limit) == "optimal":
            record_incumbent()
        spx.lo[binaries] = lo_save
        spx.hi[binaries] = hi_save

    def rounding_heuristic(x: np.ndarray) -> None:
        """Largest-fractions rounding of the relaxation: keep the binary sum,
        pin the highest-valued binaries to 1, and let an LP check the rest."""
        vals = x[binaries]
        k = int(np.clip(round(float(vals.sum())), 0, binaries.size))
        order = np.argsort(-vals, kind="stable")
        rounded = np.zeros(binaries.size)
        rounded[order[:k]] = 1.0
        try_fixed_binaries(rounded)

    first = True
    if initial is not None and binaries.size:
        start = np.array([round(float(initial.get(prog.names[j], 0.0))) for j in binaries],
                         dtype=float)
        try_fixed_binaries(np.clip(start, 0.0, 1.0))
        first = False  # engine no longer holds the root relaxation

    stack = [_Node((), root_value)]
    while stack:
        node = stack.pop()
        if node.bound <= best_val + gap_slack(best_val):
            continue
        if nodes >= node_limit:
            hit_limit = True
            stack.append(node)
            break
        nodes += 1
        if first:
            first = False  # root relaxation already solved in place
        else:
            spx.lo[:] = root_lo
            spx.hi[:] = root_hi
            for j, lo_j, hi_j in node.overrides:
                spx.lo[j], spx.hi[j] = lo_j, hi_j
            result = spx.resolve_after_bound_change(iteration_limit)
            if result == "infeasible":
                continue
            if result in ("iteration_limit", "unbounded"):
                hit_limit = True
                stack.append(node)
                break
        value = spx.objective()
        if value <= best_val + gap_slack(best_val):
            continue
        xsol = spx.x.copy()
        frac = fractional(xsol)
        if frac.size == 0:
            record_incumbent()
            continue
        dist = np.abs(xsol[frac] - np.round(xsol[frac]))
        pick = int(frac[np.argmax(dist)])
        up_first = xsol[pick] >= 0.5
        if nodes % 64 == 1:
            rounding_heuristic(xsol)
        down = _Node(node.overrides + ((pick, 0.0, 0.0),), value)
        up = _Node(node.overrides + ((pick, 1.0, 1.0),), value)
        near, far = (up, down) if up_first else (down, up)
        stack.append(far)
        stack.append(near)
        if nodes % 1000 == 0:
            stack.sort(key=lambda nd: nd.bound)

    if hit_limit:
        open_bound = max((nd.bound for nd in stack), default=best_val)
        best_bound = max(best_val, open_bound)
        if best_x is None:
            return LpSolution(SolveStatus.ITERATION_LIMIT, {}, math.nan,
                              iterations=spx.iterations, nodes=nodes,
                              best_bound=best_bound)
        assignment = {nm: float(best_x[j]) for j, nm in enumerate(prog.names)}
        return LpSolution(SolveStatus.ITERATION_LIMIT, assignment, best_val,
                          iterations=spx.iterations, nodes=nodes,
                          best_bound=best_bound, incumbents=tuple(incumbents))
    if best_x is None:
        return LpSolution(SolveStatus.INFEASIBLE, {}, math.nan,
                          iterations=spx.iterations, nodes=nodes)
    assignment = {nm: float(best_x[j]) for j, nm in enumerate(prog.names)}
    return LpSolution(SolveStatus.OPTIMAL, assignment, best_val,
                      iterations=spx.iterations, nodes=nodes,
                      best_bound=best_val, incumbents=tuple(incumbents))
