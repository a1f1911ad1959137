"""Finite-horizon multi-objective MDPs as occupancy-measure linear programs.

A policy's expected state-action visitation mass x(t,s,a) is the decision
variable; flow-conservation rows tie consecutive epochs together and each
objective is the mass-weighted sum of its reward table. Solving the LP and
renormalizing the occupancy per (t,s) recovers a stochastic policy, so the
whole interactive machinery applies to any problem stated in MDP form.

Flow rows use the standard finite-horizon dual form: the epoch-0 mass per
state equals the initial distribution, and for t >= 1 the mass entering a
state equals the transition-weighted mass leaving epoch t-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .model import Constraint, LinearExpr, MoLpModel, Objective, Sense, VariableDef


@dataclass(frozen=True, eq=False)
class MoMdp:
    """Tabular MDP with one reward table per objective.

    rewards: (J, S, A); transitions: (S, A, S'); alpha: initial state
    distribution. The horizon counts decision epochs 0..T-1.
    """

    rewards: np.ndarray
    transitions: np.ndarray
    alpha: np.ndarray
    horizon: int
    objective_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "rewards", np.asarray(self.rewards, dtype=float))
        object.__setattr__(self, "transitions", np.asarray(self.transitions, dtype=float))
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float))
        problems = self.check()
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def num_states(self) -> int:
        return self.transitions.shape[0]

    @property
    def num_actions(self) -> int:
        return self.transitions.shape[1]

    @property
    def num_objectives(self) -> int:
        return self.rewards.shape[0]

    def check(self) -> list[str]:
        out = []
        if self.horizon < 1:
            out.append("horizon must be at least 1")
        if self.transitions.ndim != 3 or self.transitions.shape[0] != self.transitions.shape[2]:
            out.append("transitions must have shape (S, A, S)")
            return out
        S, A, _ = self.transitions.shape
        if self.rewards.shape != (len(self.objective_names), S, A):
            out.append("rewards must have shape (J, S, A)")
        if self.alpha.shape != (S,):
            out.append("alpha must have shape (S,)")
            return out
        if np.any(self.transitions < -1e-15) or np.any(self.transitions > 1 + 1e-12):
            out.append("transition probabilities outside [0, 1]")
        row_sums = self.transitions.sum(axis=2)
        if np.any(np.abs(row_sums - 1.0) > 1e-12):
            out.append("transition rows must sum to 1")
        if np.any(self.alpha < -1e-15) or abs(self.alpha.sum() - 1.0) > 1e-12:
            out.append("alpha must be a probability distribution")
        return out


def occupancy_variable(t: int, s: int, a: int) -> str:
    return f"x.{t}.{s}.{a}"


def build_mdp_model(mdp: MoMdp) -> MoLpModel:
    """The occupancy LP: continuous x(t,s,a) >= 0, flow rows, one objective
    per reward table. The MDP itself rides along in model.meta["mdp"]."""
    S, A, T = mdp.num_states, mdp.num_actions, mdp.horizon
    variables = tuple(
        VariableDef(occupancy_variable(t, s, a), 0.0, np.inf)
        for t in range(T) for s in range(S) for a in range(A)
    )
    rows = []
    for s in range(S):
        terms = {occupancy_variable(0, s, a): 1.0 for a in range(A)}
        rows.append(Constraint(LinearExpr(terms), Sense.EQ, float(mdp.alpha[s])))
    for t in range(1, T):
        for s in range(S):
            terms = {occupancy_variable(t, s, a): 1.0 for a in range(A)}
            for sp in range(S):
                for a in range(A):
                    p = mdp.transitions[sp, a, s]
                    if p != 0.0:
                        terms[occupancy_variable(t - 1, sp, a)] = (
                            terms.get(occupancy_variable(t - 1, sp, a), 0.0) - float(p)
                        )
            rows.append(Constraint(LinearExpr(terms), Sense.EQ, 0.0))
    objectives = []
    for j, name in enumerate(mdp.objective_names):
        terms = {}
        for t in range(T):
            for s in range(S):
                for a in range(A):
                    r = mdp.rewards[j, s, a]
                    if r != 0.0:
                        terms[occupancy_variable(t, s, a)] = float(r)
        objectives.append(Objective(name, LinearExpr(terms)))
    return MoLpModel(variables, tuple(rows), tuple(objectives), {"mdp": mdp_to_meta(mdp)})


def occupancy_from_assignment(mdp: MoMdp, assignment: Mapping[str, float]) -> np.ndarray:
    "Reshape a solver assignment into the (T, S, A) occupancy tensor."
    S, A, T = mdp.num_states, mdp.num_actions, mdp.horizon
    x = np.zeros((T, S, A))
    for t in range(T):
        for s in range(S):
            for a in range(A):
                x[t, s, a] = assignment[occupancy_variable(t, s, a)]
    return x


def extract_policy(occupancy: np.ndarray) -> np.ndarray:
    """Per-epoch action distributions pi(t,s) from an occupancy tensor.

    States the mass never reaches get a uniform distribution.
    """
    x = np.asarray(occupancy, dtype=float)
    T, S, A = x.shape
    pi = np.empty_like(x)
    mass = x.sum(axis=2)
    for t in range(T):
        for s in range(S):
            if mass[t, s] > 1e-12:
                pi[t, s] = x[t, s] / mass[t, s]
            else:
                pi[t, s] = 1.0 / A
    return pi


def evaluate_policy(mdp: MoMdp, policy: np.ndarray) -> tuple[float, ...]:
    """Exact expected cumulative reward per objective by forward propagation.

    No simulation: the state distribution is pushed through the horizon and
    contracted against each reward table.
    """
    pi = np.asarray(policy, dtype=float)
    T, S, A = pi.shape
    totals = np.zeros(mdp.num_objectives)
    dist = mdp.alpha.copy()
    for t in range(T):
        joint = dist[:, None] * pi[t]                      # (S, A) visitation
        totals += (mdp.rewards * joint[None, :, :]).sum(axis=(1, 2))
        dist = np.einsum("sa,sap->p", joint, mdp.transitions)
    return tuple(float(v) for v in totals)


def generate_predator_prey(seed: int, states: int = 10, actions: int = 4,
                           horizon: int = 20) -> MoMdp:
    """Seeded synthetic two-species management MDP.

    Actions span a conflict axis: those that raise the prey reward lower
    the predator reward and vice versa, so the two criteria genuinely
    trade off. Reward tables are normalized to a unit maximum, which keeps
    the criteria on commensurate "summed normalized density" scales.
    """
    if states < 2:
        raise ValueError("need at least 2 states")
    rng = np.random.default_rng(seed)
    tilt = np.linspace(-1.0, 1.0, actions)
    quality = 0.2 + 0.8 * rng.random(states)
    noise = 0.15 * rng.random((2, states, actions))
    prey = quality[:, None] * (0.5 + 0.5 * tilt[None, :]) + noise[0]
    predator = quality[:, None] * (0.5 - 0.5 * tilt[None, :]) + noise[1]
    rewards = np.stack([prey / prey.max(), predator / predator.max()])

    # action-dependent drift keeps policies consequential across epochs
    transitions = np.empty((states, actions, states))
    for a in range(actions):
        anchor = rng.random(states) + 0.05
        for s in range(states):
            raw = 0.3 * anchor + rng.random(states) ** 2 + 0.02
            transitions[s, a] = raw / raw.sum()
    alpha = np.full(states, 1.0 / states)
    return MoMdp(rewards, transitions, alpha, horizon, ("prey", "predator"))


def mdp_to_meta(mdp: MoMdp) -> dict:
    "Nested-list form carried under the model JSON's `mdp` key."
    return {
        "states": mdp.num_states,
        "actions": mdp.num_actions,
        "horizon": mdp.horizon,
        "objectives": list(mdp.objective_names),
        "rewards": mdp.rewards.tolist(),
        "transitions": mdp.transitions.tolist(),
        "alpha": mdp.alpha.tolist(),
    }


def mdp_from_meta(meta: Mapping) -> MoMdp:
    return MoMdp(
        np.asarray(meta["rewards"], dtype=float),
        np.asarray(meta["transitions"], dtype=float),
        np.asarray(meta["alpha"], dtype=float),
        int(meta["horizon"]),
        tuple(meta["objectives"]),
    )
