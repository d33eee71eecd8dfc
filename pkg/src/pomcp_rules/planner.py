"""POMCP: UCT search over histories with particle beliefs and rule priors."""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import log, sqrt
from typing import Iterable, Sequence

from .core import BeliefCollapse, ParticleBelief, belief_update, discounted_return
from .logic.engine import suggested_actions
from .logic.terms import GroundAtom, Program
from .traces import Trace, TraceStep
from .domains import config_digest

EPISODE_STEP_CAP = 200


@dataclass
class PlannerConfig:
    num_simulations: int
    num_particles: int
    exploration_constant: float | None = None  # None: domain reward span
    prior_visits: int = 10
    rollout_depth_limit: int = 90
    gamma: float | None = None  # None: domain discount
    rules_enabled: bool = False

    def __post_init__(self):
        if self.num_simulations < 1:
            raise ValueError("num_simulations must be >= 1")
        if self.prior_visits < 0:
            raise ValueError("prior_visits must be >= 0")


class SearchNode:
    """One history node: visit count, per-action edge statistics, children."""

    __slots__ = ("visits", "actions", "edge_visits", "edge_values", "children",
                 "features", "bias_applied")

    def __init__(self):
        self.visits = 0
        self.actions: tuple[int, ...] | None = None  # None until expanded
        self.edge_visits: list[int] = []
        self.edge_values: list[float] = []
        self.children: dict = {}
        self.features: frozenset[GroundAtom] | None = None
        self.bias_applied = False

    def edge(self, action: int) -> tuple[int, float]:
        i = self.actions.index(action)
        return self.edge_visits[i], self.edge_values[i]


def uct_value(value: float, visits_node: int, visits_edge: int, c: float) -> float:
    """UCT action score: value plus c * sqrt(ln N(h) / N(ha))."""
    return value + c * sqrt(log(visits_node) / visits_edge)


def apply_bias(node: SearchNode, suggested: Iterable[int], c: float,
               prior_visits: int) -> None:
    """Pre-seed suggested edges with value c and prior_visits visits.

    Idempotent: a node is biased at most once.
    """
    if node.bias_applied:
        return
    node.bias_applied = True
    for action in suggested:
        try:
            i = node.actions.index(action)
        except ValueError:
            continue  # suggestion not legal here
        node.edge_values[i] = c
        node.edge_visits[i] = prior_visits


def ground_node_features(domain, observable_state, root_guess_atoms=frozenset(),
                         belief: ParticleBelief | None = None) -> frozenset[GroundAtom]:
    """Feature atoms for a node.

    With a belief (root nodes, or nodes promoted to root) the belief-derived
    atoms are computed fresh; otherwise they are inherited from the nearest
    root ancestor's grounding and only observable-state features are
    recomputed.
    """
    if belief is not None:
        guess = domain.belief_features(belief)
    else:
        guess = root_guess_atoms
    return domain.observable_features(observable_state) | guess


class Planner:
    """One POMCP search tree, reused across episode steps."""

    def __init__(self, domain, config: PlannerConfig,
                 rules: Program | None = None, seed: int = 0):
        self.domain = domain
        self.config = config
        self.rules = rules if config.rules_enabled else None
        self.gamma = config.gamma if config.gamma is not None else domain.gamma
        c = config.exploration_constant
        self.exploration = float(c) if c is not None else float(domain.reward_span)
        self.root = SearchNode()
        self.root_guess: frozenset[GroundAtom] = frozenset()
        self._suggest_cache: dict = {}
        self._sim_rng = random.Random(f"{seed}/sim")
        self._rollout_rng = random.Random(f"{seed}/rollout")
        self._tie_rng = random.Random(f"{seed}/tie")
        self.reinvig_rng = random.Random(f"{seed}/reinvigorate")

    # -- per-step API ---------------------------------------------------------

    def search(self, belief: ParticleBelief, observable_state) -> int:
        """Run the configured number of simulations and return the best action."""
        domain = self.domain
        root = self.root
        self.root_guess = domain.belief_features(belief)
        self._suggest_cache.clear()
        if root.actions is None:
            root.visits += 1
            self._expand(root, observable_state)
        elif self.rules is not None:
            # node promoted to root: re-instantiate features from the new belief
            root.features = ground_node_features(domain, observable_state,
                                                 belief=belief)
        if not root.actions:
            raise RuntimeError("no legal action at the search root")
        particles = belief.particles
        n_particles = len(particles)
        sim_rng = self._sim_rng
        limit = self.config.rollout_depth_limit
        for _ in range(self.config.num_simulations):
            state = particles[sim_rng.randrange(n_particles)]
            self._simulate(root, state, 0, limit)
        best = max(root.edge_values)
        ties = [a for a, v in zip(root.actions, root.edge_values) if v == best]
        if len(ties) == 1:
            return ties[0]
        return ties[self._tie_rng.randrange(len(ties))]

    def advance_root(self, action: int, observation) -> None:
        """Move the tree root one step forward after executing an action."""
        child = self.root.children.get((action, observation))
        self.root = child if child is not None else SearchNode()

    # -- internals ------------------------------------------------------------

    def _expand(self, node: SearchNode, observable_state) -> None:
        node.actions = self.domain.legal_actions(observable_state)
        k = len(node.actions)
        node.edge_visits = [0] * k
        node.edge_values = [0.0] * k
        if self.rules is not None:
            suggested = self._suggest_cache.get(observable_state)
            if suggested is None:
                feats = ground_node_features(self.domain, observable_state,
                                             self.root_guess)
                node.features = feats
                atoms = suggested_actions(self.rules, feats,
                                          self.domain.action_vocabulary)
                suggested = []
                for atom in atoms:
                    try:
                        suggested.append(
                            self.domain.action_unmap(atom, observable_state))
                    except ValueError:
                        continue
                self._suggest_cache[observable_state] = suggested
            apply_bias(node, suggested, self.exploration, self.config.prior_visits)

    def _simulate(self, node: SearchNode, state, depth: int, limit: int) -> float:
        domain = self.domain
        node.visits += 1
        if node.actions is None:
            self._expand(node, domain.observable(state))
            return self._rollout(state, depth, limit)
        actions = node.actions
        visits = node.edge_visits
        values = node.edge_values
        unvisited = [i for i, nv in enumerate(visits) if nv == 0]
        if unvisited:
            i = unvisited[0] if len(unvisited) == 1 else \
                unvisited[self._tie_rng.randrange(len(unvisited))]
        else:
            c = self.exploration
            log_n = log(node.visits)
            best_i = 0
            best_v = -1e999
            for j in range(len(actions)):
                v = values[j] + c * sqrt(log_n / visits[j])
                if v > best_v:
                    best_v = v
                    best_i = j
            i = best_i
        action = actions[i]
        next_state, obs, reward, terminal = domain.step(state, action, self._sim_rng)
        total = reward
        if not terminal and depth + 1 < limit:
            key = (action, obs)
            child = node.children.get(key)
            if child is None:
                child = SearchNode()
                node.children[key] = child
            total += self.gamma * self._simulate(child, next_state, depth + 1, limit)
        visits[i] += 1
        values[i] += (total - values[i]) / visits[i]
        return total

    def _rollout(self, state, depth: int, limit: int) -> float:
        domain = self.domain
        rng = self._rollout_rng
        gamma = self.gamma
        total = 0.0
        weight = 1.0
        while depth < limit:
            acts = domain.legal_actions(domain.observable(state))
            action = acts[rng.randrange(len(acts))]
            state, _obs, reward, terminal = domain.step(state, action, rng)
            total += weight * reward
            if terminal:
                break
            weight *= gamma
            depth += 1
        return total


def search(root_belief: ParticleBelief, observable_state, domain,
           config: PlannerConfig, rules: Program | None = None,
           seed: int = 0) -> int:
    """One-shot search with a fresh tree; returns the chosen action."""
    planner = Planner(domain, config, rules, seed)
    return planner.search(root_belief, observable_state)


def plan_episode(domain, config: PlannerConfig, rules: Program | None,
                 seed: int, step_cap: int = EPISODE_STEP_CAP) -> Trace:
    """Plan-act loop: search, execute, observe, update belief; returns the Trace."""
    env_rng = random.Random(f"{seed}/env")
    belief_rng = random.Random(f"{seed}/belief")
    planner = Planner(domain, config, rules, seed)
    state = domain.sample_initial_state(env_rng)
    belief = domain.initial_belief(config.num_particles, belief_rng)
    steps: list[TraceStep] = []
    rewards: list[float] = []
    for t in range(step_cap):
        observable = domain.observable(state)
        action = planner.search(belief, observable)
        features = ground_node_features(domain, observable, planner.root_guess)
        next_state, obs, reward, terminal = domain.step(state, action, env_rng)
        steps.append(TraceStep(t, features, domain.action_map(action, observable),
                               reward))
        rewards.append(reward)
        state = next_state
        if terminal:
            break
        try:
            belief = belief_update(belief, action, obs, domain, planner.reinvig_rng)
        except BeliefCollapse:
            # recovery: re-seed from the instance prior, constrained to the
            # current observable state
            observable = domain.observable(state)
            belief = ParticleBelief(
                [domain.reseed_state(observable, planner.reinvig_rng)
                 for _ in range(belief.capacity)])
        planner.advance_root(action, obs)
    gamma = config.gamma if config.gamma is not None else domain.gamma
    return Trace(
        domain=type(domain).__name__.lower(),
        config_digest=config_digest(domain.config),
        seed=seed,
        gamma=gamma,
        steps=tuple(steps),
        discounted_return=discounted_return(rewards, gamma),
    )
