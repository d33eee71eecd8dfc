"""Battery domain: a 1-D path with recharge stations and a hidden charge level.

State tuples are (position, battery_level); position is observable, the level
is hidden and readable only through a noisy sensor.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..core import ParticleBelief
from ..logic.terms import GroundAtom
from .base import discretize_prob

ADVANCE, CHECK, RECHARGE = 0, 1, 2
_ACTION_NAMES = ("advance", "check", "recharge")

OBS_OK = "ok"
OBS_GOAL = "goal"
OBS_DEPLETED = "depleted"


@dataclass(frozen=True)
class BatteryConfig:
    path_length: int = 35
    station_positions: tuple[int, ...] = ()
    max_level: int = 10
    move_drain_prob: float = 0.5
    sensor_accuracy: float = 0.9
    goal_reward: float = 10.0
    depletion_reward: float = -10.0
    recharge_cost: float = -1.0
    check_cost: float = -0.5
    gamma: float = 0.95
    max_station_gap: int = 4

    def __post_init__(self):
        if self.path_length < 1:
            raise ValueError("path_length must be positive")
        if not 0.5 < self.sensor_accuracy <= 1.0:
            raise ValueError("sensor_accuracy must lie in (0.5, 1]")
        if not 0.0 <= self.move_drain_prob <= 1.0:
            raise ValueError("move_drain_prob must lie in [0, 1]")
        marks = (0,) + tuple(self.station_positions) + (self.path_length,)
        for a, b in zip(marks, marks[1:]):
            gap = b - a
            if gap < 1:
                raise ValueError("station positions must be strictly increasing "
                                 "and inside (0, path_length)")
            if gap > self.max_station_gap:
                raise ValueError(
                    f"station/goal gap {gap} exceeds max_station_gap "
                    f"{self.max_station_gap}")


def random_instance(rng: random.Random, path_length: int = 35,
                    **overrides) -> "Battery":
    """Random scenario: stations placed with mutual gaps drawn from [1, max_gap]."""
    max_gap = overrides.get("max_station_gap", 4)
    stations = []
    pos = 0
    while path_length - pos > max_gap:
        pos += rng.randint(1, max_gap)
        stations.append(pos)
    config = BatteryConfig(path_length=path_length,
                           station_positions=tuple(stations), **overrides)
    return Battery(config)


class Battery:
    def __init__(self, config: BatteryConfig):
        self.config = config
        self.gamma = config.gamma
        rewards = (config.goal_reward, config.depletion_reward,
                   config.recharge_cost, config.check_cost, 0.0)
        self.reward_span = max(rewards) - min(rewards)
        self.num_actions = 3
        self._stations = frozenset(config.station_positions)
        self._legal_station: tuple[int, ...] = (ADVANCE, CHECK, RECHARGE)
        self._legal_plain: tuple[int, ...] = (ADVANCE, CHECK)
        self._atoms = tuple(GroundAtom(n) for n in _ACTION_NAMES)
        # distance to the next station strictly ahead, or the goal if none
        self._dist_next = []
        for p in range(config.path_length + 1):
            ahead = [s - p for s in config.station_positions if s > p]
            self._dist_next.append(min(ahead) if ahead else config.path_length - p)

    # -- simulator interface -------------------------------------------------

    def sample_initial_state(self, rng: random.Random) -> tuple:
        # uniform prior over levels {1..max_level}; level 0 excluded at start
        return (0, rng.randint(1, self.config.max_level))

    def initial_belief(self, num_particles: int, rng: random.Random) -> ParticleBelief:
        return ParticleBelief(
            [self.sample_initial_state(rng) for _ in range(num_particles)])

    def observable(self, state: tuple) -> int:
        return state[0]

    def legal_actions(self, observable_state) -> tuple[int, ...]:
        if observable_state in self._stations:
            return self._legal_station
        return self._legal_plain

    def step(self, state: tuple, action: int, rng: random.Random):
        pos, level = state
        cfg = self.config
        if action == ADVANCE:
            pos += 1
            if rng.random() < cfg.move_drain_prob:
                level -= 1
            if pos >= cfg.path_length:
                return (pos, level), OBS_GOAL, cfg.goal_reward, True
            if level <= 0:
                return (pos, level), OBS_DEPLETED, cfg.depletion_reward, True
            return (pos, level), OBS_OK, 0.0, False
        if action == CHECK:
            if rng.random() < cfg.sensor_accuracy:
                obs = level
            else:
                adjacent = [l for l in (level - 1, level + 1)
                            if 0 <= l <= cfg.max_level]
                obs = adjacent[rng.randrange(len(adjacent))]
            return state, obs, cfg.check_cost, False
        if action == RECHARGE:
            if pos not in self._stations:
                raise ValueError("recharge is only legal at a station")
            return (pos, cfg.max_level), OBS_OK, cfg.recharge_cost, False
        raise ValueError(f"malformed action id {action}")

    def mutate_particle(self, state: tuple, rng: random.Random) -> tuple:
        pos, level = state
        if rng.random() < 0.2:
            level = min(max(level + rng.choice((-1, 1)), 1), self.config.max_level)
        return (pos, level)

    def reseed_state(self, observable_state, rng: random.Random) -> tuple:
        return (observable_state, rng.randint(1, self.config.max_level))

    # -- feature map ---------------------------------------------------------

    def belief_features(self, belief: ParticleBelief) -> frozenset[GroundAtom]:
        max_level = self.config.max_level
        counts = [0] * (max_level + 1)
        for _pos, level in belief.particles:
            counts[min(max(level, 0), max_level)] += 1
        n = len(belief.particles)
        atoms = []
        at_least = 0
        cumulative = [0] * (max_level + 1)
        for lvl in range(max_level, -1, -1):
            at_least += counts[lvl]
            cumulative[lvl] = at_least
        for lvl in range(max_level + 1):
            atoms.append(GroundAtom("guess",
                                    (lvl, discretize_prob(cumulative[lvl] / n))))
        return frozenset(atoms)

    def observable_features(self, observable_state) -> frozenset[GroundAtom]:
        pos = observable_state
        atoms = {GroundAtom("dist_next", (self._dist_next[pos],))}
        if pos in self._stations:
            atoms.add(GroundAtom("at_station"))
        return frozenset(atoms)

    def features(self, belief: ParticleBelief, observable_state) -> frozenset[GroundAtom]:
        return self.belief_features(belief) | self.observable_features(observable_state)

    # -- action map ----------------------------------------------------------

    @property
    def action_vocabulary(self) -> frozenset[str]:
        return frozenset(_ACTION_NAMES)

    def action_groundings(self) -> dict[str, list[GroundAtom]]:
        return {name: [GroundAtom(name)] for name in _ACTION_NAMES}

    def action_map(self, action: int, observable_state=None) -> GroundAtom:
        if not 0 <= action < self.num_actions:
            raise ValueError(f"malformed action id {action}")
        return self._atoms[action]

    def action_unmap(self, atom: GroundAtom, observable_state=None) -> int:
        try:
            return _ACTION_NAMES.index(atom.predicate)
        except ValueError:
            raise ValueError(f"unknown action predicate {atom.predicate!r}") from None

    # -- ILP export helpers ----------------------------------------------------

    def ilasp_background(self) -> dict[str, tuple[int, int]]:
        return {
            "level": (0, self.config.max_level),
            "value": (0, 100),
            "distance": (0, self.config.path_length),
        }

    def ilasp_mode_bias(self, action_predicate: str) -> dict[str, list[str]]:
        return {
            "head": [action_predicate],
            "body": [
                "guess(var(level), var(value))",
                "dist_next(var(distance))",
                "at_station",
            ],
        }
