"""Rocksample domain: generative simulator and feature/action maps.

State tuples are (x, y, value_mask, sampled_mask) with rock values and sampled
flags packed as bit masks; only value_mask is hidden.  The observable
component is (x, y, sampled_mask).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..core import ParticleBelief
from ..logic.terms import GroundAtom
from .base import discretize_prob

NORTH, SOUTH, EAST, WEST = 0, 1, 2, 3
_MOVE_NAMES = ("north", "south", "east", "west")


@dataclass(frozen=True)
class RocksampleConfig:
    grid_size: int = 12
    rock_positions: tuple[tuple[int, int], ...] = ()
    start_pos: tuple[int, int] = (0, 0)
    sample_good: float = 10.0
    sample_bad: float = -10.0
    exit_reward: float = 10.0
    sensor_half_distance: float = 20.0
    gamma: float = 0.95

    def __post_init__(self):
        n = self.grid_size
        if n < 1:
            raise ValueError("grid_size must be positive")
        if len(set(self.rock_positions)) != len(self.rock_positions):
            raise ValueError("rock positions must be distinct")
        for x, y in self.rock_positions + (self.start_pos,):
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"position ({x},{y}) outside the {n}x{n} grid")


def random_instance(rng: random.Random, grid_size: int = 12, num_rocks: int = 4,
                    **overrides) -> "Rocksample":
    """Random scenario: rock values/positions and agent start are randomized."""
    cells = [(x, y) for x in range(grid_size) for y in range(grid_size)]
    picks = rng.sample(cells, num_rocks + 1)
    config = RocksampleConfig(grid_size=grid_size,
                              rock_positions=tuple(picks[:num_rocks]),
                              start_pos=picks[num_rocks], **overrides)
    return Rocksample(config)


class Rocksample:
    def __init__(self, config: RocksampleConfig):
        self.config = config
        self.num_rocks = len(config.rock_positions)
        m = self.num_rocks
        self.gamma = config.gamma
        rewards = (config.sample_good, config.sample_bad, config.exit_reward, 0.0)
        self.reward_span = max(rewards) - min(rewards)
        # action ids: 4 moves, then sample(rock), then check(rock)
        self._sample_base = 4
        self._check_base = 4 + m
        self.num_actions = 4 + 2 * m
        self._legal_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        self._atoms = [GroundAtom(n) for n in _MOVE_NAMES]
        self._atoms += [GroundAtom("sample", (i + 1,)) for i in range(m)]
        self._atoms += [GroundAtom("check", (i + 1,)) for i in range(m)]
        self._exit_atom = GroundAtom("exit")

    # -- simulator interface -------------------------------------------------

    def sample_initial_state(self, rng: random.Random) -> tuple:
        x, y = self.config.start_pos
        return (x, y, rng.getrandbits(self.num_rocks) if self.num_rocks else 0, 0)

    def initial_belief(self, num_particles: int, rng: random.Random) -> ParticleBelief:
        """Uniform prior over rock-value assignments."""
        return ParticleBelief(
            [self.sample_initial_state(rng) for _ in range(num_particles)])

    def observable(self, state: tuple) -> tuple:
        return (state[0], state[1], state[3])

    def legal_actions(self, observable_state) -> tuple[int, ...]:
        pos = (observable_state[0], observable_state[1])
        cached = self._legal_cache.get(pos)
        if cached is None:
            x, y = pos
            n = self.config.grid_size
            moves = [EAST]  # east at the right edge exits the grid
            if y + 1 < n:
                moves.append(NORTH)
            if y - 1 >= 0:
                moves.append(SOUTH)
            if x - 1 >= 0:
                moves.append(WEST)
            cached = tuple(moves) + tuple(range(4, self.num_actions))
            self._legal_cache[pos] = cached
        return cached

    def step(self, state: tuple, action: int, rng: random.Random):
        x, y, values, sampled = state
        cfg = self.config
        if action == EAST:
            if x + 1 >= cfg.grid_size:
                return state, None, cfg.exit_reward, True
            return (x + 1, y, values, sampled), None, 0.0, False
        if action == NORTH:
            return (x, y + 1, values, sampled), None, 0.0, False
        if action == SOUTH:
            return (x, y - 1, values, sampled), None, 0.0, False
        if action == WEST:
            return (x - 1, y, values, sampled), None, 0.0, False
        if action < self._check_base:
            rock = action - self._sample_base
            if rock >= self.num_rocks:
                raise ValueError(f"malformed action id {action}")
            if cfg.rock_positions[rock] != (x, y):
                return state, None, cfg.sample_bad, False
            bit = 1 << rock
            was_good = bool(values & bit)
            reward = cfg.sample_good if was_good else cfg.sample_bad
            return ((x, y, values & ~bit, sampled | bit),
                    1 if was_good else 0, reward, False)
        rock = action - self._check_base
        if rock >= self.num_rocks:
            raise ValueError(f"malformed action id {action}")
        rx, ry = cfg.rock_positions[rock]
        d = math.hypot(rx - x, ry - y)
        eta = 2.0 ** (-d / cfg.sensor_half_distance)
        true_value = (values >> rock) & 1
        if rng.random() < (1.0 + eta) / 2.0:
            obs = true_value
        else:
            obs = 1 - true_value
        return state, obs, 0.0, False

    def mutate_particle(self, state: tuple, rng: random.Random) -> tuple:
        # flip one random unsampled rock's value with small probability
        if self.num_rocks == 0 or rng.random() >= 0.1:
            return state
        x, y, values, sampled = state
        unsampled = [i for i in range(self.num_rocks) if not (sampled >> i) & 1]
        if not unsampled:
            return state
        bit = 1 << unsampled[rng.randrange(len(unsampled))]
        return (x, y, values ^ bit, sampled)

    def reseed_state(self, observable_state, rng: random.Random) -> tuple:
        """A prior-distributed hidden state consistent with the observable part."""
        x, y, sampled = observable_state
        values = rng.getrandbits(self.num_rocks) if self.num_rocks else 0
        return (x, y, values & ~sampled, sampled)

    # -- feature map ---------------------------------------------------------

    def belief_features(self, belief: ParticleBelief) -> frozenset[GroundAtom]:
        m = self.num_rocks
        counts = [0] * m
        for state in belief.particles:
            values = state[2]
            for i in range(m):
                counts[i] += (values >> i) & 1
        n = len(belief.particles)
        return frozenset(GroundAtom("guess", (i + 1, discretize_prob(counts[i] / n)))
                         for i in range(m))

    def observable_features(self, observable_state) -> frozenset[GroundAtom]:
        x, y, sampled = observable_state
        atoms: set[GroundAtom] = set()
        dists = []
        for i, (rx, ry) in enumerate(self.config.rock_positions):
            dx = rx - x
            dy = ry - y
            d = abs(dx) + abs(dy)
            dists.append(d)
            rock = i + 1
            atoms.add(GroundAtom("dist", (rock, d)))
            atoms.add(GroundAtom("delta_x", (rock, dx)))
            atoms.add(GroundAtom("delta_y", (rock, dy)))
            if (sampled >> i) & 1:
                atoms.add(GroundAtom("sampled", (rock,)))
        if dists:
            dmin = min(dists)
            for i, d in enumerate(dists):
                if d == dmin:
                    atoms.add(GroundAtom("min_dist", (i + 1,)))
        num_sampled = bin(sampled).count("1")
        if self.num_rocks:
            atoms.add(GroundAtom("num_sampled",
                                 (100 * num_sampled // self.num_rocks,)))
        return frozenset(atoms)

    def features(self, belief: ParticleBelief, observable_state) -> frozenset[GroundAtom]:
        return self.belief_features(belief) | self.observable_features(observable_state)

    # -- action map ----------------------------------------------------------

    @property
    def action_vocabulary(self) -> frozenset[str]:
        return frozenset(_MOVE_NAMES) | {"exit", "sample", "check"}

    def action_groundings(self) -> dict[str, list[GroundAtom]]:
        rocks = range(1, self.num_rocks + 1)
        out = {name: [GroundAtom(name)] for name in _MOVE_NAMES}
        out["exit"] = [self._exit_atom]
        out["sample"] = [GroundAtom("sample", (r,)) for r in rocks]
        out["check"] = [GroundAtom("check", (r,)) for r in rocks]
        return out

    def action_map(self, action: int, observable_state) -> GroundAtom:
        """Simulator action -> ground atom; east at the right edge maps to exit."""
        if not 0 <= action < self.num_actions:
            raise ValueError(f"malformed action id {action}")
        if action == EAST and observable_state[0] + 1 >= self.config.grid_size:
            return self._exit_atom
        return self._atoms[action]

    def action_unmap(self, atom: GroundAtom, observable_state) -> int:
        """Ground atom -> simulator action; exit maps back to the east move."""
        pred = atom.predicate
        if pred == "exit":
            return EAST
        if pred in _MOVE_NAMES:
            return _MOVE_NAMES.index(pred)
        if pred == "sample":
            rock = atom.args[0]
            if not 1 <= rock <= self.num_rocks:
                raise ValueError(f"unknown rock in {atom}")
            return self._sample_base + rock - 1
        if pred == "check":
            rock = atom.args[0]
            if not 1 <= rock <= self.num_rocks:
                raise ValueError(f"unknown rock in {atom}")
            return self._check_base + rock - 1
        raise ValueError(f"unknown action predicate {pred!r}")

    # -- ILP export helpers ----------------------------------------------------

    def ilasp_background(self) -> dict[str, tuple[int, int]]:
        n = self.config.grid_size
        return {
            "rock": (1, self.num_rocks),
            "value": (0, 100),
            "distance": (0, 2 * (n - 1)),
            "offset": (-(n - 1), n - 1),
            "percent": (0, 100),
        }

    def ilasp_mode_bias(self, action_predicate: str) -> dict[str, list[str]]:
        heads = {
            "sample": "sample(var(rock))",
            "check": "check(var(rock))",
        }
        head = heads.get(action_predicate, action_predicate)
        body = [
            "guess(var(rock), var(value))",
            "dist(var(rock), var(distance))",
            "delta_x(var(rock), var(offset))",
            "delta_y(var(rock), var(offset))",
            "min_dist(var(rock))",
            "sampled(var(rock))",
            "num_sampled(var(percent))",
            "target(var(rock))",
        ]
        return {"head": [head], "body": body}
