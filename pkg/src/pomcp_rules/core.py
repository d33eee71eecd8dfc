"""Domain-agnostic POMDP pieces: simulator interface, particle belief, returns."""
from __future__ import annotations

import random
from typing import Any, Callable, Protocol, Sequence

Action = int
State = tuple
Observation = Any


class SimulatorInterface(Protocol):
    """Black-box generative model a domain must provide."""

    def step(self, state: State, action: Action,
             rng: random.Random) -> tuple[State, Observation, float, bool]:
        """Simulate one transition: (next_state, observation, reward, terminal)."""
        ...

    def legal_actions(self, observable_state) -> Sequence[Action]:
        """Actions available given only the observable state component."""
        ...

    def sample_initial_state(self, rng: random.Random) -> State:
        ...

    def mutate_particle(self, state: State, rng: random.Random) -> State:
        """Reinvigoration noise applied to resampled duplicate particles."""
        ...

    def observable(self, state: State):
        """The fully observable component of a state."""
        ...


class BeliefCollapse(RuntimeError):
    """No particle reproduced the real observation during filtering."""


class ParticleBelief:
    """A multiset of sampled hidden states approximating the belief.

    All particles agree on the fully observable state component; the capacity
    (target particle count) is restored after every update.
    """

    __slots__ = ("particles", "capacity")

    def __init__(self, particles: Sequence[State], capacity: int | None = None):
        if not particles:
            raise ValueError("belief must hold at least one particle")
        self.particles = list(particles)
        self.capacity = len(self.particles) if capacity is None else capacity

    def __len__(self) -> int:
        return len(self.particles)

    def sample(self, rng: random.Random) -> State:
        return self.particles[rng.randrange(len(self.particles))]


def discounted_return(rewards: Sequence[float], gamma: float) -> float:
    """Sum of gamma**t * rewards[t]; the empty sequence returns 0."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    total = 0.0
    for r in reversed(rewards):
        total = r + gamma * total
    return total


def belief_update(belief: ParticleBelief, action: Action, observation: Observation,
                  sim: SimulatorInterface, rng: random.Random) -> ParticleBelief:
    """Rejection-filter the belief through the simulator.

    Particles whose simulated observation matches the real one survive;
    capacity is restored by resampling survivors with replacement and passing
    the duplicates through ``mutate_particle``.  Raises BeliefCollapse when no
    particle survives.
    """
    step = sim.step
    survivors = []
    for state in belief.particles:
        next_state, obs, _reward, _terminal = step(state, action, rng)
        if obs == observation:
            survivors.append(next_state)
    if not survivors:
        raise BeliefCollapse(
            f"no particle of {len(belief)} matched observation {observation!r}")
    capacity = belief.capacity
    particles = survivors[:capacity]
    n = len(survivors)
    mutate = sim.mutate_particle
    while len(particles) < capacity:
        particles.append(mutate(survivors[rng.randrange(n)], rng))
    return ParticleBelief(particles, capacity)


def marginal_fraction(belief: ParticleBelief,
                      predicate: Callable[[State], bool]) -> float:
    """Fraction of particles whose hidden state satisfies the predicate."""
    return sum(1 for s in belief.particles if predicate(s)) / len(belief.particles)
