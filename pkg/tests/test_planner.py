"""Search behavior: UCT selection, backups, rule bias, determinism."""
import math
import random

import pytest

from pomcp_rules.core import ParticleBelief
from pomcp_rules.defaults import load_default_rules
from pomcp_rules.domains.battery import Battery, BatteryConfig
from pomcp_rules.domains.rocksample import Rocksample, RocksampleConfig
from pomcp_rules.logic import GroundAtom, parse_program
from pomcp_rules.planner import (
    Planner,
    PlannerConfig,
    SearchNode,
    apply_bias,
    plan_episode,
    search,
    uct_value,
)


class BanditDomain:
    """One-step domain with known arm means; state carries no information."""

    gamma = 1.0
    reward_span = 1.0

    def __init__(self, means):
        self.means = means
        self.config = ("bandit",) + tuple(means)

    def step(self, state, action, rng):
        reward = self.means[action] + rng.uniform(-0.05, 0.05)
        return state, None, reward, True

    def legal_actions(self, observable_state):
        return tuple(range(len(self.means)))

    def sample_initial_state(self, rng):
        return (0,)

    def initial_belief(self, n, rng):
        return ParticleBelief([(0,)] * n)

    def mutate_particle(self, state, rng):
        return state

    def observable(self, state):
        return 0

    def belief_features(self, belief):
        return frozenset()

    def observable_features(self, observable_state):
        return frozenset()


def test_planner_config_validation():
    with pytest.raises(ValueError):
        PlannerConfig(num_simulations=0, num_particles=8)
    with pytest.raises(ValueError):
        PlannerConfig(num_simulations=8, num_particles=8, prior_visits=-1)


def test_uct_value_formula():
    assert uct_value(1.5, 10, 4, 2.0) == pytest.approx(
        1.5 + 2.0 * math.sqrt(math.log(10) / 4), abs=1e-12)


def test_uct_zero_exploration_is_greedy():
    assert uct_value(3.0, 100, 1, 0.0) == 3.0


def test_search_finds_best_bandit_arm():
    domain = BanditDomain((0.1, 0.9, 0.4))
    config = PlannerConfig(num_simulations=500, num_particles=8,
                           exploration_constant=1.0)
    belief = domain.initial_belief(8, random.Random(0))
    assert search(belief, 0, domain, config, seed=3) == 1


def test_each_action_tried_before_any_repeats():
    domain = BanditDomain((0.0, 0.0, 0.0, 0.0))
    planner = Planner(domain, PlannerConfig(num_simulations=4, num_particles=4))
    planner.search(domain.initial_belief(4, random.Random(0)), 0)
    assert planner.root.edge_visits == [1, 1, 1, 1]


def test_visit_counts_are_consistent():
    config = BatteryConfig(path_length=6, station_positions=(2, 4))
    domain = Battery(config)
    planner = Planner(domain, PlannerConfig(num_simulations=300, num_particles=32))
    belief = domain.initial_belief(32, random.Random(1))
    planner.search(belief, 0)
    root = planner.root
    assert root.visits == 300 + 1  # one initial visit at expansion
    assert sum(root.edge_visits) == 300

    def check(node):
        # a node's visits exceed its children's by the visits that ended there
        child_visits = sum(ch.visits for ch in node.children.values())
        assert node.visits >= child_visits
        for ch in node.children.values():
            check(ch)

    check(root)


def test_backup_is_mean_of_returns():
    domain = BanditDomain((0.25,))
    planner = Planner(domain, PlannerConfig(num_simulations=200, num_particles=4,
                                            exploration_constant=0.0))
    returns = []
    original = domain.step

    def spy(state, action, rng):
        out = original(state, action, rng)
        returns.append(out[2])
        return out

    domain.step = spy
    planner.search(domain.initial_belief(4, random.Random(0)), 0)
    assert planner.root.edge_values[0] == pytest.approx(
        sum(returns) / len(returns), abs=1e-9)


def test_search_deterministic_under_seed():
    domain = Battery(BatteryConfig(path_length=6, station_positions=(2, 4)))
    config = PlannerConfig(num_simulations=400, num_particles=64)

    def run():
        belief = domain.initial_belief(64, random.Random(9))
        planner = Planner(domain, config, seed=42)
        action = planner.search(belief, 0)
        return action, planner.root.edge_visits, planner.root.edge_values

    assert run() == run()


def test_episode_deterministic_under_seed():
    domain = Battery(BatteryConfig(path_length=6, station_positions=(2, 4)))
    config = PlannerConfig(num_simulations=128, num_particles=128)
    t1 = plan_episode(domain, config, None, seed=5)
    t2 = plan_episode(domain, config, None, seed=5)
    assert t1 == t2


def test_episode_return_matches_step_rewards():
    domain = Battery(BatteryConfig(path_length=6, station_positions=(2, 4)))
    config = PlannerConfig(num_simulations=128, num_particles=128)
    trace = plan_episode(domain, config, None, seed=2)
    recomputed = sum(s.reward * trace.gamma ** s.t for s in trace.steps)
    assert trace.discounted_return == pytest.approx(recomputed, abs=1e-9)


# -- rule bias -----------------------------------------------------------------

def _biased_node(actions, suggested, c=20.0, prior=10):
    node = SearchNode()
    node.actions = tuple(actions)
    node.edge_visits = [0] * len(actions)
    node.edge_values = [0.0] * len(actions)
    apply_bias(node, suggested, c, prior)
    return node


def test_apply_bias_seeds_suggested_edges():
    node = _biased_node([0, 1, 2], [1])
    assert node.edge(1) == (10, 20.0)
    assert node.edge(0) == (0, 0.0) and node.edge(2) == (0, 0.0)


def test_apply_bias_idempotent():
    node = _biased_node([0, 1], [1])
    node.edge_visits[1] = 17  # search has since updated the edge
    apply_bias(node, [1], 20.0, 10)
    assert node.edge(1)[0] == 17


def test_apply_bias_skips_illegal_suggestions():
    node = _biased_node([0, 2], [1, 2])
    assert node.edge(2) == (10, 20.0)
    assert node.edge(0) == (0, 0.0)


def test_expansion_biases_sample_edge():
    """With the shipped rules and a confident belief on a rock underfoot,
    the sample edge starts at N=prior_visits, V=c."""
    config = RocksampleConfig(grid_size=4, rock_positions=((0, 0), (2, 2)),
                              start_pos=(0, 0))
    domain = Rocksample(config)
    rules = load_default_rules("rocksample")
    pconfig = PlannerConfig(num_simulations=1, num_particles=16,
                            rules_enabled=True)
    planner = Planner(domain, pconfig, rules, seed=0)
    belief = ParticleBelief([(0, 0, 0b01, 0)] * 16)  # rock 1 certainly good
    planner.search(belief, (0, 0, 0))
    root = planner.root
    sample_rock1 = domain.action_unmap(GroundAtom("sample", (1,)), (0, 0, 0))
    n, v = root.edge(sample_rock1)
    assert v == planner.exploration
    assert n >= pconfig.prior_visits  # prior plus any simulation visits


def test_rules_disabled_leaves_edges_unseeded():
    config = RocksampleConfig(grid_size=4, rock_positions=((0, 0), (2, 2)),
                              start_pos=(0, 0))
    domain = Rocksample(config)
    rules = load_default_rules("rocksample")
    pconfig = PlannerConfig(num_simulations=1, num_particles=16,
                            rules_enabled=False)
    planner = Planner(domain, pconfig, rules, seed=0)
    assert planner.rules is None


def test_bias_respects_preference_between_candidates():
    """Only the weak-constraint winner gets the prior when two rocks compete."""
    config = RocksampleConfig(grid_size=4, rock_positions=((0, 0), (0, 1)),
                              start_pos=(0, 0))
    domain = Rocksample(config)
    rules = parse_program(
        "check(R) :- guess(R,V), V >= 60.\n"
        ":~ check(R), guess(R,V). [-V@1, R, V]\n")
    pconfig = PlannerConfig(num_simulations=1, num_particles=10,
                            rules_enabled=True)
    planner = Planner(domain, pconfig, rules, seed=0)
    # rock 1 good in 7/10 particles, rock 2 good in 9/10
    particles = ([(0, 0, 0b11, 0)] * 7 + [(0, 0, 0b10, 0)] * 2
                 + [(0, 0, 0b00, 0)] * 1)
    planner.search(ParticleBelief(particles), (0, 0, 0))
    root = planner.root
    check1 = domain.action_unmap(GroundAtom("check", (1,)), (0, 0, 0))
    check2 = domain.action_unmap(GroundAtom("check", (2,)), (0, 0, 0))
    assert root.edge(check2)[1] == planner.exploration
    assert root.edge(check1)[1] != planner.exploration


def test_advance_root_reuses_child():
    domain = Battery(BatteryConfig(path_length=6, station_positions=(2, 4)))
    planner = Planner(domain, PlannerConfig(num_simulations=200, num_particles=32))
    belief = domain.initial_belief(32, random.Random(0))
    planner.search(belief, 0)
    key = next(iter(planner.root.children))
    child = planner.root.children[key]
    planner.advance_root(*key)
    assert planner.root is child
    planner.advance_root(99, "unseen")
    assert planner.root.visits == 0  # fresh node for unseen histories


def test_plan_episode_recovers_from_belief_collapse():
    # one particle and a noisy sensor force collapses; the episode still ends
    domain = Battery(BatteryConfig(path_length=6, station_positions=(2, 4)))
    config = PlannerConfig(num_simulations=32, num_particles=1)
    trace = plan_episode(domain, config, None, seed=1)
    assert len(trace.steps) >= 1
