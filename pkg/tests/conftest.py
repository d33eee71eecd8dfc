import random

import pytest

from pomcp_rules.domains.battery import Battery, BatteryConfig
from pomcp_rules.domains.rocksample import Rocksample, RocksampleConfig

# the two-rock sample policy used throughout the rule-engine tests
SAMPLE_RULE_TEXT = "sample(R) :- guess(R,V), V > 60.\n"
SAMPLE_PREF_TEXT = ":~ sample(R), guess(R,V). [-V@1, R, V]\n"


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def small_rocksample():
    config = RocksampleConfig(grid_size=4, rock_positions=((1, 1), (2, 3)),
                              start_pos=(0, 0))
    return Rocksample(config)


@pytest.fixture
def small_battery():
    config = BatteryConfig(path_length=6, station_positions=(2, 4))
    return Battery(config)
