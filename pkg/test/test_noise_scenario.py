"""
构造场景：背景活动与热像素的折扣大于正常边缘像素，足够大的 alpha 下 DiST 秩低于所有正常像素
"""

from fractions import Fraction

import numpy as np
import pytest

from evrep.core.events import validate
from evrep.core.exceptions import ArgumentError
from evrep.repr import discount_grid, dist
from evrep.simulate.scenarios import exact_discounts, noise_scenario, suppression_threshold


@pytest.fixture
def scenario():
    return noise_scenario()


def test_scenario_is_valid(scenario):
    stream, regions = scenario
    assert validate(stream).is_valid
    assert stream.geometry == (1, 30)
    assert (stream.t_start, stream.t_end) == (0, 50000)
    assert regions['hot'] == [25]
    assert regions['normal'] == list(range(10, 20))


def test_hand_computed_discounts(scenario):
    stream, _ = scenario
    d = exact_discounts(stream, rho=2)
    assert d[1] == (2000, Fraction(9000))
    assert d[2] == (20000, Fraction(12000))
    assert d[4] == (38000, Fraction(26000, 3))
    assert d[5] == (46000, Fraction(4000))
    assert d[25] == (49000, Fraction(11000))
    # 边缘两端的正常像素邻域最稀疏
    assert d[10] == (44000, Fraction(4100, 6))
    assert d[19] == (44450, Fraction(4100, 6))
    assert d[14] == (44200, Fraction(4200, 10))


def test_noise_discounts_exceed_every_normal_discount(scenario):
    stream, regions = scenario
    d = discount_grid(stream, rho=2).channel(1)[0]
    worst_normal = max(d[x] for x in regions['normal'])
    for name in ('background', 'hot'):
        for x in regions[name]:
            assert d[x] > worst_normal


def test_suppression_threshold_value(scenario):
    stream, regions = scenario
    threshold = suppression_threshold(stream, regions)
    # 由背景像素 x=5 (t=46000, D=4000) 与最早的正常像素 x=10 (t=44000) 决定
    assert threshold == Fraction(46000 - 44000) / (Fraction(4000) - Fraction(4100, 6))
    assert 0.6 < threshold < 0.61


@pytest.mark.parametrize("alpha", [1.0, 5.0, 50.0])
def test_large_alpha_suppresses_noise(scenario, alpha):
    stream, regions = scenario
    assert alpha > suppression_threshold(stream, regions)
    ranks = dist(stream, alpha=alpha, rho=2).channel(1)[0]
    noisy = [x for name in ('background', 'hot') for x in regions[name]]
    assert max(ranks[x] for x in noisy) < min(ranks[x] for x in regions['normal'])


def test_plain_sorting_keeps_late_noise_on_top(scenario):
    stream, regions = scenario
    ranks = dist(stream, alpha=0.0, rho=2).channel(1)[0]
    lowest_normal = min(ranks[x] for x in regions['normal'])
    assert ranks[25] > lowest_normal
    assert ranks[5] > lowest_normal
    assert ranks[25] == 1.0


def test_negative_polarity_mirror():
    stream, regions = noise_scenario(polarity=-1)
    ranks = dist(stream, alpha=5.0, rho=2).channel(-1)[0]
    assert not dist(stream, alpha=5.0, rho=2).channel(1).any()
    assert max(ranks[x] for x in regions['hot'] + regions['background']) < min(ranks[x] for x in regions['normal'])


def test_unsuppressible_configuration():
    stream, regions = noise_scenario()
    # 把正常像素当作噪声：其折扣不大于真正的稀疏像素，无法压制
    swapped = {'normal': regions['background'], 'noise': regions['normal']}
    with pytest.raises(ArgumentError):
        suppression_threshold(stream, swapped)
    assert np.isfinite(float(suppression_threshold(stream, regions)))
