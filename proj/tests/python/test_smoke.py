"""Smoke tests for the python bindings.

Statistical assertions here are deliberately loose; the tight verification
lives in the C++ unit and acceptance suites.
"""

import math

try:
    import dyncov as dc
except ImportError:  # running against the bare extension in the build tree
    import _dyncov as dc


def reference_network():
    return dc.NetworkConfig(
        density=1.0,
        sensing_radius=0.5,
        speed_law=dc.SpeedDistribution.fixed(1.0),
        direction_law=dc.DirectionDistribution.uniform(),
    )


def test_analytic_closed_forms():
    assert dc.analytic.area_coverage(0.0, 1.0) == 0.0
    assert math.isclose(
        dc.analytic.area_coverage(1.0, 0.5), 1.0 - math.exp(-math.pi / 4), rel_tol=1e-12
    )
    fi = dc.analytic.interval_coverage_straight(1.0, 0.5, 1.0, 1.0)
    assert math.isclose(fi, 1.0 - math.exp(-(math.pi / 4 + 1.0)), rel_tol=1e-12)
    v = dc.analytic.required_speed(1.0, 0.5, fi, 1.0)
    assert math.isclose(v, 1.0, rel_tol=1e-10)

    r_eff, rate, mean = dc.analytic.sensing_time_law(1.0, 0.5, 1.0, 0.6)
    assert math.isclose(r_eff, 0.4, rel_tol=1e-12)
    assert math.isclose(rate, 0.8, rel_tol=1e-12)
    assert math.isclose(mean, 1.85, rel_tol=1e-12)

    v_star, mean_star = dc.analytic.optimal_speed(1.0, 0.5, 0.6)
    assert math.isclose(v_star, math.sqrt(2) * 0.5 / 0.6, rel_tol=1e-12)
    assert math.isclose(mean_star, 1.8, rel_tol=1e-12)


def test_effective_speed_uniform_matched():
    law = dc.DirectionDistribution.uniform()
    eff = dc.analytic.effective_speed(law, 0.0, 1.0, 1.0)
    assert math.isclose(eff, 4.0 / math.pi, rel_tol=1e-9)
    # Same-direction sensors cancel exactly.
    pm = dc.DirectionDistribution.point_mass(0.3)
    assert dc.analytic.effective_speed(pm, 0.3, 1.0, 1.0) == 0.0


def test_invalid_inputs_raise():
    import pytest

    with pytest.raises(ValueError):
        dc.analytic.area_coverage(-1.0, 1.0)
    with pytest.raises(ValueError):
        dc.analytic.sensing_time_law(1.0, 0.5, 1.0, 2.0)  # never detected


def test_detection_times_match_theory_and_are_deterministic():
    net = reference_network()
    intruder = dc.IntruderSpec.stationary()
    a = dc.sim.detection_times(net, intruder, horizon=10.0, n=2000, seed=11)
    b = dc.sim.detection_times(net, intruder, horizon=10.0, n=2000, seed=11)
    assert a == b  # bit-identical rerun
    values = [t for t, censored in a if not censored]
    assert len(values) > 1950
    mean = sum(values) / len(values)
    assert abs(mean - 1.0) < 0.1  # E[X] = 1/(2 lambda r v_s) = 1
    rate, lo, hi = dc.stats.exp_rate_mle(values)
    assert lo < 1.0 < hi or abs(rate - 1.0) < 0.08
    assert dc.stats.ks_exponential(values, 1.0) < 0.05


def test_area_coverage_estimate():
    net = reference_network()
    frac, se = dc.sim.estimate_area_coverage(net, time=0.0, n_points=4000, seed=3)
    # One configuration only, so allow the configuration-level wobble.
    assert abs(frac - dc.analytic.area_coverage(1.0, 0.5)) < 0.15


def test_game_equilibrium_values():
    uniform = dc.DirectionDistribution.uniform()
    br = dc.game.best_response_intruder(
        uniform, density=1.0, radius=0.5, sensor_speed=1.0, intruder_speed_max=1.0,
        angles=180, speeds=51,
    )
    assert br.intruder_speed <= 1.0 / 50 + 1e-9
    assert math.isclose(br.expected_time, 1.0, rel_tol=1e-5)

    pm = dc.DirectionDistribution.point_mass(0.0)
    tail = dc.game.best_response_intruder(
        pm, density=1.0, radius=0.5, sensor_speed=1.0, intruder_speed_max=1.0,
        angles=180, speeds=51,
    )
    assert tail.undetectable()
    assert math.isinf(tail.expected_time)

    value = dc.game.minimax_value(
        pm, density=1.0, radius=0.5, sensor_speed=1.0, intruder_speed_max=0.5,
        angles=180, speeds=51,
    )
    assert math.isclose(value, 2.0, rel_tol=1e-5)


def test_mixture_direction_law():
    mix = dc.DirectionDistribution.mixture(
        [(0.5, dc.DirectionDistribution.point_mass(0.0)),
         (0.5, dc.DirectionDistribution.uniform())]
    )
    eff = dc.analytic.effective_speed(mix, 0.0, 1.0, 1.0)
    assert math.isclose(eff, 0.5 * 4.0 / math.pi, rel_tol=1e-9)


def test_wilson_interval():
    p, lo, hi = dc.stats.proportion_ci(50, 100)
    assert p == 0.5
    assert math.isclose(lo, 0.404, abs_tol=5e-4)
    assert math.isclose(hi, 0.596, abs_tol=5e-4)
