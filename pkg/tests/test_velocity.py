import dataclasses
import math

import numpy as np
import pytest

from pairslit import (
    NodeProximityError,
    PairConfiguration,
    SpinStatistics,
    com_closed_form,
    joint_density,
    sigma_t,
    velocity_closed_form,
    velocity_field_terms,
    velocity_oracle,
)
from pairslit.wavefunction import initial_density_peak


def random_points(p, rng, n, min_gap=0.0):
    floor = 1e-10 * initial_density_peak(SpinStatistics.BOSON, p)
    pts = []
    while len(pts) < n:
        y1, y2 = rng.uniform(-2 * p.Y, 2 * p.Y, size=2)
        if abs(y1 - y2) < min_gap:
            continue
        t = float(rng.uniform(0.0, 1e-7))
        # keep kx * x moderate so the longitudinal finite difference is not
        # limited by phase rounding
        x = float(rng.uniform(0.0, 5e-6))
        c = PairConfiguration(x, float(y1), x, float(y2), t)
        if joint_density(c, SpinStatistics.BOSON, p) < floor:
            continue
        pts.append(c)
    return pts


def test_velocity_vanishes_at_release(p_fast, stats, rng):
    for _ in range(10):
        y1, y2 = rng.uniform(-2 * p_fast.Y, 2 * p_fast.Y, size=2)
        v = velocity_closed_form(PairConfiguration(0, y1, 0, y2, 0), stats, p_fast)
        assert v.vy1 == 0.0 and v.vy2 == 0.0


def test_longitudinal_velocity_is_drift(p_fast, stats):
    c = PairConfiguration(3e-5, 1e-6, 3e-5, -2e-6, 4e-9)
    v = velocity_closed_form(c, stats, p_fast)
    assert v.vx1 == p_fast.x_speed and v.vx2 == p_fast.x_speed


def test_closed_form_matches_oracle(p_fast, stats, rng):
    # independent numerical-gradient route, default probe steps
    for c in random_points(p_fast, rng, 30, min_gap=0.3 * p_fast.sigma0):
        v = velocity_closed_form(c, stats, p_fast)
        o = velocity_oracle(c, stats, p_fast)
        scale = max(abs(v.vy1), abs(v.vy2), 1e-12)
        assert abs(v.vy1 - o.vy1) <= 1e-6 * scale
        assert abs(v.vy2 - o.vy2) <= 1e-6 * scale
        assert abs(v.vx1 - o.vx1) <= 1e-6 * p_fast.x_speed
        assert abs(v.vx2 - o.vx2) <= 1e-6 * p_fast.x_speed


def test_oracle_richardson_is_tighter(p_fast, rng):
    worse = better = 0.0
    for c in random_points(p_fast, rng, 8, min_gap=0.5 * p_fast.sigma0):
        v = velocity_closed_form(c, SpinStatistics.BOSON, p_fast)
        plain = velocity_oracle(c, SpinStatistics.BOSON, p_fast, step=3e-3 * p_fast.sigma0)
        rich = velocity_oracle(
            c, SpinStatistics.BOSON, p_fast, step=3e-3 * p_fast.sigma0, richardson=True
        )
        worse += abs(plain.vy1 - v.vy1) + abs(plain.vy2 - v.vy2)
        better += abs(rich.vy1 - v.vy1) + abs(rich.vy2 - v.vy2)
    assert better < 0.01 * worse


def test_parity_is_exact(p_fast, stats, rng):
    for c in random_points(p_fast, rng, 200, min_gap=1e-9):
        m = PairConfiguration(c.x1, -c.y1, c.x2, -c.y2, c.t)
        v = velocity_closed_form(c, stats, p_fast)
        w = velocity_closed_form(m, stats, p_fast)
        assert w.vy1 == -v.vy1
        assert w.vy2 == -v.vy2


def test_exchange_reflection_is_exact(p_fast, stats, rng):
    # swapping the particles and mirroring the plane swaps the velocities
    for c in random_points(p_fast, rng, 200, min_gap=1e-9):
        m = PairConfiguration(c.x1, -c.y2, c.x2, -c.y1, c.t)
        v = velocity_closed_form(c, stats, p_fast)
        w = velocity_closed_form(m, stats, p_fast)
        assert v.vy1 == -w.vy2
        assert v.vy2 == -w.vy1


def test_mirror_pair_has_opposite_velocities(p_fast, stats, rng):
    for _ in range(50):
        y = float(rng.uniform(1e-8, 2 * p_fast.Y))
        t = float(rng.uniform(0.0, 1e-7))
        v = velocity_closed_form(PairConfiguration(0, y, 0, -y, t), stats, p_fast)
        assert v.vy2 == -v.vy1


def test_com_velocity_independent_of_statistics(p_fast, rng):
    # (vy1 + vy2)/2 depends only on the mean coordinate and time
    for c in random_points(p_fast, rng, 40, min_gap=0.05 * p_fast.sigma0):
        T = c.t / p_fast.tau
        expected = 0.5 * (c.y1 + c.y2) * T / ((1 + T * T) * p_fast.tau)
        for stats in SpinStatistics:
            v = velocity_closed_form(c, stats, p_fast)
            assert 0.5 * (v.vy1 + v.vy2) == pytest.approx(expected, rel=1e-11, abs=1e-14)


def test_com_closed_form_scaling(p_fast):
    for t, ratio in ((1e-8, 1.1554452124260477), (1e-7, 5.8741266492839115)):
        assert com_closed_form(1.3e-6, t, p_fast) == pytest.approx(1.3e-6 * ratio, rel=1e-12)
        assert abs(sigma_t(t, p_fast)) / p_fast.sigma0 == pytest.approx(ratio, rel=1e-12)
    assert com_closed_form(0.0, 5e-8, p_fast) == 0.0


def test_field_terms_decompose_velocity(p_fast, stats, rng):
    for c in random_points(p_fast, rng, 30, min_gap=0.1 * p_fast.sigma0):
        v = velocity_closed_form(c, stats, p_fast)
        terms = velocity_field_terms(c, stats, p_fast)
        assert terms.term1_y1 + terms.term2_y1 == pytest.approx(v.vy1, rel=1e-11, abs=1e-13)
        assert terms.term1_y2 + terms.term2_y2 == pytest.approx(v.vy2, rel=1e-11, abs=1e-13)
        T = c.t / p_fast.tau
        drift = T / ((1 + T * T) * p_fast.tau)
        assert terms.term2_y1 == pytest.approx(c.y1 * drift, rel=1e-12, abs=1e-16)
        assert terms.term2_y2 == pytest.approx(c.y2 * drift, rel=1e-12, abs=1e-16)


def test_interference_fades_at_late_times(p_slow):
    # At positions riding the spreading profile the interference part of the
    # velocity decays ~1/T^2 relative to the drift, so the two statistics
    # converge to the same flow.
    eta = (1.2, -0.4)
    ratios, diffs = [], []
    for mult in (10, 20, 40, 80, 160):
        t = mult * p_slow.tau
        spread = math.hypot(1.0, mult) * p_slow.sigma0
        c = PairConfiguration(0.0, eta[0] * spread, 0.0, eta[1] * spread, t)
        worst = 0.0
        for stats in SpinStatistics:
            tm = velocity_field_terms(c, stats, p_slow)
            worst = max(worst, abs(tm.term1_y1 / tm.term2_y1), abs(tm.term1_y2 / tm.term2_y2))
        ratios.append(worst)
        vb = velocity_closed_form(c, SpinStatistics.BOSON, p_slow)
        vf = velocity_closed_form(c, SpinStatistics.FERMION, p_slow)
        diffs.append(
            max(abs(vb.vy1 - vf.vy1), abs(vb.vy2 - vf.vy2))
            / max(abs(vb.vy1), abs(vb.vy2))
        )
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 0.01 * ratios[0]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1e-3


def test_fermion_diagonal_raises(p_fast):
    with pytest.raises(NodeProximityError):
        velocity_closed_form(
            PairConfiguration(0.0, 1e-6, 0.0, 1e-6, 3e-9), SpinStatistics.FERMION, p_fast
        )


def test_oracle_raises_near_node(p_fast):
    c = PairConfiguration(0.0, 1e-6, 0.0, 1e-6 + 1e-13, 3e-9)
    with pytest.raises(NodeProximityError):
        velocity_oracle(c, SpinStatistics.FERMION, p_fast)


def test_boson_has_no_nodes(p_fast, rng):
    # boson denominator stays positive even on the diagonal
    for _ in range(50):
        y = float(rng.uniform(-2 * p_fast.Y, 2 * p_fast.Y))
        t = float(rng.uniform(1e-10, 1e-7))
        v = velocity_closed_form(PairConfiguration(0, y, 0, y, t), SpinStatistics.BOSON, p_fast)
        assert math.isfinite(v.vy1) and math.isfinite(v.vy2)


def test_ky_must_be_zero(p_fast):
    p = dataclasses.replace(p_fast, ky=1e5)
    with pytest.raises(ValueError):
        velocity_closed_form(PairConfiguration(0, 1e-6, 0, -1e-6, 1e-9), SpinStatistics.BOSON, p)
