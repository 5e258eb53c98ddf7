import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairslit import (
    PairConfiguration,
    Slit,
    SpinStatistics,
    initial_density,
    joint_density,
    joint_density_y,
    normalization_N,
    psi_pair,
    psi_slit,
    same_side_probability,
    sigma_t,
)
from pairslit.quadrature import gauss_legendre

# Complex width at the two scenario flight times, frozen from tau above.
SPREAD_FAST = 1.1554452124260477  # |sigma_t| / sigma0 at t = 1e-8 s
SPREAD_SLOW = 5.8741266492839115  # |sigma_t| / sigma0 at t = 1e-7 s

# Same-sign-quadrant probability of |Psi|^2, frozen from an independent
# adaptive quadrature of the closed-form density.
SAME_SIDE_SLOW = {SpinStatistics.BOSON: 0.32376052, SpinStatistics.FERMION: 0.30980734}
SAME_SIDE_FAST = 1.509e-5


def test_sigma_t_frozen_ratios(p_fast):
    assert abs(sigma_t(1e-8, p_fast)) / p_fast.sigma0 == pytest.approx(SPREAD_FAST, rel=1e-12)
    assert abs(sigma_t(1e-7, p_fast)) / p_fast.sigma0 == pytest.approx(SPREAD_SLOW, rel=1e-12)


def test_sigma_t_at_zero(p_fast):
    assert sigma_t(0.0, p_fast) == p_fast.sigma0


def test_slit_amplitude_peak(p_fast):
    peak = (2 * math.pi * p_fast.sigma0**2) ** -0.25
    assert abs(psi_slit(Slit.UPPER, 0.0, p_fast.Y, 0.0, p_fast)) == pytest.approx(peak, rel=1e-13)


def test_slit_amplitude_one_sigma_falloff(p_fast):
    peak = (2 * math.pi * p_fast.sigma0**2) ** -0.25
    got = abs(psi_slit(Slit.UPPER, 0.0, p_fast.Y + p_fast.sigma0, 0.0, p_fast))
    assert got == pytest.approx(peak * math.exp(-0.25), rel=1e-13)


@pytest.mark.parametrize("t", [0.0, 3e-9, 1e-8, 1e-7])
def test_slit_amplitude_unit_norm(p_fast, t):
    # transverse norm is conserved; the longitudinal factor is a pure phase
    half = p_fast.Y + 12 * abs(sigma_t(t, p_fast))
    y, w = gauss_legendre(-half, half, 400)
    dens = np.array([abs(psi_slit(Slit.UPPER, 1e-4, yi, t, p_fast)) ** 2 for yi in y])
    assert w @ dens == pytest.approx(1.0, abs=1e-9)


def test_lower_slit_is_y_reflection(p_fast):
    for y in (0.0, 1.3e-6, -4e-6):
        assert psi_slit(Slit.LOWER, 2e-5, y, 4e-9, p_fast) == psi_slit(
            Slit.UPPER, 2e-5, -y, 4e-9, p_fast
        )


def test_mirror_slits_are_x_reflections(p_fast):
    for slit, mirror in ((Slit.UPPER, Slit.MIRROR_UPPER), (Slit.LOWER, Slit.MIRROR_LOWER)):
        assert psi_slit(mirror, 3e-5, 2e-6, 4e-9, p_fast) == psi_slit(
            slit, -3e-5, 2e-6, 4e-9, p_fast
        )


def test_normalization_at_unit_offset(p_fast):
    # |N|^2 = 1 / (2 (1 + exp(-beta^2))) evaluated at beta = 1
    p = dataclasses.replace(p_fast, Y=p_fast.sigma0)
    assert normalization_N(SpinStatistics.BOSON, p) == pytest.approx(
        0.5 / (1 + math.exp(-1.0)), rel=1e-13
    )
    assert normalization_N(SpinStatistics.FERMION, p) == pytest.approx(
        0.5 / (1 - math.exp(-1.0)), rel=1e-13
    )


def test_normalization_requires_zero_ky(p_fast):
    p = dataclasses.replace(p_fast, ky=1e4)
    with pytest.raises(ValueError):
        normalization_N(SpinStatistics.BOSON, p)


@pytest.mark.parametrize("offset_ratio", [1.0, 2.0, 5.0])
@pytest.mark.parametrize("t", [0.0, 1e-8])
def test_pair_density_normalized(p_fast, stats, offset_ratio, t):
    p = dataclasses.replace(p_fast, Y=offset_ratio * p_fast.sigma0)
    half = p.Y + 10 * abs(sigma_t(t, p))
    y, w = gauss_legendre(-half, half, 260)
    yy1, yy2 = np.meshgrid(y, y, indexing="ij")
    dens = joint_density_y(yy1, yy2, t, stats, p)
    total = w @ dens @ w
    assert total == pytest.approx(1.0, abs=1e-6)


def test_fermion_diagonal_node_exact(p_fast):
    c = PairConfiguration(1e-4, 2.2e-6, 1e-4, 2.2e-6, 3e-9)
    assert psi_pair(SpinStatistics.FERMION, c, p_fast) == 0.0


def test_fermion_diagonal_node_distinct_x(p_fast):
    # different longitudinal positions only scramble rounding, not the node
    c = PairConfiguration(1e-4, 2.2e-6, 2e-4, 2.2e-6, 3e-9)
    scale = abs(psi_pair(SpinStatistics.BOSON, c, p_fast))
    assert abs(psi_pair(SpinStatistics.FERMION, c, p_fast)) <= 1e-12 * scale


def test_joint_density_matches_closed_form(p_fast, stats):
    # |psi_pair|^2 against the direct interference formula, two routes
    ys = np.linspace(-2 * p_fast.Y, 2 * p_fast.Y, 20)
    for t in (0.0, 2e-9, 1e-8):
        closed = joint_density_y(ys[:, None], ys[None, :], t, stats, p_fast)
        for i in (0, 7, 13, 19):
            for j in (2, 6, 11, 16):
                c = PairConfiguration(5e-5, ys[i], 5e-5, ys[j], t)
                got = joint_density(c, stats, p_fast)
                ref = closed[i, j]
                assert got == pytest.approx(ref, rel=1e-12, abs=1e-18)


def test_initial_density_is_time_zero_joint(p_fast, stats):
    for y1, y2 in ((4e-6, -6e-6), (0.0, 5e-6), (-2e-6, -3e-6)):
        c = PairConfiguration(0.0, y1, 0.0, y2, 0.0)
        assert initial_density(y1, y2, stats, p_fast) == pytest.approx(
            joint_density(c, stats, p_fast), rel=1e-13
        )


def test_same_side_probability_frozen(p_slow, p_fast):
    for stats, ref in SAME_SIDE_SLOW.items():
        assert same_side_probability(stats, p_slow, 1e-7) == pytest.approx(ref, abs=2e-7)
    for stats in SpinStatistics:
        assert same_side_probability(stats, p_fast, 1e-8) == pytest.approx(
            SAME_SIDE_FAST, rel=1e-3
        )


coord = st.floats(min_value=-1.2e-5, max_value=1.2e-5)
tval = st.floats(min_value=0.0, max_value=1e-7)


@settings(max_examples=60, deadline=None)
@given(y1=coord, y2=coord, t=tval)
def test_density_exchange_symmetric(p_fast, y1, y2, t):
    a = joint_density_y(np.array([y1]), np.array([y2]), t, SpinStatistics.BOSON, p_fast)[0]
    b = joint_density_y(np.array([y2]), np.array([y1]), t, SpinStatistics.BOSON, p_fast)[0]
    assert a == pytest.approx(b, rel=1e-12, abs=1e-30)


@settings(max_examples=60, deadline=None)
@given(y1=coord, y2=coord, t=tval)
def test_density_parity_symmetric(p_fast, y1, y2, t):
    for stats in SpinStatistics:
        a = joint_density_y(np.array([y1]), np.array([y2]), t, stats, p_fast)[0]
        b = joint_density_y(np.array([-y1]), np.array([-y2]), t, stats, p_fast)[0]
        assert a == pytest.approx(b, rel=1e-12, abs=1e-30)


@settings(max_examples=40, deadline=None)
@given(y1=coord, y2=coord, t=tval)
def test_density_nonnegative_finite(p_fast, y1, y2, t):
    for stats in SpinStatistics:
        d = joint_density_y(np.array([y1]), np.array([y2]), t, stats, p_fast)[0]
        assert d >= 0.0
        assert math.isfinite(d)
