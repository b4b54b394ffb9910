import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shadowsim.errors import DomainError
from shadowsim.geometry import (
    FrameConfig,
    GlobalCartesian,
    VirtualPolar,
    WorldPolar,
    global_to_world_polar,
    map_to_virtual,
    point_in_fov,
    shadow_robot_distance,
    virtual_polar_to_global,
    world_polar_to_global,
    wrap_pi,
    wrap_two_pi,
)

CFG10 = FrameConfig(l_w=10.0)
THETA_V = math.radians(34.0)


class TestWrap:
    def test_wrap_pi_range(self):
        assert wrap_pi(math.pi) == pytest.approx(math.pi)
        assert wrap_pi(-math.pi) == pytest.approx(math.pi)
        assert wrap_pi(0.0) == 0.0
        assert wrap_pi(3 * math.pi) == pytest.approx(math.pi)

    def test_wrap_two_pi_range(self):
        assert wrap_two_pi(2 * math.pi) == 0.0
        assert wrap_two_pi(-0.1) == pytest.approx(2 * math.pi - 0.1)

    @given(st.floats(-50.0, 50.0))
    def test_wrap_pi_is_congruent(self, a):
        w = wrap_pi(a)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)
        assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)


class TestFrameConfig:
    def test_defaults_match_device_constants(self):
        cfg = FrameConfig(l_w=10.0)
        assert cfg.l_v == 5.0
        assert cfg.theta_v == pytest.approx(0.59341, abs=1e-5)
        assert cfg.theta_w == math.pi

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"l_w": 0.0},
            {"l_w": -1.0},
            {"l_w": 10.0, "l_v": 0.0},
            {"l_w": 10.0, "theta_v": 0.0},
            {"l_w": 10.0, "theta_v": 3.2},
            {"l_w": 10.0, "theta_v": 2.0, "theta_w": 1.0},
        ],
    )
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(DomainError):
            FrameConfig(**kwargs)


class TestMapToVirtual:
    def test_robot_at_human(self):
        v = map_to_virtual(WorldPolar(0.0, 0.0), CFG10)
        assert v.r_v == pytest.approx(5.0, abs=1e-12)
        assert v.beta_v == 0.0

    def test_robot_at_rim(self):
        v = map_to_virtual(WorldPolar(10.0, math.pi), CFG10)
        assert v.r_v == pytest.approx(0.0, abs=1e-12)
        assert v.beta_v == pytest.approx(0.59341, abs=1e-5)

    def test_hand_evaluated_interior_point(self):
        v = map_to_virtual(WorldPolar(4.0, math.pi / 2), CFG10)
        assert v.r_v == pytest.approx(3.0, abs=1e-12)
        assert v.beta_v == pytest.approx(0.29671, abs=1e-5)

    def test_rejects_out_of_range_radius(self):
        with pytest.raises(DomainError, match="r_w"):
            map_to_virtual(WorldPolar(10.5, 0.0), CFG10)

    def test_rejects_out_of_range_angle(self):
        with pytest.raises(DomainError, match="beta_w"):
            map_to_virtual(WorldPolar(1.0, -0.1), CFG10)

    @given(
        st.floats(0.0, 10.0),
        st.floats(0.0, 10.0),
        st.floats(0.0, math.pi),
        st.floats(0.0, math.pi),
    )
    def test_linearity_and_monotonicity(self, r1, r2, b1, b2):
        va = map_to_virtual(WorldPolar(r1, b1), CFG10)
        vb = map_to_virtual(WorldPolar(r2, b2), CFG10)
        assert va.r_v - vb.r_v == pytest.approx(-(5.0 / 10.0) * (r1 - r2), abs=1e-12)
        assert va.beta_v - vb.beta_v == pytest.approx((THETA_V / math.pi) * (b1 - b2), abs=1e-12)
        # Strict monotonicity, at gaps a float subtraction can represent.
        if r2 - r1 > 1e-9:
            assert va.r_v > vb.r_v
        if b2 - b1 > 1e-9:
            assert va.beta_v < vb.beta_v


class TestGlobalConversions:
    def test_directly_behind_human(self):
        g = world_polar_to_global(WorldPolar(1.0, math.pi / 2), CFG10)
        assert (g.x, g.y) == (pytest.approx(0.0, abs=1e-12), pytest.approx(-1.0))

    def test_origin(self):
        g = world_polar_to_global(WorldPolar(0.0, 1.234), CFG10)
        assert (g.x, g.y) == (0.0, 0.0)

    def test_right_edge_of_rear_semicircle(self):
        g = world_polar_to_global(WorldPolar(2.0, 0.0), CFG10)
        assert (g.x, g.y) == (pytest.approx(2.0), pytest.approx(0.0, abs=1e-12))

    def test_sector_apex(self):
        g = virtual_polar_to_global(VirtualPolar(0.0, 0.3), CFG10)
        assert (g.x, g.y) == (0.0, 0.0)

    def test_sector_centerline(self):
        g = virtual_polar_to_global(VirtualPolar(1.0, THETA_V / 2), CFG10)
        assert (g.x, g.y) == (pytest.approx(0.0, abs=1e-12), pytest.approx(1.0))

    def test_right_fov_boundary(self):
        g = virtual_polar_to_global(VirtualPolar(5.0, 0.0), CFG10)
        assert g.x == pytest.approx(5.0 * math.sin(math.radians(17.0)), abs=1e-12)
        assert g.y == pytest.approx(5.0 * math.cos(math.radians(17.0)), abs=1e-12)

    def test_respects_human_pose(self):
        cfg = FrameConfig(l_w=4.0, human_position=GlobalCartesian(2.0, -3.0), human_facing=0.0)
        # Facing +x: directly behind is -x.
        g = world_polar_to_global(WorldPolar(1.0, math.pi / 2), cfg)
        assert (g.x, g.y) == (pytest.approx(1.0), pytest.approx(-3.0, abs=1e-12))

    def test_round_trip_world_polar(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            p = WorldPolar(float(rng.uniform(1e-6, 10.0)), float(rng.uniform(0.0, math.pi)))
            r, beta = global_to_world_polar(world_polar_to_global(p, CFG10), CFG10)
            assert r == pytest.approx(p.r_w, abs=1e-9)
            assert wrap_pi(beta - p.beta_w) == pytest.approx(0.0, abs=1e-9)


class TestShadowRobotDistance:
    def test_opposing_unit_points(self):
        p_r = WorldPolar(1.0, math.pi / 2)       # global (0, -1)
        p_d = VirtualPolar(1.0, THETA_V / 2)     # global (0, 1)
        assert shadow_robot_distance(p_r, p_d, CFG10) == pytest.approx(2.0)

    def test_coincident_at_origin(self):
        assert shadow_robot_distance(WorldPolar(0.0, 0.0), VirtualPolar(0.0, 0.0), CFG10) == 0.0

    def test_apex_offset(self):
        assert shadow_robot_distance(WorldPolar(2.0, 0.0), VirtualPolar(0.0, 0.0), CFG10) == pytest.approx(2.0)


class TestFovContainment:
    @given(st.floats(0.0, 10.0), st.floats(0.0, math.pi))
    def test_mapped_setpoints_stay_in_fov(self, r_w, beta_w):
        v = map_to_virtual(WorldPolar(r_w, beta_w), CFG10)
        g = virtual_polar_to_global(v, CFG10)
        assert point_in_fov(g, CFG10)

    def test_point_outside(self):
        assert not point_in_fov(GlobalCartesian(0.0, -1.0), CFG10)
        assert not point_in_fov(GlobalCartesian(0.0, 5.5), CFG10)
