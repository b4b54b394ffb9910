import json
import math

import numpy as np
import pytest

from shadowsim.errors import DomainError, EmptyFootprintError, HeightFieldError
from shadowsim.geometry import GlobalCartesian
from shadowsim.heightfield import (
    HeightField,
    SURFACE_ELEVATED_TOP,
    SURFACE_GROUND,
    SURFACE_WALL_FACE,
    flat_field,
    load_heightfield,
    project_shadow,
    raycast,
)
from shadowsim.light import LightPose, RobotGeometry, forward_project_flat


def write_field(tmp_path, doc, name="field.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return p


def wall_field() -> HeightField:
    """10x10 m flat field with a 2 m wall one cell thick at x in [2, 2.5)."""
    nx = ny = 20
    heights = np.zeros((ny, nx))
    heights[:, 14] = 2.0  # x in [2.0, 2.5) with origin -5, cell 0.5
    return HeightField(GlobalCartesian(-5.0, -5.0), 0.5, nx, ny, heights)


class TestLoad:
    def test_flat_two_by_two(self, tmp_path):
        p = write_field(tmp_path, {
            "cell_size": 1.0, "origin": [0.0, 0.0], "nx": 2, "ny": 2,
            "heights": [0.0, 0.0, 0.0, 0.0],
        })
        env = load_heightfield(p)
        assert env.max_x == 2.0 and env.max_y == 2.0
        assert env.height_at(0.5, 1.5) == 0.0

    def test_wall_column(self, tmp_path):
        p = write_field(tmp_path, {
            "cell_size": 1.0, "origin": [0.0, 0.0], "nx": 3, "ny": 1,
            "heights": [0.0, 2.0, 0.0],
        })
        env = load_heightfield(p)
        assert env.height_at(1.5, 0.5) == 2.0

    def test_wrong_count_is_rejected(self, tmp_path):
        p = write_field(tmp_path, {
            "cell_size": 1.0, "origin": [0.0, 0.0], "nx": 2, "ny": 2,
            "heights": [0.0, 0.0, 0.0],
        })
        with pytest.raises(HeightFieldError, match="expected nx\\*ny"):
            load_heightfield(p)

    def test_unknown_keys_rejected(self, tmp_path):
        p = write_field(tmp_path, {
            "cell_size": 1.0, "origin": [0, 0], "nx": 1, "ny": 1,
            "heights": [0.0], "comment": "nope",
        })
        with pytest.raises(HeightFieldError, match="unknown keys"):
            load_heightfield(p)

    def test_parse_error_reports_position(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{"cell_size": 1.0,\n  "origin": [0, 0,\n}', encoding="utf-8")
        with pytest.raises(HeightFieldError, match="line"):
            load_heightfield(p)

    def test_negative_height_names_cell(self, tmp_path):
        p = write_field(tmp_path, {
            "cell_size": 1.0, "origin": [0, 0], "nx": 2, "ny": 1,
            "heights": [0.0, -1.0],
        })
        with pytest.raises(HeightFieldError, match="heights\\[1\\]"):
            load_heightfield(p)

    def test_missing_key(self, tmp_path):
        p = write_field(tmp_path, {"cell_size": 1.0, "origin": [0, 0], "nx": 1, "ny": 1})
        with pytest.raises(HeightFieldError, match="missing keys"):
            load_heightfield(p)


class TestRaycast:
    def test_vertical_drop(self):
        env = flat_field(2.0, 1.0)
        hit = raycast((0.5, 0.5, 1.0), (0.0, 0.0, -1.0), env)
        assert hit is not None
        assert hit.surface_kind == SURFACE_GROUND
        assert (hit.position.x, hit.position.y, hit.position.z) == (0.5, 0.5, 0.0)

    def test_upward_ray_misses(self):
        env = flat_field(2.0, 1.0)
        assert raycast((0.5, 0.5, 1.0), (0.0, 0.0, 1.0), env) is None

    def test_oblique_matches_plane_intersection(self):
        env = flat_field(10.0, 1.0)
        rng = np.random.default_rng(5)
        for _ in range(200):
            origin = (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)), float(rng.uniform(0.5, 3)))
            d = rng.normal(size=3)
            d[2] = -abs(d[2]) - 0.1
            d = d / np.linalg.norm(d)
            hit = raycast(origin, tuple(float(v) for v in d), env)
            t = -origin[2] / d[2]
            expect = (origin[0] + d[0] * t, origin[1] + d[1] * t)
            if abs(expect[0]) > 9.9 or abs(expect[1]) > 9.9:
                continue
            assert hit is not None
            assert hit.position.x == pytest.approx(expect[0], abs=1e-9)
            assert hit.position.y == pytest.approx(expect[1], abs=1e-9)
            assert hit.position.z == 0.0

    def test_wall_face_hit(self):
        env = wall_field()
        # From the left, descending slightly, aimed at the wall.
        n = math.hypot(1.0, 0.01)
        hit = raycast((0.0, 0.0, 1.0), (1.0 / n, 0.0, -0.01 / n), env)
        assert hit is not None
        assert hit.surface_kind == SURFACE_WALL_FACE
        assert hit.position.x == pytest.approx(2.0, abs=1e-9)

    def test_wall_top_hit(self):
        env = wall_field()
        hit = raycast((2.25, 0.0, 3.0), (0.0, 0.0, -1.0), env)
        assert hit is not None
        assert hit.surface_kind == SURFACE_ELEVATED_TOP
        assert hit.position.z == pytest.approx(2.0)

    def test_origin_below_surface_rejected(self):
        env = wall_field()
        with pytest.raises(DomainError, match="below"):
            raycast((2.25, 0.0, 1.0), (0.0, 0.0, -1.0), env)

    def test_non_unit_direction_rejected(self):
        env = flat_field(2.0, 1.0)
        with pytest.raises(DomainError, match="unit"):
            raycast((0.0, 0.0, 1.0), (0.0, 0.0, -2.0), env)

    def test_entry_from_outside_bounds(self):
        env = flat_field(2.0, 1.0)
        n = math.sqrt(1 + 1)
        hit = raycast((-3.0, 0.0, 1.0), (1.0 / n, 0.0, -1.0 / n), env)
        assert hit is not None
        assert hit.position.x == pytest.approx(-2.0, abs=1e-9)
        assert hit.position.z == pytest.approx(0.0, abs=1e-9)

    def test_ray_exits_field(self):
        env = flat_field(2.0, 1.0)
        n = math.hypot(1.0, 0.001)
        assert raycast((0.0, 0.0, 1.0), (1.0 / n, 0.0, -0.001 / n), env) is None


class TestProjectShadow:
    GEOM = RobotGeometry(height_h=1.0, footprint_radius=0.3)

    def test_flat_tip_matches_analytic(self):
        env = flat_field(40.0, 1.0)
        rng = np.random.default_rng(13)
        for _ in range(300):
            p = GlobalCartesian(float(rng.uniform(-8, 8)), float(rng.uniform(-8, 8)))
            pose = LightPose(float(rng.uniform(0.08, 1.4)), float(rng.uniform(0, 2 * math.pi)))
            foot = project_shadow(p, self.GEOM, pose, env)
            expect = forward_project_flat(p, self.GEOM.height_h, pose)
            assert foot.tip.position.planar_distance(expect) < max(1e-6, 1e-3 * env.cell_size)

    def test_wall_bends_the_shadow(self):
        env = wall_field()
        # Robot 1.5 m left of the wall, light pointing at it with a long shadow.
        pose = LightPose(math.radians(10.0), 0.0)
        foot = project_shadow(GlobalCartesian(0.5, 0.0), self.GEOM, pose, env)
        assert foot.tip.surface_kind == SURFACE_WALL_FACE
        assert foot.tip.position.x == pytest.approx(2.0, abs=1e-9)
        assert 0.0 < foot.tip.position.z < 2.0

    def test_point_silhouette_degenerates_to_base_and_tip(self):
        env = flat_field(10.0, 1.0)
        geom = RobotGeometry(height_h=1.0, footprint_radius=0.0)
        pose = LightPose(math.radians(45.0), 0.0)
        foot = project_shadow(GlobalCartesian(0.0, 0.0), geom, pose, env)
        assert len(foot.points) == 2
        base, tip = foot.points
        assert (base.position.x, base.position.y) == (0.0, 0.0)
        assert tip == foot.tip
        assert tip.position.x == pytest.approx(1.0)

    def test_default_sampling_produces_nine_points(self):
        env = flat_field(10.0, 1.0)
        pose = LightPose(math.radians(45.0), 0.0)
        foot = project_shadow(GlobalCartesian(0.0, 0.0), self.GEOM, pose, env)
        assert len(foot.points) == 9

    def test_occlusion_consistency(self):
        env = wall_field()
        pose = LightPose(math.radians(10.0), 0.0)
        foot = project_shadow(GlobalCartesian(0.5, 0.0), self.GEOM, pose, env)
        d = pose.light_direction()
        for pt in foot.points:
            # Walking slightly back along the ray from each hit must stay in free space.
            for back in (0.05, 0.2, 0.5):
                probe = (
                    pt.position.x - d[0] * back,
                    pt.position.y - d[1] * back,
                    pt.position.z - d[2] * back,
                )
                if env.in_bounds(probe[0], probe[1]):
                    assert probe[2] >= env.height_at(probe[0], probe[1]) - 1e-6

    def test_bit_identical_reruns(self):
        env = wall_field()
        pose = LightPose(math.radians(12.0), 0.1)
        a = project_shadow(GlobalCartesian(0.4, 0.2), self.GEOM, pose, env)
        b = project_shadow(GlobalCartesian(0.4, 0.2), self.GEOM, pose, env)
        assert a == b

    def test_grid_refinement_moves_points_less_than_a_cell(self):
        # The same staircase surface sampled at two resolutions.
        def staircase(cell):
            n = int(8.0 / cell)
            heights = np.zeros((n, n))
            for iy in range(n):
                for ix in range(n):
                    x = -4.0 + (ix + 0.5) * cell
                    heights[iy, ix] = 1.0 if x > 1.0 else 0.0
            return HeightField(GlobalCartesian(-4.0, -4.0), cell, n, n, heights)

        coarse = staircase(0.5)
        fine = staircase(0.25)
        pose = LightPose(math.radians(20.0), 0.0)
        geom = RobotGeometry(height_h=1.5, footprint_radius=0.2)
        fc = project_shadow(GlobalCartesian(-1.0, 0.0), geom, pose, coarse)
        ff = project_shadow(GlobalCartesian(-1.0, 0.0), geom, pose, fine)
        assert len(fc.points) == len(ff.points)
        for a, b in zip(fc.points, ff.points):
            delta = math.dist(
                (a.position.x, a.position.y, a.position.z),
                (b.position.x, b.position.y, b.position.z),
            )
            assert delta < coarse.cell_size

    def test_all_rays_missing_raises(self):
        env = flat_field(1.0, 1.0)
        pose = LightPose(math.radians(3.0), 0.0)  # ~19 m shadow leaves the 2 m field
        with pytest.raises(EmptyFootprintError):
            project_shadow(GlobalCartesian(0.9, 0.0), RobotGeometry(1.0, 0.0), pose, env)

    def test_robot_outside_bounds_rejected(self):
        env = flat_field(1.0, 1.0)
        with pytest.raises(DomainError, match="outside"):
            project_shadow(GlobalCartesian(5.0, 0.0), self.GEOM, LightPose(0.5, 0.0), env)
