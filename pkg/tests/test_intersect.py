import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvecross.curves import TrigCurve, evaluate, point_radius_bound
from curvecross.intersect import (
    CountingConfig,
    brute_force_count,
    count_intersections,
    newton_refine,
    segment_proper_cross,
)
from curvecross.sampling import SeedSpec, sample_pair

from _support import circle_at, rotate_curve, unit_circle

TWO_PI = 2.0 * math.pi


def shifted_circle() -> TrigCurve:
    return TrigCurve(1, [1.5, 1.0], [0.0], [0.0, 0.0], [1.0])


def far_small_circle() -> TrigCurve:
    return TrigCurve(1, [3.0, 0.2], [0.0], [0.0, 0.0], [0.2])


class TestSegmentProperCross:
    def test_plus_sign(self):
        assert segment_proper_cross((0, -1), (0, 1), (-1, 0), (1, 0))

    def test_parallel(self):
        assert not segment_proper_cross((0, 0), (1, 0), (0, 1), (1, 1))

    def test_endpoint_touch(self):
        assert not segment_proper_cross((0, 0), (1, 0), (1, 0), (2, 0))

    def test_collinear_overlap(self):
        assert not segment_proper_cross((0, 0), (2, 0), (1, 0), (3, 0))

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError, match="zero-length"):
            segment_proper_cross((0, 0), (0, 0), (0, 1), (1, 0))

    finite = st.floats(-10, 10, allow_nan=False)

    @given(finite, finite, finite, finite, finite, finite, finite, finite)
    def test_symmetries(self, ax, ay, bx, by, cx, cy, dx, dy):
        p1, p2, q1, q2 = (ax, ay), (bx, by), (cx, cy), (dx, dy)
        if p1 == p2 or q1 == q2:
            return

        def orient(a, b, c):
            return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

        ds = [orient(p1, p2, q1), orient(p1, p2, q2), orient(q1, q2, p1), orient(q1, q2, p2)]
        if min(abs(d) for d in ds) <= 1e-9:
            return  # too close to a non-generic touch for float sign stability
        base = segment_proper_cross(p1, p2, q1, q2)
        assert segment_proper_cross(q1, q2, p1, p2) == base
        assert segment_proper_cross(p2, p1, q1, q2) == base
        assert segment_proper_cross(p1, p2, q2, q1) == base


class TestTwoCircleFixtures:
    def test_crossing_pair(self):
        res = count_intersections(unit_circle(), shifted_circle())
        assert res.count == 2
        assert not res.degenerate
        assert res.oracle_stable is None
        # both crossings sit on the vertical chord x = 0.75
        for phi, psi in res.solutions:
            p = evaluate(unit_circle(), phi)
            q = evaluate(shifted_circle(), psi)
            assert math.hypot(p.x - q.x, p.y - q.y) <= 1e-9 * point_radius_bound(1, 0)
            assert p.x == pytest.approx(0.75, abs=1e-9)
            assert abs(p.y) == pytest.approx(math.sqrt(1 - 0.75**2), abs=1e-9)

    def test_disjoint_images(self):
        res = count_intersections(unit_circle(), far_small_circle())
        assert res.count == 0
        assert not res.degenerate
        assert res.solutions == []
        assert math.isinf(res.min_abs_det)

    def test_coincident_images_flagged(self):
        res = count_intersections(unit_circle(), unit_circle())
        assert res.degenerate

    def test_brute_force_fixtures(self):
        assert brute_force_count(unit_circle(), shifted_circle(), 1024) == (2, True)
        assert brute_force_count(unit_circle(), far_small_circle(), 256) == (0, True)

    def test_brute_force_resolution_floor(self):
        with pytest.raises(ValueError):
            brute_force_count(unit_circle(), shifted_circle(), 128)


class TestNewton:
    def test_converges_from_nearby_seed(self):
        phi_true = math.acos(0.75)
        psi_true = math.pi - phi_true
        hit = newton_refine(unit_circle(), shifted_circle(), phi_true + 0.01, psi_true - 0.02)
        assert hit is not None
        phi, psi, det = hit
        p = evaluate(unit_circle(), phi)
        q = evaluate(shifted_circle(), psi)
        assert math.hypot(p.x - q.x, p.y - q.y) < 1e-10
        assert abs(det) > 0.1

    def test_exact_seed_returned_unchanged(self):
        phi_true = math.acos(0.75)
        psi_true = math.pi - phi_true
        hit = newton_refine(unit_circle(), shifted_circle(), phi_true, psi_true)
        assert hit is not None
        assert hit[0] == phi_true and hit[1] == psi_true

    def test_singular_family_fails(self):
        assert newton_refine(unit_circle(), unit_circle(), 0.3, 0.7) is None


class TestConstantCurves:
    def test_distinct_points(self):
        a = TrigCurve(0, [0.1], [], [0.2], [])
        b = TrigCurve(0, [-0.3], [], [0.0], [])
        res = count_intersections(a, b)
        assert res.count == 0 and not res.degenerate

    def test_coincident_points_flagged(self):
        a = TrigCurve(0, [0.1], [], [0.2], [])
        res = count_intersections(a, a)
        assert res.count == 0 and res.degenerate

    def test_point_against_circle(self):
        point = TrigCurve(1, [0.2, 0.0], [0.0], [0.1, 0.0], [0.0])
        res = count_intersections(point, unit_circle())
        assert res.count == 0 and not res.degenerate


class TestDegreeMismatch:
    def test_rejected(self):
        with pytest.raises(ValueError, match="degree mismatch"):
            count_intersections(unit_circle(), TrigCurve.zero(2))


class TestRandomPairs:
    def test_oracle_agreement_degree_two(self):
        agree = comparable = 0
        for i in range(150):
            pair = sample_pair(2, 0, SeedSpec(2024, i))
            res = count_intersections(pair.f, pair.g)
            count, stable = brute_force_count(pair.f, pair.g, 256)
            if res.degenerate or not stable:
                continue
            comparable += 1
            agree += res.count == count
        assert comparable > 100
        assert agree / comparable >= 0.99

    def test_parity_bound_and_flag_rate(self):
        # non-degenerate counts are even, at most 4N^2, mutually separated
        # solutions, and tiny residuals; flagged samples stay below 0.1%
        degenerate = 0
        total = 0
        for N in (1, 2, 3):
            cap = 4 * N * N
            radius = point_radius_bound(N, 0)
            for i in range(3334):
                pair = sample_pair(N, 0, SeedSpec(3000 + N, i))
                res = count_intersections(pair.f, pair.g)
                total += 1
                if res.degenerate:
                    degenerate += 1
                    continue
                assert res.count % 2 == 0
                assert res.count <= cap
                assert res.count == len(res.solutions)
                for phi, psi in res.solutions:
                    p = evaluate(pair.f, phi)
                    q = evaluate(pair.g, psi)
                    assert math.hypot(p.x - q.x, p.y - q.y) <= 1e-9 * radius
        assert degenerate / total <= 0.001

    def test_solution_separation(self):
        cfg = CountingConfig()
        for i in range(60):
            pair = sample_pair(2, 0, SeedSpec(41, i))
            res = count_intersections(pair.f, pair.g, cfg)
            sols = res.solutions
            for a in range(len(sols)):
                for b in range(a + 1, len(sols)):
                    dphi = abs(sols[a][0] - sols[b][0]) % TWO_PI
                    dpsi = abs(sols[a][1] - sols[b][1]) % TWO_PI
                    gap = math.hypot(min(dphi, TWO_PI - dphi), min(dpsi, TWO_PI - dpsi))
                    assert gap > cfg.dedupe_radius

    def test_rotation_invariance(self):
        theta = 0.731
        checked = 0
        for i in range(100):
            pair = sample_pair(2, 0, SeedSpec(52, i))
            res = count_intersections(pair.f, pair.g)
            rot = count_intersections(rotate_curve(pair.f, theta), rotate_curve(pair.g, theta))
            if res.degenerate or rot.degenerate:
                continue
            checked += 1
            assert res.count == rot.count
        assert checked >= 95


class TestCountingConfig:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            CountingConfig(seg_target=0.0)
        with pytest.raises(ValueError):
            CountingConfig(newton_tol=-1.0)
        with pytest.raises(ValueError):
            CountingConfig(max_newton_iters=0)

    def test_custom_seg_target_used(self):
        fine = CountingConfig(seg_target=0.005)
        res = count_intersections(unit_circle(), shifted_circle(), fine)
        assert res.count == 2
