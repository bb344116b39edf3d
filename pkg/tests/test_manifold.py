import numpy as np
import pytest

from grassint import manifold as mf
from grassint.errors import (
    BaseMismatch,
    DimensionMismatch,
    GeodesicArcWarning,
    OutOfInjectivityBall,
    RankDeficient,
    SubspacesNotInGenericPosition,
)

RNG = np.random.default_rng(42)


def random_point(n, m, rng=RNG):
    return mf.make_point(rng.standard_normal((n, m)))


def random_pair_in_ball(n, m, rng=RNG):
    """A pair with all principal angles strictly below pi/2."""
    x = random_point(n, m, rng)
    delta = rng.standard_normal((n, m))
    delta -= x.representative @ (x.representative.T @ delta)
    delta *= 0.4 * (np.pi / 2) / np.linalg.norm(delta)
    y = mf.exp_map(x, mf.TangentVector(base=x, delta=delta))
    return x, y


def planar_line(theta, n=3):
    vec = np.zeros((n, 1))
    vec[0, 0] = np.cos(theta)
    vec[1, 0] = np.sin(theta)
    return mf.make_point(vec)


class TestMakePoint:
    def test_identity_block_unchanged(self):
        basis = np.eye(4, 2)
        point = mf.make_point(basis)
        assert np.allclose(point.representative, basis)

    def test_scaled_axis_normalized(self):
        point = mf.make_point(np.array([[2.0], [0.0], [0.0]]))
        assert np.allclose(point.representative, [[1.0], [0.0], [0.0]])

    def test_right_multiplication_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = rng.standard_normal((7, 3))
            a = rng.standard_normal((3, 3))
            while abs(np.linalg.det(a)) < 1e-3:
                a = rng.standard_normal((3, 3))
            d = mf.distance(mf.make_point(x), mf.make_point(x @ a))
            assert d <= 1e-10

    def test_rank_deficient_rejected(self):
        basis = np.ones((5, 2))
        with pytest.raises(RankDeficient):
            mf.make_point(basis)


class TestMetricInner:
    def test_zero_vector(self):
        x = random_point(5, 2)
        v = mf.TangentVector(base=x, delta=np.zeros((5, 2)))
        assert mf.metric_inner(v, v) == 0.0

    def test_single_entry(self):
        x = mf.make_point(np.eye(4, 2))
        delta = np.zeros((4, 2))
        delta[2, 1] = 3.0
        v = mf.TangentVector(base=x, delta=delta)
        assert mf.metric_inner(v, v) == pytest.approx(9.0)

    def test_matches_elementwise_sum_oracle(self):
        rng = np.random.default_rng(1)
        x = random_point(6, 2, rng)
        proj = lambda d: d - x.representative @ (x.representative.T @ d)
        d1 = proj(rng.standard_normal((6, 2)))
        d2 = proj(rng.standard_normal((6, 2)))
        v1 = mf.TangentVector(base=x, delta=d1)
        v2 = mf.TangentVector(base=x, delta=d2)
        oracle = sum(
            d1[i, j] * d2[i, j] for i in range(6) for j in range(2)
        )
        assert mf.metric_inner(v1, v2) == pytest.approx(oracle, abs=1e-12)

    def test_base_mismatch(self):
        rng = np.random.default_rng(2)
        x, y = random_point(5, 2, rng), random_point(5, 2, rng)
        v1 = mf.TangentVector(base=x, delta=np.zeros((5, 2)))
        v2 = mf.TangentVector(base=y, delta=np.zeros((5, 2)))
        with pytest.raises(BaseMismatch):
            mf.metric_inner(v1, v2)


class TestPrincipalAnglesAndDistance:
    def test_same_point_zero(self):
        x = random_point(6, 3)
        assert mf.principal_angles(x, x).angles == pytest.approx(np.zeros(3))
        assert mf.distance(x, x) == pytest.approx(0.0, abs=1e-14)

    def test_planar_rotation(self):
        x = planar_line(0.0)
        y = planar_line(0.3)
        assert mf.principal_angles(x, y).angles == pytest.approx([0.3])
        assert mf.distance(x, y) == pytest.approx(0.3)

    def test_orthogonal_lines(self):
        x = planar_line(0.0)
        y = mf.make_point(np.array([[0.0], [1.0], [0.0]]))
        assert mf.principal_angles(x, y).angles == pytest.approx([np.pi / 2])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mf.distance(random_point(5, 2), random_point(6, 2))

    def test_two_routes_agree(self):
        # Independent oracle: d = ||arctan(Sigma)||_F with Sigma the singular
        # values of Y (X^T Y)^{-1} - X, computed from scratch here.
        rng = np.random.default_rng(3)
        for _ in range(100):
            x, y = random_pair_in_ball(10, 3, rng)
            overlap = x.representative.T @ y.representative
            direction = y.representative @ np.linalg.inv(overlap) - x.representative
            sigma = np.linalg.svd(direction, compute_uv=False)
            oracle = np.linalg.norm(np.arctan(sigma))
            assert mf.distance(x, y) == pytest.approx(oracle, abs=1e-8)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            x, y, z = (random_point(8, 3, rng) for _ in range(3))
            assert mf.distance(x, y) == pytest.approx(mf.distance(y, x), abs=1e-12)
            assert mf.distance(x, z) <= mf.distance(x, y) + mf.distance(y, z) + 1e-9


class TestExpLog:
    def test_log_at_self_is_zero(self):
        x = random_point(5, 2)
        assert mf.log_map(x, x).norm() == pytest.approx(0.0, abs=1e-12)

    def test_planar_closed_form(self):
        x = planar_line(0.0)
        y = planar_line(0.3)
        v = mf.log_map(x, y)
        assert v.norm() == pytest.approx(0.3)
        assert v.delta.ravel() == pytest.approx([0.0, 0.3, 0.0], abs=1e-12)

    def test_exp_of_zero_is_identity(self):
        x = random_point(6, 2)
        v = mf.TangentVector(base=x, delta=np.zeros((6, 2)))
        assert mf.distance(mf.exp_map(x, v), x) == pytest.approx(0.0, abs=1e-12)

    def test_exp_planar_closed_form(self):
        x = planar_line(0.0)
        delta = np.array([[0.0], [0.3], [0.0]])
        y = mf.exp_map(x, mf.TangentVector(base=x, delta=delta))
        assert mf.distance(y, planar_line(0.3)) == pytest.approx(0.0, abs=1e-12)

    def test_exp_log_roundtrip(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            x, y = random_pair_in_ball(9, 3, rng)
            z = mf.exp_map(x, mf.log_map(x, y))
            assert mf.distance(z, y) <= 1e-8

    def test_log_norm_equals_distance(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            x, y = random_pair_in_ball(12, 4, rng)
            v = mf.log_map(x, y)
            assert np.sqrt(mf.metric_inner(v, v)) == pytest.approx(
                mf.distance(x, y), abs=1e-8
            )

    def test_out_of_injectivity_ball(self):
        x = planar_line(0.0)
        y = mf.make_point(np.array([[0.0], [1.0], [0.0]]))
        with pytest.raises(OutOfInjectivityBall):
            mf.log_map(x, y)


class TestGeodesic:
    def test_endpoints(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            x, y = random_pair_in_ball(10, 3, rng)
            assert mf.distance(mf.geodesic_eval(x, y, 0.0), x) <= 1e-10
            assert mf.distance(mf.geodesic_eval(x, y, 1.0), y) <= 1e-10

    def test_planar_midpoint(self):
        x = planar_line(0.0)
        y = planar_line(0.3)
        mid = mf.geodesic_eval(x, y, 0.5)
        assert mf.distance(mid, planar_line(0.15)) == pytest.approx(0.0, abs=1e-12)

    def test_matches_exp_log_route(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            x, y = random_pair_in_ball(8, 3, rng)
            v = mf.log_map(x, y)
            scaled = mf.TangentVector(base=x, delta=0.37 * v.delta)
            via_exp = mf.exp_map(x, scaled)
            assert mf.distance(mf.geodesic_eval(x, y, 0.37), via_exp) <= 1e-8

    def test_constant_speed(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            x, y = random_pair_in_ball(10, 3, rng)
            d = mf.distance(x, y)
            for s in np.linspace(0.0, 1.0, 7):
                assert mf.distance(x, mf.geodesic_eval(x, y, s)) == pytest.approx(
                    s * d, abs=1e-8
                )

    def test_singular_overlap_rejected(self):
        x = planar_line(0.0)
        y = mf.make_point(np.array([[0.0], [1.0], [0.0]]))
        with pytest.raises(SubspacesNotInGenericPosition):
            mf.geodesic_eval(x, y, 0.5)

    def test_arc_warning_on_long_extrapolation(self):
        x = planar_line(0.0)
        y = planar_line(0.4)
        with pytest.warns(GeodesicArcWarning):
            mf.geodesic_eval(x, y, 4.5)


class TestRepresentativeInvariance:
    def test_all_operations(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            basis_x = rng.standard_normal((8, 3))
            basis_y = rng.standard_normal((8, 3))
            a = rng.standard_normal((3, 3)) + 3 * np.eye(3)
            x1, x2 = mf.make_point(basis_x), mf.make_point(basis_x @ a)
            y = mf.make_point(basis_y)
            assert mf.distance(x1, x2) <= 1e-10
            assert mf.distance(x1, y) == pytest.approx(mf.distance(x2, y), abs=1e-9)
            g1 = mf.geodesic_eval(x1, y, 0.3)
            g2 = mf.geodesic_eval(x2, y, 0.3)
            assert mf.distance(g1, g2) <= 1e-8


class TestHypothesisCheck:
    def test_single_point(self):
        report = mf.check_hypothesis_H([random_point(5, 2)])
        assert report.verdict == "PASS"
        assert report.max_pairwise_distance == 0.0

    def test_planar_family(self):
        points = [planar_line(t) for t in (0.0, 0.2, 0.4)]
        report = mf.check_hypothesis_H(points)
        assert report.verdict == "PASS"
        assert report.max_pairwise_distance == pytest.approx(0.4)

    def test_orthogonal_pair_warns(self):
        x = planar_line(0.0)
        y = mf.make_point(np.array([[0.0], [1.0], [0.0]]))
        report = mf.check_hypothesis_H([x, y])
        assert report.verdict == "WARN"
