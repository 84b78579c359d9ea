import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.core.domain import (
    Ball, Cluster, IdealApprox, Tri, canonical_clusters, cluster_leq,
    cluster_valid, cluster_valid_at, cluster_valid_by_intersection,
    delta_extract, ideal_approx, ideal_represents, least_ideal_clusters,
    least_ideal_contains, least_ideal_stream, refuting_ball
)
from urysel.core.effective import FiniteSpace, RealLine
from urysel.core.metric import ExtensionRequest, FinMetric
from urysel.core.numeric import FastCauchy, two_pow
from urysel.core.urysohn import UrysohnBuilder
from urysel.exceptions import (
    EmptyStream, InvalidRequest, NotDecidable, RadiusScheduleViolated
)

LINE = RealLine()
SQUARE = FiniteSpace(FinMetric.from_matrix(
    [0, 1, 2, 3],
    [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
))
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=16)


class InexactLine(RealLine):
    kind = 'inexact-line'
    exact = False


class TestClusters:
    def test_001_ball_radius(self):
        with pytest.raises(InvalidRequest):
            Ball(0, 0)
        with pytest.raises(InvalidRequest):
            Cluster(())

    def test_002_cluster_normal_form(self):
        cluster = Cluster.of((1, Fraction(1, 2)), (0, 1), (1, Fraction(1, 2)))
        assert len(cluster) == 2
        assert cluster.balls[0] == Ball(0, 1)
        assert cluster.max_radius == 1
        assert cluster.height == 2

    def test_003_validity(self):
        # centers 0 and 1 at distance 1
        assert cluster_valid(LINE, Cluster.of((0, Fraction(1, 2)),
                                              (1, Fraction(1, 2))))
        assert not cluster_valid(LINE, Cluster.of((0, Fraction(1, 4)),
                                                  (1, Fraction(1, 2))))

    def test_004_validity_at_precision(self):
        tight = Cluster.of((0, Fraction(1, 2)), (1, Fraction(1, 2)))
        assert cluster_valid_at(LINE, tight, 10) is Tri.UNKNOWN
        loose = Cluster.of((0, 1), (1, 1))
        assert cluster_valid_at(LINE, loose, 10) is Tri.YES
        broken = Cluster.of((0, Fraction(1, 8)), (1, Fraction(1, 8)))
        assert cluster_valid_at(LINE, broken, 10) is Tri.NO

    def test_005_preorder(self):
        big = Cluster.of((0, 2))
        small = Cluster.of((1, Fraction(1, 2)))
        assert cluster_leq(LINE, big, small)
        assert not cluster_leq(LINE, small, big)
        chain = ideal_approx(LINE, [big, small])
        assert chain.chain == (big, small)
        with pytest.raises(InvalidRequest):
            ideal_approx(LINE, [small, big])

    def test_006_not_decidable(self):
        with pytest.raises(NotDecidable):
            cluster_valid(InexactLine(), Cluster.of((0, 1)))

    def test_007_canonical(self):
        clusters = canonical_clusters(2)
        heights = [c.height for c in clusters]
        assert heights == sorted(heights)
        assert Cluster.of((0, 1)) in clusters
        assert all(c.height <= 2 for c in clusters)
        assert len(set(clusters)) == len(clusters)


class TestLeastIdeal:
    def test_001_grows(self):
        x = LINE.point(Fraction(1, 3))
        previous = []
        for k in range(4):
            clusters = least_ideal_clusters(LINE, x, k)
            assert set(previous) <= set(clusters)
            assert clusters == sorted(
                clusters, key=lambda c: (c.height, len(c), c.balls)
            )
            previous = clusters

    def test_002_members_contain_point(self):
        x = LINE.point(Fraction(-2, 7))
        for cluster in least_ideal_clusters(LINE, x, 3):
            for ball in cluster:
                assert abs(LINE.dense(ball.center) - Fraction(-2, 7)) \
                    < ball.radius

    def test_003_contains_monotone(self):
        x = LINE.point(Fraction(1, 3))
        cluster = Cluster.of((0, Fraction(1, 2)))
        verdicts = [least_ideal_contains(LINE, x, cluster, k)
                    for k in range(6)]
        assert verdicts == sorted(verdicts)
        assert verdicts[-1]
        assert not least_ideal_contains(
            LINE, x, Cluster.of((0, Fraction(1, 4))), 8
        )

    @settings(max_examples=25)
    @given(rationals)
    def test_004_round_trip(self, q):
        x = LINE.point(q)
        extracted = delta_extract(LINE, least_ideal_stream(LINE, x))
        for n in range(12):
            assert abs(extracted.approx(n) - q) <= two_pow(n)

    def test_005_stream_of_sqrt2(self):
        from math import isqrt

        x = FastCauchy(lambda n: Fraction(isqrt(2 << (2 * n)), 1 << n), 'R')
        extracted = delta_extract(LINE, least_ideal_stream(LINE, x))
        for n in range(8):
            assert abs(extracted.approx(n) ** 2 - 2) <= 3 * two_pow(n)

    def test_006_ball_around_own_index(self):
        # dense point 0 is the rational 0
        x = LINE.point(0)
        clusters = least_ideal_clusters(LINE, x, 3)
        assert Cluster.of((0, Fraction(1, 3))) in clusters
        assert Cluster.of((0, Fraction(1, 3)), (0, 1)) in clusters
        # radius 1/3 has height 3
        assert Cluster.of((0, Fraction(1, 3))) not in \
            least_ideal_clusters(LINE, x, 2)

    def test_007_several_balls(self):
        x = LINE.point(Fraction(1, 2))
        clusters = least_ideal_clusters(LINE, x, 4)
        assert Cluster.of((0, 1), (1, 1)) in clusters
        assert any(len(c) == 4 for c in clusters)

    def test_008_interior_not_boundary(self):
        x = LINE.point(Fraction(1, 2))
        assert least_ideal_contains(
            LINE, x, Cluster.of((0, Fraction(3, 4))), 2
        )
        clusters = least_ideal_clusters(LINE, x, 4)
        assert Cluster.of((0, Fraction(3, 4))) in clusters
        assert all(Ball(0, Fraction(1, 2)) not in c.balls for c in clusters)

    def test_009_equals_filtered_enumeration(self):
        x = LINE.point(Fraction(1, 3))
        for k in range(4):
            expected = [c for c in canonical_clusters(k)
                        if least_ideal_contains(LINE, x, c, k)]
            assert least_ideal_clusters(LINE, x, k) == expected

    def test_010_finite_space_centers(self):
        x = SQUARE.point(1)
        for cluster in least_ideal_clusters(SQUARE, x, 3):
            assert all(ball.center < SQUARE.size for ball in cluster)


class TestRepresentation:
    def test_001_represents(self):
        q = Fraction(1, 3)
        x = LINE.point(q)
        ideal = IdealApprox((Cluster.of((LINE.index_of(q), Fraction(1, 8))),))
        assert ideal_represents(LINE, ideal, x, Fraction(1, 4)) is Tri.YES
        assert ideal_represents(LINE, ideal, x, Fraction(1, 8)) is Tri.UNKNOWN
        far = LINE.point(Fraction(1))
        assert ideal_represents(LINE, ideal, far, Fraction(1, 4)) is Tri.NO
        assert refuting_ball(LINE, ideal, far) == ideal.chain[0].balls[0]
        assert refuting_ball(LINE, ideal, x) is None

    def test_002_eps_positive(self):
        ideal = IdealApprox((Cluster.of((0, 1)),))
        with pytest.raises(InvalidRequest):
            ideal_represents(LINE, ideal, LINE.point(0), 0)

    def test_003_upward_closure(self):
        q = Fraction(5, 4)
        x = LINE.point(q)
        center = LINE.index_of(q)
        ideal = IdealApprox((Cluster.of((center, Fraction(1, 4))),))
        assert ideal_represents(LINE, ideal, x, Fraction(1, 2)) is Tri.YES
        extended = ideal.extend(Cluster.of((center, two_pow(30)),
                                           (0, Fraction(2))))
        assert ideal_represents(LINE, extended, x, Fraction(1, 2)) \
            is not Tri.NO

    def test_004_hausdorff(self):
        ideal = IdealApprox((Cluster.of((0, Fraction(1, 8))),))
        assert ideal_represents(LINE, ideal, LINE.point(Fraction(1, 2)),
                                Fraction(1, 4)) is Tri.NO


class TestExtraction:
    def test_001_empty(self):
        with pytest.raises(EmptyStream):
            delta_extract(LINE, [])

    def test_002_schedule(self):
        with pytest.raises(RadiusScheduleViolated):
            delta_extract(LINE, [Cluster.of((0, 1))])

    def test_003_finite_stream(self):
        stream = [Cluster.of((0, Fraction(1, 2))),
                  Cluster.of((0, Fraction(1, 4)))]
        x = delta_extract(LINE, stream)
        assert x.approx(1) == 0
        with pytest.raises(EmptyStream):
            x.approx(2)


class TestIntersectionValidity:
    def test_001_nested_balls(self):
        builder = UrysohnBuilder()
        builder.seed()
        builder.realize_rational(ExtensionRequest((0,), (2,)))
        # B(1, 1/2) lies inside B(0, 3)
        assert cluster_valid_by_intersection(
            builder, Cluster.of((0, 3), (1, Fraction(1, 2)))
        )
        assert not cluster_valid_by_intersection(
            builder, Cluster.of((0, Fraction(1, 2)), (1, Fraction(1, 2)))
        )
        assert cluster_valid_by_intersection(
            builder, Cluster.of((0, 1), (1, 1))
        )
