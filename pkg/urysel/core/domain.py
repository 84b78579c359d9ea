"""Domain representation of a separable metric space by ball clusters.

A cluster is a finite set of closed balls B(a_n, r) around dense points
that pairwise satisfy r + s >= d(a_n, a_m). Clusters are preordered by
K <= L iff every ball B(a_n, r) of K has a ball B(a_m, s) in L with
s + d(a_n, a_m) <= r. Ideals are approximated by finite increasing
chains of clusters.

Decisions on exact spaces are exact. On other spaces the membership
questions are answered with :class:`Tri` at a stated precision.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from urysel.core.numeric import FastCauchy, two_pow
from urysel.exceptions import (
    EmptyStream, InvalidRequest, NoWitness, NotDecidable,
    RadiusScheduleViolated, UnknownPoint
)

# stage k of the least ideal reads distances at precision k + STAGE_OFFSET
STAGE_OFFSET = 5


class Tri(Enum):
    YES = 'yes'
    NO = 'no'
    UNKNOWN = 'unknown'


@dataclass(frozen=True, order=True)
class Ball:
    center: int
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'radius', Fraction(self.radius))
        if self.radius <= 0:
            raise InvalidRequest(
                "Ball radius {} is not positive".format(self.radius)
            )


@dataclass(frozen=True)
class Cluster:
    balls: tuple

    def __post_init__(self):
        balls = tuple(sorted(set(self.balls)))
        if not balls:
            raise InvalidRequest("Empty cluster")
        object.__setattr__(self, 'balls', balls)

    @classmethod
    def of(cls, *pairs):
        """Cluster from (center, radius) pairs."""
        return cls(tuple(Ball(c, r) for c, r in pairs))

    @property
    def max_radius(self):
        return max(b.radius for b in self.balls)

    @property
    def height(self):
        return max(max(b.center, b.radius.numerator, b.radius.denominator)
                   for b in self.balls)

    def __iter__(self):
        return iter(self.balls)

    def __len__(self):
        return len(self.balls)


@dataclass(frozen=True)
class IdealApprox:
    """Finite stage of an ideal, a cluster chain increasing in the preorder."""
    chain: tuple

    def extend(self, cluster):
        return IdealApprox(self.chain + (cluster,))


def _require_exact(space):
    if not space.exact:
        raise NotDecidable(
            "Space {} has no exact oracle, use the precision variant".format(
                space.kind
            )
        )


def cluster_valid(space, cluster):
    """Exact pairwise consistency r + s >= d(a_n, a_m)."""
    _require_exact(space)
    for b, c in itertools.combinations(cluster.balls, 2):
        if b.radius + c.radius < space.dist_oracle(b.center, c.center, 0):
            return False
    return True


def cluster_valid_at(space, cluster, p):
    """Consistency certified at precision p.

    :return Tri: YES/NO when every pair is certified, UNKNOWN otherwise
    """
    error = two_pow(p)
    verdict = Tri.YES
    for b, c in itertools.combinations(cluster.balls, 2):
        d = space.dist_oracle(b.center, c.center, p)
        if d - error > b.radius + c.radius:
            return Tri.NO
        if d + error > b.radius + c.radius:
            verdict = Tri.UNKNOWN

    return verdict


def cluster_leq(space, lower, upper):
    """Decide lower <= upper in the cluster preorder."""
    _require_exact(space)
    for b in lower:
        if not any(c.radius + space.dist_oracle(b.center, c.center, 0)
                   <= b.radius for c in upper):
            return False
    return True


def ideal_approx(space, clusters):
    """Chain of clusters, checked to increase in the preorder."""
    clusters = tuple(clusters)
    for lower, upper in zip(clusters, clusters[1:]):
        if not cluster_leq(space, lower, upper):
            raise InvalidRequest(
                "Chain does not increase: {} vs. {}".format(lower, upper)
            )
    return IdealApprox(clusters)


def _canonical_balls(height, space_size=None):
    centers = range(height + 1)
    if space_size is not None:
        centers = range(min(height + 1, space_size))
    radii = sorted({Fraction(p, q) for p in range(1, height + 1)
                    for q in range(1, height + 1)})
    return [Ball(c, r) for c in centers for r in radii]


def _cluster_key(cluster):
    return cluster.height, len(cluster), cluster.balls


def canonical_clusters(height, space_size=None):
    """Clusters of height <= height in canonical order.

    Balls have centers <= height and radii p/q with p, q <= height;
    clusters are ordered by height, size and then lexicographically.
    Validity is not checked.
    """
    balls = _canonical_balls(height, space_size)
    clusters = []
    for size in range(1, height + 1):
        for combo in itertools.combinations(balls, size):
            clusters.append(Cluster(combo))
    clusters.sort(key=_cluster_key)
    return clusters


def _distance_to_center(space, x, center, p):
    return space.metric(x.approx(p), space.dense(center), p)


def _certified_interior(space, x, ball, k):
    d = _distance_to_center(space, x, ball.center, k + STAGE_OFFSET)
    return d < ball.radius - two_pow(k + 2)


def least_ideal_contains(space, x, cluster, k):
    """True iff at some stage j <= k x is certified in the interior of
    every ball of the cluster.

    Stage-j distances err by at most 2^-(j+4) < 2^-(j+2), so certified
    balls contain x in their interior.
    """
    return any(
        all(_certified_interior(space, x, ball, j) for ball in cluster)
        for j in range(k + 1)
    )


def least_ideal_clusters(space, x, k):
    """Clusters of height <= k of the least ideal of x, certified by k.

    Equals filtering :func:`canonical_clusters` with
    :func:`least_ideal_contains`. Each canonical ball gets the bit mask
    of stages certifying it; only combinations with a common stage are
    built. The count grows exponentially with k.

    :param space: EffSpace
    :param FastCauchy x: point of the completion
    :param int k: stage

    :return list: clusters in canonical order, a superset of stage k - 1
    """
    distances = {}

    def certified(ball, j):
        key = (ball.center, j)
        if key not in distances:
            distances[key] = _distance_to_center(
                space, x, ball.center, j + STAGE_OFFSET
            )
        return distances[key] < ball.radius - two_pow(j + 2)

    masked = []
    for ball in _canonical_balls(k, space.size):
        mask = sum(1 << j for j in range(k + 1) if certified(ball, j))
        if mask:
            masked.append((ball, mask))

    found = []

    def extend(start, chosen, common):
        for i in range(start, len(masked)):
            ball, mask = masked[i]
            joint = common & mask
            if not joint:
                continue
            combo = chosen + (ball,)
            found.append(Cluster(combo))
            if len(combo) < k:
                extend(i + 1, combo, joint)

    extend(0, (), (1 << (k + 1)) - 1)
    found.sort(key=_cluster_key)

    return found


def _stream_clusters(space, x, j):
    """Stage-j candidates of the cluster stream.

    One ball per center n <= j with the least radius on the grid
    2^-(j+1) certifying interior membership, plus the ball of radius
    2^-(j+1) around the stage-j approximant of x.
    """
    p = j + STAGE_OFFSET
    slack = two_pow(j + 2)
    grid = 1 << (j + 1)
    last = j if space.size is None else min(j, space.size - 1)
    found = []
    for n in range(last + 1):
        d = _distance_to_center(space, x, n, p)
        radius = Fraction(math.floor((d + slack) * grid) + 1, grid)
        found.append(Cluster((Ball(n, radius),)))
    try:
        index = space.index_of(x.approx(p))
    except UnknownPoint:
        index = None
    if index is not None:
        found.append(Cluster((Ball(index, Fraction(1, grid)),)))

    return found


def least_ideal_stream(space, x):
    """Stage n -> finest least-ideal cluster obeying radius 2^-(n+1)."""
    def stage(n):
        bound = two_pow(n + 1)
        for cluster in _stream_clusters(space, x, n):
            if cluster.max_radius <= bound:
                return cluster
        raise RadiusScheduleViolated(n, bound)
    return stage


def _ball_verdict(space, x, ball, p):
    error = 2 * two_pow(p)
    d = _distance_to_center(space, x, ball.center, p)
    if d - error > ball.radius:
        return Tri.NO
    if d + error <= ball.radius:
        return Tri.YES
    return Tri.UNKNOWN


def ideal_represents(space, ideal, x, eps, p=16):
    """Does the ideal stage represent x up to eps.

    :param IdealApprox ideal: chain of clusters
    :param FastCauchy x: point
    :param Rat eps: resolution, positive
    :param int p: evaluation precision

    :return Tri: NO if some membership is refuted, YES if all memberships
                 are certified and some cluster has all radii < eps
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidRequest("eps must be positive")
    certain = True
    for cluster in ideal.chain:
        for ball in cluster:
            verdict = _ball_verdict(space, x, ball, p)
            if verdict is Tri.NO:
                return Tri.NO
            if verdict is Tri.UNKNOWN:
                certain = False
    if certain and any(c.max_radius < eps for c in ideal.chain):
        return Tri.YES

    return Tri.UNKNOWN


def refuting_ball(space, ideal, x, p=16):
    """First ball of the chain certified to miss x, None if there is none."""
    for cluster in ideal.chain:
        for ball in cluster:
            if _ball_verdict(space, x, ball, p) is Tri.NO:
                return ball
    return None


def delta_extract(space, chain):
    """Point represented by a cluster stream with shrinking radii.

    :param chain: list of clusters or callable n -> cluster; stage n must
                  have max radius <= 2^-(n+1)
    :return FastCauchy: approx(n) is the center of the first ball of stage n
    """
    if callable(chain):
        stage = chain
        length = None
    else:
        stages = list(chain)
        if not stages:
            raise EmptyStream("Cluster stream is empty")
        for n, cluster in enumerate(stages):
            if cluster.max_radius > two_pow(n + 1):
                raise RadiusScheduleViolated(n, cluster.max_radius)
        stage = stages.__getitem__
        length = len(stages)

    def approx(n):
        if length is not None and n >= length:
            raise EmptyStream(
                "Cluster stream has only {} stages".format(length)
            )
        cluster = stage(n)
        if cluster.max_radius > two_pow(n + 1):
            raise RadiusScheduleViolated(n, cluster.max_radius)
        return space.dense(cluster.balls[0].center)

    return FastCauchy(approx, space.space_tag)


def _drop_containing(builder, balls):
    """Remove balls containing another ball of the family (in U)."""
    kept = []
    for i, (a, r) in enumerate(balls):
        contains_other = False
        for j, (b, s) in enumerate(balls):
            if i == j:
                continue
            inside = builder.d(a, b) + s <= r
            if inside and ((b, s) != (a, r) or j < i):
                contains_other = True
                break
        if not contains_other:
            kept.append((a, r))
    return kept


def cluster_valid_by_intersection(builder, cluster):
    """Validity of a cluster of U0 balls as a nonempty intersection.

    Balls containing another ball of the cluster are dropped first, the
    remaining balls meet iff a common sphere point exists.
    """
    balls = [(b.center, b.radius) for b in cluster]
    try:
        builder.witness_intersection(_drop_containing(builder, balls))
    except NoWitness:
        return False
    return True
