"""Incremental construction of the rational Urysohn space U0.

The :class:`UrysohnBuilder` grows a finite rational metric space by
realizing one-point extension requests. Three sources of requests exist:

* explicit rational requests (:meth:`UrysohnBuilder.realize_rational`),
* the canonical bookkeeping enumeration (:meth:`UrysohnBuilder.run_bookkeeping`),
  which eventually realizes every admissible rational request,
* approximate requests with real targets
  (:meth:`UrysohnBuilder.realize_approx`), realized stagewise as a fast
  converging sequence of U0 points (:class:`UReal`).

Bookkeeping runs in height stages h = 1, 2, ... Stage h takes a snapshot
of the point count at its start and walks all subsets of the snapshot of
size <= h (by size, then lexicographically) combined with all target
vectors over {p/q : 1 <= p, q <= h}. Inadmissible combinations are
skipped, a step is one realized request. With a height cap H the last
stage repeats at height H over a fresh snapshot.
"""

import itertools
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from urysel.core.metric import (
    FinMetric, ExtensionRequest, admissibility_violations,
    extension_admissible, urysohn_extend
)
from urysel.core.numeric import FastCauchy, two_pow
from urysel.exceptions import (
    InadmissibleRequest, InconsistentRequirements, InvalidRequest,
    NoWitness, UnknownPoint
)
from urysel.providers import Logger

# stage n of realize_approx reads its inputs at precision n + APPROX_OFFSET
APPROX_OFFSET = 5
# raw stage targets may break admissibility by at most this many 2^-p
SLACK_UNITS = 4
# enumeration items schedule_of replays by default
SCHEDULE_LIMIT = 10 ** 4

LogEntry = namedtuple('LogEntry', ['request', 'point', 'reused'])
Schedule = namedtuple('Schedule', ['height', 'steps'])


@dataclass(frozen=True, order=True)
class UPoint:
    index: int

    def __int__(self):
        return self.index


def _index(point):
    return point.index if isinstance(point, UPoint) else int(point)


def height_targets(h):
    """Sorted rationals p/q with 1 <= p, q <= h."""
    return sorted({Fraction(p, q)
                   for p in range(1, h + 1) for q in range(1, h + 1)})


def stage_requests(h, snapshot):
    """Canonical enumeration of one height stage.

    Yields (subset_index, target_index, subset, targets) tuples.
    """
    targets = height_targets(h)
    subset_index = 0
    for size in range(0, min(h, snapshot) + 1):
        for subset in itertools.combinations(range(snapshot), size):
            for target_index, vector in enumerate(
                    itertools.product(targets, repeat=size)):
                yield subset_index, target_index, subset, vector
            subset_index += 1


class BookkeepingCursor(object):
    """Position inside the canonical enumeration.

    :param height: current height stage
    :param snapshot: number of points the stage enumerates over
    :param position: enumeration items consumed in this stage
    :param cap: optional height cap
    """
    def __init__(self, height=1, snapshot=0, position=0, cap=None):
        self.height = height
        self.snapshot = snapshot
        self.position = position
        self.cap = cap
        self.subset_index = 0
        self.target_index = 0
        self._items = None

    def items(self):
        if self._items is None:
            self._items = itertools.islice(
                stage_requests(self.height, self.snapshot),
                self.position, None
            )
        return self._items

    def advance(self, item):
        self.subset_index, self.target_index = item[0], item[1]
        self.position += 1

    def next_stage(self, point_count):
        if self.cap is None or self.height < self.cap:
            self.height += 1
        self.snapshot = point_count
        self.position = 0
        self.subset_index = 0
        self.target_index = 0
        self._items = None

    def as_dict(self):
        return {
            'height': self.height,
            'snapshot': self.snapshot,
            'position': self.position,
            'cap': self.cap,
            'subset_index': self.subset_index,
            'target_index': self.target_index,
        }

    @classmethod
    def from_dict(cls, data):
        cursor = cls(data['height'], data['snapshot'], data['position'],
                     data.get('cap'))
        cursor.subset_index = data.get('subset_index', 0)
        cursor.target_index = data.get('target_index', 0)
        return cursor


class UReal(FastCauchy):
    """Point of the completion U given by a chain of U0 points.

    Stage n is a :class:`UPoint` within 2^-n of the limit; stages are
    realized lazily in the builder, each from the previous one.

    :param builder: owning UrysohnBuilder
    :param next_stage: (n, previous UPoint or None) -> UPoint
    """
    def __init__(self, builder, next_stage):
        super(UReal, self).__init__(self._stage, space_tag='U')
        self.builder = builder
        self._next_stage = next_stage
        self._chain = []

    @classmethod
    def constant(cls, builder, point):
        point = UPoint(_index(point))
        return cls(builder, lambda n, previous: point)

    def _stage(self, n):
        while len(self._chain) <= n:
            k = len(self._chain)
            previous = self._chain[-1] if self._chain else None
            self._chain.append(self._next_stage(k, previous))
        return self._chain[n]

    @property
    def realized(self):
        """Stages realized so far."""
        return list(self._chain)


class UrysohnBuilder(object):
    """Growing rational Urysohn space U0.

    Point ids are positions 0..N-1 in creation order. The builder is a
    single-owner mutable value.

    :param int height_cap: optional cap of the bookkeeping height
    """
    def __init__(self, height_cap=None):
        self.space = FinMetric()
        self.log = []
        self.cursor = BookkeepingCursor(cap=height_cap)

    @property
    def size(self):
        return self.space.size

    def points(self):
        return [UPoint(i) for i in range(self.space.size)]

    def d(self, x, y):
        """Exact distance of two U0 points."""
        i, j = _index(x), _index(y)
        if not (0 <= i < self.size):
            raise UnknownPoint(x)
        if not (0 <= j < self.size):
            raise UnknownPoint(y)
        return self.space.d_at(i, j)

    def _find_exact(self, req):
        """Existing point satisfying all constraints of req, if any."""
        if not req.base:
            return UPoint(0) if self.size else None
        first = self.space.index(req.base[0])
        rest = [(self.space.index(u), a)
                for u, a in zip(req.base[1:], req.targets[1:])]
        for k in range(self.size):
            if self.space.d_at(k, first) != req.targets[0]:
                continue
            if all(self.space.d_at(k, i) == a for i, a in rest):
                return UPoint(k)
        return None

    def realize_rational(self, req):
        """Realize a rational one-point extension request exactly.

        An existing point is reused only if it satisfies every constraint
        exactly.

        :param ExtensionRequest req: admissible request over the builder
        :return UPoint: the realizing point
        """
        violations = admissibility_violations(self.space, req)
        if violations:
            raise InadmissibleRequest(req, violations)
        point = self._find_exact(req)
        reused = point is not None
        if not reused:
            self.space = urysohn_extend(self.space, req)
            point = UPoint(self.size - 1)
        self.log.append(LogEntry(req, point.index, reused))
        Logger.debug("Request {} realized by point {} (reused: {})".format(
            req.as_dict(), point.index, reused
        ))

        return point

    def seed(self):
        """First point of U0, created by one bookkeeping step if missing."""
        if self.size == 0:
            self.run_bookkeeping(1)
        return UPoint(0)

    def _next_admissible(self):
        while True:
            for item in self.cursor.items():
                self.cursor.advance(item)
                req = ExtensionRequest(item[2], item[3])
                if extension_admissible(self.space, req):
                    return req
            self.cursor.next_stage(self.size)

    def run_bookkeeping(self, steps):
        """Realize the next steps admissible requests of the canonical
        enumeration.

        :param int steps: number of requests to realize
        """
        if steps < 0:
            raise InvalidRequest("Negative number of steps: {}".format(steps))
        for step in range(steps):
            self.realize_rational(self._next_admissible())
            if steps >= 100 and step % (steps // 10) == 0:
                Logger.progress(
                    100.0 * step / steps, step, steps, 'Bookkeeping steps'
                )

        return self

    def schedule_of(self, req, limit=SCHEDULE_LIMIT):
        """When the bookkeeping reaches req.

        Replays the canonical enumeration on a scratch copy, across height
        stages, for at most limit enumeration items.

        :param ExtensionRequest req: admissible request
        :param int limit: enumeration items to replay
        :return Schedule: (height, steps) where steps counts the realized
                          requests up to and including req, or None when
                          req is not reached within limit or lies above
                          the height cap
        """
        req = req.normalized()
        later = Schedule(max(req.height, self.cursor.height + 1), None)
        if self.cursor.cap is not None and req.height > self.cursor.cap:
            return later
        scratch = self.copy()
        steps = 0
        examined = 0
        while examined < limit:
            for item in scratch.cursor.items():
                scratch.cursor.advance(item)
                examined += 1
                candidate = ExtensionRequest(item[2], item[3])
                if extension_admissible(scratch.space, candidate):
                    steps += 1
                    scratch.realize_rational(candidate)
                    if candidate == req:
                        return Schedule(scratch.cursor.height, steps)
                if examined >= limit:
                    break
            else:
                scratch.cursor.next_stage(scratch.size)

        return later

    def realize_approx(self, anchors, targets, depth=0):
        """Point of U at real distances from real anchors.

        Stage n reads anchors and targets at precision p = n + 5, lowers
        the raw targets to a 1-Lipschitz function of the anchor points,
        raises them uniformly until every sum constraint holds and clamps
        them to at least 2^-p. The chain constraint to stage n-1 enters as
        an extra base point.

        :param anchors: list of UReal or UPoint
        :param targets: list of FastCauchy reals
        :param int depth: stages realized eagerly

        :return UReal: the constructed point
        """
        if len(anchors) != len(targets):
            raise InvalidRequest(
                "{} anchors but {} targets".format(len(anchors), len(targets))
            )
        anchors = [a if isinstance(a, UReal) else UReal.constant(self, a)
                   for a in anchors]
        targets = list(targets)

        def next_stage(n, previous):
            return self._approx_stage(anchors, targets, n, previous)

        point = UReal(self, next_stage)
        point.approx(depth)

        return point

    def _stage_targets(self, points, raw, eps, n):
        """Admissible rational targets near the raw stage targets."""
        budget = SLACK_UNITS * eps
        for i, t in enumerate(raw):
            if t < -eps:
                raise InconsistentRequirements(
                    n, "target {} >= 0".format(i), -t
                )
        k = len(points)
        dist = [[self.d(points[i], points[j]) for j in range(k)]
                for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                d = dist[i][j]
                lower = abs(raw[i] - raw[j]) - d
                if lower > budget:
                    raise InconsistentRequirements(
                        n, "|a{0} - a{1}| <= d(u{0}, u{1})".format(i, j),
                        lower
                    )
                upper = d - raw[i] - raw[j]
                if upper > budget:
                    raise InconsistentRequirements(
                        n, "d(u{0}, u{1}) <= a{0} + a{1}".format(i, j),
                        upper
                    )
        lowered = [min(raw[j] + dist[i][j] for j in range(k))
                   for i in range(k)]
        raise_by = Fraction(0)
        for i in range(k):
            for j in range(i + 1, k):
                gap = (dist[i][j] - lowered[i] - lowered[j]) / 2
                raise_by = max(raise_by, gap)
        adjusted = [max(f + raise_by, eps) for f in lowered]

        constraints = {}
        for point, target in zip(points, adjusted):
            constraints[point.index] = target

        return constraints

    def _approx_stage(self, anchors, targets, n, previous):
        p = n + APPROX_OFFSET
        eps = two_pow(p)
        points = [a.approx(p) for a in anchors]
        raw = [t.approx(p) for t in targets]
        constraints = self._stage_targets(points, raw, eps, n)

        if previous is not None:
            gap = max(
                (abs(self.d(u, previous) - a)
                 for u, a in constraints.items()),
                default=Fraction(0)
            )
            if gap == 0:
                return previous
            if gap > two_pow(n):
                raise InconsistentRequirements(
                    n, "d(stage {}, stage {}) <= 2^-{}".format(n - 1, n, n),
                    gap - two_pow(n)
                )
            if previous.index not in constraints:
                constraints[previous.index] = gap

        return self.realize_rational(ExtensionRequest.of(constraints))

    def balls_intersect(self, balls):
        """Decide whether closed balls (center, radius) meet in U.

        :param balls: list of (UPoint, Rat) pairs
        :return bool: True iff r_i - r_j <= d(a_i, a_j) <= r_i + r_j for all pairs
        """
        return not self.intersection_violations(balls)

    def intersection_violations(self, balls):
        balls = [(UPoint(_index(c)), Fraction(r)) for c, r in balls]
        for _, r in balls:
            if r <= 0:
                raise InvalidRequest("Radius {} is not positive".format(r))
        found = []
        for i in range(len(balls)):
            for j in range(i + 1, len(balls)):
                (a, r), (b, s) = balls[i], balls[j]
                d = self.d(a, b)
                if abs(r - s) > d or d > r + s:
                    found.append(((a.index, r), (b.index, s), d))

        return found

    def witness_intersection(self, balls):
        """Realize a common sphere point of the balls.

        :param balls: list of (UPoint, Rat) pairs
        :return UPoint: point at exact distance r_i from every center a_i
        """
        violations = self.intersection_violations(balls)
        if violations:
            raise NoWitness(violations[0])
        constraints = {}
        for center, radius in balls:
            constraints[_index(center)] = Fraction(radius)

        return self.realize_rational(ExtensionRequest.of(constraints))

    def copy(self):
        other = UrysohnBuilder()
        other.space = self.space
        other.log = list(self.log)
        other.cursor = BookkeepingCursor.from_dict(self.cursor.as_dict())
        return other

    def to_json(self):
        from urysel.io_functions.reports import builder_to_json
        return builder_to_json(self)

    @classmethod
    def from_json(cls, data):
        from urysel.io_functions.reports import builder_from_json
        return builder_from_json(data)
