"""Finite rational metric spaces and one-point extensions.

:class:`FinMetric` is immutable. Distances are kept as a lower
triangular table (row i holds the distances to points 0..i-1), so a
one-point extension costs O(N). A space read from a raw matrix keeps the
matrix too, which lets :func:`validate_metric` report asymmetric or
non-zero diagonal input.
"""

import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from urysel.exceptions import (
    InvalidRequest, InadmissibleRequest, UnknownPoint
)

Violation = namedtuple('Violation', ['axiom', 'points', 'values'])
PairViolation = namedtuple(
    'PairViolation', ['u', 'v', 'target_u', 'target_v', 'distance']
)

# beyond this bound scaled integer distances go to object arrays
_INT64_SAFE = 2 ** 61


class FinMetric(object):
    """Finite metric space over opaque integer point ids.

    :param points: point ids in creation order
    :param rows: lower triangular distances, rows[i][j] = d(points[i], points[j]), j < i
    :param matrix: optional full matrix the space was read from
    """
    def __init__(self, points=(), rows=(), matrix=None):
        self.points = tuple(points)
        self._rows = tuple(rows)
        if len(self._rows) != len(self.points):
            raise InvalidRequest(
                "{} points but {} distance rows".format(
                    len(self.points), len(self._rows))
            )
        self._matrix = matrix
        self._index = {p: i for i, p in enumerate(self.points)}
        if len(self._index) != len(self.points):
            raise InvalidRequest("Point ids are not distinct")

    @classmethod
    def from_matrix(cls, points, matrix):
        """Build the space from a total matrix of rationals."""
        points = tuple(points)
        matrix = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        if len(matrix) != len(points) or \
                any(len(row) != len(points) for row in matrix):
            raise InvalidRequest("Distance matrix is not total")
        rows = tuple(matrix[i][:i] for i in range(len(points)))
        return cls(points, rows, matrix)

    @property
    def size(self):
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return point in self._index

    def index(self, point):
        """Position of point id."""
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoint(point)

    def d_at(self, i, j):
        """Distance by positions."""
        if self._matrix is not None:
            return self._matrix[i][j]
        if i == j:
            return Fraction(0)
        if i > j:
            return self._rows[i][j]
        return self._rows[j][i]

    def d(self, x, y):
        """Distance by point ids."""
        return self.d_at(self.index(x), self.index(y))

    def row(self, x):
        """Distances from x to all points, in position order."""
        i = self.index(x)
        return [self.d_at(i, j) for j in range(self.size)]

    def matrix(self):
        if self._matrix is not None:
            return [list(row) for row in self._matrix]
        return [[self.d_at(i, j) for j in range(self.size)]
                for i in range(self.size)]

    def next_id(self):
        return max(self.points) + 1 if self.points else 0

    def with_point(self, point, distances):
        """Return a new space with point appended.

        :param point: id of the new point
        :param distances: distances to the existing points (position order)
        """
        if point in self._index:
            raise InvalidRequest("Point {} already exists".format(point))
        distances = tuple(Fraction(v) for v in distances)
        if len(distances) != self.size:
            raise InvalidRequest("Extension row is not total")
        rows = self._rows
        if self._matrix is not None:
            rows = tuple(self._matrix[i][:i] for i in range(self.size))
        return FinMetric(self.points + (point,), rows + (distances,))

    def subspace(self, points):
        points = tuple(points)
        idx = [self.index(p) for p in points]
        rows = tuple(
            tuple(self.d_at(idx[i], idx[j]) for j in range(i))
            for i in range(len(idx))
        )
        return FinMetric(points, rows)

    def __eq__(self, other):
        if not isinstance(other, FinMetric):
            return NotImplemented
        return self.points == other.points and \
            self.matrix() == other.matrix()

    def __repr__(self):
        return 'FinMetric(points={})'.format(len(self.points))


def _scaled_matrix(M):
    """Integer matrix D and common denominator L with d = D / L."""
    mat = M.matrix()
    den = 1
    for row in mat:
        for value in row:
            den = den * value.denominator // math.gcd(den, value.denominator)
    ints = [[v.numerator * (den // v.denominator) for v in row] for row in mat]
    biggest = max((abs(v) for row in ints for v in row), default=0)
    dtype = np.int64 if biggest < _INT64_SAFE // 2 else object
    return np.array(ints, dtype=dtype).reshape(M.size, M.size), den


def validate_metric(M):
    """List every violated metric axiom instance of M.

    The check is exact: all distances are scaled to integers over their
    common denominator and compared with numpy.

    :param FinMetric M: space to validate

    :return list: Violation records, empty iff M is a metric space
    """
    n = M.size
    if n == 0:
        return []
    D, den = _scaled_matrix(M)
    points = M.points
    violations = []

    def _rat(v):
        return Fraction(int(v), den)

    for i in np.flatnonzero(np.diagonal(D) != 0):
        violations.append(Violation(
            'identity', (points[i], points[i]), (_rat(D[i, i]),)
        ))

    upper_i, upper_j = np.triu_indices(n, k=1)
    forward = D[upper_i, upper_j]
    backward = D[upper_j, upper_i]
    for k in np.flatnonzero(forward != backward):
        i, j = upper_i[k], upper_j[k]
        violations.append(Violation(
            'symmetry', (points[i], points[j]),
            (_rat(D[i, j]), _rat(D[j, i]))
        ))
    lowest = np.minimum(forward, backward)
    for k in np.flatnonzero(lowest <= 0):
        i, j = upper_i[k], upper_j[k]
        violations.append(Violation(
            'positivity', (points[i], points[j]), (_rat(D[i, j]),)
        ))

    # d(i, k) <= d(i, j) + d(j, k), one middle point per sweep
    pair_mask = np.triu(np.ones((n, n), dtype=bool), k=1)
    for j in range(n):
        through = D[:, j][:, None] + D[j, :][None, :]
        broken = (D > through) & pair_mask
        broken[j, :] = False
        broken[:, j] = False
        for i, k in zip(*np.nonzero(broken)):
            violations.append(Violation(
                'triangle', (points[i], points[j], points[k]),
                (_rat(D[i, k]), _rat(through[i, k]))
            ))

    return violations


def is_metric(M):
    return not validate_metric(M)


@dataclass(frozen=True)
class ExtensionRequest:
    """Demand d(base[i], x) = targets[i] for a new point x."""
    base: tuple
    targets: tuple

    def __post_init__(self):
        base = tuple(self.base)
        targets = tuple(Fraction(t) for t in self.targets)
        object.__setattr__(self, 'base', base)
        object.__setattr__(self, 'targets', targets)
        if len(base) != len(targets):
            raise InvalidRequest(
                "{} base points but {} targets".format(len(base), len(targets))
            )
        if len(set(base)) != len(base):
            raise InvalidRequest("Base points are not distinct: {}".format(base))
        for t in targets:
            if t <= 0:
                raise InvalidRequest("Target {} is not positive".format(t))

    @classmethod
    def of(cls, constraints):
        """Request from a mapping point -> target, base sorted by id."""
        items = sorted(constraints.items())
        return cls(tuple(p for p, _ in items), tuple(t for _, t in items))

    def as_dict(self):
        return dict(zip(self.base, self.targets))

    def normalized(self):
        """Same request with the base sorted by point id."""
        return ExtensionRequest.of(self.as_dict())

    @property
    def height(self):
        """max(numerators, denominators, base size)"""
        return max(
            [len(self.base)] +
            [max(t.numerator, t.denominator) for t in self.targets]
        )

    def __len__(self):
        return len(self.base)


def admissibility_violations(M, req):
    """Pairs of the request breaking |a_i - a_j| <= d(u_i, u_j) <= a_i + a_j.

    :param FinMetric M: space the request refers to
    :param ExtensionRequest req: request to check

    :return list: PairViolation records
    """
    idx = [M.index(u) for u in req.base]
    found = []
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            d = M.d_at(idx[i], idx[j])
            a, b = req.targets[i], req.targets[j]
            if abs(a - b) > d or d > a + b:
                found.append(PairViolation(req.base[i], req.base[j], a, b, d))

    return found


def extension_admissible(M, req):
    return not admissibility_violations(M, req)


def extension_row(M, req):
    """Distances of the extension point to every point of M.

    Base points get their targets, any other x gets min_i d(x, u_i) + a_i.
    """
    if not req.base:
        raise InvalidRequest(
            "Empty base over a non-empty space leaves the formula undefined"
        )
    targets = req.as_dict()
    idx = [(M.index(u), a) for u, a in zip(req.base, req.targets)]
    row = []
    for k, x in enumerate(M.points):
        if x in targets:
            row.append(targets[x])
        else:
            row.append(min(M.d_at(k, i) + a for i, a in idx))
    return row


def urysohn_extend(M, req, point=None):
    """One-point extension of M realizing req exactly.

    :param FinMetric M: space to extend
    :param ExtensionRequest req: admissible request over M
    :param point: id of the new point (next free id by default)

    :return FinMetric: M plus the new point
    """
    violations = admissibility_violations(M, req)
    if violations:
        raise InadmissibleRequest(req, violations)
    if point is None:
        point = M.next_id()
    if M.size == 0:
        return M.with_point(point, ())

    return M.with_point(point, extension_row(M, req))
