"""Effective metric spaces and their effective embedding into U.

An effective space is a dense enumeration ``i -> dense(i)`` of handles
together with a distance oracle ``metric(a, b, p)`` accurate to 2^-p.
All built-in spaces are exact: the oracle returns the true rational
distance at every precision.
"""

import math
from fractions import Fraction
from functools import partial

from urysel.core.metric import FinMetric, validate_metric
from urysel.core.numeric import FastCauchy, fc_dist, two_pow
from urysel.core.urysohn import UPoint, UReal, UrysohnBuilder
from urysel.exceptions import (
    InvalidMetric, InvalidRequest, NotSemiconvex, UnknownPoint,
    UnknownSpaceKind
)
from urysel.providers import Logger


def fusc(n):
    """Stern's diatomic sequence."""
    a, b = 1, 0
    while n > 0:
        if n % 2 == 0:
            a = a + b
        else:
            b = a + b
        n //= 2
    return b


def calkin_wilf(k):
    """k-th positive rational (k >= 1) in Calkin-Wilf order."""
    return Fraction(fusc(k), fusc(k + 1))


def calkin_wilf_index(q):
    """Inverse of :func:`calkin_wilf`."""
    p, r = q.numerator, q.denominator
    runs = []
    while p != r:
        if p < r:
            steps = (r - 1) // p
            r -= steps * p
            runs.append((0, steps))
        else:
            steps = (p - 1) // r
            p -= steps * r
            runs.append((1, steps))
    index = 1
    for bit, steps in reversed(runs):
        index <<= steps
        if bit:
            index |= (1 << steps) - 1
    return index


def rational_enum(i):
    """Enumeration of Q: 0, 1, 1/2, -1, 2, -1/2, 1/3, -2, ..."""
    if i < 0:
        raise UnknownPoint(i)
    if i == 0:
        return Fraction(0)
    if i <= 2:
        return calkin_wilf(i)
    j = i - 3
    if j % 2 == 0:
        return -calkin_wilf(j // 2 + 1)
    return calkin_wilf((j + 1) // 2 + 2)


def rational_index(q):
    q = Fraction(q)
    if q == 0:
        return 0
    k = calkin_wilf_index(abs(q))
    if q < 0:
        return 2 * k + 1
    if k <= 2:
        return k
    return 2 * k - 2


def pair(x, y):
    """Cantor pairing."""
    return (x + y) * (x + y + 1) // 2 + y


def unpair(z):
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def untuple(i, dim):
    """Index -> dim-tuple of indices by nested pairing."""
    if dim == 1:
        return (i,)
    x, rest = unpair(i)
    return (x,) + untuple(rest, dim - 1)


def tuple_index(indices):
    if len(indices) == 1:
        return indices[0]
    return pair(indices[0], tuple_index(indices[1:]))


class EffSpace(object):
    """Base effective metric space."""
    kind = None
    space_tag = None
    exact = True
    convex = False

    @property
    def size(self):
        """Number of dense points (None when infinite)."""
        return None

    def dense(self, i):
        raise NotImplementedError()

    def index_of(self, handle):
        raise NotImplementedError()

    def metric(self, a, b, p):
        """Distance of two dense handles within 2^-p."""
        raise NotImplementedError()

    def dist_oracle(self, i, j, p):
        return self.metric(self.dense(i), self.dense(j), p)

    def point(self, handle):
        """Dense handle as a point of the completion."""
        return FastCauchy.constant(handle, self.space_tag)

    def dense_point(self, i):
        return self.point(self.dense(i))

    def as_point(self, x):
        if isinstance(x, FastCauchy):
            return x
        return self.point(x)

    def dist(self, x, y, n):
        """Distance of two points of the completion within 2^-n."""
        return fc_dist(self.as_point(x), self.as_point(y), self.metric, n)

    def combine(self, masses, handles):
        """Exact convex combination of dense handles."""
        raise NotSemiconvex(
            "Space {} has no convex structure".format(self.kind)
        )

    def _check_index(self, i):
        if i < 0 or (self.size is not None and i >= self.size):
            raise UnknownPoint(i)

    def __repr__(self):
        return '{}({})'.format(self.__class__.__name__, self.kind)


class RealLine(EffSpace):
    kind = 'real-line'
    space_tag = 'R'
    convex = True

    def dense(self, i):
        return rational_enum(i)

    def index_of(self, handle):
        return rational_index(handle)

    def metric(self, a, b, p):
        return abs(Fraction(a) - Fraction(b))

    def combine(self, masses, handles):
        return sum((m * Fraction(h) for m, h in zip(masses, handles)),
                   Fraction(0))


class MaxNormSpace(EffSpace):
    """R^d with the max norm, dense set Q^d."""
    kind = 'maxnorm-rd'
    convex = True

    def __init__(self, dim):
        if dim < 1:
            raise InvalidRequest("Dimension must be positive: {}".format(dim))
        self.dim = dim
        self.space_tag = 'R^{}'.format(dim)

    def dense(self, i):
        self._check_index(i)
        return tuple(rational_enum(k) for k in untuple(i, self.dim))

    def index_of(self, handle):
        return tuple_index([rational_index(q) for q in handle])

    def metric(self, a, b, p):
        return max(abs(Fraction(x) - Fraction(y)) for x, y in zip(a, b))

    def combine(self, masses, handles):
        return tuple(
            sum((m * Fraction(h[k]) for m, h in zip(masses, handles)),
                Fraction(0))
            for k in range(self.dim)
        )


class DyadicInterval(EffSpace):
    """[0, 1] with dense set 0, 1, 1/2, 1/4, 3/4, 1/8, ..."""
    kind = 'dyadic-interval'
    space_tag = 'I'
    convex = True

    def dense(self, i):
        self._check_index(i)
        if i <= 1:
            return Fraction(i)
        m = i - 1
        level = m.bit_length()
        j = m - (1 << (level - 1))
        return Fraction(2 * j + 1, 1 << level)

    def index_of(self, handle):
        q = Fraction(handle)
        if q in (0, 1):
            return int(q)
        den = q.denominator
        if not (0 < q < 1) or den & (den - 1):
            raise UnknownPoint(handle)
        level = den.bit_length() - 1
        return (1 << (level - 1)) + (q.numerator - 1) // 2 + 1

    def metric(self, a, b, p):
        return abs(Fraction(a) - Fraction(b))

    def combine(self, masses, handles):
        return sum((m * Fraction(h) for m, h in zip(masses, handles)),
                   Fraction(0))


class FiniteSpace(EffSpace):
    """Finite rational metric space; dense handles are its point ids."""
    kind = 'finite'
    space_tag = 'F'

    def __init__(self, metric):
        violations = validate_metric(metric)
        if violations:
            raise InvalidMetric(violations)
        self.finmetric = metric

    @property
    def size(self):
        return self.finmetric.size

    def dense(self, i):
        self._check_index(i)
        return self.finmetric.points[i]

    def index_of(self, handle):
        return self.finmetric.index(handle)

    def metric(self, a, b, p):
        return self.finmetric.d(a, b)


class UrysohnSpace(EffSpace):
    """U0 of a builder as an effective space with an exact oracle."""
    kind = 'urysohn'
    space_tag = 'U'

    def __init__(self, builder=None):
        self.builder = builder if builder is not None else UrysohnBuilder()

    @property
    def size(self):
        return self.builder.size

    def dense(self, i):
        self._check_index(i)
        return UPoint(i)

    def index_of(self, handle):
        index = handle.index if isinstance(handle, UPoint) else int(handle)
        self._check_index(index)
        return index

    def metric(self, a, b, p):
        return self.builder.d(a, b)

    def point(self, handle):
        if isinstance(handle, UReal):
            return handle
        return UReal.constant(self.builder, handle)


class SubSpace(EffSpace):
    """Finitely many dense handles of a parent space, in the given order."""
    kind = 'subspace'

    def __init__(self, parent, handles):
        self.parent = parent
        self.handles = tuple(handles)
        self.space_tag = parent.space_tag
        self.exact = parent.exact
        self.convex = False
        self._index = {h: i for i, h in enumerate(self.handles)}
        if len(self._index) != len(self.handles):
            raise InvalidRequest("Subspace handles are not distinct")

    @property
    def size(self):
        return len(self.handles)

    def dense(self, i):
        self._check_index(i)
        return self.handles[i]

    def index_of(self, handle):
        try:
            return self._index[handle]
        except KeyError:
            raise UnknownPoint(handle)

    def metric(self, a, b, p):
        return self.parent.metric(a, b, p)


class ProductSpace(EffSpace):
    """Finite product with the max metric; handles are tuples."""
    kind = 'product'

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise InvalidRequest("Empty product")
        self.space_tag = tuple(f.space_tag for f in self.factors)
        self.exact = all(f.exact for f in self.factors)
        self.convex = all(f.convex for f in self.factors)

    @property
    def size(self):
        sizes = [f.size for f in self.factors]
        if any(s is None for s in sizes):
            return None
        return math.prod(sizes)

    def dense(self, i):
        self._check_index(i)
        if self.size is not None:
            # mixed radix keeps finite products enumerable
            handles = []
            for factor in reversed(self.factors):
                i, k = divmod(i, factor.size)
                handles.append(factor.dense(k))
            return tuple(reversed(handles))
        return tuple(f.dense(k) for f, k in
                     zip(self.factors, untuple(i, len(self.factors))))

    def index_of(self, handle):
        indices = [f.index_of(h) for f, h in zip(self.factors, handle)]
        if self.size is not None:
            index = 0
            for factor, k in zip(self.factors, indices):
                index = index * factor.size + k
            return index
        return tuple_index(indices)

    def metric(self, a, b, p):
        return max(f.metric(x, y, p)
                   for f, x, y in zip(self.factors, a, b))

    def combine(self, masses, handles):
        if not self.convex:
            return super(ProductSpace, self).combine(masses, handles)
        return tuple(
            f.combine(masses, [h[k] for h in handles])
            for k, f in enumerate(self.factors)
        )


def builtin_space(kind, params=None):
    """Instantiate a built-in effective space.

    :param str kind: real-line, maxnorm-rd, finite, dyadic-interval or urysohn
    :param dict params: kind parameters (dim; points restricting a line or
        box to listed handles; points + dist of a finite space; builder)

    :return EffSpace: space with an exact oracle
    """
    params = params or {}
    space = None
    if kind == RealLine.kind:
        space = RealLine()
    elif kind == MaxNormSpace.kind:
        space = MaxNormSpace(int(params.get('dim', 1)))
    elif kind == DyadicInterval.kind:
        space = DyadicInterval()
    if space is not None:
        # optional restriction to listed dense handles
        if params.get('points') is not None:
            return SubSpace(space, params['points'])
        return space

    if kind == FiniteSpace.kind:
        metric = params.get('metric')
        if metric is None:
            metric = FinMetric.from_matrix(params['points'], params['dist'])
        return FiniteSpace(metric)
    if kind == UrysohnSpace.kind:
        return UrysohnSpace(params.get('builder'))

    raise UnknownSpaceKind(kind)


class EmbeddingIntoU(object):
    """Effective isometric embedding of a space into U.

    image(0) is the seed point of the builder, image(n) is realized
    against the anchors image(0..n-1) with the oracle distances as
    targets. Images are memoized.
    """
    def __init__(self, space, builder):
        self.space = space
        self.builder = builder
        self._images = []

    def __len__(self):
        return len(self._images)

    def image(self, i):
        while len(self._images) <= i:
            self._images.append(self._construct(len(self._images)))
        return self._images[i]

    def _construct(self, n):
        if n == 0:
            return UReal.constant(self.builder, self.builder.seed())
        anchors = self._images[:n]
        targets = [
            FastCauchy(partial(self.space.dist_oracle, n, i), space_tag='R')
            for i in range(n)
        ]
        Logger.debug("Embedding dense point {} against {} anchors".format(
            n, n
        ))
        return self.builder.realize_approx(anchors, targets, depth=0)


def embed_into_U(space, builder, upto):
    """Embed the first upto dense points of space into U.

    :return EmbeddingIntoU: embedding with images 0..upto-1 realized
    """
    if upto < 1:
        raise InvalidRequest("upto must be at least 1, got {}".format(upto))
    embedding = EmbeddingIntoU(space, builder)
    for i in range(upto):
        embedding.image(i)
        if upto >= 10:
            Logger.progress(100.0 * (i + 1) / upto, i + 1, upto,
                            'Embedded points')

    return embedding


def verify_isometry(embedding, pairs, p):
    """Stage-p discrepancies of the embedding.

    :param EmbeddingIntoU embedding: embedding to verify
    :param pairs: (i, j) dense index pairs
    :param int p: stage

    :return dict: rows (i, j, distance in U, distance in X, discrepancy),
                  the bound 2^-p+2 and the verdict
    """
    bound = two_pow(p - 2)
    builder = embedding.builder
    rows = []
    for i, j in pairs:
        in_u = builder.d(embedding.image(i).approx(p),
                         embedding.image(j).approx(p))
        in_x = embedding.space.dist_oracle(i, j, p + 2)
        rows.append({
            'pair': (i, j),
            'u_distance': in_u,
            'x_distance': in_x,
            'discrepancy': abs(in_u - in_x),
        })

    return {
        'precision': p,
        'bound': bound,
        'rows': rows,
        'ok': all(row['discrepancy'] <= bound for row in rows),
    }
