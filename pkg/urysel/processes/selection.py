"""Probabilistic selections on metric spaces.

A selection level n consists of a finite set A_n of dense indices, the
inclusion nu_n into the space and a map mu_n from points to probability
distributions on A_n. For a point x with distances d_a = d(x, a):

    mu_n(x)(a) = ((d(x, A_n) + delta_n) monus d_a) / sum of the numerators

with delta_n the minimum of 2^-n and all distances inside A_n. All
masses are exact rationals.
"""

import math
from collections import OrderedDict
from fractions import Fraction

import numpy as np

from urysel.core.effective import UrysohnSpace
from urysel.core.metric import ExtensionRequest
from urysel.core.numeric import rat_monus, two_pow
from urysel.core.urysohn import UPoint
from urysel.exceptions import (
    InvalidDistribution, NotEnoughPoints, NotSemiconvex
)
from urysel.providers import Logger

# mu_n reads distances within 2^-(n + EVAL_OFFSET)
EVAL_OFFSET = 4


def make_rng(seed):
    """Seeded numpy generator (generators are passed through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class Dist(object):
    """Finite probability distribution with exact rational masses.

    :param support_set: enumerated finite set (hashable elements)
    :param masses: non-negative rationals summing to 1
    """
    def __init__(self, support_set, masses):
        self.support_set = tuple(support_set)
        self.masses = tuple(Fraction(m) for m in masses)
        if len(self.support_set) != len(self.masses):
            raise InvalidDistribution(
                "{} elements but {} masses".format(
                    len(self.support_set), len(self.masses))
            )
        if not self.support_set:
            raise InvalidDistribution("Empty support set")
        if any(m < 0 for m in self.masses):
            raise InvalidDistribution("Negative mass in {}".format(self.masses))
        if sum(self.masses) != 1:
            raise InvalidDistribution(
                "Masses sum to {}".format(sum(self.masses))
            )
        self._index = {a: i for i, a in enumerate(self.support_set)}
        if len(self._index) != len(self.support_set):
            raise InvalidDistribution("Support set elements repeat")

    @classmethod
    def normalized(cls, support_set, weights):
        """Distribution proportional to non-negative weights."""
        weights = [Fraction(w) for w in weights]
        total = sum(weights)
        if total <= 0:
            raise InvalidDistribution("Weights sum to {}".format(total))
        return cls(support_set, [w / total for w in weights])

    @classmethod
    def point_mass(cls, support_set, element):
        support_set = tuple(support_set)
        return cls(support_set, [1 if a == element else 0
                                 for a in support_set])

    @classmethod
    def product(cls, dists):
        """Product distribution over tuples, first factor most significant."""
        elements = [()]
        masses = [Fraction(1)]
        for dist in dists:
            elements = [e + (a,) for e in elements for a in dist.support_set]
            masses = [m * q for m in masses for q in dist.masses]
        return cls(elements, masses)

    def mass(self, element):
        """Mass of element (0 outside the support set)."""
        i = self._index.get(element)
        return self.masses[i] if i is not None else Fraction(0)

    def items(self):
        return list(zip(self.support_set, self.masses))

    def support(self):
        return tuple(a for a, m in zip(self.support_set, self.masses) if m > 0)

    def marginal(self, k):
        """k-th marginal of a distribution over tuples."""
        acc = OrderedDict()
        for element, m in self.items():
            acc[element[k]] = acc.get(element[k], Fraction(0)) + m
        return Dist(list(acc.keys()), list(acc.values()))

    def pushforward(self, fn, codomain=None):
        """Image distribution along fn, summed over preimages."""
        acc = OrderedDict()
        if codomain is not None:
            for c in codomain:
                acc[c] = Fraction(0)
        for element, m in self.items():
            c = fn(element)
            acc[c] = acc.get(c, Fraction(0)) + m
        return Dist(list(acc.keys()), list(acc.values()))

    def sample(self, rng):
        return dist_sample(self, rng)

    def __len__(self):
        return len(self.support_set)

    def __eq__(self, other):
        if not isinstance(other, Dist):
            return NotImplemented
        return self.support_set == other.support_set and \
            self.masses == other.masses

    def __hash__(self):
        return hash((self.support_set, self.masses))

    def __repr__(self):
        return 'Dist({})'.format(
            ', '.join('{}: {}'.format(a, m) for a, m in self.items())
        )


def support(dist):
    return set(dist.support())


def _uniform_below(bound, rng):
    """Uniform integer in [0, bound) by rejection on random bytes."""
    nbits = bound.bit_length()
    nbytes = (nbits + 7) // 8
    shift = 8 * nbytes - nbits
    while True:
        value = int.from_bytes(rng.bytes(nbytes), 'big') >> shift
        if value < bound:
            return value


def dist_sample(dist, seed):
    """Exact inverse-CDF sample over the enumeration order.

    :param Dist dist: distribution to sample
    :param seed: integer seed or numpy Generator (consumed)

    :return: element of the support
    """
    rng = make_rng(seed)
    scale = 1
    for m in dist.masses:
        scale = scale * m.denominator // math.gcd(scale, m.denominator)
    u = _uniform_below(scale, rng)
    cumulative = 0
    for element, m in dist.items():
        cumulative += m.numerator * (scale // m.denominator)
        if u < cumulative:
            return element

    raise InvalidDistribution("Sampling ran past the support")


class SelectionLevel(object):
    """One level <A_n, nu_n, mu_n> of a probabilistic selection.

    :param int n: level index
    :param A: enumerated finite set
    :param nu: element -> handle
    :param mu: point -> Dist over A
    :param delta: separation constant (None for derived levels)
    :param space: EffSpace the handles live in (None for derived levels)
    :param point: element -> evaluable point (defaults to nu)
    """
    def __init__(self, n, A, nu, mu, delta=None, space=None, point=None,
                 precision=None):
        self.n = n
        self.A = tuple(A)
        self._nu = nu
        self._mu = mu
        self.delta = delta
        self.space = space
        self._point = point or nu
        self.precision = precision

    @property
    def size(self):
        return len(self.A)

    def elements(self):
        return self.A

    def element(self, k):
        return self.A[k]

    def nu(self, a):
        return self._nu(a)

    def point(self, a):
        return self._point(a)

    def mu(self, x):
        return self._mu(x)

    def __repr__(self):
        return 'SelectionLevel(n={}, size={})'.format(self.n, self.size)


def level_distances(space, x, n):
    """Distances d(x, a_i), i <= n, within 2^-(n + EVAL_OFFSET)."""
    p = n + EVAL_OFFSET + 1
    xp = space.as_point(x).approx(p)
    return [max(space.metric(xp, space.dense(a), p), Fraction(0))
            for a in range(n + 1)]


def separation(space, n):
    """min(2^-n, positive distances among a_0..a_n)"""
    p = n + EVAL_OFFSET
    delta = two_pow(n)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            d = space.dist_oracle(i, j, p)
            if not space.exact:
                d -= two_pow(p)
            if 0 < d < delta:
                delta = d
    return delta


def metric_selection_level(space, n):
    """Probabilistic selection level n on an effective space.

    :param space: EffSpace with at least n+1 dense points
    :param int n: level

    :return SelectionLevel: A_n = (0, ..., n) with the explicit mu_n
    """
    if n < 0:
        raise NotEnoughPoints(n + 1, 0)
    if space.size is not None and space.size < n + 1:
        raise NotEnoughPoints(n + 1, space.size)
    A = tuple(range(n + 1))
    delta = separation(space, n)

    def mu(x):
        distances = level_distances(space, x, n)
        nearest = min(distances)
        weights = [rat_monus(nearest + delta, d) for d in distances]
        return Dist.normalized(A, weights)

    return SelectionLevel(
        n, A, space.dense, mu, delta=delta, space=space,
        point=space.dense_point, precision=n + EVAL_OFFSET
    )


class SemiconvexOp(object):
    """Combination operator h_{A,nu}: distributions on A -> points."""
    def __init__(self, A, nu, combine, space=None):
        self.A = tuple(A)
        self.nu = nu
        self._combine = combine
        self.space = space

    def combine(self, dist):
        return self._combine(dist)

    __call__ = combine


def banach_semiconvex(space, A, nu):
    """Exact convex combination in a built-in normed space."""
    if not space.convex:
        raise NotSemiconvex(
            "Space {} has no exact linear structure".format(space.kind)
        )

    def combine(dist):
        return space.combine(dist.masses, [nu(a) for a in dist.support_set])

    return SemiconvexOp(A, nu, combine, space)


def urysohn_semiconvex(builder, A, nu):
    """Combination operator on U0 through the distance coordinates.

    phi(v) = (d(v, v_1), ..., d(v, v_n)) is isometric on the images v_i
    for the max norm. combine(m) realizes the point at max-norm distance
    from phi(v_i) to w = sum m(a_i) phi(v_i). Realizations are cached by w.
    """
    A = tuple(A)
    images = [UPoint(int(nu(a))) for a in A]
    coords = [tuple(builder.d(v, u) for u in images) for v in images]
    cache = {}

    def combine(dist):
        masses = [dist.mass(a) for a in A]
        w = tuple(sum((m * c[k] for m, c in zip(masses, coords)), Fraction(0))
                  for k in range(len(images)))
        if w in cache:
            return cache[w]
        targets = [max(abs(w[k] - c[k]) for k in range(len(images)))
                   for c in coords]
        for image, t in zip(images, targets):
            if t == 0:
                cache[w] = image
                return image
        constraints = {}
        for image, t in zip(images, targets):
            constraints[image.index] = t
        point = builder.realize_rational(ExtensionRequest.of(constraints))
        Logger.debug("Combination {} realized by point {}".format(
            w, point.index
        ))
        cache[w] = point
        return point

    return SemiconvexOp(A, nu, combine, UrysohnSpace(builder))


def semiconvex_for(space, A, nu):
    """Combination operator of a space: U0 or a convex built-in."""
    if isinstance(space, UrysohnSpace):
        return urysohn_semiconvex(space.builder, A, nu)
    return banach_semiconvex(space, A, nu)


def is_semiconvex(space):
    return space is not None and \
        (space.convex or isinstance(space, UrysohnSpace))


def convergence_harness(levels, x, xs, trials, seed, keep_samples=False):
    """Sample a_n ~ mu_n(x_n) and compare d(nu_n(a_n), x) with the envelope
    d(x_n, A_n) + delta_n + d(x_n, x).

    Trials are drawn trial by trial, each running through all levels in
    order, from a single generator.

    :param levels: list of SelectionLevel on one space
    :param x: target point
    :param xs: callable n -> point (or list) converging to x
    :param int trials: number of sampled trajectories
    :param seed: generator seed

    :return dict: per-level rows and the total number of violations
    """
    rng = make_rng(seed)
    get_x = xs if callable(xs) else xs.__getitem__
    rows = []
    for level in levels:
        space = level.space
        xn = space.as_point(get_x(level.n))
        p = level.n + EVAL_OFFSET
        distances = level_distances(space, xn, level.n)
        to_target = space.dist(xn, x, p)
        envelope = min(distances) + level.delta + to_target
        rows.append({
            'n': level.n,
            'envelope': envelope,
            'tolerance': two_pow(level.n + 1),
            'dist': level.mu(xn),
            'max_distance': Fraction(0),
            'violations': [],
            'samples': [],
        })

    for trial in range(trials):
        for level, row in zip(levels, rows):
            a = dist_sample(row['dist'], rng)
            p = level.n + EVAL_OFFSET
            d = level.space.dist(level.point(a), x, p)
            row['max_distance'] = max(row['max_distance'], d)
            if keep_samples:
                row['samples'].append(d)
            if d > row['envelope'] + row['tolerance']:
                row['violations'].append({'trial': trial, 'element': a,
                                          'distance': d})
        if trials >= 10 and (trial + 1) % (trials // 10) == 0:
            Logger.progress(100.0 * (trial + 1) / trials, trial + 1, trials,
                            'Harness trials')

    for row in rows:
        row['support'] = list(row.pop('dist').support())
        if not keep_samples:
            del row['samples']

    violations = sum(len(row['violations']) for row in rows)
    return {
        'trials': trials,
        'levels': rows,
        'violations': violations,
        'ok': violations == 0,
    }
