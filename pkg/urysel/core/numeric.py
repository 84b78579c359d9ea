"""Exact rational arithmetic and fast converging sequences.

A point of a complete separable metric space is handed around as a
:class:`FastCauchy` stream: ``approx(n)`` is a dense-point handle within
``2^-n`` of the point. For the real line the handles are rationals.
"""

from fractions import Fraction

from urysel.exceptions import NegativeInput, MismatchedSpace

Rat = Fraction

# any operation promising 2^-n queries its inputs at n + PRECISION_SLACK
PRECISION_SLACK = 2


def two_pow(n):
    """Return 2^-n exactly (n may be negative).

    :param int n: exponent
    :return Rat: 2^-n
    """
    if n >= 0:
        return Fraction(1, 1 << n)
    return Fraction(1 << -n)


def rat(value):
    """Coerce value (int, Fraction or "p/q" string) to Rat."""
    if isinstance(value, str):
        return rat_from_str(value)
    if isinstance(value, float):
        raise TypeError("Floats are not accepted as exact rationals")
    return Fraction(value)


def rat_to_str(value):
    """Serialize rational as "p/q" (denominator always printed)."""
    value = Fraction(value)
    return '{}/{}'.format(value.numerator, value.denominator)


def rat_from_str(text):
    return Fraction(text.strip())


def rat_monus(u, v):
    """Truncated subtraction max(u - v, 0).

    :param Rat u: non-negative rational
    :param Rat v: non-negative rational
    :return Rat: u monus v
    """
    if u < 0:
        raise NegativeInput('u', u)
    if v < 0:
        raise NegativeInput('v', v)
    if u > v:
        return Fraction(u) - Fraction(v)
    return Fraction(0)


class FastCauchy(object):
    """Point represented by a precision-indexed stream of approximants.

    For the represented point x holds d(approx(n), x) <= 2^-n. Stages are
    memoized, the stream function must be pure.
    """
    def __init__(self, approx, space_tag='Q'):
        self._approx = approx
        self.space_tag = space_tag
        self._stages = {}

    def approx(self, n):
        if n < 0:
            raise NegativeInput('precision', n)
        try:
            return self._stages[n]
        except KeyError:
            value = self._approx(n)
            self._stages[n] = value
            return value

    __call__ = approx

    @classmethod
    def constant(cls, value, space_tag='Q'):
        """Stream designating a dense point exactly."""
        return cls(lambda n: value, space_tag)

    def prefix(self, levels):
        """Finite prefix as a list of (precision, approximant) pairs."""
        return [(n, self.approx(n)) for n in levels]

    def __repr__(self):
        return 'FastCauchy({}, approx(0)={})'.format(
            self.space_tag, self.approx(0)
        )


def fc_consistency_check(x, n, m, metric=None):
    """Check the fast convergence contract on one pair of stages.

    :param FastCauchy x: stream to check
    :param int n: first precision
    :param int m: second precision
    :param metric: exact metric on approximants (absolute difference if None)

    :return bool: True iff d(x(n), x(m)) <= 2^-n + 2^-m
    """
    if n < 0 or m < 0:
        raise NegativeInput('precision', min(n, m))
    if metric is None:
        distance = abs(x.approx(n) - x.approx(m))
    else:
        distance = metric(x.approx(n), x.approx(m))

    return distance <= two_pow(n) + two_pow(m)


def fc_dist(x, y, dist_oracle, n):
    """Distance of two streamed points within 2^-n.

    :param FastCauchy x: first point
    :param FastCauchy y: second point
    :param dist_oracle: (a, b, p) -> Rat with error <= 2^-p on approximants
    :param int n: requested precision

    :return Rat: approximation of d(x, y)
    """
    if x.space_tag != y.space_tag:
        raise MismatchedSpace(x.space_tag, y.space_tag)
    p = n + PRECISION_SLACK
    return dist_oracle(x.approx(p), y.approx(p), p)


def exact_oracle(metric):
    """Wrap an exact metric on dense handles into a precision oracle."""
    def oracle(a, b, p):
        return metric(a, b)
    return oracle


rational_oracle = exact_oracle(lambda a, b: abs(a - b))
