"""Lifting probabilistic selections to function spaces.

Given levels <A_n, nu_n, mu_n> on X and <C_n, theta_n, lambda_n> on Y and
a combination operator h_n on Y, the function space X -> Y gets the level

* B_n = all finite functions phi: A_n -> C_n,
* nu*_n(phi)(x) = h_n(pushforward of mu_n(x) along phi),
* eta_n(f)(phi) = product over a in A_n of lambda_n(f(nu_n(a)))(phi(a)).

eta_n is kept in factorized form (:class:`FactorizedDist`); it is only
materialized on request and below a size limit.
"""

import itertools
import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from urysel.core.effective import ProductSpace, UrysohnSpace
from urysel.core.numeric import FastCauchy
from urysel.core.urysohn import UrysohnBuilder
from urysel.exceptions import (
    ConstructionError, EvaluationError, LevelMismatch, LevelTooLarge,
    NotEnoughPoints, UnsupportedType
)
from urysel.processes.selection import (
    Dist, SelectionLevel, dist_sample, is_semiconvex, make_rng,
    metric_selection_level, semiconvex_for
)
from urysel.processes.types import Arrow, Base, Product, parse_type, uncurry

# largest finite set materialized by default
DEFAULT_LIMIT = 10 ** 5

InterpretedType = namedtuple('InterpretedType', ['expr', 'level', 'semiconvex'])


@dataclass(frozen=True)
class FiniteFn:
    """Total finite function, values listed in domain order."""
    domain: tuple
    values: tuple

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise ConstructionError("Finite function is not total")

    def __call__(self, a):
        return self.values[self.domain.index(a)]

    def preimage(self, c):
        return tuple(a for a, v in zip(self.domain, self.values) if v == c)

    def table(self):
        return dict(zip(self.domain, self.values))


class FnPoint(object):
    """Evaluable point of a function space."""
    def __call__(self, x):
        raise NotImplementedError()


class NativeFn(FnPoint):
    """Function given by Python code on approximants.

    By default fn maps approximants of the argument (a rational, or a
    tuple for product arguments) to the approximant of the value. An
    L-Lipschitz fn needs modulus >= log2(L). With on_points=True fn gets
    the argument point itself and returns a point.
    """
    def __init__(self, fn, space_tag='R', modulus=0, on_points=False,
                 name=None):
        self.fn = fn
        self.space_tag = space_tag
        self.modulus = modulus
        self.on_points = on_points
        self.name = name or getattr(fn, '__name__', 'fn')

    def __call__(self, x):
        if self.on_points:
            return self.fn(x)

        def approx(n):
            m = n + self.modulus
            if isinstance(x, tuple):
                return self.fn(tuple(_approx_of(xi, m) for xi in x))
            return self.fn(_approx_of(x, m))

        return FastCauchy(approx, self.space_tag)

    def __repr__(self):
        return 'NativeFn({})'.format(self.name)


def _approx_of(x, n):
    return x.approx(n) if isinstance(x, FastCauchy) else x


class LiftedFn(FnPoint):
    """nu*_n(phi) as an evaluable function."""
    def __init__(self, level, phi):
        self.level = level
        self.phi = phi

    def __call__(self, x):
        handle = lift_apply(self.level, self.phi, x)
        space = self.level.codomain_level.space
        return space.point(handle)

    def __eq__(self, other):
        return isinstance(other, LiftedFn) and self.level is other.level \
            and self.phi == other.phi

    def __hash__(self):
        return hash((id(self.level), self.phi))

    def __repr__(self):
        return 'LiftedFn(n={}, {})'.format(self.level.n, self.phi.values)


class FactorizedDist(object):
    """Product distribution on finite functions, one factor per domain
    element."""
    def __init__(self, domain, factors):
        self.domain = tuple(domain)
        self.factors = tuple(factors)

    @property
    def size(self):
        return math.prod(len(f) for f in self.factors)

    def factor(self, a):
        return self.factors[self.domain.index(a)]

    def mass(self, phi):
        total = Fraction(1)
        for factor, value in zip(self.factors, phi.values):
            total *= factor.mass(value)
            if total == 0:
                break
        return total

    def support_contains(self, phi):
        return all(factor.mass(value) > 0
                   for factor, value in zip(self.factors, phi.values))

    def sample(self, rng):
        """Coordinatewise sample, factors in domain order."""
        rng = make_rng(rng)
        return FiniteFn(self.domain,
                        tuple(dist_sample(f, rng) for f in self.factors))

    def items(self, limit=DEFAULT_LIMIT):
        """All finite functions with their masses, lexicographic order."""
        if self.size > limit:
            raise LevelTooLarge(self.size, limit)
        found = []
        for combo in itertools.product(*[f.items() for f in self.factors]):
            values = tuple(v for v, _ in combo)
            mass = math.prod((m for _, m in combo), start=Fraction(1))
            found.append((FiniteFn(self.domain, values), mass))
        return found

    def support_items(self, limit=DEFAULT_LIMIT):
        """Supported functions only, enumerated over the factor supports."""
        supports = [[(v, m) for v, m in f.items() if m > 0]
                    for f in self.factors]
        size = math.prod(len(s) for s in supports)
        if size > limit:
            raise LevelTooLarge(size, limit)
        return [
            (FiniteFn(self.domain, tuple(v for v, _ in combo)),
             math.prod((m for _, m in combo), start=Fraction(1)))
            for combo in itertools.product(*supports)
        ]

    def as_dist(self, limit=DEFAULT_LIMIT):
        items = self.items(limit)
        return Dist([phi for phi, _ in items], [m for _, m in items])


def _dist_items(dist, limit):
    if isinstance(dist, FactorizedDist):
        return dist.support_items(limit)
    return dist.items()


def _materialize(dist, limit):
    if isinstance(dist, FactorizedDist):
        return dist.as_dist(limit)
    return dist


class LiftedLevel(object):
    """Level n of the selection on the function space X -> Y.

    :param domain_level: level on X (base, product or lifted)
    :param codomain_level: level on Y (base, with a space)
    :param h: SemiconvexOp on the codomain elements
    :param int limit: largest domain enumeration materialized
    """
    def __init__(self, domain_level, codomain_level, h, limit=DEFAULT_LIMIT):
        if domain_level.n != codomain_level.n:
            raise LevelMismatch((domain_level.n, codomain_level.n))
        self.n = domain_level.n
        self.domain_level = domain_level
        self.codomain_level = codomain_level
        self.h = h
        self.limit = limit
        self.delta = None
        self.space = None
        self.domain = tuple(domain_level.elements())
        self.codomain = tuple(codomain_level.elements())

    @property
    def size(self):
        return len(self.codomain) ** len(self.domain)

    def element(self, k):
        """k-th finite function, first domain element most significant."""
        if not 0 <= k < self.size:
            raise IndexError(k)
        values = []
        for _ in self.domain:
            k, r = divmod(k, len(self.codomain))
            values.append(self.codomain[r])
        return FiniteFn(self.domain, tuple(reversed(values)))

    def elements(self):
        if self.size > self.limit:
            raise LevelTooLarge(self.size, self.limit)
        return tuple(
            FiniteFn(self.domain, values)
            for values in itertools.product(self.codomain,
                                            repeat=len(self.domain))
        )

    def nu(self, phi):
        return LiftedFn(self, phi)

    point = nu

    def mu(self, f):
        """eta_n(f) in factorized form."""
        return FactorizedDist(
            self.domain, [lift_dist_factor(self, f, a) for a in self.domain]
        )

    def __repr__(self):
        return 'LiftedLevel(n={}, |A|={}, |C|={})'.format(
            self.n, len(self.domain), len(self.codomain)
        )


def lift_apply(level, phi, x):
    """nu*_n(phi)(x): push mu_n(x) along phi, then combine in Y.

    :return: codomain handle
    """
    pushed = {c: Fraction(0) for c in level.codomain}
    for a, mass in _dist_items(level.domain_level.mu(x), level.limit):
        pushed[phi(a)] += mass
    dist = Dist(level.codomain, [pushed[c] for c in level.codomain])

    return level.h.combine(dist)


def lift_dist_factor(level, f, a):
    """Factor lambda_n(f(nu_n(a))) of eta_n(f)."""
    try:
        value = f(level.domain_level.point(a))
        return level.codomain_level.mu(value)
    except (ArithmeticError, ValueError, TypeError, ConstructionError) as e:
        raise EvaluationError(
            "Evaluation of {} at {} failed: {}".format(f, a, e)
        ) from e


def lift_mass(level, f, phi):
    """eta_n(f)(phi)"""
    return level.mu(f).mass(phi)


def lift_sample(level, f, seed):
    """Sample phi ~ eta_n(f) coordinatewise."""
    return level.mu(f).sample(make_rng(seed))


def lift_distribution_explicit(level, f, limit=DEFAULT_LIMIT):
    """All phi in B_n with their exact eta_n(f) masses."""
    return level.mu(f).items(limit)


def product_selection(levels, limit=DEFAULT_LIMIT):
    """Selection level on the product of the levels' spaces.

    :param levels: levels sharing the index n
    :return: the level itself for one factor, else a level over tuples
    """
    levels = list(levels)
    if len(levels) == 1:
        return levels[0]
    if len({level.n for level in levels}) != 1:
        raise LevelMismatch([level.n for level in levels])
    size = math.prod(level.size for level in levels)
    if size > limit:
        raise LevelTooLarge(size, limit)
    A = tuple(itertools.product(*[level.elements() for level in levels]))

    def nu(a):
        return tuple(level.nu(ak) for level, ak in zip(levels, a))

    def point(a):
        return tuple(level.point(ak) for level, ak in zip(levels, a))

    def mu(x):
        return Dist.product([
            _materialize(level.mu(xk), limit)
            for level, xk in zip(levels, x)
        ])

    deltas = [level.delta for level in levels]
    spaces = [level.space for level in levels]
    return SelectionLevel(
        levels[0].n, A, nu, mu,
        delta=min(deltas) if None not in deltas else None,
        space=ProductSpace(spaces) if None not in spaces else None,
        point=point
    )


def _normalize_bases(bases):
    found = {}
    for key, space in bases.items():
        index = int(key[1:]) if isinstance(key, str) else int(key)
        if isinstance(space, UrysohnBuilder):
            space = UrysohnSpace(space)
        found[index] = space
    return found


def interpret_type(expr, bases, n, limit=DEFAULT_LIMIT):
    """Selection level n on the space denoted by a type.

    :param expr: TypeExpr or its text
    :param bases: mapping variable (1 or 'V1') -> EffSpace or UrysohnBuilder
    :param int n: level

    :return InterpretedType: (uncurried expression, level, semiconvex flag)
    """
    if isinstance(expr, str):
        expr = parse_type(expr)
    spaces = _normalize_bases(bases)
    base_levels = {}

    def base_level(index):
        if index not in spaces:
            raise UnsupportedType("Variable V{} has no space".format(index))
        if index not in base_levels:
            base_levels[index] = metric_selection_level(spaces[index], n)
        return base_levels[index]

    def build(node):
        if isinstance(node, Base):
            return base_level(node.index)
        if isinstance(node, Product):
            return product_selection([build(f) for f in node.factors], limit)
        if not isinstance(node.codomain, Base):
            raise UnsupportedType(
                "Arrow into {} has no base codomain".format(node.codomain)
            )
        codomain_level = base_level(node.codomain.index)
        if not is_semiconvex(codomain_level.space):
            raise UnsupportedType(
                "Codomain V{} ({}) is not semiconvex".format(
                    node.codomain.index, codomain_level.space.kind)
            )
        domain_level = build(node.domain)
        h = semiconvex_for(codomain_level.space, codomain_level.elements(),
                           codomain_level.nu)
        return LiftedLevel(domain_level, codomain_level, h, limit)

    expr = uncurry(expr)
    level = build(expr)
    semiconvex = isinstance(expr, Base) and is_semiconvex(level.space)

    return InterpretedType(expr, level, semiconvex)


def enumerate_dense(expr, bases, count, limit=DEFAULT_LIMIT):
    """First count points of the dense enumeration of a type.

    Pairs (n, k) are visited along diagonals s = n + k, n ascending; the
    k-th element of level n contributes nu_n of it. Base elements repeat
    across levels and are listed once.

    :return list: evaluable points
    """
    if isinstance(expr, str):
        expr = parse_type(expr)
    levels = {}
    last_level = None
    found = []
    seen = set()
    s = 0
    while len(found) < count:
        if last_level is not None and \
                s > last_level + max(levels[n].size for n in levels):
            break
        for n in range(s + 1):
            if len(found) >= count:
                break
            if last_level is not None and n > last_level:
                break
            if n not in levels:
                try:
                    levels[n] = interpret_type(expr, bases, n, limit).level
                except NotEnoughPoints:
                    last_level = n - 1
                    break
            level = levels[n]
            k = s - n
            if k >= level.size:
                continue
            element = level.element(k)
            key = (n, element) if isinstance(level, LiftedLevel) \
                else ('dense', element)
            if key in seen:
                continue
            seen.add(key)
            found.append(level.point(element))
        if last_level is not None and last_level < 0:
            break
        s += 1

    return found


def grid_distance(f, g, grid, space, p):
    """max over the grid of d(f(x), g(x)) within 2^-p."""
    return max(
        (space.dist(f(x), g(x), p) for x in grid), default=Fraction(0)
    )
