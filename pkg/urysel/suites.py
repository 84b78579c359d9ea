"""Invariant suites run by the ``check`` command.

Every suite draws its random inputs from one generator seeded by the run
configuration and records each assertion with the rational witnesses of
its failures.
"""

import itertools
from collections import OrderedDict
from fractions import Fraction

import numpy as np
from scipy.stats import chisquare

from urysel.core import Suite
from urysel.core.domain import (
    Ball, Cluster, IdealApprox, Tri, delta_extract, ideal_represents,
    least_ideal_stream
)
from urysel.core.effective import (
    FiniteSpace, MaxNormSpace, RealLine, SubSpace, embed_into_U, verify_isometry
)
from urysel.core.metric import (
    ExtensionRequest, FinMetric, extension_admissible, validate_metric
)
from urysel.core.numeric import FastCauchy, fc_consistency_check, two_pow
from urysel.core.urysohn import UrysohnBuilder
from urysel.exceptions import NoWitness, UnknownSuite
from urysel.processes.lift import (
    NativeFn, interpret_type, lift_apply, lift_distribution_explicit,
    lift_sample, product_selection
)
from urysel.processes.selection import (
    Dist, banach_semiconvex, convergence_harness, dist_sample,
    metric_selection_level, urysohn_semiconvex
)
from urysel.providers import Logger

# at most this many failure witnesses are kept per assertion
MAX_WITNESSES = 10
# chi-square smoke tests fail below this p-value
CHI2_ALPHA = 1e-3


class SuiteReport(object):
    def __init__(self, name):
        self.name = name
        self.assertions = OrderedDict()
        self.facts = OrderedDict()

    def check(self, assertion, ok, witness=None):
        entry = self.assertions.setdefault(
            assertion, {'checked': 0, 'failed': 0, 'witnesses': []}
        )
        entry['checked'] += 1
        if not ok:
            entry['failed'] += 1
            if len(entry['witnesses']) < MAX_WITNESSES:
                entry['witnesses'].append(witness)
        return ok

    @property
    def ok(self):
        return all(a['failed'] == 0 for a in self.assertions.values())

    def as_dict(self):
        return {
            'suite': self.name,
            'ok': self.ok,
            'assertions': [
                dict(name=name, **entry)
                for name, entry in self.assertions.items()
            ],
            'facts': dict(self.facts),
        }


def _random_rational(rng, height):
    return Fraction(int(rng.integers(1, height + 1)),
                    int(rng.integers(1, height + 1)))


def _signed_rational(rng, bound=200, den=50):
    return Fraction(int(rng.integers(-bound, bound + 1)),
                    int(rng.integers(1, den + 1)))


def _built(config):
    builder = UrysohnBuilder(height_cap=config.height)
    builder.run_bookkeeping(config.steps)
    return builder


def metric_axioms(config, rng, inject_fault=False):
    report = SuiteReport(Suite.metric_axioms)
    builder = _built(config)
    space = builder.space
    if inject_fault and space.size >= 2:
        matrix = space.matrix()
        bump = sum(sum(row) for row in matrix) + 1
        matrix[0][1] = matrix[1][0] = bump
        space = FinMetric.from_matrix(space.points, matrix)

    violations = validate_metric(space)
    report.check('metric axioms', not violations, violations[:MAX_WITNESSES])
    for entry in builder.log:
        exact = all(builder.d(entry.point, u) == a
                    for u, a in zip(entry.request.base, entry.request.targets))
        report.check('logged requests exact', exact,
                     {'request': entry.request, 'point': entry.point})
    report.facts['points'] = builder.size
    report.facts['steps'] = config.steps

    return report


def saturation(config, rng, inject_fault=False, requests=100):
    report = SuiteReport(Suite.saturation)
    builder = _built(config)
    realized = 0
    for _ in range(requests):
        n = builder.size
        for attempt in range(50):
            k = int(rng.integers(1, min(3, n) + 1))
            subset = sorted(int(i) for i in rng.choice(n, size=k, replace=False))
            targets = [_random_rational(rng, 2 * config.height) for _ in subset]
            req = ExtensionRequest(tuple(subset), tuple(targets))
            if extension_admissible(builder.space, req):
                break
        else:
            continue
        point = builder.realize_rational(req)
        realized += 1
        for u, a in zip(req.base, req.targets):
            expected = a + Fraction(1, 1000) \
                if inject_fault and realized == 1 else a
            d = builder.d(point, u)
            report.check('exact distances', d == expected,
                         {'point': point, 'base': u, 'target': expected,
                          'distance': d})
    report.check('metric after saturation', not validate_metric(builder.space))
    report.facts['realized'] = realized
    report.facts['points'] = builder.size

    return report


def observation(config, rng, inject_fault=False, families=200):
    report = SuiteReport(Suite.observation)
    builder = _built(config)
    n = builder.size
    injected = False
    for family in range(families):
        k = int(rng.integers(1, min(4, n) + 1))
        centers = sorted(int(i) for i in rng.choice(n, size=k, replace=False))
        radii = [_random_rational(rng, config.height) for _ in centers]
        balls = list(zip(centers, radii))
        condition = builder.balls_intersect(balls)
        sphere = ExtensionRequest(tuple(centers), tuple(radii))
        admissible = extension_admissible(builder.space, sphere)
        report.check('condition iff sphere request admissible',
                     condition == admissible,
                     {'balls': balls, 'condition': condition})
        try:
            witness = builder.witness_intersection(balls)
        except NoWitness as e:
            report.check('condition iff witness exists', not condition,
                         {'balls': balls, 'pair': e.pair})
            continue
        report.check('condition iff witness exists', condition,
                     {'balls': balls})
        if inject_fault and not injected:
            balls[0] = (balls[0][0], balls[0][1] + 1)
            injected = True
        for center, radius in balls:
            d = builder.d(witness, center)
            report.check('witness on every sphere', d == radius,
                         {'witness': witness, 'center': center,
                          'radius': radius, 'distance': d})
    report.facts['points'] = builder.size

    return report


def _chi_square_ok(counts, expected):
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(expected, dtype=float)
    _, pvalue = chisquare(counts, expected * counts.sum() / expected.sum())
    return pvalue >= CHI2_ALPHA, float(pvalue)


def selection(config, rng, inject_fault=False, points=100, max_level=40,
              trials=50, harness_levels=65, draws=10 ** 4):
    report = SuiteReport(Suite.selection)
    line = RealLine()
    levels = [metric_selection_level(line, n) for n in range(max_level + 1)]

    half = levels[1].mu(Fraction(1, 2))
    report.check('hand computed level 1 at 1/2',
                 half.masses == (Fraction(1, 2), Fraction(1, 2)),
                 {'dist': half})

    bump = Fraction(1, 1000) if inject_fault else Fraction(0)
    for _ in range(points):
        x = _signed_rational(rng)
        for level in levels:
            dist = level.mu(x)
            total = sum(dist.masses) + bump
            bump = Fraction(0)
            report.check('exact normalization', total == 1,
                         {'x': x, 'n': level.n, 'total': total})
            distances = [abs(x - line.dense(a)) for a in level.A]
            nearest = min(distances)
            expected = {a for a, d in zip(level.A, distances)
                        if d < nearest + level.delta}
            report.check('support bound', set(dist.support()) == expected,
                         {'x': x, 'n': level.n, 'support': dist.support()})
            top = dist.mass(level.A[distances.index(nearest)])
            report.check('nearest point dominance',
                         all(top >= m for m in dist.masses),
                         {'x': x, 'n': level.n})

    # convergence mod measures toward 1/3
    target = Fraction(1, 3)
    harness = convergence_harness(
        [metric_selection_level(line, n) for n in range(harness_levels)],
        line.point(target),
        lambda n: line.point(target + two_pow(n)),
        trials, rng
    )
    for row in harness['levels']:
        report.check('samples inside envelope', not row['violations'],
                     row['violations'])
    last = harness['levels'][-1]
    report.check('envelope below 2^-5', last['envelope'] < two_pow(5),
                 {'n': last['n'], 'envelope': last['envelope']})

    coin = Dist((0, 1), (Fraction(1, 2), Fraction(1, 2)))
    counts = [0, 0]
    for _ in range(draws):
        counts[dist_sample(coin, rng)] += 1
    ok, pvalue = _chi_square_ok(counts, [1, 1])
    report.check('fair coin sampler', ok, {'counts': counts, 'p': pvalue})

    # affine Banach combination
    plane_nu = [(Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)),
                (Fraction(0), Fraction(2))]
    plane = MaxNormSpace(2)
    h = banach_semiconvex(plane, (0, 1, 2), plane_nu.__getitem__)
    for _ in range(20):
        m1 = Dist.normalized((0, 1, 2), [_random_rational(rng, 5)
                                         for _ in range(3)])
        m2 = Dist.normalized((0, 1, 2), [_random_rational(rng, 5)
                                         for _ in range(3)])
        lam = Fraction(int(rng.integers(0, 9)), 8)
        mixed = Dist((0, 1, 2), [lam * a + (1 - lam) * b
                                 for a, b in zip(m1.masses, m2.masses)])
        left = h.combine(mixed)
        right = tuple(lam * a + (1 - lam) * b
                      for a, b in zip(h.combine(m1), h.combine(m2)))
        report.check('banach combine affine', left == right,
                     {'lambda': lam, 'left': left, 'right': right})

    # Urysohn combination distance bound
    builder = _built(config)
    images = list(range(min(4, builder.size)))
    uh = urysohn_semiconvex(builder, tuple(images), lambda a: a)
    for _ in range(20):
        m = Dist.normalized(tuple(images), [
            Fraction(int(rng.integers(0, 4))) for _ in images[:-1]] + [1])
        u = uh.combine(m)
        spt = m.support()
        bound = max(builder.d(a, b) for a in spt for b in spt)
        for a in spt:
            d = builder.d(u, a)
            report.check('urysohn combine bound', d <= bound,
                         {'dist': m, 'point': u, 'image': a, 'distance': d,
                          'bound': bound})
    report.facts['harness_violations'] = harness['violations']

    return report


def _shifted_identity(shift):
    return NativeFn(lambda q: q + shift, name='x+{}'.format(shift))


def lift(config, rng, inject_fault=False, draws=10 ** 4, trials=10 ** 3,
         product_cases=100):
    report = SuiteReport(Suite.lift)
    line = RealLine()
    level = interpret_type('V1->V1', {1: line}, 2).level
    report.facts['domain'] = [line.dense(a) for a in level.domain]
    bump = Fraction(1, 1000) if inject_fault else Fraction(0)

    for name, f in (('identity', NativeFn(lambda q: q, name='x')),
                    ('shift', _shifted_identity(Fraction(1, 4)))):
        explicit = lift_distribution_explicit(level, f)
        report.check('27 finite functions', len(explicit) == 27,
                     {'f': name, 'count': len(explicit)})
        total = sum(m for _, m in explicit)
        report.check('eta sums to one', total == 1,
                     {'f': name, 'total': total})

        supported = [(phi, m) for phi, m in explicit if m > 0]
        index = {phi: i for i, (phi, _) in enumerate(supported)}
        counts = [0] * len(supported)
        outside = 0
        for _ in range(draws):
            phi = lift_sample(level, f, rng)
            if phi in index:
                counts[index[phi]] += 1
            else:
                outside += 1
        report.check('sampler stays in support', outside == 0,
                     {'f': name, 'outside': outside})
        if len(supported) > 1:
            ok, pvalue = _chi_square_ok(counts, [m for _, m in supported])
            report.check('sampler matches eta', ok,
                         {'f': name, 'counts': counts, 'p': pvalue})

        for phi, _ in supported:
            for x in (Fraction(0), Fraction(1, 4), Fraction(2, 3),
                      Fraction(1), Fraction(-1, 2)):
                mu = level.domain_level.mu(x)
                expected = sum(
                    (m * line.dense(phi(a)) for a, m in mu.items()), bump
                )
                bump = Fraction(0)
                value = lift_apply(level, phi, x)
                report.check('lift_apply is the convex combination',
                             value == expected,
                             {'f': name, 'phi': phi, 'x': x,
                              'value': value, 'expected': expected})

    f = _shifted_identity(Fraction(1, 4))
    eta = level.mu(f)
    for _ in range(trials):
        phi = lift_sample(level, f, rng)
        x = _signed_rational(rng, bound=8, den=8)
        for a in level.domain_level.mu(x).support():
            factor = eta.factor(a)
            report.check('support propagation', factor.mass(phi(a)) > 0,
                         {'phi': phi, 'x': x, 'a': a})

    for _ in range(product_cases):
        n = int(rng.integers(0, 6))
        first = metric_selection_level(line, n)
        second = metric_selection_level(line, n)
        product = product_selection([first, second])
        x = (_signed_rational(rng, 10, 8), _signed_rational(rng, 10, 8))
        joint = product.mu(x)
        for k, component in enumerate((first, second)):
            marginal = joint.marginal(k)
            expected = component.mu(x[k])
            same = all(marginal.mass(a) == expected.mass(a)
                       for a in component.A)
            report.check('product marginals exact', same,
                         {'n': n, 'x': x, 'k': k})

    return report


def domain_rep(config, rng, inject_fault=False, points=50, max_stage=16):
    report = SuiteReport(Suite.domain_rep)
    line = RealLine()
    for trial in range(points):
        first = trial == 0
        x = _signed_rational(rng, bound=40, den=16)
        point = line.point(x)

        extracted = delta_extract(line, least_ideal_stream(line, point))
        for n in range(max_stage + 1):
            error = abs(extracted.approx(n) - x)
            report.check('round trip within 2^-n', error <= two_pow(n),
                         {'x': x, 'n': n, 'error': error})

        # upward closure
        center = line.index_of(x)
        radius = Fraction(1, int(rng.integers(2, 64)))
        eps = 2 * radius
        ideal = IdealApprox((Cluster((Ball(center, radius),)),))
        if inject_fault and first:
            # ball far away from x in the first chain
            ideal = ideal.extend(
                Cluster((Ball(line.index_of(x + 4), Fraction(1, 2)),))
            )
        report.check('represents own cluster',
                     ideal_represents(line, ideal, point, eps) is Tri.YES,
                     {'x': x, 'radius': radius})
        tiny = Ball(center, two_pow(config.precision + 4))
        extra = []
        for _ in range(int(rng.integers(0, 3))):
            m = int(rng.integers(0, 32))
            s = abs(line.dense(m) - x) + _random_rational(rng, 8)
            extra.append(Ball(m, s))
        extended = ideal.extend(Cluster(tuple([tiny] + extra)))
        verdict = ideal_represents(line, extended, point, eps,
                                   config.precision)
        report.check('upward closure', verdict is not Tri.NO,
                     {'x': x, 'chain': extended})

        # Hausdorff uniqueness
        gap = Fraction(int(rng.integers(1, 9)), 8)
        y = x + gap
        separated = IdealApprox((Cluster((Ball(center, gap / 4),)),))
        verdict = ideal_represents(line, separated, line.point(y), eps)
        report.check('hausdorff uniqueness', verdict is Tri.NO,
                     {'x': x, 'y': y})

    return report


def embedding(config, rng, inject_fault=False):
    report = SuiteReport(Suite.embedding)
    p = config.precision

    rationals = SubSpace(RealLine(), [Fraction(k, 4) for k in range(5)])
    builder = UrysohnBuilder(height_cap=config.height)
    emb = embed_into_U(rationals, builder, rationals.size)
    pairs = list(itertools.combinations_with_replacement(
        range(rationals.size), 2))
    result = verify_isometry(emb, pairs, p)
    for row in result['rows']:
        report.check('rational points within 2^-p+2',
                     row['discrepancy'] <= result['bound'], row)

    square = FinMetric.from_matrix(list(range(4)), [
        [0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    exact = embed_into_U(FiniteSpace(square), builder, 4)
    result = verify_isometry(
        exact, list(itertools.combinations_with_replacement(range(4), 2)), p)
    expected = Fraction(1, 1000) if inject_fault else Fraction(0)
    for row in result['rows']:
        report.check('finite space exact', row['discrepancy'] == expected,
                     row)
        expected = Fraction(0)

    line = RealLine()
    dense = embed_into_U(line, builder, 6)
    for i in range(6):
        image = dense.image(i)
        for n, m in itertools.combinations(range(8), 2):
            report.check('images fast converging',
                         fc_consistency_check(image, n, m, builder.d),
                         {'image': i, 'n': n, 'm': m})
        for n in range(8):
            step = builder.d(image.approx(n), image.approx(n + 1))
            report.check('chain property', step <= two_pow(n + 1),
                         {'image': i, 'n': n, 'step': step})
    report.check('metric after embedding', not validate_metric(builder.space))
    report.facts['points'] = builder.size

    return report


SUITES = {
    Suite.metric_axioms: metric_axioms,
    Suite.saturation: saturation,
    Suite.observation: observation,
    Suite.selection: selection,
    Suite.lift: lift,
    Suite.domain_rep: domain_rep,
    Suite.embedding: embedding,
}


def run_suite(name, config, inject_fault=False):
    """Run one suite with a generator seeded by the configuration.

    :return SuiteReport: recorded assertions
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise UnknownSuite(name)
    Logger.info("Running suite {} (seed {})".format(name, config.seed))
    rng = np.random.default_rng(config.seed)
    report = suite(config, rng, inject_fault)
    Logger.info("Suite {} {}".format(name, 'passed' if report.ok else 'FAILED'))

    return report
