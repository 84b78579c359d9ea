import os
import sys
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.core.metric import (
    ExtensionRequest, FinMetric, admissibility_violations,
    extension_admissible, extension_row, is_metric, urysohn_extend,
    validate_metric
)
from urysel.exceptions import (
    InadmissibleRequest, InvalidRequest, UnknownPoint
)

# path 0 - 1 - 2 with unit edges
PATH = FinMetric.from_matrix([0, 1, 2], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])

targets = st.fractions(min_value=Fraction(1, 8), max_value=4,
                       max_denominator=8)
coordinate = st.fractions(min_value=-4, max_value=4, max_denominator=4)
planar = st.tuples(coordinate, coordinate)


def l1(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _l1_space(coords):
    matrix = [[l1(a, b) for b in coords] for a in coords]
    return coords, FinMetric.from_matrix(list(range(len(coords))), matrix)


# small valid spaces: distinct plane points under the l1 norm
spaces = st.lists(planar, min_size=1, max_size=5, unique=True).map(_l1_space)


class TestFinMetric:
    def test_001_lookup(self):
        assert PATH.size == len(PATH) == 3
        assert PATH.d(0, 2) == 2
        assert PATH.d(2, 0) == 2
        assert 1 in PATH and 5 not in PATH
        with pytest.raises(UnknownPoint):
            PATH.index(5)

    def test_002_with_point_is_persistent(self):
        bigger = PATH.with_point(3, [1, 2, 3])
        assert PATH.size == 3
        assert bigger.size == 4
        assert bigger.d(3, 2) == 3
        assert bigger.subspace([0, 1, 2]) == PATH

    def test_003_empty(self):
        assert validate_metric(FinMetric()) == []

    def test_004_every_violation_reported(self):
        broken = FinMetric.from_matrix(
            [0, 1, 2], [[1, 1, 5], [2, 0, 1], [5, 1, 0]]
        )
        axioms = sorted(v.axiom for v in validate_metric(broken))
        assert axioms == ['identity', 'symmetry', 'triangle']
        triangle = [v for v in validate_metric(broken)
                    if v.axiom == 'triangle'][0]
        assert triangle.points == (0, 1, 2)
        assert triangle.values == (Fraction(5), Fraction(2))

    def test_005_positivity(self):
        glued = FinMetric.from_matrix([0, 1], [[0, 0], [0, 0]])
        assert [v.axiom for v in validate_metric(glued)] == ['positivity']
        assert not is_metric(glued)

    def test_006_large_denominators(self):
        tiny = Fraction(1, 2 ** 70)
        space = FinMetric.from_matrix(
            [0, 1, 2],
            [[0, tiny, 2 * tiny], [tiny, 0, tiny], [2 * tiny, tiny, 0]]
        )
        assert is_metric(space)


class TestExtension:
    def test_001_request_validation(self):
        with pytest.raises(InvalidRequest):
            ExtensionRequest((0, 0), (1, 1))
        with pytest.raises(InvalidRequest):
            ExtensionRequest((0,), (0,))
        with pytest.raises(InvalidRequest):
            ExtensionRequest((0, 1), (1,))

    def test_002_of_sorts_base(self):
        req = ExtensionRequest.of({2: Fraction(1), 0: Fraction(3)})
        assert req.base == (0, 2)
        assert req.targets == (3, 1)
        assert req.height == 3

    def test_003_admissibility(self):
        assert extension_admissible(PATH, ExtensionRequest((0, 2), (1, 1)))
        violations = admissibility_violations(
            PATH, ExtensionRequest((0, 2), (Fraction(1, 2), Fraction(1, 2)))
        )
        assert len(violations) == 1
        assert violations[0].distance == 2

    def test_004_extension_row(self):
        req = ExtensionRequest((0,), (Fraction(1, 2),))
        assert extension_row(PATH, req) == [
            Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)
        ]
        with pytest.raises(InvalidRequest):
            extension_row(PATH, ExtensionRequest((), ()))

    def test_005_inadmissible(self):
        with pytest.raises(InadmissibleRequest):
            urysohn_extend(PATH, ExtensionRequest((0, 2), (1, 5)))

    def test_006_first_point(self):
        space = urysohn_extend(FinMetric(), ExtensionRequest((), ()))
        assert space.points == (0,)

    @given(targets, targets, targets)
    def test_007_extension_exact_and_metric(self, a, b, c):
        req = ExtensionRequest((0, 1, 2), (a, b, c))
        if not extension_admissible(PATH, req):
            with pytest.raises(InadmissibleRequest):
                urysohn_extend(PATH, req)
            return
        extended = urysohn_extend(PATH, req)
        assert extended.points == (0, 1, 2, 3)
        assert [extended.d(3, u) for u in (0, 1, 2)] == [a, b, c]
        assert validate_metric(extended) == []

    @given(spaces, st.data())
    def test_008_realized_request_on_random_space(self, space, data):
        coords, M = space
        t = data.draw(planar)
        assume(t not in coords)
        base = data.draw(st.lists(st.sampled_from(range(M.size)),
                                  min_size=1, unique=True))
        req = ExtensionRequest.of({u: l1(t, coords[u]) for u in base})
        assert extension_admissible(M, req)
        extended = urysohn_extend(M, req)
        assert validate_metric(extended) == []
        assert [extended.d(M.size, u) for u in req.base] == \
            list(req.targets)
        assert extended.subspace(M.points) == M

    @given(spaces, st.data())
    def test_009_arbitrary_targets_on_random_space(self, space, data):
        _, M = space
        base = data.draw(st.lists(st.sampled_from(range(M.size)),
                                  min_size=1, unique=True))
        values = data.draw(st.lists(targets, min_size=len(base),
                                    max_size=len(base)))
        req = ExtensionRequest(tuple(base), tuple(values))
        if not extension_admissible(M, req):
            with pytest.raises(InadmissibleRequest):
                urysohn_extend(M, req)
            return
        extended = urysohn_extend(M, req)
        assert validate_metric(extended) == []
        assert [extended.d(M.size, u) for u in base] == values
        for u in M.points:
            for v in M.points:
                assert extended.d(u, v) == M.d(u, v)

    @given(spaces, st.data())
    def test_010_admissible_under_smaller_base(self, space, data):
        coords, M = space
        t = data.draw(planar)
        assume(t not in coords)
        req = ExtensionRequest.of(
            {u: l1(t, coords[u]) for u in range(M.size)}
        )
        smaller = data.draw(st.lists(st.sampled_from(req.base),
                                     min_size=1, unique=True))
        sub = ExtensionRequest.of({u: req.as_dict()[u] for u in smaller})
        assert extension_admissible(M, sub)
        # shrinking keeps admissibility for any admissible request
        values = data.draw(st.lists(targets, min_size=M.size,
                                    max_size=M.size))
        wide = ExtensionRequest(tuple(range(M.size)), tuple(values))
        if extension_admissible(M, wide):
            narrow = ExtensionRequest.of(
                {u: wide.as_dict()[u] for u in smaller}
            )
            assert extension_admissible(M, narrow)
