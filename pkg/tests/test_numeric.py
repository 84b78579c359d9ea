import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.core.numeric import (
    FastCauchy, fc_consistency_check, fc_dist, rat, rat_from_str, rat_monus,
    rat_to_str, rational_oracle, two_pow
)
from urysel.exceptions import MismatchedSpace, NegativeInput

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
non_negative = st.fractions(min_value=0, max_value=100, max_denominator=50)


def wobbly(q, signs):
    """Stream of q whose stage n is off by 2^-(n+1) in a drawn direction."""
    return FastCauchy(
        lambda n: q + signs[n % len(signs)] * two_pow(n + 1), space_tag='R'
    )


def skewed_oracle(a, b, p):
    # error 2^-p, with the sign depending on the argument order
    noise = two_pow(p) if a < b else -two_pow(p)
    return max(Fraction(0), abs(a - b) + noise)


signs = st.lists(st.sampled_from([-1, 0, 1]), min_size=1, max_size=6)


def sqrt2():
    from math import isqrt

    return FastCauchy(
        lambda n: Fraction(isqrt(2 << (2 * n)), 1 << n), space_tag='R'
    )


class TestRational:
    def test_001_text_form(self):
        assert rat_to_str(Fraction(3)) == '3/1'
        assert rat_to_str(Fraction(-6, 4)) == '-3/2'
        assert rat_from_str(' 3/4 ') == Fraction(3, 4)
        assert rat('1/3') == Fraction(1, 3)

    def test_002_no_floats(self):
        with pytest.raises(TypeError):
            rat(0.5)

    def test_003_two_pow(self):
        assert two_pow(3) == Fraction(1, 8)
        assert two_pow(-2) == 4

    @given(non_negative, non_negative)
    def test_004_monus(self, u, v):
        result = rat_monus(u, v)
        assert result >= 0
        assert result == max(u - v, 0)
        assert result + min(u, v) == u

    def test_005_monus_negative(self):
        with pytest.raises(NegativeInput):
            rat_monus(Fraction(-1), Fraction(0))


class TestFastCauchy:
    def test_001_memoized(self):
        calls = []

        def approx(n):
            calls.append(n)
            return Fraction(1, n + 1)

        x = FastCauchy(approx)
        assert x.approx(3) == x(3) == Fraction(1, 4)
        assert calls == [3]

    def test_002_negative_precision(self):
        with pytest.raises(NegativeInput):
            FastCauchy.constant(Fraction(1)).approx(-1)

    def test_003_sqrt2_consistent(self):
        x = sqrt2()
        for n in range(12):
            for m in range(n, 12):
                assert fc_consistency_check(x, n, m)
            assert abs(x.approx(n) ** 2 - 2) <= 3 * two_pow(n)

    def test_004_inconsistent_stream(self):
        x = FastCauchy(lambda n: Fraction(n))
        assert not fc_consistency_check(x, 0, 3)

    @given(rationals, rationals, st.integers(min_value=0, max_value=20))
    def test_005_dist_of_constants(self, a, b, n):
        x = FastCauchy.constant(a, 'R')
        y = FastCauchy.constant(b, 'R')
        assert fc_dist(x, y, rational_oracle, n) == abs(a - b)

    def test_006_dist_within_precision(self):
        x = sqrt2()
        y = FastCauchy.constant(Fraction(0), 'R')
        for n in range(10):
            d = fc_dist(x, y, rational_oracle, n)
            assert abs(d - Fraction(14142135623730951, 10 ** 16)) <= two_pow(n)

    def test_007_mismatched_space(self):
        with pytest.raises(MismatchedSpace):
            fc_dist(FastCauchy.constant(0, 'R'), FastCauchy.constant(0, 'U'),
                    rational_oracle, 2)

    def test_008_prefix(self):
        x = FastCauchy.constant(Fraction(1, 3))
        assert x.prefix(range(2)) == [(0, Fraction(1, 3)), (1, Fraction(1, 3))]

    @given(rationals, signs, rationals, signs,
           st.integers(min_value=0, max_value=16))
    def test_009_dist_symmetric(self, a, sa, b, sb, n):
        x, y = wobbly(a, sa), wobbly(b, sb)
        forward = fc_dist(x, y, skewed_oracle, n)
        backward = fc_dist(y, x, skewed_oracle, n)
        assert abs(forward - backward) <= 2 * two_pow(n)

    @given(rationals, signs, rationals, signs, rationals, signs,
           st.integers(min_value=0, max_value=16))
    def test_010_dist_triangle(self, a, sa, b, sb, c, sc, n):
        x, y, z = wobbly(a, sa), wobbly(b, sb), wobbly(c, sc)
        assert fc_dist(x, z, skewed_oracle, n) <= \
            fc_dist(x, y, skewed_oracle, n) + \
            fc_dist(y, z, skewed_oracle, n) + 3 * two_pow(n)

    @given(rationals, signs, st.integers(min_value=0, max_value=16))
    def test_011_wobbly_stream_is_fast(self, a, sa, n):
        x = wobbly(a, sa)
        assert fc_consistency_check(x, n, n + 3)
        assert abs(fc_dist(x, FastCauchy.constant(a, 'R'),
                           skewed_oracle, n)) <= two_pow(n)
