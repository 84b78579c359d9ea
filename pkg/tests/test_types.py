import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.exceptions import TypeSyntaxError
from urysel.processes.types import Arrow, Base, Product, parse_type, uncurry


class TestTypes:
    def test_001_base(self):
        assert parse_type('V1') == Base(1)
        assert parse_type(' ( V12 ) ') == Base(12)

    def test_002_arrow_right_associative(self):
        assert parse_type('V1->V2->V1') == \
            Arrow(Base(1), Arrow(Base(2), Base(1)))
        assert parse_type('(V1->V2)->V1') == \
            Arrow(Arrow(Base(1), Base(2)), Base(1))

    def test_003_product(self):
        expr = parse_type('(V1,V2)->V1')
        assert expr == Arrow(Product((Base(1), Base(2))), Base(1))
        assert expr.variables() == {1, 2}
        assert str(expr) == '((V1,V2)->V1)'

    @pytest.mark.parametrize('text,position', [
        ('', 0), ('V1->', 4), ('(V1', 3), ('V1 V2', 3), ('W1', 0),
    ])
    def test_004_syntax_errors(self, text, position):
        with pytest.raises(TypeSyntaxError) as e:
            parse_type(text)
        assert e.value.position == position

    def test_005_uncurry(self):
        expr = uncurry(parse_type('V1->V2->V1'))
        assert expr == Arrow(Product((Base(1), Base(2))), Base(1))
        nested = uncurry(parse_type('(V1,V2)->V3->V1'))
        assert nested == Arrow(Product((Base(1), Base(2), Base(3))), Base(1))
        higher = uncurry(parse_type('(V1->V2->V1)->V1'))
        assert higher.domain == expr
