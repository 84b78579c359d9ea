import os
import sys
import logging
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel.core.effective import MaxNormSpace, RealLine
from urysel.exceptions import ConstructionError
from urysel.io_functions.reports import grid_from_json
from urysel.providers.logger import BaseLogger

LINE = RealLine()


class TestGrid:
    def test_001_base_domain(self):
        grid = grid_from_json(["1/2", {"index": 1}], LINE)
        assert [x.approx(4) for x in grid] == [Fraction(1, 2), Fraction(1)]

    def test_002_points_document(self):
        plane = MaxNormSpace(2)
        grid = grid_from_json({"points": [["1/2", "1/3"]]}, plane)
        assert grid[0].approx(0) == (Fraction(1, 2), Fraction(1, 3))

    def test_003_product_domain(self):
        grid = grid_from_json([["0/1", "1/4"], [{"value": "1/2"}, "2/1"]],
                              [LINE, LINE])
        assert [tuple(x.approx(3) for x in item) for item in grid] == [
            (Fraction(0), Fraction(1, 4)), (Fraction(1, 2), Fraction(2))
        ]

    def test_004_product_arity(self):
        with pytest.raises(ConstructionError):
            grid_from_json([["0/1"]], [LINE, LINE])


class TestLogger:
    def test_001_progress_windows(self):
        logger = BaseLogger('urysel-test')
        logger.setLevel(logging.DEBUG)
        records = []
        handler = logging.Handler()
        handler.emit = records.append
        logger.addHandler(handler)
        logger.set_progress(5)
        logger.set_progress(95)
        assert logger._window == (5, 95)
        logger.progress(50.0)
        assert [r.msg for r in records] == [50]
        logger.reset()
        assert logger._window == (0, 0)
