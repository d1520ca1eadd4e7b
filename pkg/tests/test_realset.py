#!/usr/bin/env python
import json
import math
import os
import shutil
import tempfile
import unittest

import respoly
from respoly.realset import UNBOUNDED, gaps


class Test(unittest.TestCase):
    def test_merge_and_sort(self):
        s = respoly.validate_set([[3, 4], [-1, 1], [0.5, 2]])
        assert s.intervals == ((-1.0, 2.0), (3.0, 4.0))
        assert s.m == 2
        assert s.hull == (-1.0, 4.0)
        assert s.diameter == 5.0

    def test_order_does_not_matter(self):
        a = respoly.validate_set([[1, 2], [-2, -1]])
        b = respoly.validate_set([[-2, -1], [1, 2]])
        assert a == b

    def test_touching_intervals_merge(self):
        s = respoly.validate_set([[-1, 0], [0, 1]])
        assert s.intervals == ((-1.0, 1.0),)

    def test_bad_intervals(self):
        for raw in ([], [[1, 0]], [[0, 0]], [["a", 1]], [[0, math.inf]], [[1, 2, 3]]):
            with self.assertRaises(respoly.InvalidInputError):
                respoly.validate_set(raw)

    def test_gaps(self):
        s = respoly.validate_set([[0, 1], [2, 3], [4, 5]])
        all_gaps = gaps(s)
        assert len(all_gaps) == 3
        assert (all_gaps[0].left, all_gaps[0].right) == (1.0, 2.0)
        assert all_gaps[-1].contains(6.0)
        assert all_gaps[-1].contains(-1.0)
        assert not all_gaps[-1].contains(2.5)
        assert respoly.gap_of(s, 3.5).index == 1
        assert respoly.gap_of(s, 2.5) is None
        assert respoly.gap_of(s, math.inf).kind == UNBOUNDED

    def test_locate(self):
        s = respoly.validate_set([[-2, -1], [1, 2]])
        prob = respoly.locate(s, 0.0)
        assert prob.gap_index == 0
        assert prob.in_bounded_gap
        assert not prob.outside_hull
        far = respoly.locate(s, 5.0)
        assert far.gap_index == UNBOUNDED
        assert far.outside_hull
        with self.assertRaises(respoly.InvalidInputError):
            respoly.locate(s, 1.5)
        with self.assertRaises(respoly.InvalidInputError):
            respoly.locate(s, -1.0)

    def test_affine_and_invert(self):
        s = respoly.validate_set([[-2, -1], [1, 2]])
        assert respoly.affine(s, -1, 0) == s
        assert respoly.affine(s, 2, 1).intervals == ((-3.0, -1.0), (3.0, 5.0))
        f = respoly.invert(s, 0.0)
        assert f.intervals == ((-1.0, -0.5), (0.5, 1.0))
        with self.assertRaises(respoly.InvalidInputError):
            respoly.affine(s, 0, 1)
        with self.assertRaises(respoly.InvalidInputError):
            respoly.invert(s, 1.5)

    def test_load_problem(self):
        spec = {"intervals": [[-2, -1], [1, 2]], "x0": 0}
        assert respoly.load_problem(spec).x0 == 0.0
        assert respoly.load_problem(json.dumps(spec)).x0 == 0.0
        assert respoly.load_problem(spec, x0=3.0).x0 == 3.0

        with self.assertRaises(respoly.InvalidInputError):
            respoly.load_problem({"intervals": [[-1, 1]]})
        with self.assertRaises(respoly.InvalidInputError):
            respoly.load_problem("not json")
        with self.assertRaises(respoly.InvalidInputError):
            respoly.load_problem({"x0": 2})

    def test_load_problem_from_file(self):
        folder = tempfile.mkdtemp()
        try:
            path = os.path.join(folder, "set.json")
            with open(path, "w") as f:
                json.dump({"intervals": [[-1, 1]], "x0": 2}, f)
            prob = respoly.load_problem(path)
            assert prob.set.intervals == ((-1.0, 1.0),)
            assert prob.x0 == 2.0
        finally:
            shutil.rmtree(folder)
