"""
Test cases for surface2d.py
"""

import math
import unittest

from hypothesis import given, settings, strategies as st

from hyp4tubes import conf
from hyp4tubes.surface2d import (PUNCTURED_TORUS, Moebius2, PointH2, cyclic_orbit_count_h2, dist_h2,
                                 hypercycle_arc_length, hypercycle_chord, hypercycle_points,
                                 pq_intersection, pq_word, prop6_formula, primitive_classes, trace_length,
                                 verify_lemma11, word_matrix)
from hyp4tubes.utils import GeometryError, NonHyperbolicElementError


class Surface2DTestCase(unittest.TestCase):

    def setUp(self):
        conf.reset()
        self.A, self.B = PUNCTURED_TORUS

    def test_punctured_torus(self):
        self.assertAlmostEqual(self.A.commutator(self.B).trace, -2.0, places=12)
        l = trace_length(self.A)
        self.assertAlmostEqual(l, 2 * math.acosh(1.5), places=14)
        self.assertAlmostEqual(trace_length(self.B), l, places=14)
        # sinh(l/2)² = (3/2)² − 1 for both generators.
        self.assertAlmostEqual(math.sinh(l / 2) * math.sinh(trace_length(self.B) / 2), 1.25, places=12)

    def test_moebius(self):
        with self.assertRaises(GeometryError):
            Moebius2(1.0, 1.0, 1.0, 1.0)
        with self.assertRaises(NonHyperbolicElementError):
            trace_length(Moebius2(1.0, 1.0, 0.0, 1.0))
        i = PointH2(0.0, 1.0)
        image = (self.A @ self.A.inverse()).apply(i)
        self.assertAlmostEqual(image.u, 0.0, places=12)
        self.assertAlmostEqual(image.v, 1.0, places=12)
        with self.assertRaises(GeometryError):
            PointH2(0.0, 0.0)

    def test_dist_h2(self):
        self.assertAlmostEqual(dist_h2(PointH2(0.0, 1.0), PointH2(0.0, math.e)), 1.0, places=14)

    def test_pq_words(self):
        self.assertEqual(pq_word(1, 0).word, 'A')
        self.assertEqual(pq_word(0, 1).word, 'B')
        for p, q in ((2, 1), (3, -2), (-1, 4), (5, 3)):
            curve = pq_word(p, q)
            self.assertEqual(curve.abelianization, (p, q))
            self.assertEqual(len(curve.word), abs(p) + abs(q))
        with self.assertRaises(ValueError):
            pq_word(2, 2)

    def test_intersection_numbers(self):
        self.assertEqual(pq_intersection(pq_word(1, 0), pq_word(0, 1)), 1)
        self.assertEqual(pq_intersection(pq_word(2, 1), pq_word(1, 2)), 3)
        self.assertEqual(pq_intersection(pq_word(1, 1), pq_word(1, 1)), 0)

    def test_primitive_classes(self):
        self.assertEqual(primitive_classes(1), [(0, 1), (1, -1), (1, 0), (1, 1)])
        self.assertIn((3, -2), primitive_classes(3))
        self.assertNotIn((2, 2), primitive_classes(3))

    def test_word_lengths(self):
        # (1, 1) is spelled AB.
        curve = pq_word(1, 1)
        M = word_matrix(curve.word, self.A, self.B)
        self.assertAlmostEqual(M.trace, (self.A @ self.B).trace, places=12)
        self.assertGreater(trace_length(M), 0)

    def test_hypercycle(self):
        z1, z = hypercycle_points(1.0, 4.0)
        self.assertAlmostEqual(abs(z.as_complex()), 4.0 * abs(z1.as_complex()), places=12)
        self.assertEqual(hypercycle_chord(1.0, 1.0), 0.0)
        with self.assertRaises(ValueError):
            hypercycle_points(1.0, 0.5)
        with self.assertRaises(ValueError):
            hypercycle_arc_length(-0.1, 2.0)

    @given(st.floats(min_value=0.0, max_value=5.0), st.floats(min_value=1.0, max_value=100.0))
    @settings(max_examples=100, deadline=None)
    def test_chord_dominates_arc(self, t, r):
        chord = hypercycle_chord(t, r)
        self.assertAlmostEqual(chord / (1 + chord), prop6_formula(t, r) / (1 + chord), places=9)
        self.assertGreaterEqual(chord + 1e-12 * (1 + chord), hypercycle_arc_length(t, r))

    def test_orbit_count(self):
        i = PointH2(0.0, 1.0)
        self.assertEqual(cyclic_orbit_count_h2(self.A, i, 0.5), 1)
        # The displacement of i under Aⁿ is at most n·d(i, Ai).
        d = dist_h2(i, self.A.apply(i))
        self.assertGreaterEqual(cyclic_orbit_count_h2(self.A, i, 2 * d + 1e-9), 5)

    def test_verify_lemma11(self):
        report = verify_lemma11(self.A, self.B, 3)
        n = len(primitive_classes(3))
        self.assertEqual(report.trials, n * (n - 1) // 2)
        self.assertTrue(report.passed, report.violations)

        M = Moebius2(2.0, 1.0, 1.0, 1.0)
        with self.assertRaises(GeometryError):
            verify_lemma11(M, M, 3)

if __name__ == '__main__':
    unittest.main()
