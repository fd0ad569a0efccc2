"""
Test cases for films.py
"""

import math
import unittest

import numpy as np

from hyp4tubes import conf
from hyp4tubes.films import (LAMBDA, THETA, ExtendedRuledFilm, RuledFilm, check_general_position,
                             count_film_film_intersections, count_film_plane_intersections, film_in_cone,
                             film_point)
from hyp4tubes.geometry import GeodesicPlane2, Point4, dist, exp_map
from hyp4tubes.isometry import Isometry4, index
from hyp4tubes.margulis import ElementaryGroup
from hyp4tubes.utils import GeometryError, InvalidSpecError

# A film in the vertical plane {x2 = x3 = 0}: the square x1 ∈ [0, 1], x4 ∈ [1, 2].
SHIFT = Isometry4.parabolic((1.0, 0.0, 0.0))
FLAT = RuledFilm(SHIFT, Point4(0.0, 0.0, 0.0, 1.0), Point4(0.0, 0.0, 0.0, 2.0))

def orthogonal_plane(p):
    """The plane through p orthogonal to the plane {x2 = x3 = 0}."""
    return GeodesicPlane2.through_points(p, exp_map(p, (0, 1, 0, 0), 1.0), exp_map(p, (0, 0, 1, 0), 1.0))

# Swept along x3 from a semicircle in {x1 = 0.5, x3 = −0.5}; it crosses FLAT once, at (0.5, 0, 0, √3.25).
CROSSING = RuledFilm(Isometry4.parabolic((0.0, 0.0, 1.0)), Point4(0.5, -1.0, -0.5, 1.5), Point4(0.5, 1.0, -0.5, 1.5))


class FilmsTestCase(unittest.TestCase):

    def setUp(self):
        conf.reset()
        self.lox = Isometry4.loxodromic(math.exp(0.3), theta=0.8)
        self.film = RuledFilm(self.lox, Point4(1.0, 0.5, 0.3, 1.0), Point4(0.5, 1.0, 0.2, 1.2))

    def test_construction(self):
        with self.assertRaises(GeometryError):
            RuledFilm(Isometry4('elliptic', theta=1.0), Point4(0, 0, 0, 1), Point4(1, 0, 0, 1))
        with self.assertRaises(GeometryError):
            RuledFilm(SHIFT, Point4(0, 0, 0, 1), Point4(0, 0, 0, 1))
        with self.assertRaises(InvalidSpecError):
            RuledFilm.from_spec({'T': SHIFT.to_spec(), 'x': [0, 0, 0, 1]})
        self.assertEqual(RuledFilm.from_spec(self.film.to_spec()), self.film)

    def test_sheets(self):
        self.assertEqual(self.film.sheets, (LAMBDA, THETA))
        self.assertEqual(FLAT.sheets, (LAMBDA,))
        with self.assertRaises(ValueError):
            self.film.sheet_points('mu', 0.5, 0.5)

    def test_corners_and_seam(self):
        F = self.film
        np.testing.assert_allclose(film_point(F, LAMBDA, 0.0, 0.0).coords, F.x.coords, atol=1e-12)
        np.testing.assert_allclose(film_point(F, THETA, 0.0, 1.0).coords, self.lox.apply(F.x).coords, atol=1e-12)
        np.testing.assert_allclose(film_point(F, THETA, 1.0, 1.0).coords, self.lox.apply(F.z).coords, atol=1e-12)

        ticks = np.linspace(0.0, 1.0, 11)
        np.testing.assert_allclose(F.sheet_points(LAMBDA, ticks, np.ones_like(ticks)),
                                   F.sheet_points(THETA, ticks, np.zeros_like(ticks)), atol=1e-12)

    def test_film_point_range(self):
        with self.assertRaises(ValueError):
            film_point(self.film, LAMBDA, 1.5, 0.0)
        with self.assertRaises(ValueError):
            film_point(self.film, THETA, 0.0, -0.1)

    def test_corner_index(self):
        F = self.film
        self.assertEqual(F.corner_index(), max(index(self.lox, F.x), index(self.lox, F.z)))
        self.assertTrue(film_in_cone(F, F.x))
        self.assertTrue(film_in_cone(F, F.z))
        self.assertFalse(film_in_cone(F, Point4(40.0, 0.0, 0.0, 0.01)))

    def test_bounding_ball(self):
        centre, radius = self.film.bounding_ball
        for sheet in self.film.sheets:
            for s, t in ((0.0, 0.0), (1.0, 1.0), (0.3, 0.9)):
                p = film_point(self.film, sheet, s, t)
                self.assertLessEqual(dist(centre, p), radius)

    def test_extended_film(self):
        extended = ExtendedRuledFilm(self.film)
        self.assertLess(extended.gluing_error(), 1e-10)
        self.assertEqual(len(extended.quotient_boundary()), 2)

    def test_general_position(self):
        certificate = check_general_position(self.film)
        self.assertTrue(certificate.certified)
        self.assertGreater(certificate.orthogonality_margin, 0.1)

        through_axis = RuledFilm(self.lox, Point4(0.0, 0.0, 0.0, 1.0), Point4(1.0, 0.0, 0.0, 1.0))
        certificate = check_general_position(through_axis)
        self.assertFalse(certificate.avoids_axis)
        self.assertFalse(certificate.condition_i)
        self.assertFalse(certificate.certified)

        # Without rotation there is no plane L_q to avoid.
        certificate = check_general_position(FLAT)
        self.assertTrue(certificate.certified)
        self.assertEqual(certificate.rotation_plane_margin, math.inf)

    def test_film_plane_single_root(self):
        p = Point4(0.5, 0.0, 0.0, 1.5)
        result = count_film_plane_intersections(FLAT, orthogonal_plane(p))
        self.assertEqual(result.count, 1)
        self.assertEqual(result.unsigned, 1)
        root = result.roots[0]
        self.assertEqual(root.sheet1, LAMBDA)
        self.assertAlmostEqual(root.t, 0.5, places=8)
        self.assertAlmostEqual(root.s, math.log(1.5) / math.log(2.0), places=8)
        np.testing.assert_allclose(root.point, p.coords, atol=1e-8)
        self.assertEqual(len(root.as_row()), 11)

    def test_film_plane_miss(self):
        # The same plane moved beyond the film's edge.
        result = count_film_plane_intersections(FLAT, orthogonal_plane(Point4(3.0, 0.0, 0.0, 1.5)))
        self.assertEqual(result.count, 0)

    def test_film_film_single_crossing(self):
        G = ElementaryGroup.cyclic(SHIFT)
        result = count_film_film_intersections(FLAT, CROSSING, G)
        self.assertEqual(result.unsigned, 1)
        self.assertEqual(abs(result.count), 1)
        root = result.roots[0]
        self.assertEqual(root.word, (0,))
        np.testing.assert_allclose(root.point, (0.5, 0.0, 0.0, math.sqrt(3.25)), atol=1e-7)
        self.assertAlmostEqual(root.u, 0.5, places=7)
        self.assertAlmostEqual(root.v, 0.5, places=7)

        # Reversing F2's segment flips the orientation of the crossing.
        reversed_film = RuledFilm(CROSSING.T, CROSSING.z, CROSSING.x)
        flipped = count_film_film_intersections(FLAT, reversed_film, G)
        self.assertEqual(flipped.count, -result.count)

    def test_film_film_disjoint(self):
        far = RuledFilm(CROSSING.T, Point4(0.5, -1.0, 5.0, 1.5), Point4(0.5, 1.0, 5.0, 1.5))
        result = count_film_film_intersections(FLAT, far, ElementaryGroup.cyclic(SHIFT))
        self.assertEqual((result.count, result.unsigned), (0, 0))

if __name__ == '__main__':
    unittest.main()
