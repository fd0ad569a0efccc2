"""
Test cases for geometry.py
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from hyp4tubes import conf
from hyp4tubes.geometry import (BoundaryPoint, GeodesicPlane2, GeodesicRay, GeodesicSegment, Point4, dist,
                                dist_point_ray, dist_point_segment, dist_to_vertical_axis, exp_map,
                                minkowski, plane_constraints, to_hyperboloid)
from hyp4tubes.utils import GeometryError


@st.composite
def points(draw):
    x1, x2, x3 = (draw(st.floats(min_value=-5.0, max_value=5.0)) for _ in range(3))
    return Point4(x1, x2, x3, draw(st.floats(min_value=0.1, max_value=10.0)))


class GeometryTestCase(unittest.TestCase):

    def setUp(self):
        conf.reset()

    def test_point_validation(self):
        with self.assertRaises(GeometryError):
            Point4(0, 0, 0, 0)
        with self.assertRaises(GeometryError):
            Point4(0, 0, 0, -1)
        with self.assertRaises(GeometryError):
            Point4(math.nan, 0, 0, 1)
        with self.assertRaises(GeometryError):
            Point4('a', 0, 0, 1)
        self.assertEqual(list(Point4(1, 2, 3, 4)), [1.0, 2.0, 3.0, 4.0])

    def test_boundary_points(self):
        self.assertTrue(BoundaryPoint.infinity().is_infinite)
        with self.assertRaises(GeometryError):
            BoundaryPoint((0.0, 1.0))
        null = BoundaryPoint.at(1.0, 2.0, 0.5).null_vector()
        self.assertAlmostEqual(float(minkowski(null, null)), 0.0, places=12)

    def test_vertical_distance(self):
        self.assertAlmostEqual(dist(Point4(0, 0, 0, 1), Point4(0, 0, 0, math.e)), 1.0, places=14)
        self.assertEqual(dist(Point4(1, 2, 3, 4), Point4(1, 2, 3, 4)), 0.0)

    def test_hyperboloid(self):
        X = to_hyperboloid(Point4(0.3, -1.2, 2.0, 0.7))
        self.assertAlmostEqual(float(minkowski(X, X)), -1.0, places=12)

    @given(points(), points())
    @settings(max_examples=50, deadline=None)
    def test_dist_symmetric(self, p, q):
        self.assertAlmostEqual(dist(p, q), dist(q, p), places=12)
        self.assertGreaterEqual(dist(p, q), 0.0)

    @given(points(), points(), points())
    @settings(max_examples=50, deadline=None)
    def test_triangle_inequality(self, p, q, r):
        self.assertLessEqual(dist(p, r), dist(p, q) + dist(q, r) + 1e-9)

    def test_segment(self):
        a, b = Point4(0, 0, 0, 1), Point4(2, 0, 0, 1)
        segment = GeodesicSegment(a, b)
        self.assertAlmostEqual(segment.length, dist(a, b), places=12)
        mid = segment.point_at(0.5)
        self.assertAlmostEqual(dist(a, mid), dist(mid, b), places=10)
        # Geodesics between points of equal height are semicircles centred on R³.
        self.assertAlmostEqual(mid.x1, 1.0, places=10)
        self.assertAlmostEqual(mid.x4, math.sqrt(2.0), places=10)

        with self.assertRaises(GeometryError):
            GeodesicSegment(a, Point4(0, 0, 0, 1))

    def test_ray_to_infinity(self):
        ray = GeodesicRay(Point4(0, 0, 0, 1), BoundaryPoint.infinity())
        p = ray.point_at(2.0)
        np.testing.assert_allclose(p.coords, [0.0, 0.0, 0.0, math.exp(2.0)], atol=1e-12)

    def test_distance_to_ray_and_segment(self):
        z = Point4(1, 0, 0, 1)
        expected = math.acosh(math.sqrt(2.0))
        self.assertAlmostEqual(dist_to_vertical_axis(z), expected, places=12)

        ray = GeodesicRay(Point4(0, 0, 0, 1), BoundaryPoint.infinity())
        self.assertAlmostEqual(dist_point_ray(z, ray), expected, places=6)

        # The foot of the perpendicular (height √2) lies inside the segment...
        segment = GeodesicSegment(Point4(0, 0, 0, 1), Point4(0, 0, 0, 4))
        self.assertAlmostEqual(dist_point_segment(z, segment), expected, places=6)

        # ...and beyond this one, whose nearest point is its upper end.
        short = GeodesicSegment(Point4(0, 0, 0, 0.5), Point4(0, 0, 0, 1))
        self.assertAlmostEqual(dist_point_segment(z, short), dist(z, Point4(0, 0, 0, 1)), places=6)

    @given(points(), st.floats(min_value=0.0, max_value=4.0))
    @settings(max_examples=30, deadline=None)
    def test_exp_map(self, p, s):
        q = exp_map(p, (0.3, -0.5, 0.2, 0.8), s)
        self.assertAlmostEqual(dist(p, q), s, places=7)

    def test_exp_map_zero_direction(self):
        with self.assertRaises(GeometryError):
            exp_map(Point4(0, 0, 0, 1), (0, 0, 0, 0), 1.0)

    def test_plane_through_points(self):
        a, b, c = Point4(0, 0, 0, 1), Point4(1, 0, 0, 1), Point4(0, 1, 0, 2)
        plane = GeodesicPlane2.through_points(a, b, c)
        for p in (a, b, c):
            self.assertTrue(plane.contains(p, tol=1e-9))
            np.testing.assert_allclose(plane_constraints(plane, p), (0.0, 0.0), atol=1e-9)
        self.assertGreater(max(abs(v) for v in plane_constraints(plane, Point4(0, 0, 3, 1))), 1e-3)
        self.assertFalse(plane.contains(Point4(0, 0, 3, 1)))

    def test_vertical_plane(self):
        p = Point4(0.5, 0.5, 0.0, 2.0)
        plane = GeodesicPlane2.vertical(p, (1.0, 0.0, 0.0))
        self.assertTrue(plane.contains(p, tol=1e-9))
        self.assertTrue(plane.contains(Point4(7.0, 0.5, 0.0, 0.1), tol=1e-9))
        kinds = sorted(shape[0] for shape in plane.spheres())
        self.assertEqual(kinds, ['plane', 'plane'])

        with self.assertRaises(GeometryError):
            GeodesicPlane2.vertical(p, (0.0, 0.0, 0.0))

    def test_degenerate_planes(self):
        with self.assertRaises(GeometryError):
            GeodesicPlane2.from_normals((0, 1, 0, 0, 0), (0, 2, 0, 0, 0))
        # Three points on one geodesic span no plane.
        with self.assertRaises(GeometryError):
            GeodesicPlane2.through_points(Point4(0, 0, 0, 1), Point4(0, 0, 0, 2), Point4(0, 0, 0, 3))

if __name__ == '__main__':
    unittest.main()
