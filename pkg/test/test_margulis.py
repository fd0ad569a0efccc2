"""
Test cases for margulis.py
"""

import math
import unittest

import numpy as np

from hyp4tubes import conf
from hyp4tubes.geometry import Point4
from hyp4tubes.isometry import Isometry4, flow_rotational, index, power
from hyp4tubes.margulis import (ElementaryGroup, MargulisCone, boundary_residual, cone_boundary_mesh,
                                cone_contains, foliation_coordinate, injectivity_radius, min_index,
                                orbit_count, overlap_count, project_phi, q_function)
from hyp4tubes.utils import EmptyConeError, GeometryError, InvalidSpecError, TruncationError


class MargulisTestCase(unittest.TestCase):

    def setUp(self):
        conf.reset()
        self.dilation = ElementaryGroup.cyclic(Isometry4.dilation(math.e))
        self.shift = ElementaryGroup.cyclic(Isometry4.parabolic((1.0, 0.0, 0.0)))

    def test_dilation_orbit(self):
        x = Point4(0.0, 0.0, 0.0, 1.0)
        # d(x, gⁿx) = |n| on the axis: n = −3..3.
        self.assertEqual(orbit_count(self.dilation, x, 3.5), 7)
        self.assertEqual(overlap_count(self.dilation, x, 1.75), 7)
        self.assertAlmostEqual(min_index(self.dilation, x), 1.0, places=12)
        self.assertAlmostEqual(injectivity_radius(self.dilation, x), 0.5, places=12)

    def test_translation_orbit(self):
        x = Point4(0.0, 0.0, 0.0, 1.0)
        self.assertAlmostEqual(min_index(self.shift, x), 2.0 * math.asinh(0.5), places=12)
        self.assertEqual(orbit_count(self.shift, x, 2.0 * math.asinh(1.5) + 1e-9), 7)
        self.assertEqual(orbit_count(self.shift, x, 0.5), 1)

    def test_lattice_orbit(self):
        G = ElementaryGroup((Isometry4.parabolic((1.0, 0.0, 0.0)), Isometry4.parabolic((0.0, 1.0, 0.0))))
        self.assertEqual(G.kind, 'lattice')
        x = Point4(0.0, 0.0, 0.0, 1.0)
        # |n|² ≤ 1 picks the identity and the four generators and inverses.
        self.assertEqual(orbit_count(G, x, 2.0 * math.asinh(0.5) + 1e-9), 5)
        # ... and |n|² ≤ 2 adds the diagonals.
        self.assertEqual(orbit_count(G, x, 2.0 * math.asinh(math.sqrt(2.0) / 2.0) + 1e-9), 9)

    def test_group_validation(self):
        with self.assertRaises(GeometryError):
            ElementaryGroup(())
        with self.assertRaises(GeometryError):
            ElementaryGroup((Isometry4.parabolic((1.0, 0.0, 0.0)), Isometry4.parabolic((2.0, 0.0, 0.0))))
        with self.assertRaises(GeometryError):
            ElementaryGroup((Isometry4.dilation(2.0), Isometry4.parabolic((1.0, 0.0, 0.0))))
        with self.assertRaises(GeometryError):
            ElementaryGroup.cyclic(Isometry4.dilation(2.0), truncation=0)

    def test_from_spec(self):
        G = ElementaryGroup.from_spec({'kind': 'loxodromic', 'lambda': 2.0})
        self.assertEqual(G.kind, 'loxodromic')
        self.assertEqual(ElementaryGroup.from_spec(G.to_spec()), G)

        lattice = ElementaryGroup.from_spec({'generators': [{'kind': 'parabolic', 'translation': [1, 0, 0]},
                                                            {'kind': 'parabolic', 'translation': [0, 1, 0]}],
                                             'truncation': 64})
        self.assertEqual((lattice.rank, lattice.truncation), (2, 64))

        with self.assertRaises(InvalidSpecError):
            ElementaryGroup.from_spec({'generators': 'none'})
        with self.assertRaises(InvalidSpecError):
            ElementaryGroup.from_spec({'generators': [], 'truncation': 'many'})

    def test_truncation(self):
        G = ElementaryGroup.cyclic(Isometry4.dilation(1.001), truncation=10)
        with self.assertRaises(TruncationError):
            orbit_count(G, Point4(0.0, 0.0, 0.0, 1.0), 1.0)

    def test_cone_membership(self):
        K = MargulisCone(ElementaryGroup.cyclic(Isometry4.dilation(math.exp(0.2))), 0.5)
        self.assertFalse(K.is_empty)
        self.assertTrue(cone_contains(K, Point4(0.0, 0.0, 0.0, 3.0)))
        self.assertFalse(cone_contains(K, Point4(10.0, 0.0, 0.0, 0.01)))

        empty = MargulisCone(self.dilation, 0.5)
        self.assertTrue(empty.is_empty)
        self.assertFalse(cone_contains(empty, Point4(0.0, 0.0, 0.0, 1.0)))
        with self.assertRaises(EmptyConeError):
            project_phi(empty, Point4(1.0, 0.0, 0.0, 1.0))
        with self.assertRaises(GeometryError):
            MargulisCone(self.dilation, -1.0)

    def test_horospherical_projection(self):
        K = MargulisCone(self.shift, 0.5)
        p = project_phi(K, Point4(0.3, 0.2, 0.0, 5.0))
        self.assertEqual((p.x1, p.x2, p.x3), (0.3, 0.2, 0.0))
        self.assertAlmostEqual(p.x4, 1.0 / (2.0 * math.sinh(0.25)), places=12)
        self.assertLess(boundary_residual(K, p), 1e-8)

    def test_loxodromic_projection(self):
        K = MargulisCone(ElementaryGroup.cyclic(Isometry4.loxodromic(math.exp(0.2), theta=0.4)), 0.5)
        for a in (Point4(1.0, 0.0, 0.0, 1.0), Point4(0.2, 0.3, 0.1, 0.05), Point4(-0.1, 0.0, 0.2, 4.0)):
            p = project_phi(K, a)
            self.assertLess(boundary_residual(K, p), 1e-8)
        with self.assertRaises(GeometryError):
            project_phi(K, Point4(0.0, 0.0, 0.0, 1.0))

    def test_q_function(self):
        g = Isometry4.parabolic((1.0, 0.0, 0.0))
        self.assertEqual(q_function(g, Point4(0.0, 0.0, 0.0, 10.0), 0.5), 1)
        self.assertIsNone(q_function(g, Point4(0.0, 0.0, 0.0, 1.0), 0.5))

    def test_foliation_coordinate(self):
        g = Isometry4.dilation(2.0)
        self.assertAlmostEqual(foliation_coordinate(g, Point4(0.0, 0.0, 0.0, math.e)).t, 1.0, places=14)
        h = Isometry4.parabolic((0.0, 3.0, 0.0))
        self.assertAlmostEqual(foliation_coordinate(h, Point4(1.0, 2.0, 5.0, 1.0)).t, 2.0, places=14)

    def test_boundary_mesh(self):
        mesh = cone_boundary_mesh(MargulisCone(self.shift, 0.5), 4)
        self.assertEqual(len(mesh), 16)
        self.assertEqual(len(mesh.quads), 9)
        self.assertEqual(mesh.chart_names, ('u', 'v', 'x4'))
        self.assertLess(mesh.max_residual, 1e-6)

        lox = MargulisCone(ElementaryGroup.cyclic(Isometry4.dilation(math.exp(0.2))), 0.5)
        mesh = cone_boundary_mesh(lox, 4)
        # Quads wrap around the axis.
        self.assertEqual(len(mesh.quads), 12)
        self.assertLess(mesh.max_residual, 1e-6)

        with self.assertRaises(ValueError):
            cone_boundary_mesh(lox, 1)

    def test_lattice_point_outside_cone(self):
        # The shortest lattice vector (length 2) is longer than the reach 2 sinh(ν/2) at height 1.
        G = ElementaryGroup((Isometry4.parabolic((2.0, 0.0, 0.0)), Isometry4.parabolic((0.0, 2.0, 0.0))))
        K = MargulisCone(G, 0.5)
        x = Point4(0.0, 0.0, 0.0, 1.0)
        self.assertEqual(len(G.exponents(x, K.nu)), 0)
        self.assertFalse(cone_contains(K, x))
        self.assertAlmostEqual(min_index(G, x), 2.0 * math.asinh(1.0), places=12)
        # High enough up the same vertical line the generators move x by less than ν.
        self.assertTrue(cone_contains(K, Point4(0.0, 0.0, 0.0, 10.0)))

    def test_q_function_varies_along_screw_loxodromic(self):
        g = Isometry4.loxodromic(math.exp(0.001), theta=1.0)
        mu = 0.5
        self.assertEqual(q_function(g, Point4(0.0, 0.0, 0.0, 1.0), mu), 1)
        # Far from the axis the rotation moves x by much more than μ.
        off = Point4(1.0, 0.0, 0.0, 0.05)
        self.assertGreater(index(g, off), mu)
        q = q_function(g, off, mu)
        self.assertNotEqual(q, 1)
        if q is not None:
            self.assertLessEqual(index(power(g, q), off), mu)
            for k in range(1, q):
                self.assertGreater(index(power(g, k), off), mu)

    def test_foliation_preserved_by_rotation(self):
        x = Point4(0.7, -0.4, 1.1, 0.6)
        screw = Isometry4.parabolic((1.0, 0.0, 1.0), theta=1.0, rotation_axis=(0.0, 0.0, 1.0))
        for g in (Isometry4.loxodromic(2.0, theta=0.8), Isometry4.parabolic((0.0, 0.0, 2.0), theta=0.7), screw):
            t = foliation_coordinate(g, x).t
            for s in (0.25, 0.5, 1.0, 3.0):
                turned = flow_rotational(g, s).apply(x)
                self.assertAlmostEqual(foliation_coordinate(g, turned).t, t, places=12)

    def test_round_dilation_mesh(self):
        mesh = cone_boundary_mesh(MargulisCone(ElementaryGroup.cyclic(Isometry4.dilation(math.exp(0.2))), 0.5), 6)
        # Every start point has |y| = x4, so a pure dilation puts every vertex at the same height.
        self.assertLess(np.ptp(mesh.vertices[:, 3]), 1e-9)
        self.assertLess(np.ptp(np.linalg.norm(mesh.vertices[:, :3], axis=1)), 1e-9)

    def test_screw_meshes_are_anisotropic(self):
        res = 4
        lox = MargulisCone(ElementaryGroup.cyclic(Isometry4.loxodromic(math.exp(0.2), theta=1.0)), 0.5)
        heights = cone_boundary_mesh(lox, res).vertices[:, 3].reshape(res, res)
        # Symmetric about the fixed axis, but the boundary moves with the angle to it.
        self.assertLess(np.max(np.ptp(heights, axis=1)), 1e-8)
        self.assertGreater(np.ptp(heights[:, 0]), 1e-3)

        flat = cone_boundary_mesh(MargulisCone(self.shift, 0.5), res).vertices[:, 3]
        self.assertLess(np.ptp(flat), 1e-12)
        screw = Isometry4.parabolic((1.0, 0.0, 1.0), theta=1.0, rotation_axis=(0.0, 0.0, 1.0))
        mesh = cone_boundary_mesh(MargulisCone(ElementaryGroup.cyclic(screw), 0.5), res)
        self.assertLess(mesh.max_residual, 1e-6)
        heights = mesh.vertices[:, 3]
        self.assertGreater(np.ptp(heights), 1e-3 * np.max(heights))
        # The grid is centred on the shifted screw axis, so opposite vertices match.
        np.testing.assert_allclose(heights, heights[::-1], rtol=1e-9)

    def test_off_axis_screw_images(self):
        screw = Isometry4.parabolic((1.0, 0.0, 1.0), theta=1.0, rotation_axis=(0.0, 0.0, 1.0))
        G = ElementaryGroup.cyclic(screw)
        x = Point4(0.3, -0.2, 0.5, 0.7)
        exps = np.array([[-2], [-1], [1], [3]])
        expected = [power(screw, int(n)).apply(x).coords for n in exps[:, 0]]
        np.testing.assert_allclose(G.images(x, exps), expected, atol=1e-12)

    def test_mesh_residual_postcondition(self):
        lox = MargulisCone(ElementaryGroup.cyclic(Isometry4.loxodromic(math.exp(0.2), theta=0.4)), 0.5)
        # A coarse root finder still yields boundary vertices after refinement.
        conf.conf['numerics']['bisect_xtol'] = 1e-3
        self.assertLess(cone_boundary_mesh(lox, 4).max_residual, 1e-6)
        conf.reset()

        conf.conf['tolerances']['mesh_residual'] = -1.0
        with self.assertRaises(GeometryError):
            cone_boundary_mesh(lox, 4)

if __name__ == '__main__':
    unittest.main()
