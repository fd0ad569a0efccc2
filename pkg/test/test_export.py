"""
Test cases for export.py
"""

import csv
import os
import tempfile
import unittest

import numpy as np

from hyp4tubes import conf, export
from hyp4tubes.films import LAMBDA, FilmRoot
from hyp4tubes.structures import Mesh


def unit_square():
    vertices = np.array([[0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0],
                         [1.0, 1.0, 0.0, 1.0], [0.0, 1.0, 0.0, 1.0]])
    return Mesh(vertices, vertices[:, (0, 1, 3)], [(0, 1, 2, 3)], np.array([0.0, 1e-9, 0.0, 2e-9]),
                chart_names=('u', 'v', 'x4'), meta={'nu': 0.5})


class ExportTestCase(unittest.TestCase):

    def setUp(self):
        conf.reset()
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_write_obj(self):
        path = os.path.join(self.tmpdir.name, 'meshes', 'square.obj')
        export.write_obj(unit_square(), path)
        with open(path, encoding='utf-8') as f:
            lines = f.read().splitlines()

        self.assertIn('# chart: u v x4', lines)
        self.assertIn('# nu: 0.5', lines)
        self.assertEqual(len([line for line in lines if line.startswith('v ')]), 4)
        self.assertIn('v 1 1 1', lines)
        # Faces are 1-based.
        self.assertEqual([line for line in lines if line.startswith('f ')], ['f 1 2 3 4'])

    def test_write_mesh_csv(self):
        path = os.path.join(self.tmpdir.name, 'square.csv')
        export.write_mesh_csv(unit_square(), path)
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        self.assertEqual(tuple(rows[0]), export.MESH_CSV_COLUMNS)
        self.assertEqual(len(rows), 5)
        self.assertEqual([float(value) for value in rows[2][:4]], [1.0, 0.0, 0.0, 1.0])
        self.assertAlmostEqual(float(rows[2][4]), 1e-9)

    def test_write_roots_csv(self):
        path = os.path.join(self.tmpdir.name, 'roots.csv')
        root = FilmRoot(LAMBDA, 0.25, 0.5, (0.5, 0.0, 0.0, 1.5))
        export.write_roots_csv([root], path)
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        self.assertEqual(tuple(rows[0]), export.ROOT_CSV_COLUMNS)
        self.assertEqual(len(rows[1]), len(export.ROOT_CSV_COLUMNS))
        self.assertEqual(rows[1][0], LAMBDA)
        self.assertEqual(rows[1][-1], '0')

if __name__ == '__main__':
    unittest.main()
