"""
export.py - Writers for cone-boundary meshes and intersection roots.

OBJ files carry the mesh in its 3-coordinate viewing chart; CSV files carry the raw H⁴ points.
"""

import csv
import os

from .log import log

__all__ = ['MESH_CSV_COLUMNS', 'ROOT_CSV_COLUMNS', 'write_obj', 'write_mesh_csv', 'write_roots_csv']

MESH_CSV_COLUMNS = ('x1', 'x2', 'x3', 'x4', 'residual')
ROOT_CSV_COLUMNS = ('sheet1', 's', 't', 'sheet2', 'u', 'v', 'x1', 'x2', 'x3', 'x4', 'sign')


def _prepare(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

def write_obj(mesh, path, name='cone_boundary'):
    """
    Writes the mesh as a Wavefront OBJ: one "v" line per vertex in chart coordinates, then one
    1-based "f" line per quad. The chart axes and the H⁴ metadata go into comment lines.
    """
    _prepare(path)
    with open(path, 'w', encoding='utf-8') as f:
        f.write('# hyp4tubes cone boundary mesh\n')
        f.write('# chart: %s\n' % ' '.join(mesh.chart_names))
        for key, value in sorted(mesh.meta.items()):
            f.write('# %s: %s\n' % (key, value))
        f.write('o %s\n' % name)
        for (c1, c2, c3) in mesh.chart:
            f.write('v %.12g %.12g %.12g\n' % (c1, c2, c3))
        for quad in mesh.quads:
            f.write('f %s\n' % ' '.join(str(index + 1) for index in quad))
    log.info('(export) wrote %s vertices and %s quads to %s', len(mesh.chart), len(mesh.quads), path)

def write_mesh_csv(mesh, path):
    """Writes one row per mesh vertex with the columns x1, x2, x3, x4, residual."""
    _prepare(path)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(MESH_CSV_COLUMNS)
        for vertex, residual in zip(mesh.vertices, mesh.residuals):
            writer.writerow(['%.17g' % value for value in vertex] + ['%.6g' % residual])
    log.info('(export) wrote %s mesh vertices to %s', len(mesh.vertices), path)

def write_roots_csv(roots, path):
    """Writes FilmRoot rows: sheet1, s, t, sheet2, u, v, x1..x4, sign."""
    _prepare(path)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(ROOT_CSV_COLUMNS)
        for root in roots:
            writer.writerow(root.as_row())
    log.info('(export) wrote %s roots to %s', len(roots), path)
