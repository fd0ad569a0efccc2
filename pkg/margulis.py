"""
margulis.py - Margulis cones and tubes of elementary groups.

An elementary group here is either the cyclic group of a loxodromic element in normal position,
or a group of commuting parabolics fixing ∞: a single (possibly screw) parabolic, or a lattice of
2-3 pure translations. Orbits are enumerated over exponent windows that are proven to contain
every element moving a given point by at most a given amount.

The Margulis cone of level ν is the set of points moved by at most ν by some nontrivial element.
Membership uses that displacement convention; the injectivity radius is half of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from . import conf
from .geometry import Point4, dist_array
from .isometry import Isometry4, _orthogonal_to, index, power
from .log import log
from .structures import Mesh
from .utils import (EllipticIsometryError, EmptyConeError, GeometryError, InvalidSpecError,
                    TruncationError, bracket_root)

__all__ = ['ElementaryGroup', 'MargulisCone', 'FoliationCoordinate', 'min_index',
           'injectivity_radius', 'q_function', 'cone_contains', 'project_phi',
           'boundary_residual', 'foliation_coordinate', 'cone_boundary_mesh', 'orbit_count',
           'overlap_count', 'DEFAULT_TRUNCATION']

DEFAULT_TRUNCATION = 256

# Lattice exponent boxes larger than this are refused instead of enumerated.
MAX_LATTICE_POINTS = 2000000

_PROBES = ((0.3, -0.2, 0.7, 1.1), (-1.3, 0.4, 0.2, 0.6), (0.05, 2.0, -0.9, 2.5))


@dataclass(frozen=True)
class ElementaryGroup:
    """
    An elementary group given by 1-3 commuting nonelliptic generators and a truncation N_max,
    the largest exponent (per generator) that orbit enumeration may visit.
    """
    generators: tuple
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, 'generators', gens)
        if not 1 <= len(gens) <= 3:
            raise GeometryError("An elementary group needs 1 to 3 generators, got %s" % len(gens))
        if not (isinstance(self.truncation, int) and self.truncation >= 1):
            raise GeometryError("Truncation must be a positive integer, got %r" % (self.truncation,))
        for g in gens:
            if not isinstance(g, Isometry4):
                raise GeometryError("Generators must be Isometry4 instances, got %r" % (g,))
            if g.kind not in ('loxodromic', 'parabolic'):
                raise EllipticIsometryError("Generator %r is not a nonelliptic element" % (g,))

        if len(gens) > 1:
            if any(g.kind != 'parabolic' or g.theta != 0.0 for g in gens):
                raise GeometryError("Groups of rank 2 or 3 must be generated by pure translations")
            if self.sigma_min <= 1e-12 * max(1.0, float(np.max(np.abs(self.translation_matrix)))):
                raise GeometryError("Lattice translations are linearly dependent")

        tol = conf.tolerance('isometry')
        for i, g in enumerate(gens):
            for h in gens[i + 1:]:
                for probe in _PROBES:
                    p = np.array([probe])
                    gh = g.apply_array(h.apply_array(p))
                    hg = h.apply_array(g.apply_array(p))
                    if np.max(np.abs(gh - hg)) > tol * (1.0 + np.max(np.abs(gh))):
                        raise GeometryError("Generators %r and %r do not commute" % (g, h))

    @classmethod
    def cyclic(cls, g, truncation=DEFAULT_TRUNCATION):
        return cls((g,), truncation)

    @classmethod
    def from_spec(cls, spec):
        """Builds a group from its JSON SPEC form: {"generators": [...], "truncation": N}."""
        if isinstance(spec, dict) and 'kind' in spec:
            spec = {'generators': [spec]}
        if not isinstance(spec, dict) or not isinstance(spec.get('generators'), list):
            raise InvalidSpecError("Group SPEC needs a list of generators, got %r" % (spec,))
        truncation = spec.get('truncation', DEFAULT_TRUNCATION)
        if not isinstance(truncation, int):
            raise InvalidSpecError("Group SPEC truncation must be an integer, got %r" % (truncation,))
        return cls(tuple(Isometry4.from_spec(g) for g in spec['generators']), truncation)

    def to_spec(self):
        return {'generators': [g.to_spec() for g in self.generators], 'truncation': self.truncation}

    @property
    def rank(self):
        return len(self.generators)

    @property
    def kind(self):
        """'loxodromic', 'parabolic' (rank 1) or 'lattice'."""
        if self.rank > 1:
            return 'lattice'
        return self.generators[0].kind

    @property
    def translation_matrix(self):
        return np.array([g.translation for g in self.generators])

    @property
    def sigma_min(self):
        """Smallest singular value of the translation matrix; |Σ nᵢτᵢ| ≥ sigma_min·‖n‖."""
        return float(np.linalg.svd(self.translation_matrix, compute_uv=False)[-1])

    @property
    def invariant_direction(self):
        """The horizontal direction fixed by the group (rotation axis, or the translation direction)."""
        if self.kind == 'lattice':
            return np.array([0.0, 0.0, 1.0])
        g = self.generators[0]
        if g.kind == 'parabolic' and g.theta == 0.0:
            tau = np.asarray(g.translation)
            return tau / np.linalg.norm(tau)
        return np.asarray(g.axis)

    def _window_size(self, x, max_index):
        """Exponent bound such that every element moving x by ≤ max_index lies within it."""
        if self.kind == 'loxodromic':
            size = math.ceil(max_index / abs(math.log(self.generators[0].lam)))
        else:
            try:
                reach = 2.0 * x.x4 * math.sinh(max_index / 2.0)
            except OverflowError:
                return math.inf
            if self.kind == 'parabolic':
                # The axial part of gⁿ is n·τ∥, so the displacement is at least |n|·|τ|.
                step = float(np.linalg.norm(self.generators[0].axial_translation))
            else:
                step = self.sigma_min
            size = math.ceil(reach / step)
        return max(int(size), 1)

    def window(self, x, max_index):
        """
        Returns the per-generator exponent window guaranteed to contain every element h with
        index(h, x) ≤ max_index. Raises TruncationError when that exceeds the truncation.
        """
        size = self._window_size(x, max_index)
        if size > self.truncation:
            raise TruncationError("Window %s for max index %s at %s exceeds truncation %s"
                                  % (size, max_index, x, self.truncation))
        if self.rank > 1 and (2 * size + 1) ** self.rank > MAX_LATTICE_POINTS:
            raise TruncationError("Lattice window %s is too large to enumerate" % size)
        return size

    def exponents(self, x, max_index, size=None):
        """
        Nonzero exponent vectors (shape (k, rank)) of the candidates within the window.

        For a lattice the result is empty when the reach 2·x₄·sinh(max_index/2) is shorter
        than the shortest lattice vector; callers reducing over it must handle that case.
        """
        if size is None:
            size = self.window(x, max_index)
        if self.rank == 1:
            n = np.arange(-size, size + 1)
            return n[n != 0].reshape(-1, 1)
        axes = [np.arange(-size, size + 1)] * self.rank
        grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, self.rank)
        norms = np.linalg.norm(grid, axis=1)
        reach = 2.0 * x.x4 * math.sinh(max_index / 2.0)
        keep = (norms > 0) & (self.sigma_min * norms <= reach * (1 + 1e-12))
        return grid[keep]

    def images(self, x, exponents):
        """Images of x under the group elements with the given exponent vectors, shape (k, 4)."""
        exponents = np.asarray(exponents, dtype=int).reshape(-1, self.rank)
        out = np.empty((len(exponents), 4))
        if not len(exponents):
            return out
        y = x.horizontal
        if self.rank > 1:
            out[:, :3] = y + exponents @ self.translation_matrix
            out[:, 3] = x.x4
            return out

        g = self.generators[0]
        n = exponents[:, 0].astype(float)
        c = g.center
        if g.theta != 0.0:
            rotated = Rotation.from_rotvec(np.outer(n * g.signed_angle, g.axis)).apply(y - c)
            rotated = np.atleast_2d(rotated) + c
        else:
            rotated = np.broadcast_to(y, (len(n), 3))
        if g.kind == 'loxodromic':
            scale = g.lam ** n
            out[:, :3] = scale[:, None] * rotated
            out[:, 3] = scale * x.x4
        else:
            out[:, :3] = rotated + np.outer(n, g.axial_translation)
            out[:, 3] = x.x4
        return out

    def indices(self, x, max_index):
        """(exponents, displacements) for every candidate element within the window for max_index."""
        exps = self.exponents(x, max_index)
        return exps, dist_array(x, self.images(x, exps))

    def generator_index(self, x):
        return min(index(g, x) for g in self.generators)

    def element(self, exponents):
        """The group element with the given exponent vector, in normal form."""
        exponents = tuple(int(n) for n in np.ravel(exponents))
        if not any(exponents):
            return Isometry4('identity')
        if self.rank == 1:
            return power(self.generators[0], exponents[0])
        return Isometry4.parabolic(tuple(np.asarray(exponents) @ self.translation_matrix))


@dataclass(frozen=True)
class MargulisCone:
    """The Margulis cone 𝒦(H, ν) of an elementary group H."""
    group: ElementaryGroup
    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        if not (math.isfinite(nu) and nu > 0):
            raise GeometryError("The cone level nu must be positive, got %r" % (self.nu,))
        object.__setattr__(self, 'nu', nu)

    @property
    def is_empty(self):
        """Only a loxodromic cone can be empty: every element moves every point by ≥ log λ."""
        if self.group.kind == 'loxodromic':
            return abs(math.log(self.group.generators[0].lam)) > self.nu
        return False


@dataclass(frozen=True)
class FoliationCoordinate:
    """Which fiber of the canonical fibration contains a point."""
    t: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise GeometryError("Foliation coordinate must be finite, got %r" % self.t)


def min_index(G, x):
    """Minimal displacement of x over the nontrivial elements of G."""
    level = G.generator_index(x)
    _, dists = G.indices(x, level)
    if not len(dists):
        return float(level)
    return float(min(level, np.min(dists)))

def injectivity_radius(G, x):
    """Ir_G(x): half the minimal displacement of x."""
    return min_index(G, x) / 2.0

def _capped_min_index(G, x, level):
    """
    The minimal displacement over the window for the given level. Exact whenever the true
    minimum is ≤ level; larger than level otherwise.
    """
    _, dists = G.indices(x, level)
    if not len(dists):
        # No element of the window reaches the level.
        return math.inf
    return float(np.min(dists))

def cone_contains(K, x):
    """Whether x lies in the cone, i.e. some nontrivial element moves x by at most ν."""
    if K.is_empty:
        return False
    if K.group.generator_index(x) <= K.nu:
        return True
    return _capped_min_index(K.group, x, K.nu) <= K.nu

def orbit_count(G, x, r):
    """Number of elements h ∈ G (identity included) with d(x, hx) ≤ r."""
    _, dists = G.indices(x, r)
    return 1 + int(np.count_nonzero(dists <= r))

def overlap_count(G, x, r):
    """Number of elements h ∈ G (identity included) with h·B(x, r) ∩ B(x, r) ≠ ∅."""
    return orbit_count(G, x, 2.0 * r)

def q_function(g, x, mu, truncation=DEFAULT_TRUNCATION):
    """
    Returns the minimal k > 0 (up to the truncation) with d(x, gᵏx) ≤ μ, or None.
    """
    G = ElementaryGroup.cyclic(g, truncation)
    size = min(G._window_size(x, mu), truncation)
    k = np.arange(1, size + 1).reshape(-1, 1)
    dists = dist_array(x, G.images(x, k))
    hits = np.nonzero(dists <= mu)[0]
    if not len(hits):
        return None
    return int(k[hits[0], 0])

def boundary_residual(K, x):
    """|√2 sinh(d/2) − √2 sinh(ν/2)| for the minimal displacement d at x; 0 on the boundary."""
    d = min_index(K.group, x)
    return abs(math.sqrt(2.0) * (math.sinh(d / 2.0) - math.sinh(K.nu / 2.0)))

def _horizontal_gap(G, y):
    """
    min over nontrivial h of |h(y) − y| for a horospherical group; h acts isometrically on every
    horosphere, so this does not depend on the height.
    """
    x = Point4(y[0], y[1], y[2], 1.0)
    _, dists = G.indices(x, G.generator_index(x))
    return 2.0 * math.sinh(float(np.min(dists)) / 2.0)

def _loxodromic_ray(a):
    """Chart ρ ↦ point of the geodesic through a orthogonal to the axis, at signed distance ρ from it."""
    y = a.horizontal
    radius = math.sqrt(float(a.coords @ a.coords))
    u = y / np.linalg.norm(y)

    def point(rho):
        sech = 1.0 / np.cosh(rho)
        if not sech > 0:
            return None
        p = radius * np.tanh(rho) * u
        return Point4(p[0], p[1], p[2], radius * sech)
    return point

def project_phi(K, a, xtol=None):
    """
    Projects a onto the cone boundary: along the vertical geodesic through a for horospherical
    groups, and along the geodesic through a orthogonal to the axis for a loxodromic group.
    """
    G = K.group
    if K.is_empty:
        raise EmptyConeError("Cone of level %s is empty (log λ exceeds it)" % K.nu)

    if G.kind != 'loxodromic':
        height = _horizontal_gap(G, a.horizontal) / (2.0 * math.sinh(K.nu / 2.0))
        return Point4(a.x1, a.x2, a.x3, height)

    y = a.horizontal
    if float(np.linalg.norm(y)) <= 1e-12 * a.x4:
        raise GeometryError("Point %s lies on the axis; its projection is undefined" % (a,))
    point = _loxodromic_ray(a)

    def excess(rho):
        p = point(rho)
        if p is None:
            return 1.0
        return _capped_min_index(G, p, K.nu) - K.nu

    start = math.acosh(max(math.sqrt(float(a.coords @ a.coords)) / a.x4, 1.0))
    try:
        rho = bracket_root(excess, 0.0, max(start, 1.0), xtol=xtol)
    except ValueError as e:
        raise EmptyConeError("Projection ray from %s never meets the cone boundary: %s" % (a, e))
    return point(rho)

def foliation_coordinate(g, x):
    """
    The fiber containing x: log |x| for a loxodromic g, the coordinate along the invariant
    horizontal direction for a parabolic g.
    """
    if g.kind == 'loxodromic':
        return FoliationCoordinate(0.5 * math.log(float(x.coords @ x.coords)))
    elif g.kind == 'parabolic':
        direction = ElementaryGroup.cyclic(g).invariant_direction
        return FoliationCoordinate(float(x.horizontal @ direction))
    raise EllipticIsometryError("Elliptic elements have no canonical fibration")

def cone_boundary_mesh(K, resolution):
    """
    Samples the cone boundary on a resolution × resolution grid of projection rays.

    Loxodromic cones are invariant under the dilation, so the mesh covers the unit fiber |x| = 1:
    rays start at polar angle α from the fixed axis and azimuth β around it, and the chart is
    (distance to the axis line, β, x4) with quads wrapping in β. Horospherical cones are sampled
    over a square of the fiber through the origin with chart (u, v, x4).
    """
    resolution = int(resolution)
    if resolution < 2:
        raise ValueError("Mesh resolution must be at least 2, got %s" % resolution)
    if K.is_empty:
        raise EmptyConeError("Cone of level %s is empty" % K.nu)
    G = K.group
    axis = G.invariant_direction
    u, v = (np.asarray(w) for w in _orthogonal_to(axis))

    vertices = []
    starts = []
    chart = []
    quads = []
    if G.kind == 'loxodromic':
        c = math.cos(math.pi / 4.0)
        for i in range(resolution):
            alpha = math.pi * (i + 0.5) / resolution
            for j in range(resolution):
                beta = 2.0 * math.pi * j / resolution
                direction = math.cos(alpha) * axis + math.sin(alpha) * (math.cos(beta) * u + math.sin(beta) * v)
                start = c * direction
                starts.append(Point4(start[0], start[1], start[2], c))
                p = project_phi(K, starts[-1])
                y = p.horizontal
                vertices.append(p.coords)
                chart.append((float(np.linalg.norm(y - (y @ axis) * axis)), beta, p.x4))
        for i in range(resolution - 1):
            for j in range(resolution):
                jn = (j + 1) % resolution
                quads.append((i * resolution + j, (i + 1) * resolution + j,
                              (i + 1) * resolution + jn, i * resolution + jn))
        names = ('r_axis', 'beta', 'x4')
    else:
        # Screw cones are centred on the screw axis.
        origin = G.generators[0].center if G.rank == 1 else np.zeros(3)
        extent = 2.0 * _horizontal_gap(G, origin) / (2.0 * math.sinh(K.nu / 2.0))
        ticks = np.linspace(-extent, extent, resolution)
        for su in ticks:
            for sv in ticks:
                y = origin + su * u + sv * v
                starts.append(Point4(y[0], y[1], y[2], 1.0))
                p = project_phi(K, starts[-1])
                vertices.append(p.coords)
                chart.append((float(su), float(sv), p.x4))
        for i in range(resolution - 1):
            for j in range(resolution - 1):
                quads.append((i * resolution + j, (i + 1) * resolution + j,
                              (i + 1) * resolution + j + 1, i * resolution + j + 1))
        names = ('u', 'v', 'x4')

    residuals = np.array([boundary_residual(K, Point4.from_array(p)) for p in vertices])
    tol = conf.tolerance('mesh_residual')
    for k in np.nonzero(residuals > tol)[0]:
        # Rerun the crossing search with a tighter bracket before giving up on the vertex.
        xtol = conf.numeric('bisect_xtol') * 1e-4
        p = project_phi(K, starts[k], xtol=xtol)
        residuals[k] = boundary_residual(K, p)
        if residuals[k] > tol:
            raise GeometryError("Mesh vertex %s stays off the cone boundary: residual %s exceeds %s"
                                % (k, float(residuals[k]), tol))
        log.debug('(margulis) refined mesh vertex %s to residual %s', k, float(residuals[k]))
        vertices[k] = p.coords
        y = p.horizontal
        if G.kind == 'loxodromic':
            chart[k] = (float(np.linalg.norm(y - (y @ axis) * axis)), chart[k][1], p.x4)
        else:
            chart[k] = (chart[k][0], chart[k][1], p.x4)
    log.debug('(margulis) built %sx%s boundary mesh for a %s cone', resolution, resolution, G.kind)
    return Mesh(vertices=np.array(vertices), chart=np.array(chart), quads=quads, residuals=residuals,
                chart_names=names, meta={'kind': G.kind, 'nu': K.nu, 'resolution': resolution})
