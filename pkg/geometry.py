"""
geometry.py - Metric geometry of the upper half-space model of H⁴.

Points are (x1, x2, x3, x4) with x4 > 0 and metric |dx|/x4. Geodesics, rays and totally geodesic
planes are handled through the hyperboloid embedding in R^{4,1}, where they are linear objects:

    X0 = (|p|² + 1) / (2 x4),   Xi = xi / x4 (i = 1..3),   Xw = (|p|² − 1) / (2 x4)

with the Minkowski form −X0·Y0 + X1·Y1 + X2·Y2 + X3·Y3 + Xw·Yw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

from . import conf
from .utils import GeometryError, arccosh_clamped, minimize_on_interval

__all__ = ['Point4', 'BoundaryPoint', 'GeodesicSegment', 'GeodesicRay', 'GeodesicPlane2',
           'GeodesicHyperplane', 'dist', 'dist_array', 'cosh_dist_minus_one', 'dist_point_segment',
           'dist_point_ray', 'dist_to_vertical_axis', 'plane_constraints', 'exp_map',
           'to_hyperboloid', 'to_hyperboloid_array', 'from_hyperboloid', 'from_hyperboloid_array',
           'minkowski', 'MINKOWSKI']

MINKOWSKI = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0])


@dataclass(frozen=True)
class Point4:
    """A point of the upper half-space H⁴."""
    x1: float
    x2: float
    x3: float
    x4: float

    def __post_init__(self):
        values = (self.x1, self.x2, self.x3, self.x4)
        try:
            values = tuple(float(v) for v in values)
        except (TypeError, ValueError):
            raise GeometryError("Point4 coordinates must be real numbers, got %r" % (values,))
        if not all(math.isfinite(v) for v in values):
            raise GeometryError("Point4 coordinates must be finite, got %r" % (values,))
        if not values[3] > conf.conf['hyp4tubes']['x4_floor']:
            raise GeometryError("Point4 height x4 must be positive, got %r" % values[3])
        for name, value in zip(('x1', 'x2', 'x3', 'x4'), values):
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr):
        x1, x2, x3, x4 = (float(v) for v in arr)
        return cls(x1, x2, x3, x4)

    @property
    def coords(self):
        return np.array([self.x1, self.x2, self.x3, self.x4])

    @property
    def horizontal(self):
        """The R³ part (x1, x2, x3)."""
        return np.array([self.x1, self.x2, self.x3])

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3, self.x4))


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of ∂H⁴ = R³ ∪ {∞}; coords is None for ∞."""
    coords: tuple = None

    def __post_init__(self):
        if self.coords is not None:
            coords = tuple(float(v) for v in self.coords)
            if len(coords) != 3 or not all(math.isfinite(v) for v in coords):
                raise GeometryError("Finite boundary points need three finite coordinates, got %r" % (self.coords,))
            object.__setattr__(self, 'coords', coords)

    @classmethod
    def infinity(cls):
        return cls(None)

    @classmethod
    def at(cls, x1, x2, x3):
        return cls((x1, x2, x3))

    @property
    def is_infinite(self):
        return self.coords is None

    def null_vector(self):
        """A representative null vector of this ideal point in R^{4,1}."""
        if self.coords is None:
            return np.array([1.0, 0.0, 0.0, 0.0, 1.0])
        xi = np.asarray(self.coords)
        sq = float(xi @ xi)
        return np.array([(sq + 1.0) / 2.0, xi[0], xi[1], xi[2], (sq - 1.0) / 2.0])


def minkowski(a, b):
    """Minkowski form on the last axis of a and b."""
    a = np.asarray(a)
    b = np.asarray(b)
    return -a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1)

def to_hyperboloid_array(P):
    """Hyperboloid images of an array of half-space points with shape (..., 4)."""
    P = np.asarray(P, dtype=float)
    sq = np.sum(P * P, axis=-1)
    h = P[..., 3]
    out = np.empty(P.shape[:-1] + (5,))
    out[..., 0] = (sq + 1.0) / (2.0 * h)
    out[..., 1:4] = P[..., :3] / h[..., None]
    out[..., 4] = (sq - 1.0) / (2.0 * h)
    return out

def to_hyperboloid(p):
    return to_hyperboloid_array(p.coords)

def from_hyperboloid_array(X):
    """Inverse of to_hyperboloid_array for arrays with shape (..., 5)."""
    X = np.asarray(X, dtype=float)
    h = 1.0 / (X[..., 0] - X[..., 4])
    out = np.empty(X.shape[:-1] + (4,))
    out[..., :3] = X[..., 1:4] * h[..., None]
    out[..., 3] = h
    return out

def from_hyperboloid(X):
    return Point4.from_array(from_hyperboloid_array(X))

def cosh_dist_minus_one(p, q):
    """cosh d(p, q) − 1 = |p − q|² / (2 p4 q4), exact in the model coordinates."""
    diff = p.coords - q.coords
    return float(diff @ diff) / (2.0 * p.x4 * q.x4)

def dist(p, q):
    """Hyperbolic distance between two points of H⁴."""
    # 2·arcsinh(|p−q| / (2√(p4 q4))) is arccosh(1 + |p−q|²/(2 p4 q4)) without the
    # ill-conditioning of arccosh near 1.
    diff = p.coords - q.coords
    return 2.0 * math.asinh(math.sqrt(float(diff @ diff)) / (2.0 * math.sqrt(p.x4 * q.x4)))

def dist_array(p, Q):
    """Distances from point p to every row of the (..., 4) array Q."""
    Q = np.asarray(Q, dtype=float)
    diff = Q - p.coords
    norm = np.sqrt(np.sum(diff * diff, axis=-1))
    return 2.0 * np.arcsinh(norm / (2.0 * np.sqrt(p.x4 * Q[..., 3])))

def dist_to_vertical_axis(p):
    """Distance from p to the vertical geodesic over the origin of R³."""
    return arccosh_clamped(math.sqrt(float(p.coords @ p.coords)) / p.x4)


class _GeodesicChart():
    """
    Arclength chart s ↦ cosh(s)·X + sinh(s)·U of a geodesic in R^{4,1}, stored as
    e^s·A + e^{−s}·B so that rays to ∞ keep full precision far out.
    """
    def __init__(self, base, tangent):
        self.base = base
        self.tangent = tangent
        self._a = (base + tangent) / 2.0
        self._b = (base - tangent) / 2.0

    def hyperboloid_points(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        return np.exp(s) * self._a + np.exp(-s) * self._b

    def points(self, s):
        return from_hyperboloid_array(self.hyperboloid_points(s))

    def point(self, s):
        return Point4.from_array(self.points(float(s)))

def _unit_tangent_towards(base, target):
    """Unit tangent at hyperboloid point base towards hyperboloid point target, and their distance."""
    cosh_l = max(-float(minkowski(base, target)), 1.0)
    length = math.acosh(cosh_l)
    if length == 0.0:
        raise GeometryError("Coincident points do not determine a geodesic")
    return (target - cosh_l * base) / math.sinh(length), length


@dataclass(frozen=True)
class GeodesicSegment:
    """The geodesic segment [a, b]."""
    a: Point4
    b: Point4

    def __post_init__(self):
        if self.a == self.b or dist(self.a, self.b) == 0.0:
            raise GeometryError("A geodesic segment needs distinct endpoints, got %r twice" % (self.a,))

    @cached_property
    def _chart(self):
        base = to_hyperboloid(self.a)
        tangent, length = _unit_tangent_towards(base, to_hyperboloid(self.b))
        return _GeodesicChart(base, tangent), length

    @property
    def length(self):
        return self._chart[1]

    def points_at(self, t):
        """Points at arclength fraction(s) t; t outside [0, 1] extends the geodesic."""
        chart, length = self._chart
        return chart.points(np.asarray(t, dtype=float) * length)

    def point_at(self, t):
        return Point4.from_array(self.points_at(float(t)))


@dataclass(frozen=True)
class GeodesicRay:
    """The geodesic ray from base towards the ideal point end."""
    base: Point4
    end: BoundaryPoint

    @cached_property
    def _chart(self):
        base = to_hyperboloid(self.base)
        null = self.end.null_vector()
        pairing = float(minkowski(null, base))
        # pairing < 0 for any point and any ideal point.
        tangent = -null / pairing - base
        return _GeodesicChart(base, tangent)

    def points_at(self, s):
        """Points at arclength s ≥ 0 from the base."""
        return self._chart.points(s)

    def point_at(self, s):
        return Point4.from_array(self.points_at(float(s)))


def dist_point_segment(z, segment):
    """Distance from z to the geodesic segment."""
    target = z.coords

    def objective(t):
        q = segment.points_at(t)
        diff = q - target
        return float(diff @ diff) / (2.0 * q[3] * z.x4)

    _, value = minimize_on_interval(objective, 0.0, 1.0)
    return 2.0 * math.asinh(math.sqrt(max(value, 0.0) / 2.0))

def dist_point_ray(z, ray):
    """Distance from z to the geodesic ray."""
    target = z.coords

    def objective(s):
        q = ray.points_at(s)
        diff = q - target
        return float(diff @ diff) / (2.0 * q[3] * z.x4)

    # Beyond arclength 2·d(z, base) every ray point is farther from z than the base is.
    reach = 2.0 * dist(z, ray.base) + 1.0
    _, value = minimize_on_interval(objective, 0.0, reach)
    return 2.0 * math.asinh(math.sqrt(max(value, 0.0) / 2.0))

def exp_map(p, direction, s):
    """
    Returns the point at distance s from p along the geodesic leaving p in the Euclidean
    direction given (a 4-vector).
    """
    v = np.asarray(direction, dtype=float)
    x = p.coords
    h = p.x4
    sq = float(x @ x)
    xv = float(x @ v)
    dX = np.empty(5)
    dX[0] = xv / h - (sq + 1.0) * v[3] / (2.0 * h * h)
    dX[1:4] = v[:3] / h - x[:3] * v[3] / (h * h)
    dX[4] = xv / h - (sq - 1.0) * v[3] / (2.0 * h * h)
    norm = math.sqrt(max(float(minkowski(dX, dX)), 0.0))
    if norm == 0.0:
        raise GeometryError("exp_map needs a nonzero direction")
    return _GeodesicChart(to_hyperboloid(p), dX / norm).point(s)


def _orthonormalize(vectors):
    """Minkowski Gram–Schmidt for spacelike vectors; raises GeometryError on degeneracy."""
    basis = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for b in basis:
            w = w - float(minkowski(w, b)) * b
        norm_sq = float(minkowski(w, w))
        if norm_sq <= 1e-14 * max(1.0, float(w @ w)):
            raise GeometryError("Plane constraints are proportional or not spacelike")
        basis.append(w / math.sqrt(norm_sq))
    return basis

def _normals_through(points, expected):
    X = np.array([to_hyperboloid(p) for p in points])
    normals = linalg.null_space(X @ MINKOWSKI)
    if normals.shape[1] != expected:
        raise GeometryError("Points %r are not in general position" % (points,))
    return [normals[:, i] for i in range(expected)]


@dataclass(frozen=True)
class GeodesicPlane2:
    """
    A totally geodesic 2-plane, stored as two Minkowski-orthonormal spacelike normals.

    Each normal n cuts out a totally geodesic hyperplane {⟨n, X⟩ = 0}, which in the half-space
    model is a vertical Euclidean hyperplane or a hemisphere centred on R³; the plane is their
    intersection. The constraint value ⟨n, X(p)⟩ is sinh of the signed distance from p to that
    hyperplane.
    """
    normals: tuple

    def __post_init__(self):
        n1, n2 = (np.asarray(n, dtype=float) for n in self.normals)
        gram = np.array([[minkowski(n1, n1), minkowski(n1, n2)],
                         [minkowski(n2, n1), minkowski(n2, n2)]])
        if np.min(np.linalg.eigvalsh(gram)) <= 1e-12:
            raise GeometryError("Plane constraints are proportional or their zero set misses H⁴")
        object.__setattr__(self, 'normals', (tuple(n1), tuple(n2)))

    @classmethod
    def from_normals(cls, n1, n2):
        return cls(tuple(tuple(n) for n in _orthonormalize([n1, n2])))

    @classmethod
    def through_points(cls, a, b, c):
        """The plane through three points not on a common geodesic."""
        return cls.from_normals(*_normals_through((a, b, c), 2))

    @classmethod
    def vertical(cls, p, direction):
        """The vertical plane through p containing the horizontal direction given."""
        d = np.asarray(direction, dtype=float)
        if d.shape != (3,) or not np.any(d):
            raise GeometryError("vertical() needs a nonzero horizontal direction, got %r" % (direction,))
        d = d / np.linalg.norm(d) * p.x4
        q = Point4(p.x1 + d[0], p.x2 + d[1], p.x3 + d[2], p.x4)
        r = Point4(p.x1, p.x2, p.x3, 2.0 * p.x4)
        return cls.through_points(p, q, r)

    @property
    def normal_array(self):
        return np.array(self.normals)

    def constraints(self, p):
        X = to_hyperboloid(p)
        n1, n2 = self.normal_array
        return float(minkowski(n1, X)), float(minkowski(n2, X))

    def constraints_array(self, P):
        """Constraint pairs for an array of points with shape (..., 4); returns shape (..., 2)."""
        X = to_hyperboloid_array(P)
        return (X @ MINKOWSKI) @ self.normal_array.T

    def contains(self, p, tol=1e-10):
        return max(abs(c) for c in self.constraints(p)) <= tol

    def spheres(self):
        """
        Describes each constraint in the half-space model: ('plane', unit normal in R³, offset) for
        vertical hyperplanes, ('sphere', centre in R³, radius) for hemispheres.
        """
        shapes = []
        for n in self.normal_array:
            n0, ny, nw = n[0], n[1:4], n[4]
            if abs(nw - n0) <= 1e-12 * max(1.0, abs(n0)):
                scale = np.linalg.norm(ny)
                shapes.append(('plane', tuple(ny / scale), float(n0 / scale)))
            else:
                centre = -ny / (nw - n0)
                radius = math.sqrt(float(minkowski(n, n))) / abs(nw - n0)
                shapes.append(('sphere', tuple(centre), radius))
        return shapes


@dataclass(frozen=True)
class GeodesicHyperplane:
    """A totally geodesic hyperplane {⟨n, X⟩ = 0} with unit spacelike normal n."""
    normal: tuple

    @classmethod
    def through_points(cls, a, b, c, d):
        n, = _normals_through((a, b, c, d), 1)
        n, = _orthonormalize([n])
        return cls(tuple(n))

    def signed_sinh_distance(self, p):
        return float(minkowski(np.asarray(self.normal), to_hyperboloid(p)))

    def orthogonality_margin(self, plane):
        """
        Angle in [0, π/2] separating this hyperplane from being orthogonal to the given 2-plane:
        0 when the hyperplane's normal lies in the 2-plane's span, π/2 when the hyperplane contains it.
        """
        n = np.asarray(self.normal)
        off = math.sqrt(sum(float(minkowski(n, m)) ** 2 for m in plane.normal_array))
        return math.asin(min(off, 1.0))


def plane_constraints(plane, p):
    """Evaluates the two defining constraints of the plane at p; both vanish iff p is on the plane."""
    return plane.constraints(p)
