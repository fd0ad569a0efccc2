"""
films.py - Ruled films and their transversal intersections.

A ruled film S_{Txz} is swept from the geodesic segment [x, z] by the flows of T = T_θ ∘ T_λ:
first the translational flow (the λ-sheet, from [x, z] to T_λ[x, z]), then the rotational flow
(the θ-sheet, from T_λ[x, z] to T[x, z]). Both sheets are parametrized by (s, t) ∈ [0, 1]², s
along the segment and t along the flow.

Intersections are located numerically: sign prescreening on a parameter grid seeds Newton
iterations, roots are deduplicated, and every root must be transversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial.transform import Rotation

from . import conf
from .geometry import (GeodesicHyperplane, GeodesicPlane2, GeodesicSegment, Point4, dist,
                       dist_array, from_hyperboloid_array, minkowski, to_hyperboloid_array)
from .isometry import Isometry4, index
from .log import log
from .margulis import ElementaryGroup, MargulisCone, cone_contains
from .utils import DegenerateIntersectionError, GeometryError, InvalidSpecError, minimize_on_interval

__all__ = ['RuledFilm', 'ExtendedRuledFilm', 'GeneralPositionCertificate', 'SampledCurve',
           'FilmRoot', 'IntersectionCount', 'film_point', 'check_general_position',
           'count_film_plane_intersections', 'count_film_film_intersections', 'LAMBDA', 'THETA']

LAMBDA = 'lambda'
THETA = 'theta'

_SHEET_ALIASES = {'lambda': LAMBDA, 'λ': LAMBDA, 'theta': THETA, 'θ': THETA}

def _grid_size():
    """Vertices per side of the root prescreening grid: one more than the seeds per side."""
    return int(conf.numeric('newton_seeds')) + 1

# Central difference step for sheet tangents.
FD_STEP = 1e-6
# Parameters this far outside [0, 1] are still accepted (and clamped).
PARAM_SLACK = 1e-9

def _sheet_name(sheet):
    try:
        return _SHEET_ALIASES[sheet]
    except KeyError:
        raise ValueError("Unknown sheet %r: expected 'lambda' or 'theta'" % (sheet,))

def _geodesic_interpolate(A, B, sigma):
    """Points at fraction sigma along the geodesics from A to B (arrays of half-space points)."""
    X = to_hyperboloid_array(A)
    Y = to_hyperboloid_array(B)
    sigma = np.asarray(sigma, dtype=float)
    cosh_l = np.maximum(-minkowski(X, Y), 1.0)
    length = np.arccosh(cosh_l)
    short = length < 1e-14
    safe = np.where(short, 1.0, length)
    wa = np.where(short, 1.0 - sigma, np.sinh((1.0 - sigma) * safe) / np.sinh(safe))
    wb = np.where(short, sigma, np.sinh(sigma * safe) / np.sinh(safe))
    return from_hyperboloid_array(wa[..., None] * X + wb[..., None] * Y)


@dataclass(frozen=True)
class RuledFilm:
    """The ruled film S_{Txz}."""
    T: Isometry4
    x: Point4
    z: Point4

    def __post_init__(self):
        if self.T.kind not in ('loxodromic', 'parabolic'):
            raise GeometryError("Ruled films are swept by nonelliptic elements, got %s" % self.T.kind)
        GeodesicSegment(self.x, self.z)

    @classmethod
    def from_spec(cls, spec):
        try:
            return cls(Isometry4.from_spec(spec['T']), Point4(*spec['x']), Point4(*spec['z']))
        except (KeyError, TypeError) as e:
            raise InvalidSpecError("Film SPEC needs T, x and z: %s" % e)

    def to_spec(self):
        return {'T': self.T.to_spec(), 'x': list(self.x), 'z': list(self.z)}

    @cached_property
    def segment(self):
        return GeodesicSegment(self.x, self.z)

    @property
    def sheets(self):
        """Sheets with a nondegenerate parametrization (the θ-sheet collapses when θ = 0)."""
        return (LAMBDA, THETA) if self.T.theta != 0.0 else (LAMBDA,)

    def _translate(self, P, t):
        T = self.T
        if T.kind == 'loxodromic':
            return P * (T.lam ** t)[..., None]
        offset = np.zeros(4)
        offset[:3] = T.axial_translation
        return P + t[..., None] * offset

    def _rotate(self, P, t):
        T = self.T
        if T.theta == 0.0:
            return P
        rotvecs = (t * T.signed_angle).reshape(-1, 1) * T.axis
        out = np.array(P, dtype=float)
        c = T.center
        horizontal = Rotation.from_rotvec(rotvecs).apply(out[..., :3].reshape(-1, 3) - c) + c
        out[..., :3] = horizontal.reshape(out[..., :3].shape)
        return out

    def sheet_points(self, sheet, s, t):
        """Vectorized sheet evaluation; (s, t) may leave [0, 1], extending the film smoothly."""
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        P = self.segment.points_at(s)
        if _sheet_name(sheet) == LAMBDA:
            return self._translate(P, t)
        return self._rotate(self._translate(P, np.ones_like(t)), t)

    def sheet_tangents(self, sheet, s, t):
        """(∂s, ∂t) at a single parameter point by central differences."""
        h = FD_STEP
        d_s = (self.sheet_points(sheet, s + h, t) - self.sheet_points(sheet, s - h, t)) / (2 * h)
        d_t = (self.sheet_points(sheet, s, t + h) - self.sheet_points(sheet, s, t - h)) / (2 * h)
        return d_s, d_t

    def grid(self, sheet, n=None):
        """Sheet points on an n × n vertex grid, shape (n, n, 4), indexed [i_s, i_t]."""
        n = n or _grid_size()
        ticks = np.linspace(0.0, 1.0, n)
        S, Tt = np.meshgrid(ticks, ticks, indexing='ij')
        return self.sheet_points(sheet, S, Tt)

    @cached_property
    def bounding_ball(self):
        """(centre, radius): a hyperbolic ball containing the whole film."""
        centre = Point4.from_array(self.sheet_points(LAMBDA, 0.5, 0.5))
        radius = 0.0
        for sheet in self.sheets:
            pts = self.grid(sheet, 17)
            d = dist_array(centre, pts.reshape(-1, 4))
            step = max(float(np.max(_adjacent_dists(pts, axis))) for axis in (0, 1))
            radius = max(radius, float(np.max(d)) + step)
        return centre, radius

    def corner_index(self):
        """The larger of the displacements of the segment endpoints under T."""
        return max(index(self.T, self.x), index(self.T, self.z))

    def boundary_curves(self, samples=65):
        """
        The oriented boundary of the film, sheet seams cancelled: [x, z], the arcs from z to Tz
        and from Tx back to x, and T[x, z] reversed.
        """
        return _cancel_opposite(self._raw_boundary_curves(samples))

    def _raw_boundary_curves(self, samples):
        ticks = np.linspace(0.0, 1.0, samples)
        zeros = np.zeros_like(ticks)
        ones = np.ones_like(ticks)
        curves = []
        for sheet in self.sheets:
            name = 'S%s' % sheet
            curves.extend([
                SampledCurve('%s:bottom' % name, self.sheet_points(sheet, ticks, zeros)),
                SampledCurve('%s:right' % name, self.sheet_points(sheet, ones, ticks)),
                SampledCurve('%s:top' % name, self.sheet_points(sheet, ticks[::-1], ones)),
                SampledCurve('%s:left' % name, self.sheet_points(sheet, zeros, ticks[::-1])),
            ])
        return [c for c in curves if not c.is_degenerate]


def _adjacent_dists(pts, axis):
    a = np.take(pts, range(pts.shape[axis] - 1), axis=axis).reshape(-1, 4)
    b = np.take(pts, range(1, pts.shape[axis]), axis=axis).reshape(-1, 4)
    diff = np.linalg.norm(a - b, axis=1)
    return 2.0 * np.arcsinh(diff / (2.0 * np.sqrt(a[:, 3] * b[:, 3])))


@dataclass(frozen=True)
class SampledCurve:
    """An oriented curve in H⁴ sampled at a fixed number of points."""
    label: str
    points: np.ndarray = field(compare=False)

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    @property
    def length(self):
        return float(np.sum(_adjacent_dists(self.points[:, None, :], 0)))

    @property
    def is_degenerate(self):
        return self.length < 1e-12

    def reversed(self):
        return SampledCurve(self.label + "'", self.points[::-1])

    def matches(self, other, tol=1e-9):
        if self.points.shape != other.points.shape:
            return False
        scale = 1.0 + float(np.max(np.abs(self.points)))
        return float(np.max(np.abs(self.points - other.points))) <= tol * scale

    def transformed(self, g):
        return SampledCurve('%s*' % self.label, g.apply_array(self.points))

def _cancel_opposite(curves, tol=1e-9):
    """Drops pairs of curves that traverse the same points in opposite directions."""
    remaining = list(curves)
    out = []
    while remaining:
        c = remaining.pop(0)
        for j, d in enumerate(remaining):
            if c.matches(d.reversed(), tol):
                del remaining[j]
                break
        else:
            out.append(c)
    return out

def _cancel_translates(curves, g, tol=1e-9):
    """Drops pairs (c, d) with g(c) = d reversed: they are identified in the quotient by ⟨g⟩."""
    remaining = list(curves)
    out = []
    while remaining:
        c = remaining.pop(0)
        for j, d in enumerate(remaining):
            if c.transformed(g).matches(d.reversed(), tol) or d.transformed(g).matches(c.reversed(), tol):
                del remaining[j]
                break
        else:
            out.append(c)
    return out


class _ConePatch():
    """
    The geodesic cone from an apex over a base curve: (σ, t) ↦ the point at fraction σ of the
    geodesic from the apex to base(t). reverse flips the orientation.
    """
    def __init__(self, name, apex, base, reverse=False):
        self.name = name
        self.apex = np.asarray(apex, dtype=float)
        self.base = base
        self.reverse = reverse

    def points(self, sigma, t):
        sigma, t = np.broadcast_arrays(np.asarray(sigma, dtype=float), np.asarray(t, dtype=float))
        B = self.base(t)
        A = np.broadcast_to(self.apex, B.shape)
        return _geodesic_interpolate(A, B, sigma)

    def boundary_curves(self, samples):
        ticks = np.linspace(0.0, 1.0, samples)
        zeros = np.zeros_like(ticks)
        ones = np.ones_like(ticks)
        # Counter-clockwise in the (t, σ) square.
        curves = [
            SampledCurve('%s:apex' % self.name, self.points(zeros, ticks)),
            SampledCurve('%s:end' % self.name, self.points(ticks, ones)),
            SampledCurve('%s:base' % self.name, self.points(ones, ticks[::-1])),
            SampledCurve('%s:start' % self.name, self.points(ticks[::-1], zeros)),
        ]
        if self.reverse:
            curves = [c.reversed() for c in reversed(curves)]
        return [c for c in curves if not c.is_degenerate]


@dataclass(frozen=True)
class ExtendedRuledFilm:
    """
    A ruled film capped so that its boundary projects to the two loops p[x, Tx] and p[z, Tz].

    The regions D(·, ·) are geodesic cones from the start of each flow arc over that arc; the
    triangles [x, T_λx, Tx] and [z, T_λz, Tz] are geodesic cones from x (resp. z) over the
    opposite side.
    """
    base: RuledFilm

    @cached_property
    def corners(self):
        F = self.base
        arr = {}
        for name, s in (('x', 0.0), ('z', 1.0)):
            arr[name] = F.sheet_points(LAMBDA, s, 0.0)
            arr['T_lambda_' + name] = F.sheet_points(LAMBDA, s, 1.0)
            arr['T_' + name] = F.sheet_points(THETA, s, 1.0)
        return arr

    @cached_property
    def pieces(self):
        F = self.base
        c = self.corners

        def arc(sheet, s):
            return lambda t: F.sheet_points(sheet, np.full_like(t, s), t)

        def side(a, b):
            return lambda t: _geodesic_interpolate(np.broadcast_to(a, t.shape + (4,)),
                                                   np.broadcast_to(b, t.shape + (4,)), t)

        return [
            _ConePatch('D(x,T_lambda x)', c['x'], arc(LAMBDA, 0.0), reverse=True),
            _ConePatch('D(T_lambda x,Tx)', c['T_lambda_x'], arc(THETA, 0.0), reverse=True),
            _ConePatch('D(z,T_lambda z)', c['z'], arc(LAMBDA, 1.0)),
            _ConePatch('D(T_lambda z,Tz)', c['T_lambda_z'], arc(THETA, 1.0)),
            _ConePatch('[x,T_lambda x,Tx]', c['x'], side(c['T_lambda_x'], c['T_x']), reverse=True),
            _ConePatch('[z,T_lambda z,Tz]', c['z'], side(c['T_lambda_z'], c['T_z'])),
        ]

    def boundary_curves(self, samples=65):
        """The boundary of the extended film with shared edges cancelled."""
        curves = list(self.base._raw_boundary_curves(samples))
        for piece in self.pieces:
            curves.extend(piece.boundary_curves(samples))
        return _cancel_opposite(curves)

    def quotient_boundary(self, samples=65):
        """The boundary after identifying T-translates: the lifts of p[z, Tz] and p[Tx, x]."""
        return _cancel_translates(self.boundary_curves(samples), self.base.T)

    def gluing_error(self, samples=65):
        """Largest endpoint mismatch between consecutive boundary curves of the glued film."""
        curves = self.boundary_curves(samples)
        ends = [c.end for c in curves]
        starts = [c.start for c in curves]
        worst = 0.0
        for end in ends:
            worst = max(worst, min(float(np.max(np.abs(end - start))) for start in starts))
        return worst


def film_point(F, sheet, s, t):
    """The point of the given sheet at parameters (s, t) ∈ [0, 1]²."""
    for name, value in (('s', s), ('t', t)):
        if not -PARAM_SLACK <= value <= 1.0 + PARAM_SLACK:
            raise ValueError("Film parameter %s=%r is outside [0, 1]" % (name, value))
    return Point4.from_array(F.sheet_points(sheet, min(max(s, 0.0), 1.0), min(max(t, 0.0), 1.0)))


@dataclass(frozen=True)
class GeneralPositionCertificate:
    """
    Margins for the two general position conditions: (i) the segment [x, z] stays off the fixed
    plane L_q of the rotation and off the axis; (ii) the hyperplane through [x, z] and the axis is
    not orthogonal to L_q. Margins are Euclidean distances for (i) and an angle for (ii);
    an absent L_q or axis gives an infinite margin.
    """
    rotation_plane_margin: float
    axis_margin: float
    orthogonality_margin: float
    threshold: float

    @property
    def avoids_rotation_plane(self):
        return self.rotation_plane_margin > self.threshold

    @property
    def avoids_axis(self):
        return self.axis_margin > self.threshold

    @property
    def condition_i(self):
        return self.avoids_rotation_plane and self.avoids_axis

    @property
    def condition_ii(self):
        return self.orthogonality_margin > self.threshold

    @property
    def certified(self):
        return self.condition_i and self.condition_ii

def _min_over_segment(segment, func, samples=65):
    """Minimum of func(point array) along the segment: coarse sampling, then bounded refinement."""
    ticks = np.linspace(0.0, 1.0, samples)
    values = func(segment.points_at(ticks))
    i = int(np.argmin(values))
    lo, hi = ticks[max(i - 1, 0)], ticks[min(i + 1, samples - 1)]
    _, best = minimize_on_interval(lambda t: float(func(segment.points_at(t))), lo, hi)
    return float(min(best, values[i]))

def check_general_position(F):
    """Computes the general position margins of the film."""
    T = F.T
    threshold = conf.tolerance('general_position')
    axis = np.asarray(T.axis)

    if T.theta == 0.0:
        plane_margin = math.inf
    else:
        centre = T.center

        def to_plane(P):
            Y = P[..., :3] - centre
            return np.linalg.norm(Y - (Y @ axis)[..., None] * axis, axis=-1)
        plane_margin = _min_over_segment(F.segment, to_plane)

    if T.kind == 'loxodromic':
        axis_margin = _min_over_segment(F.segment, lambda P: np.linalg.norm(P[..., :3], axis=-1))
    else:
        axis_margin = math.inf

    if T.theta == 0.0:
        ortho_margin = math.inf
    elif T.kind == 'parabolic':
        ortho_margin = math.pi / 2.0
    else:
        L_q = GeodesicPlane2.vertical(Point4(0.0, 0.0, 0.0, 1.0), axis)
        try:
            spanned = GeodesicHyperplane.through_points(F.x, F.z, Point4(0.0, 0.0, 0.0, 1.0),
                                                        Point4(0.0, 0.0, 0.0, 2.0))
            ortho_margin = spanned.orthogonality_margin(L_q)
        except GeometryError:
            ortho_margin = 0.0
    return GeneralPositionCertificate(plane_margin, axis_margin, ortho_margin, threshold)


@dataclass(frozen=True)
class FilmRoot:
    """
    A transversal intersection point. Film-plane roots leave sheet2/u/v unset and have sign 0;
    film-film roots carry the exponent vector of the translate and the intersection sign.
    """
    sheet1: str
    s: float
    t: float
    point: tuple
    sheet2: str = ''
    u: float = math.nan
    v: float = math.nan
    sign: int = 0
    word: tuple = ()
    jacobian_sigma: float = math.nan

    def as_row(self):
        return [self.sheet1, self.s, self.t, self.sheet2, self.u, self.v] + list(self.point) + [self.sign]

@dataclass
class IntersectionCount:
    """count is the number of roots (film-plane) or their signed sum (film-film)."""
    count: int
    roots: list
    candidates: int = 0

    @property
    def unsigned(self):
        return len(self.roots)


def _newton(residual, seed, dim):
    """
    Newton iteration with a central-difference Jacobian. Returns (u, jacobian) on convergence,
    None when the iteration diverges, stalls or leaves the neighbourhood of the unit cube.
    """
    tol = conf.numeric('newton_tol')
    u = np.array(seed, dtype=float)
    h = FD_STEP
    for _ in range(int(conf.numeric('newton_maxiter'))):
        F = residual(u)
        J = np.empty((len(F), dim))
        for k in range(dim):
            e = np.zeros(dim)
            e[k] = h
            J[:, k] = (residual(u + e) - residual(u - e)) / (2 * h)
        if np.max(np.abs(F)) <= tol:
            return u, J
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        u = u + step
        if not np.all(np.isfinite(u)) or np.any(u < -0.5) or np.any(u > 1.5):
            return None
    return None

def _inside(u):
    return bool(np.all(u >= -PARAM_SLACK) and np.all(u <= 1.0 + PARAM_SLACK))

def _sign_change_seeds(values):
    """
    Cell centres (in parameter space) whose neighbourhood shows a sign change in every
    component. values has shape (n, n, k) on the vertex grid.
    """
    n = values.shape[0]
    seeds = []
    for i in range(n - 1):
        for j in range(n - 1):
            block = values[max(i - 1, 0):min(i + 3, n), max(j - 1, 0):min(j + 3, n)]
            lo = block.min(axis=(0, 1))
            hi = block.max(axis=(0, 1))
            if np.all(lo <= 0) and np.all(hi >= 0):
                seeds.append(((i + 0.5) / (n - 1), (j + 0.5) / (n - 1)))
    return seeds

def _dedup(roots, key):
    radius = conf.numeric('dedup_radius')
    kept = []
    for root in sorted(roots, key=key):
        if not any(max(abs(a - b) for a, b in zip(key(root)[1:], key(other)[1:])) <= radius
                   and key(root)[0] == key(other)[0] for other in kept):
            kept.append(root)
    return kept

def _dedup_ambient(roots):
    """Merges roots found on both sides of the sheet seam (same point of H⁴)."""
    radius = conf.numeric('dedup_radius')
    kept = []
    for root in roots:
        p = Point4(*root.point)
        if not any(root.word == other.word and dist(p, Point4(*other.point)) <= radius for other in kept):
            kept.append(root)
    return kept

def count_film_plane_intersections(F, P):
    """
    Counts the transversal intersections of the film with the geodesic 2-plane P.

    Raises DegenerateIntersectionError at a non-transversal root.
    """
    threshold = conf.numeric('jacobian_threshold')
    roots = []
    candidates = 0
    for sheet in F.sheets:
        values = P.constraints_array(F.grid(sheet))
        seeds = _sign_change_seeds(values)
        candidates += len(seeds)

        def residual(u, sheet=sheet):
            return P.constraints_array(F.sheet_points(sheet, u[0], u[1]))

        for seed in seeds:
            found = _newton(residual, seed, 2)
            if found is None or not _inside(found[0]):
                continue
            u, J = found
            u = np.clip(u, 0.0, 1.0)
            sigma = float(np.linalg.svd(J, compute_uv=False)[-1])
            point = tuple(float(c) for c in F.sheet_points(sheet, u[0], u[1]))
            root = FilmRoot(sheet, float(u[0]), float(u[1]), point, jacobian_sigma=sigma)
            if sigma < threshold:
                log.warning('(films) degenerate film-plane root at %s (sigma=%s)', point, sigma)
                raise DegenerateIntersectionError("Film meets the plane non-transversally at %s" % (point,),
                                                  root=root)
            roots.append(root)

    roots = _dedup(roots, key=lambda r: (r.sheet1, r.s, r.t))
    roots = _dedup_ambient(roots)
    log.debug('(films) film-plane: %s root(s) from %s seed(s)', len(roots), candidates)
    return IntersectionCount(len(roots), roots, candidates)


def _cell_boxes(pts):
    """Axis-aligned boxes (lo, hi) of the grid cells, padded for curvature; shapes (m, 4)."""
    corners = np.stack([pts[:-1, :-1], pts[1:, :-1], pts[:-1, 1:], pts[1:, 1:]], axis=0)
    lo = corners.min(axis=0).reshape(-1, 4)
    hi = corners.max(axis=0).reshape(-1, 4)
    pad = 0.25 * np.max(hi - lo, axis=1, keepdims=True) + 1e-12
    return lo - pad, hi + pad

def _on_outer_boundary(sheet, params, sheets):
    s, t = params
    if min(s, 1 - s) <= PARAM_SLACK:
        return True
    if sheet == LAMBDA and t <= PARAM_SLACK:
        return True
    if sheet == sheets[-1] and 1 - t <= PARAM_SLACK:
        return True
    return False

def count_film_film_intersections(F1, F2, G):
    """
    Signed count of the transversal intersections of F1 with the translates w·F2, w ∈ G.

    The sign of a root is the orientation of the frame (∂sF1, ∂tF1, ∂u wF2, ∂v wF2). Roots on
    the outer boundary of either film, or non-transversal roots, raise DegenerateIntersectionError;
    TruncationError propagates when the translate window outgrows the group's truncation.
    """
    threshold = conf.numeric('jacobian_threshold')
    c1, r1 = F1.bounding_ball
    c2, r2 = F2.bounding_ball
    reach = dist(c1, c2) + r1 + r2
    words = np.vstack([np.zeros((1, G.rank), dtype=int), G.exponents(c2, reach)])

    roots = []
    candidates = 0
    tested = 0
    n = _grid_size()
    for word in words:
        w = G.element(word)
        if dist(c1, w.apply(c2)) > r1 + r2:
            continue
        tested += 1
        for sheet1 in F1.sheets:
            lo1, hi1 = _cell_boxes(F1.grid(sheet1, n))
            for sheet2 in F2.sheets:
                lo2, hi2 = _cell_boxes(w.apply_array(F2.grid(sheet2, n)))
                overlap = np.all((lo1[:, None, :] <= hi2[None, :, :]) & (lo2[None, :, :] <= hi1[:, None, :]),
                                 axis=-1)
                pairs = np.argwhere(overlap)
                candidates += len(pairs)

                def residual(u, sheet1=sheet1, sheet2=sheet2, w=w):
                    a = F1.sheet_points(sheet1, u[0], u[1])
                    b = w.apply_array(F2.sheet_points(sheet2, u[2], u[3]))
                    return (a - b) / a[3]

                for cell1, cell2 in pairs:
                    seed = [(cell1 // (n - 1) + 0.5) / (n - 1), (cell1 % (n - 1) + 0.5) / (n - 1),
                            (cell2 // (n - 1) + 0.5) / (n - 1), (cell2 % (n - 1) + 0.5) / (n - 1)]
                    if any(o.word == tuple(int(k) for k in word) and (o.sheet1, o.sheet2) == (sheet1, sheet2)
                           and max(abs(a - b) for a, b in zip(seed, (o.s, o.t, o.u, o.v))) <= 1.5 / (n - 1)
                           for o in roots):
                        continue
                    found = _newton(residual, seed, 4)
                    if found is None or not _inside(found[0]):
                        continue
                    u, J = found
                    u = np.clip(u, 0.0, 1.0)
                    point = tuple(float(c) for c in F1.sheet_points(sheet1, u[0], u[1]))
                    sigma = float(np.linalg.svd(J, compute_uv=False)[-1])
                    sign = int(np.sign(np.linalg.det(J)))
                    root = FilmRoot(sheet1, float(u[0]), float(u[1]), point, sheet2, float(u[2]),
                                    float(u[3]), sign, tuple(int(k) for k in word), sigma)
                    if any(max(abs(a - b) for a, b in zip((root.s, root.t, root.u, root.v),
                                                         (o.s, o.t, o.u, o.v))) <= conf.numeric('dedup_radius')
                           and (o.sheet1, o.sheet2, o.word) == (root.sheet1, root.sheet2, root.word)
                           for o in roots):
                        continue
                    if sigma < threshold or sign == 0:
                        log.warning('(films) degenerate film-film root at %s (sigma=%s)', point, sigma)
                        raise DegenerateIntersectionError("Films meet non-transversally at %s" % (point,),
                                                          root=root)
                    if (_on_outer_boundary(sheet1, (root.s, root.t), F1.sheets) or
                            _on_outer_boundary(sheet2, (root.u, root.v), F2.sheets)):
                        raise DegenerateIntersectionError("Films meet along their boundary at %s" % (point,),
                                                          root=root)
                    roots.append(root)

    roots = sorted(roots, key=lambda r: (r.word, r.sheet1, r.sheet2, r.s, r.t, r.u, r.v))
    roots = _dedup_ambient(roots)
    total = sum(r.sign for r in roots)
    log.debug('(films) film-film: %s root(s), signed total %s, %s translate(s) tested',
              len(roots), total, tested)
    return IntersectionCount(total, roots, candidates)

def film_in_cone(F, p, slack=1e-9):
    """Whether p lies in the cone of ⟨T⟩ at the film's corner index level."""
    K = MargulisCone(ElementaryGroup.cyclic(F.T), F.corner_index() + slack)
    return cone_contains(K, p)
