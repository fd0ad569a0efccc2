"""
isometry.py - Nonelliptic isometries of H⁴ in normal position.

A loxodromic element is a Euclidean similarity x ↦ λ·Θx fixing 0 and ∞, where Θ rotates the
horizontal coordinates and fixes x4. A parabolic element is a screw motion y ↦ Θy + τ on each
horosphere {x4 = const}. When the rotation is nontrivial τ needs a component along the rotation
axis; an off-axis part only moves the screw axis to the line through the centre c with
(I − Θ)c = τ⊥, so the element is y ↦ Θ(y − c) + c + τ∥.
Every element splits as T = T_θ ∘ T_λ into its rotational and translational parts.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import cachetools
import numpy as np
from scipy.spatial.transform import Rotation

from .geometry import BoundaryPoint, Point4, cosh_dist_minus_one, dist
from .utils import EllipticIsometryError, GeometryError, InvalidSpecError

__all__ = ['Isometry4', 'AxisData', 'DisplacementAudit', 'apply', 'power', 'compose', 'inverse',
           'flow_rotational', 'flow_translational', 'translation_length', 'index',
           'displacement_audit', 'axis_data']

KINDS = ('loxodromic', 'parabolic', 'elliptic', 'identity')

_E1 = (1.0, 0.0, 0.0)
_E2 = (0.0, 1.0, 0.0)
_E3 = (0.0, 0.0, 1.0)

def _normalize_angle(phi):
    """Maps a signed angle to (theta in [0, π], orientation in {+1, −1})."""
    phi = math.remainder(float(phi), 2.0 * math.pi)
    theta = abs(phi)
    if theta >= math.pi - 1e-15:
        return math.pi, 1
    if theta == 0.0:
        return 0.0, 1
    return theta, (1 if phi > 0 else -1)

def _unit(vector, what):
    v = np.asarray(vector, dtype=float)
    norm = float(np.linalg.norm(v))
    if v.shape != (3,) or not math.isfinite(norm) or norm == 0.0:
        raise GeometryError("%s must be a nonzero 3-vector, got %r" % (what, vector))
    return v / norm

def _orthogonal_to(axis):
    """An orthonormal pair (u, v) with u × v = axis."""
    axis = _unit(axis, 'axis')
    helper = np.array(_E1) if abs(axis[0]) < 0.9 else np.array(_E2)
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    return tuple(u), tuple(v)


@dataclass(frozen=True)
class Isometry4:
    """
    An isometry of H⁴ in normal position.

    Generators are built with Isometry4.loxodromic() or Isometry4.parabolic(); the 'elliptic'
    and 'identity' kinds only arise as flow factors or compositions and are never accepted as
    group generators. Negative powers of a loxodromic element have lam < 1.
    """
    kind: str
    lam: float = 1.0
    theta: float = 0.0
    rotation_plane: tuple = None
    rotation_axis: tuple = None
    translation: tuple = (0.0, 0.0, 0.0)
    orientation: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError("Unknown isometry kind %r" % self.kind)
        theta, orientation = _normalize_angle(float(self.theta) * (1 if self.orientation >= 0 else -1))
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'orientation', orientation)
        object.__setattr__(self, 'lam', float(self.lam))
        object.__setattr__(self, 'translation', tuple(float(c) for c in self.translation))

        if self.rotation_plane is not None:
            u, v = (np.asarray(w, dtype=float) for w in self.rotation_plane)
            if abs(np.linalg.norm(u) - 1) > 1e-10 or abs(np.linalg.norm(v) - 1) > 1e-10 or abs(u @ v) > 1e-10:
                raise GeometryError("rotation_plane must be an orthonormal pair, got %r" % (self.rotation_plane,))
            object.__setattr__(self, 'rotation_plane', (tuple(float(c) for c in u), tuple(float(c) for c in v)))
        if self.rotation_axis is not None:
            object.__setattr__(self, 'rotation_axis', tuple(float(c) for c in _unit(self.rotation_axis, 'rotation_axis')))

        tau = np.asarray(self.translation)
        if self.kind == 'loxodromic':
            if not (math.isfinite(self.lam) and self.lam > 0 and self.lam != 1.0):
                raise GeometryError("A loxodromic element needs a similarity coefficient other than 1, got %r" % self.lam)
            if np.any(tau):
                raise GeometryError("A loxodromic element in normal position has no translation part")
            if self.rotation_plane is None:
                object.__setattr__(self, 'rotation_plane', (_E1, _E2))
        elif self.kind == 'parabolic':
            if self.lam != 1.0:
                raise GeometryError("A parabolic element acts isometrically on horospheres (lam = 1)")
            if not np.any(tau):
                raise EllipticIsometryError("A parabolic element needs a nonzero translation")
            if self.rotation_axis is None:
                object.__setattr__(self, 'rotation_axis', tuple(tau / np.linalg.norm(tau)))
            if self.theta != 0.0:
                axis = np.asarray(self.rotation_axis)
                along = float(tau @ axis)
                if abs(along) <= 1e-12 * max(1.0, float(np.linalg.norm(tau))):
                    raise EllipticIsometryError("Screw translation has no component along the rotation axis; "
                                                "the element is elliptic")
        elif self.kind == 'elliptic':
            # A rotation about a line parallel to the axis shifts points orthogonally to it.
            if self.lam != 1.0 or abs(float(tau @ self.axis)) > 1e-12 * max(1.0, float(np.linalg.norm(tau))):
                raise GeometryError("Elliptic flow factors are rotations about a line parallel to the axis")
        elif self.lam != 1.0 or np.any(tau) or self.theta != 0.0:
            raise GeometryError("The identity has no rotation or translation")

    @classmethod
    def loxodromic(cls, lam, theta=0.0, rotation_plane=None, orientation=1):
        """A loxodromic generator x ↦ λ·Θx with λ > 1."""
        if not lam > 1:
            raise GeometryError("Loxodromic generators are normalised to lam > 1, got %r" % lam)
        return cls('loxodromic', lam=lam, theta=theta, rotation_plane=rotation_plane, orientation=orientation)

    @classmethod
    def dilation(cls, lam):
        return cls.loxodromic(lam)

    @classmethod
    def parabolic(cls, translation, theta=0.0, rotation_axis=None, orientation=1):
        """A parabolic generator y ↦ Θy + τ fixing ∞."""
        return cls('parabolic', translation=tuple(translation), theta=theta, rotation_axis=rotation_axis,
                   orientation=orientation)

    @classmethod
    def from_spec(cls, spec):
        """Builds a generator from its JSON SPEC form."""
        if not isinstance(spec, dict):
            raise InvalidSpecError("Isometry SPEC must be an object, got %r" % (spec,))
        kind = spec.get('kind')
        try:
            if kind == 'loxodromic':
                return cls.loxodromic(float(spec['lambda']), theta=float(spec.get('theta', 0.0)),
                                      rotation_plane=spec.get('rotation_plane'),
                                      orientation=int(spec.get('orientation', 1)))
            elif kind == 'parabolic':
                return cls.parabolic(tuple(float(c) for c in spec['translation']),
                                     theta=float(spec.get('theta', 0.0)),
                                     rotation_axis=spec.get('rotation_axis'),
                                     orientation=int(spec.get('orientation', 1)))
        except KeyError as e:
            raise InvalidSpecError("Isometry SPEC of kind %r is missing field %s" % (kind, e))
        except (TypeError, ValueError) as e:
            if isinstance(e, GeometryError):
                raise
            raise InvalidSpecError("Malformed isometry SPEC %r: %s" % (spec, e))
        raise InvalidSpecError("Isometry SPEC kind must be 'loxodromic' or 'parabolic', got %r" % (kind,))

    def to_spec(self):
        spec = {'kind': self.kind, 'theta': self.theta, 'orientation': self.orientation}
        if self.kind == 'loxodromic':
            spec['lambda'] = self.lam
            spec['rotation_plane'] = [list(w) for w in self.rotation_plane]
        elif self.kind == 'parabolic':
            spec['translation'] = list(self.translation)
            spec['rotation_axis'] = list(self.rotation_axis)
        return spec

    @property
    def signed_angle(self):
        return self.orientation * self.theta

    @property
    def axis(self):
        """Unit direction in R³ fixed by the rotational part."""
        if self.rotation_plane is not None:
            u, v = self.rotation_plane
            return np.cross(u, v)
        if self.rotation_axis is not None:
            return np.asarray(self.rotation_axis)
        return np.array(_E3)

    @property
    def axial_translation(self):
        """τ∥: the part of the translation along the screw axis (all of τ without rotation)."""
        tau = np.asarray(self.translation)
        if self.theta == 0.0:
            return tau
        a = self.axis
        return (tau @ a) * a

    @property
    def center(self):
        """The point c ⟂ axis that the rotational part turns around."""
        tau = np.asarray(self.translation)
        if self.theta == 0.0 or not np.any(tau):
            return np.zeros(3)
        a = self.axis
        offset = tau - (tau @ a) * a
        if not np.any(offset):
            return np.zeros(3)
        return np.linalg.lstsq(np.eye(3) - self.rotation_matrix, offset, rcond=None)[0]

    @property
    def rotation_matrix(self):
        if self.theta == 0.0:
            return np.eye(3)
        return Rotation.from_rotvec(self.axis * self.signed_angle).as_matrix()

    def affine(self):
        """(A, b) with T(x) = A·x + b on R⁴ ⊃ H⁴."""
        A = np.eye(4)
        A[:3, :3] = self.rotation_matrix
        A *= self.lam
        b = np.zeros(4)
        b[:3] = self.translation
        return A, b

    def apply_array(self, P):
        A, b = self.affine()
        return np.asarray(P, dtype=float) @ A.T + b

    def apply(self, p):
        return Point4.from_array(self.apply_array(p.coords))

    def apply_boundary(self, xi):
        if xi.is_infinite:
            return xi
        A, b = self.affine()
        return BoundaryPoint(tuple(A[:3, :3] @ np.asarray(xi.coords) + b[:3]))

    def _like(self, **changes):
        """A copy with the same frame (plane/axis) and the given fields replaced."""
        fields = dict(kind=self.kind, lam=self.lam, theta=self.theta, rotation_plane=self.rotation_plane,
                      rotation_axis=self.rotation_axis, translation=self.translation,
                      orientation=self.orientation)
        fields.update(changes)
        return Isometry4(**fields)

    def distance_to_rotation_plane(self, x):
        """R_x: Euclidean distance from x to L_q (0 when the rotation is trivial)."""
        if self.theta == 0.0:
            return 0.0
        y = x.horizontal - self.center
        a = self.axis
        return float(np.linalg.norm(y - (y @ a) * a))


@dataclass(frozen=True)
class AxisData:
    """
    The axis A_q (loxodromic: the vertical geodesic over 0; parabolic: none) and the fixed plane
    L_q of the rotational part, given by its horizontal direction (None when θ = 0).
    """
    has_axis: bool
    rotation_fixed_direction: tuple = None

    @property
    def has_rotation_plane(self):
        return self.rotation_fixed_direction is not None

def axis_data(g):
    direction = tuple(g.axis) if g.theta != 0.0 else None
    return AxisData(has_axis=(g.kind == 'loxodromic'), rotation_fixed_direction=direction)


def apply(g, p):
    """Image of p under g."""
    return g.apply(p)

_power_cache = cachetools.LRUCache(maxsize=8192)

@cachetools.cached(_power_cache, lock=threading.RLock())
def power(g, n):
    """Normal form of gⁿ for n ≠ 0."""
    n = int(n)
    if n == 0:
        raise ValueError("power() needs a nonzero exponent")
    theta, orientation = _normalize_angle(n * g.signed_angle)
    if g.kind == 'loxodromic':
        return g._like(lam=g.lam ** n, theta=theta, orientation=orientation)
    elif g.kind in ('parabolic', 'elliptic'):
        # gⁿ(y) = Θⁿ(y − c) + c + n·τ∥
        c = g.center
        turned = Rotation.from_rotvec(g.axis * (n * g.signed_angle)).apply(c) if g.theta else c
        tau = c - turned + n * g.axial_translation
        if g.kind == 'elliptic' and not theta:
            return Isometry4('identity')
        return g._like(translation=tuple(float(t) for t in tau), theta=theta, orientation=orientation)
    return g

def inverse(g):
    return power(g, -1)

def compose(g, h):
    """g ∘ h for commuting elements sharing the frame of g."""
    Ag, bg = g.affine()
    Ah, bh = h.affine()
    A = Ag @ Ah
    b = Ag @ bh + bg
    lam = float(A[3, 3])
    R = A[:3, :3] / lam
    tau = b[:3]
    rotvec = Rotation.from_matrix(R).as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    frame = g if g.kind != 'identity' else h
    if angle > 1e-12:
        direction = rotvec / angle
        if float(direction @ frame.axis) < 0:
            direction, angle = -direction, -angle
        if np.linalg.norm(np.cross(direction, frame.axis)) > 1e-8:
            raise GeometryError("compose() needs elements sharing a rotation axis")
    else:
        angle = 0.0
    theta, orientation = _normalize_angle(angle)
    if abs(lam - 1.0) > 1e-12:
        if np.linalg.norm(tau) > 1e-10 * max(1.0, lam):
            raise GeometryError("Composition left normal position")
        plane = frame.rotation_plane or _orthogonal_to(frame.axis)
        return Isometry4('loxodromic', lam=lam, theta=theta, rotation_plane=plane, orientation=orientation)
    # A rotation with no axial translation is elliptic even when it shifts the origin.
    rotates_only = theta != 0.0 and abs(float(tau @ frame.axis)) <= 1e-12 * max(1.0, float(np.linalg.norm(tau)))
    if np.linalg.norm(tau) > 1e-14 and not rotates_only:
        axis = frame.rotation_axis if frame.rotation_axis is not None else tuple(frame.axis)
        if theta == 0.0:
            axis = None
        return Isometry4('parabolic', translation=tuple(tau), theta=theta, rotation_axis=axis,
                         orientation=orientation)
    if theta == 0.0:
        return Isometry4('identity')
    return Isometry4('elliptic', theta=theta, orientation=orientation, rotation_plane=frame.rotation_plane,
                     rotation_axis=frame.rotation_axis if frame.rotation_plane is None else None,
                     translation=tuple(tau) if np.linalg.norm(tau) > 1e-14 else (0.0, 0.0, 0.0))

def flow_rotational(g, t):
    """exp(tξ): rotation by t·θ in the rotation plane of g, about its centre."""
    theta, orientation = _normalize_angle(float(t) * g.signed_angle)
    if theta == 0.0:
        return Isometry4('identity')
    if g.rotation_plane is not None:
        return Isometry4('elliptic', theta=theta, orientation=orientation, rotation_plane=g.rotation_plane)
    c = g.center
    shift = c - Rotation.from_rotvec(g.axis * (float(t) * g.signed_angle)).apply(c)
    return Isometry4('elliptic', theta=theta, orientation=orientation, rotation_axis=tuple(g.axis),
                     translation=tuple(float(s) for s in shift))

def flow_translational(g, t):
    """exp(tζ): dilation by λᵗ (loxodromic) or translation by t·τ (parabolic)."""
    t = float(t)
    if t == 0.0 or g.kind in ('elliptic', 'identity'):
        return Isometry4('identity')
    if g.kind == 'loxodromic':
        return Isometry4('loxodromic', lam=g.lam ** t, rotation_plane=g.rotation_plane)
    # τ∥ lies on the axis, so T_θ⁻¹ leaves it unchanged.
    return Isometry4('parabolic', translation=tuple(t * g.axial_translation), rotation_axis=g.rotation_axis)

def translation_length(g):
    """l(g) = inf d(x, gx): |log λ| for loxodromic elements, 0 otherwise."""
    if g.kind == 'loxodromic':
        return abs(math.log(g.lam))
    return 0.0

def index(g, x):
    """ind_g(x) = d(x, gx)."""
    return dist(x, g.apply(x))


@dataclass(frozen=True)
class DisplacementAudit:
    """
    The displacement formulas as printed (euclidean_sq, two_sinh_sq, x_theta, x_lambda) next to
    the direct values computed from the model. ratio is printed two_sinh_sq over the direct one.
    """
    euclidean_sq: float
    two_sinh_sq: float
    x_theta: float
    x_lambda: float
    direct_euclidean_sq: float
    direct_two_sinh_sq: float
    r_x: float
    ratio: float

    @property
    def euclidean_discrepancy(self):
        return abs(self.euclidean_sq - self.direct_euclidean_sq) / (1.0 + self.direct_euclidean_sq)

def displacement_audit(g, x):
    """Evaluates the printed displacement formulas at x alongside the direct computation."""
    if g.kind not in ('loxodromic', 'parabolic'):
        raise EllipticIsometryError("Displacement formulas are stated for nonelliptic elements")
    image = g.apply(x)
    diff = image.coords - x.coords
    direct_euclidean_sq = float(diff @ diff)
    direct_two_sinh_sq = cosh_dist_minus_one(x, image)

    r = g.distance_to_rotation_plane(x)
    rot = 2.0 * r * r * (1.0 - math.cos(g.theta))
    h = x.x4
    if g.kind == 'parabolic':
        lam_t = float(np.linalg.norm(g.axial_translation))
        euclidean_sq = rot + lam_t ** 2
        x_theta = math.sqrt(rot) / h
        x_lambda = lam_t / h
    else:
        norm_sq = float(x.coords @ x.coords)
        euclidean_sq = (rot + g.lam ** 2) * norm_sq
        x_theta = math.sqrt(rot * norm_sq) / h
        x_lambda = abs(g.lam - 1.0) * math.sqrt(norm_sq) / (math.sqrt(g.lam) * h)
    two_sinh_sq = x_theta ** 2 + x_lambda ** 2
    ratio = two_sinh_sq / direct_two_sinh_sq if direct_two_sinh_sq > 0 else math.nan
    return DisplacementAudit(euclidean_sq=euclidean_sq, two_sinh_sq=two_sinh_sq, x_theta=x_theta,
                             x_lambda=x_lambda, direct_euclidean_sq=direct_euclidean_sq,
                             direct_two_sinh_sq=direct_two_sinh_sq, r_x=r, ratio=ratio)
