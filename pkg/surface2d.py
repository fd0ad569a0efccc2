"""
surface2d.py - Hyperbolic plane utilities.

Upper half-plane points and PSL(2, R) elements, hypercycles around the imaginary axis, geodesic
lengths from traces, and simple closed curves on the once-punctured torus, whose primitive
homology classes (p, q) have geometric intersection number |ps − qr|.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import conf
from .log import log
from .structures import Check, VerificationReport
from .utils import GeometryError, NonHyperbolicElementError

__all__ = ['PointH2', 'Moebius2', 'PQCurve', 'dist_h2', 'hypercycle_points', 'hypercycle_chord',
           'hypercycle_arc_length', 'prop6_formula', 'trace_length', 'pq_word', 'pq_intersection',
           'primitive_classes', 'word_matrix', 'lemma11_checks', 'verify_lemma11', 'cyclic_orbit_count_h2',
           'PUNCTURED_TORUS']


@dataclass(frozen=True)
class PointH2:
    """A point u + iv of the upper half-plane."""
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v) and self.v > 0):
            raise GeometryError("PointH2 needs finite u and v > 0, got (%r, %r)" % (self.u, self.v))

    @classmethod
    def from_complex(cls, z):
        return cls(float(z.real), float(z.imag))

    def as_complex(self):
        return complex(self.u, self.v)


@dataclass(frozen=True)
class Moebius2:
    """
    The element z ↦ (az + b)/(cz + d) of PSL(2, R), with ad − bc = 1.
    """
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(1.0, abs(self.a * self.d), abs(self.b * self.c))
        if abs(det - 1.0) > 1e-12 * scale:
            raise GeometryError("Moebius2 needs determinant 1, got %r" % det)

    @classmethod
    def from_matrix(cls, m):
        (a, b), (c, d) = np.asarray(m, dtype=float)
        return cls(float(a), float(b), float(c), float(d))

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self):
        return self.a + self.d

    def __matmul__(self, other):
        return Moebius2.from_matrix(self.matrix @ other.matrix)

    def inverse(self):
        return Moebius2(self.d, -self.b, -self.c, self.a)

    def apply(self, p):
        z = p.as_complex()
        return PointH2.from_complex((self.a * z + self.b) / (self.c * z + self.d))

    def commutator(self, other):
        """[A, B] = A B A⁻¹ B⁻¹."""
        return self @ other @ self.inverse() @ other.inverse()

# A = [[1, 1], [1, 2]], B = [[1, −1], [−1, 2]]: tr[A, B] = −2.
PUNCTURED_TORUS = (Moebius2(1.0, 1.0, 1.0, 2.0), Moebius2(1.0, -1.0, -1.0, 2.0))


def dist_h2(p, q):
    """Distance in the upper half-plane."""
    diff = abs(p.as_complex() - q.as_complex())
    return 2.0 * math.asinh(diff / (2.0 * math.sqrt(p.v * q.v)))

def _hypercycle_angle(t):
    if t < 0:
        raise ValueError("Hypercycle distance t must be >= 0, got %r" % t)
    # cosh(t)·sin θ = 1
    return math.asin(1.0 / math.cosh(t))

def hypercycle_points(t, r):
    """
    Two points on the hypercycle at distance t from the imaginary axis whose projections to
    the axis are i and ir: z₁ = e^{iθ} and z = r·e^{iθ}.
    """
    if r < 1:
        raise ValueError("Hypercycle ratio r must be >= 1, got %r" % r)
    theta = _hypercycle_angle(t)
    z1 = complex(math.cos(theta), math.sin(theta))
    return PointH2.from_complex(z1), PointH2.from_complex(r * z1)

def hypercycle_chord(t, r):
    """2 sinh(d(z₁, z)/2) computed from the points themselves."""
    z1, z = hypercycle_points(t, r)
    return 2.0 * math.sinh(dist_h2(z1, z) / 2.0)

def prop6_formula(t, r):
    """The closed form (r − 1)/(sin θ·√r) = (r − 1)·cosh t/√r of the hypercycle chord."""
    _hypercycle_angle(t)
    return (r - 1.0) * math.cosh(t) / math.sqrt(r)

def hypercycle_arc_length(t, r):
    """Length along the hypercycle between the two points: log(r)/sin θ = log(r)·cosh t."""
    _hypercycle_angle(t)
    if r < 1:
        raise ValueError("Hypercycle ratio r must be >= 1, got %r" % r)
    return math.log(r) * math.cosh(t)

def trace_length(M):
    """Translation length 2 arccosh(|tr M|/2) of a hyperbolic element."""
    tr = abs(M.trace)
    if tr <= 2.0:
        raise NonHyperbolicElementError("|trace| = %r <= 2: the element is not hyperbolic" % tr)
    return 2.0 * math.acosh(tr / 2.0)


@dataclass(frozen=True)
class PQCurve:
    """A primitive class (p, q) on the once-punctured torus and a word in A, B realizing it."""
    p: int
    q: int
    word: str

    @property
    def abelianization(self):
        p = self.word.count('A') - self.word.count('a')
        q = self.word.count('B') - self.word.count('b')
        return p, q

def pq_word(p, q):
    """
    The Christoffel word of the class (p, q): |p| letters A and |q| letters B, interleaved along
    the line of slope q/p. Negative signs use the inverse letters a = A⁻¹, b = B⁻¹.
    """
    p, q = int(p), int(q)
    if math.gcd(p, q) != 1:
        raise ValueError("(%s, %s) is not a primitive class" % (p, q))
    x_letter = 'A' if p >= 0 else 'a'
    y_letter = 'B' if q >= 0 else 'b'
    m, n = abs(p), abs(q)
    total = m + n
    letters = []
    for k in range(1, total + 1):
        if (k * n) // total > ((k - 1) * n) // total:
            letters.append(y_letter)
        else:
            letters.append(x_letter)
    return PQCurve(p, q, ''.join(letters))

def pq_intersection(c1, c2):
    """Geometric intersection number |ps − qr| of the classes (p, q) and (r, s)."""
    return abs(c1.p * c2.q - c1.q * c2.p)

def primitive_classes(max_pq):
    """
    Unoriented primitive classes with |p|, |q| ≤ max_pq, one representative each
    (p > 0, or p = 0 and q = 1), in lexicographic order.
    """
    classes = []
    for p in range(0, max_pq + 1):
        for q in range(-max_pq, max_pq + 1):
            if math.gcd(p, q) != 1:
                continue
            if p == 0 and q != 1:
                continue
            classes.append((p, q))
    return classes

def word_matrix(word, A, B):
    """The product of the generators spelled by word (A, B, and inverses a, b)."""
    letters = {'A': A, 'B': B, 'a': A.inverse(), 'b': B.inverse()}
    result = np.eye(2)
    for letter in word:
        result = result @ letters[letter].matrix
    return Moebius2.from_matrix(result)

def cyclic_orbit_count_h2(M, z, radius):
    """Number of n ∈ Z (0 included) with d(z, Mⁿz) ≤ radius, for hyperbolic M."""
    length = trace_length(M)
    window = int(math.floor(radius / length)) + 1
    count = 1
    for n in range(1, window + 1):
        Mn = Moebius2.from_matrix(np.linalg.matrix_power(M.matrix, n))
        for g in (Mn, Mn.inverse()):
            if dist_h2(z, g.apply(z)) <= radius:
                count += 1
    return count

def _check_punctured_torus(A, B):
    commutator_trace = A.commutator(B).trace
    if abs(commutator_trace + 2.0) > conf.tolerance('commutator_trace'):
        raise GeometryError("tr[A, B] = %r, not −2: the generators do not uniformize a "
                            "once-punctured torus" % commutator_trace)

def lemma11_checks(A, B, max_pq):
    """
    The checks #(p₁ ∩ p₂) ≤ exp(l₁ + l₂ + 1) over all pairs of primitive classes up to max_pq,
    pairs in lexicographic order, with lengths taken from the traces of the Christoffel words.
    Intersecting pairs must also satisfy sinh(l₁/2)·sinh(l₂/2) ≥ 1.
    """
    _check_punctured_torus(A, B)
    curves = [pq_word(p, q) for p, q in primitive_classes(max_pq)]
    lengths = [trace_length(word_matrix(c.word, A, B)) for c in curves]
    log.debug('(lemma11) %s primitive classes up to %s', len(curves), max_pq)

    checks = []
    for i, (c1, l1) in enumerate(zip(curves, lengths)):
        for c2, l2 in zip(curves[i + 1:], lengths[i + 1:]):
            inputs = {'class1': [c1.p, c1.q], 'class2': [c2.p, c2.q], 'l1': l1, 'l2': l2}
            count = pq_intersection(c1, c2)
            checks.append(Check.upper('lemma11', inputs, math.log(count) if count else -math.inf,
                                      l1 + l2 + 1.0, log_scale=True, count=count))
            if count >= 1:
                checks.append(Check.lower('sinh_product', inputs,
                                          math.sinh(l1 / 2.0) * math.sinh(l2 / 2.0), 1.0))
    return checks

def verify_lemma11(A, B, max_pq):
    """Runs lemma11_checks into a fresh report; one trial per pair of classes."""
    _check_punctured_torus(A, B)
    report = VerificationReport('lemma11', {'max_pq': max_pq})
    for check in lemma11_checks(A, B, max_pq):
        report.add(check)
    n = len(primitive_classes(max_pq))
    report.trials = n * (n - 1) // 2
    return report
