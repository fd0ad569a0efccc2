"""
keyproperty.py: Suites for the key property of index and the lemmas leading up to it.

A point of bounded index near a segment of bounded index is either close to an endpoint of the
segment, or the isometry has translation length bounded away from zero.
"""
import math

from hyp4tubes import bounds, utils
from hyp4tubes.geometry import (BoundaryPoint, GeodesicRay, GeodesicSegment, Point4, dist,
                                dist_point_ray, dist_point_segment, dist_to_vertical_axis)
from hyp4tubes.isometry import index, translation_length
from hyp4tubes.margulis import ElementaryGroup, min_index
from hyp4tubes.structures import Check

# Strict hypotheses ("index < R") are met by padding the measured maximum.
R_PAD = 1e-6

@utils.add_suite('lemma4', 'd(z, w) ≤ R + 1/ν')
def lemma4(sampler, cfg):
    """Lowering a point far from the axis along its vertical line costs at most R + 1/ν."""
    g = sampler.loxodromic()
    z = sampler.point()
    if dist_to_vertical_axis(z) <= 2.0:
        raise utils.HypothesisRejected("d(z, A) <= 2")
    w = Point4(z.x1, z.x2, z.x3, z.x4 * sampler.log_uniform(1e-3, 1.0))
    nu = index(g, z)
    R = max(nu, index(g, w))
    inputs = {'g': g.to_spec(), 'z': list(z), 'w': list(w), 'nu': nu, 'R': R}
    return [Check.upper('lemma4', inputs, dist(z, w), bounds.lemma4_bound(R, nu).value)]

@utils.add_suite('prop4', 'min { d(z, L_a), d(z, L_b) } ≤ 2 + R')
def prop4(sampler, cfg):
    """A point within R of [a, b] is within 2 + R of one of the vertical rays over a and b."""
    a = sampler.point()
    b = sampler.point()
    segment = GeodesicSegment(a, b)
    z = sampler.point_near(segment.point_at(sampler.uniform(0.0, 1.0)), sampler.draw('radius'))
    R = dist_point_segment(z, segment)
    if not R > 0:
        raise utils.HypothesisRejected("z lies on [a, b]")
    infinity = BoundaryPoint.infinity()
    measured = min(dist_point_ray(z, GeodesicRay(a, infinity)), dist_point_ray(z, GeodesicRay(b, infinity)))
    inputs = {'a': list(a), 'b': list(b), 'z': list(z), 'R': R}
    return [Check.upper('prop4', inputs, measured, bounds.prop4_bound(R).value)]

def _near_segment(sampler, centre):
    """Segment endpoints a, b drawn around centre."""
    radius = sampler.draw('radius')
    a = sampler.point_near(centre, radius)
    b = sampler.point_near(centre, radius)
    if a == b:
        raise utils.HypothesisRejected("a and b coincide")
    return a, b

def _padded_R(g, z, a, b):
    segment = GeodesicSegment(a, b)
    return max(dist_point_segment(z, segment), index(g, z), index(g, a), index(g, b)) + R_PAD

@utils.add_suite('lemma5', 'min {d(z, a), d(z, b)} ≤ 4R + 6 + 1/k')
def lemma5(sampler, cfg):
    """Close to a short loxodromic, bounded index forces z near an endpoint of [a, b]."""
    theta = sampler.draw('short_log_lambda') if sampler.rng.random() < 0.5 else 0.0
    g = sampler.loxodromic(log_lambda=sampler.draw('short_log_lambda'), theta=theta)
    z = sampler.point()
    a, b = _near_segment(sampler, z)
    R = _padded_R(g, z, a, b)
    if dist_to_vertical_axis(z) < 2.0 + R:
        raise utils.HypothesisRejected("d(z, A) < 2 + R")
    nu = sampler.draw('nu')
    if not nu < index(g, z):
        raise utils.HypothesisRejected("ind(z) <= nu")
    measured = min(dist(z, a), dist(z, b))
    inputs = {'g': g.to_spec(), 'z': list(z), 'a': list(a), 'b': list(b), 'nu': nu, 'R': R}
    return [Check.upper('lemma5', inputs, math.log(measured), bounds.C_plus(R, nu).log_value,
                        log_scale=True)]

@utils.add_suite('cor5', 'parabolic alternative / hyperbolic alternative')
def cor5(sampler, cfg):
    """Either min{d(x, a), d(x, b)} < C₊(R, μ) or l(h) > C₋(R, μ)."""
    h = sampler.element()
    mu = cfg.mu
    x = sampler.point()
    m = min_index(ElementaryGroup.cyclic(h), x)
    if not m > 2.0 * mu:
        raise utils.HypothesisRejected("Ir(x) = %s is not above mu" % (m / 2.0))
    a, b = _near_segment(sampler, x)
    R = _padded_R(h, x, a, b)
    inputs = {'h': h.to_spec(), 'x': list(x), 'a': list(a), 'b': list(b), 'mu': mu, 'R': R}

    near = Check.upper('parabolic', inputs, math.log(min(dist(x, a), dist(x, b))),
                       bounds.C_plus(R, mu).log_value, strict=True, log_scale=True)
    l = translation_length(h)
    far = Check.lower('hyperbolic', inputs, math.log(l) if l > 0 else -math.inf,
                      bounds.C_minus(R, mu).log_value, strict=True, log_scale=True)
    return [Check.either('cor5', inputs, [near, far], kind=h.kind, parabolic=near.ok, hyperbolic=far.ok)]

@cor5.finalizer
def cor5_summary(checks, cfg):
    parabolic = sum(1 for c in checks if c.info.get('parabolic'))
    hyperbolic = sum(1 for c in checks if c.info.get('hyperbolic'))
    notes = {'parabolic_alternative': parabolic, 'hyperbolic_alternative': hyperbolic}
    extra = []
    # Only the mixed family draws both kinds of element.
    if cfg.family == 'mixed' and len(checks) >= 100:
        inputs = {'family': cfg.family, 'trials': len(checks)}
        extra.append(Check.lower('both_alternatives_seen', inputs, min(parabolic, hyperbolic), 1))
    return extra, notes
