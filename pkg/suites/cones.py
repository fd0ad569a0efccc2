"""
cones.py: Suites for displacement formulas, Margulis cone boundaries and the projection onto them.
"""
import math

import numpy as np

from hyp4tubes import bounds, conf, utils
from hyp4tubes.geometry import Point4, dist, dist_to_vertical_axis
from hyp4tubes.isometry import _orthogonal_to, index, displacement_audit, translation_length
from hyp4tubes.margulis import (ElementaryGroup, MargulisCone, _loxodromic_ray, boundary_residual,
                                cone_contains, project_phi)
from hyp4tubes.structures import Check

# Samples along a projection line when checking that the cone is star-like.
LINE_SAMPLES = 33

@utils.add_suite('displacement', '2 sinh²(d/2) = (2R²(1 − cos θ) + λ²)/x₄²')
def displacement(sampler, cfg):
    """
    Audits the printed displacement formulas against the model: |gx − x|² splits into rotational
    and translational parts exactly for parabolics; 2 sinh²(d/2) agrees with cosh d − 1.
    """
    g = sampler.element()
    x = sampler.point()
    p = sampler.point()
    tol = conf.tolerance('audit')
    audit = displacement_audit(g, x)
    d = index(g, x)
    inputs = {'g': g.to_spec(), 'x': list(x)}

    two_sinh_sq = 2.0 * math.sinh(d / 2.0) ** 2
    checks = [Check.upper('two_sinh_sq', inputs, abs(audit.direct_two_sinh_sq - two_sinh_sq) / (1.0 + two_sinh_sq),
                          tol, kind=g.kind, ratio=audit.ratio, discrepancy=audit.euclidean_discrepancy)]
    if g.kind == 'parabolic':
        checks.append(Check.upper('euclidean_split', inputs, audit.euclidean_discrepancy, tol))

    d_xp = dist(x, p)
    moved = abs(dist(g.apply(x), g.apply(p)) - d_xp)
    checks.append(Check.upper('invariance', dict(inputs, p=list(p)), moved,
                              conf.tolerance('isometry') * (1.0 + d_xp)))
    l = translation_length(g)
    checks.append(Check.lower('translation_length', inputs, d, l - 1e-12 * (1.0 + l)))
    return checks

@displacement.finalizer
def displacement_summary(checks, cfg):
    audits = [c for c in checks if c.label == 'two_sinh_sq']
    parabolic = [c.info['ratio'] for c in audits if c.info['kind'] == 'parabolic' and not math.isnan(c.info['ratio'])]
    loxodromic = [c.info['discrepancy'] for c in audits if c.info['kind'] == 'loxodromic']
    notes = {}
    extra = []
    if parabolic:
        lo, hi = min(parabolic), max(parabolic)
        notes['parabolic_ratio'] = {'min': lo, 'max': hi}
        # The printed form differs from the direct one by a constant factor convention.
        extra.append(Check.upper('parabolic_ratio_spread', {'samples': len(parabolic)}, hi - lo,
                                 conf.tolerance('audit') * max(1.0, abs(hi))))
    if loxodromic:
        notes['loxodromic_euclidean_discrepancy'] = {'min': min(loxodromic), 'max': max(loxodromic),
                                                     'mean': float(np.mean(loxodromic))}
    return extra, notes


def _cone(sampler, level=None):
    G = sampler.group()
    K = MargulisCone(G, level if level is not None else sampler.draw('nu'))
    if K.is_empty:
        raise utils.HypothesisRejected("cone of level %s is empty" % K.nu)
    return K

def _projection_line(K, a, p):
    """Points on the projection line through a, spread on both sides of its boundary point p."""
    if K.group.kind == 'loxodromic':
        point = _loxodromic_ray(a)
        # Signed distance of p from the axis along the ray.
        rho = dist_to_vertical_axis(p)
        return [point(r) for r in np.linspace(0.0, 3.0 * rho + 1.0, LINE_SAMPLES)]
    heights = p.x4 * np.geomspace(0.05, 20.0, LINE_SAMPLES)
    return [Point4(a.x1, a.x2, a.x3, h) for h in heights]

@utils.add_suite('lemma6', 'is well-defined')
def lemma6(sampler, cfg):
    """The projection onto the cone boundary lands on the boundary and the cone is star-like."""
    K = _cone(sampler)
    a = sampler.point()
    if K.group.kind == 'loxodromic' and np.linalg.norm(a.horizontal) <= 1e-6 * a.x4:
        raise utils.HypothesisRejected("a lies on the axis")
    p = project_phi(K, a)
    inputs = {'group': K.group.kind, 'rank': K.group.rank, 'nu': K.nu, 'a': list(a), 'phi': list(p)}
    checks = [Check.upper('boundary_residual', inputs, boundary_residual(K, p),
                          conf.tolerance('boundary_residual'))]

    inside = [cone_contains(K, q) for q in _projection_line(K, a, p) if q is not None]
    changes = sum(1 for u, v in zip(inside, inside[1:]) if u != v)
    checks.append(Check.upper('star_like', inputs, changes, 1))

    g = K.group.generators[0]
    if K.group.kind == 'parabolic' and g.theta != 0.0:
        checks.append(_boundary_height_monotone(K, g, inputs))
    return checks

def _boundary_height_monotone(K, g, inputs):
    """Within a fiber, the boundary height over a plane containing the axis grows with R_x."""
    axis = np.asarray(g.axis)
    u, _ = (np.asarray(w) for w in _orthogonal_to(axis))
    scale = float(np.linalg.norm(g.axial_translation))
    heights = []
    for rho in np.linspace(0.0, 3.0 * scale, 17):
        y = g.center + 0.5 * scale * axis + rho * u
        heights.append(project_phi(K, Point4(y[0], y[1], y[2], 1.0)).x4)
    drop = max(max(h0 - h1 for h0, h1 in zip(heights, heights[1:])), 0.0)
    return Check.upper('boundary_monotone', inputs, drop, 1e-9 * max(heights))

@utils.add_suite('prop7', '1 + R/2 − ν/2')
def prop7(sampler, cfg):
    """
    (i) Either d(a, φ(a)) ≤ C₊(R, ν), or l(g) ≥ C₋(R, ν) with cosh d(a, A) ≤ 2 sinh(R/2)/C₋(R, ν).
    (ii) For parabolic g and a outside the cone, d(a, φ(a)) ≤ log(sinh(R/2)/sinh(ν/2)).

    (ii) is scored against log(sinh(R/2)/sinh(ν/2)), the bound the argument actually yields.
    The printed form 1 + R/2 − ν/2 is smaller for small ν and large R (τ = 5, h = 0.1, ν = 0.05
    gives d ≈ 6.9 against 4.885), so it is only recorded: the printed_bound_exceeded note counts
    the trials outside the cone that exceed it, out of outside_cone_trials.
    """
    g = sampler.element()
    nu = sampler.draw('nu')
    K = MargulisCone(ElementaryGroup.cyclic(g), nu)
    if K.is_empty:
        raise utils.HypothesisRejected("cone of level %s is empty" % nu)
    a = sampler.point()
    if g.kind == 'loxodromic' and np.linalg.norm(a.horizontal) <= 1e-6 * a.x4:
        raise utils.HypothesisRejected("a lies on the axis")
    R = max(index(g, a), nu)
    p = project_phi(K, a)
    d = dist(a, p)
    inputs = {'g': g.to_spec(), 'a': list(a), 'nu': nu, 'R': R, 'phi': list(p)}

    close = Check.upper('close', inputs, math.log(d) if d > 0 else -math.inf,
                        bounds.C_plus(R, nu).log_value, log_scale=True)
    l = translation_length(g)
    c_minus = bounds.C_minus(R, nu)
    if l > 0 and math.log(l) >= c_minus.log_value:
        # log cosh d(a, A) = log(|a|/a₄)
        log_cosh = 0.5 * math.log(float(a.coords @ a.coords)) - math.log(a.x4)
        axial = Check.upper('axial', inputs, log_cosh, bounds.prop7_cosh_bound(R, nu).log_value,
                            log_scale=True)
    else:
        axial = Check.lower('axial', inputs, math.log(l) if l > 0 else -math.inf, c_minus.log_value,
                            log_scale=True)
    checks = [Check.either('prop7_i', inputs, [close, axial])]

    if g.kind == 'parabolic':
        if cone_contains(K, a):
            return checks
        printed = 1.0 + R / 2.0 - nu / 2.0
        # Equality holds when g itself realises the minimal displacement.
        bound = bounds.prop7_proof_bound(R, nu).value
        checks.append(Check.upper('prop7_ii', inputs, d, bound + conf.tolerance('audit') * (1.0 + bound),
                                  printed_exceeded=bool(d > printed)))
    return checks

@prop7.finalizer
def prop7_summary(checks, cfg):
    outside = [c for c in checks if c.label == 'prop7_ii']
    exceeded = sum(1 for c in outside if c.info.get('printed_exceeded'))
    return [], {'outside_cone_trials': len(outside), 'printed_bound_exceeded': exceeded}

@utils.add_suite('lemma9', '4 sinh(μ/2)/C₁(3R + 2, μ)')
def lemma9(sampler, cfg):
    """
    Cone points of a loxodromic with translation length l stay within 2 sinh(μ/2)/l of the axis,
    so pieces of a fiber inside the tube have diameter at most 4 sinh(μ/2)/C₁(3R + 2, μ).
    """
    mu = cfg.mu
    l = mu * sampler.uniform(0.0, 1.0)
    g = sampler.loxodromic(log_lambda=l)
    K = MargulisCone(ElementaryGroup.cyclic(g), mu)
    a, b = (sampler.sphere_point() for _ in range(2))
    pa, pb = project_phi(K, a), project_phi(K, b)
    R = sampler.draw('radius')
    inputs = {'g': g.to_spec(), 'mu': mu, 'l': l, 'R': R, 'phi_a': list(pa), 'phi_b': list(pb)}

    axis_bound = bounds.axis_distance_bound(l, mu).value
    checks = [Check.upper('axis_distance', inputs, max(dist_to_vertical_axis(pa), dist_to_vertical_axis(pb)),
                          axis_bound)]
    if math.log(l) >= bounds.C1(3.0 * R + 2.0, mu).log_value:
        checks.append(Check.upper('lemma9', inputs, dist(pa, pb), bounds.lemma9_bound(R, mu).value))
    return checks
