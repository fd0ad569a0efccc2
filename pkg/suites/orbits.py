"""
orbits.py: Orbit counting suites (ball counts, overlap counts and injectivity radius drift).
"""
import math

from hyp4tubes import bounds, utils
from hyp4tubes.geometry import dist
from hyp4tubes.margulis import min_index, orbit_count, overlap_count
from hyp4tubes.structures import Check


def _thick_configuration(sampler):
    """A group, a level ν and a point whose injectivity radius is at least ν."""
    G = sampler.group()
    nu = sampler.draw('nu')
    x = sampler.point()
    m = min_index(G, x)
    if m < 2.0 * nu:
        raise utils.HypothesisRejected("Ir(x) = %s is below nu = %s" % (m / 2.0, nu))
    return G, nu, x, m

def _count_check(label, inputs, count, bound):
    # Compared in log space: under triple_compose the bound leaves double range.
    return Check.upper(label, inputs, math.log(count), bound.log_value, log_scale=True, count=count)

@utils.add_suite('lemma1', 'contains not more than')
def lemma1(sampler, cfg):
    """Orbit points in B(x, r) never outnumber exp³(r + ν)/ν³."""
    G, nu, x, m = _thick_configuration(sampler)
    r = sampler.draw('radius')
    inputs = {'group': G.kind, 'rank': G.rank, 'x': list(x), 'nu': nu, 'r': r, 'min_index': m}
    return [_count_check('lemma1', inputs, orbit_count(G, x, r), bounds.lemma1_count_bound(r, nu))]

@utils.add_suite('lemma2', 'is non-empty')
def lemma2(sampler, cfg):
    """Elements h with h·B(x, r) ∩ B(x, r) ≠ ∅ never outnumber exp³(2r + ν)/ν³."""
    G, nu, x, m = _thick_configuration(sampler)
    r = sampler.draw('radius')
    inputs = {'group': G.kind, 'rank': G.rank, 'x': list(x), 'nu': nu, 'r': r, 'min_index': m}
    return [_count_check('lemma2', inputs, overlap_count(G, x, r), bounds.lemma2_count_bound(r, nu))]

@utils.add_suite('lemma3', 'Ir_H(y) > C₁(r, ν)/2')
def lemma3(sampler, cfg):
    """With ν = 2 Ir(x) and d(x, y) < r, the injectivity radius at y stays above C₁(r, ν)/2."""
    G = sampler.group()
    x = sampler.point()
    nu = min_index(G, x)
    r = sampler.draw('radius')
    y = sampler.point_near(x, r)
    if not dist(x, y) < r:
        raise utils.HypothesisRejected("d(x, y) rounded up to r")
    ir_y = min_index(G, y) / 2.0
    bound = bounds.C1(r, nu)
    inputs = {'group': G.kind, 'rank': G.rank, 'x': list(x), 'y': list(y), 'nu': nu, 'r': r}
    return [Check.lower('lemma3', inputs, math.log(ir_y), bound.log_value - math.log(2.0),
                        strict=True, log_scale=True)]
