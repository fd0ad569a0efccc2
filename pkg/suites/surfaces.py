"""
surfaces.py: Deterministic sweeps in the hyperbolic plane (hypercycle chords and simple closed
curves on the once-punctured torus).
"""
import math

import numpy as np

from hyp4tubes import bounds, conf, utils
from hyp4tubes.structures import Check
from hyp4tubes.surface2d import (PUNCTURED_TORUS, PointH2, cyclic_orbit_count_h2, hypercycle_arc_length,
                                 hypercycle_chord, lemma11_checks, pq_intersection, pq_word, prop6_formula,
                                 primitive_classes, trace_length, word_matrix)

PROP6_GRID = 100
# Ratio just above 1, where the chord and the arc length agree to third order.
NEAR_ONE = 1.0 + 1e-4

@utils.add_suite('prop6', '2 sinh(d(z₁, z)/2)', sweep=True)
def prop6(cfg):
    """
    On the grid t ∈ [0, 5] × r ∈ [1, 100]: the hypercycle arc length log(r)·cosh t never exceeds
    the chord 2 sinh(d/2), which matches its closed form (r − 1)·cosh t/√r.
    """
    tol = conf.tolerance('audit')
    checks = []
    for t in np.linspace(0.0, 5.0, PROP6_GRID):
        t = float(t)
        for r in np.linspace(1.0, 100.0, PROP6_GRID):
            r = float(r)
            inputs = {'t': t, 'r': r}
            chord = hypercycle_chord(t, r)
            formula = prop6_formula(t, r)
            checks.append(Check.lower('prop6', inputs, chord, hypercycle_arc_length(t, r)))
            checks.append(Check.upper('prop6_formula', inputs, abs(chord - formula) / (1.0 + formula), tol))
        chord = hypercycle_chord(t, NEAR_ONE)
        checks.append(Check.upper('prop6_near_one', {'t': t, 'r': NEAR_ONE},
                                  chord - hypercycle_arc_length(t, NEAR_ONE), 1e-6 * (1.0 + chord)))
    return checks

def _classes(cfg, A, B):
    curves = [pq_word(p, q) for p, q in primitive_classes(cfg.max_pq)]
    return curves, [trace_length(word_matrix(c.word, A, B)) for c in curves]

@utils.add_suite('lemma11', 'exp(l₁ + l₂ + 1)', sweep=True)
def lemma11(cfg):
    """
    Exhaustive sweep of the primitive classes of the punctured torus A = [[1, 1], [1, 2]],
    B = [[1, −1], [−1, 2]] up to max_pq.
    """
    A, B = PUNCTURED_TORUS
    checks = list(lemma11_checks(A, B, cfg.max_pq))

    # sinh(l/2) = √((tr/2)² − 1) = √1.25 for both generators.
    product = math.sinh(trace_length(A) / 2.0) * math.sinh(trace_length(B) / 2.0)
    checks.append(Check.upper('generator_sinh_product', {'A': A.matrix.tolist(), 'B': B.matrix.tolist()},
                              abs(product - 1.25), 1e-12, product=product))

    i = PointH2(0.0, 1.0)
    curves, lengths = _classes(cfg, A, B)
    for c, l in zip(curves, lengths):
        count = cyclic_orbit_count_h2(word_matrix(c.word, A, B), i, 4.0 * l)
        checks.append(Check.upper('orbit_count', {'class': [c.p, c.q], 'l': l}, math.log(count),
                                  2.0 * l + 1.0, log_scale=True, count=count))
    return checks

@lemma11.finalizer
def lemma11_summary(checks, cfg):
    pairs = [c for c in checks if c.label == 'lemma11']
    return [], {'class_pairs': len(pairs),
                'intersecting_pairs': sum(1 for c in pairs if c.info['count'] > 0)}

@utils.add_suite('curve_bound', '2e^{l(β)}(π/2 + l(α))', sweep=True)
def curve_bound(cfg):
    """Intersecting simple closed curves α, β meet at most K(l(α), l(β)) times."""
    A, B = PUNCTURED_TORUS
    curves, lengths = _classes(cfg, A, B)
    checks = []
    for i, (c1, l1) in enumerate(zip(curves, lengths)):
        for c2, l2 in zip(curves[i + 1:], lengths[i + 1:]):
            count = pq_intersection(c1, c2)
            if not count:
                continue
            inputs = {'class1': [c1.p, c1.q], 'class2': [c2.p, c2.q], 'l1': l1, 'l2': l2}
            checks.append(Check.upper('curve_bound', inputs, math.log(count),
                                      bounds.curve_bound_K(l1, l2).log_value, log_scale=True, count=count))
    return checks
