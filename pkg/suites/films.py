"""
films.py: Suites for ruled films: their corner and seam identities, the extended film's gluing,
film-plane counts, and the film-film intersection bounds for tubes.
"""
import math

import numpy as np

from hyp4tubes import bounds, conf, utils
from hyp4tubes.films import (LAMBDA, THETA, ExtendedRuledFilm, RuledFilm, check_general_position,
                             count_film_film_intersections, count_film_plane_intersections, film_in_cone,
                             film_point)
from hyp4tubes.geometry import GeodesicPlane2
from hyp4tubes.isometry import index, power
from hyp4tubes.margulis import ElementaryGroup, MargulisCone, project_phi
from hyp4tubes.structures import Check

# Film points sampled per trial for the cone containment check.
CONE_SAMPLES = 16
# The film-plane count claimed for certified configurations.
MAX_PLANE_HITS = 8
GLUING_TOL = 1e-10

def _gap(p, q):
    """Largest coordinate difference, relative to the size of the points."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    return float(np.max(np.abs(p - q))) / (1.0 + float(np.max(np.abs(p))))

def _certified_film(T, x, z):
    try:
        F = RuledFilm(T, x, z)
    except utils.GeometryError as e:
        raise utils.HypothesisRejected(str(e))
    if not check_general_position(F).certified:
        raise utils.HypothesisRejected("film %s is not in general position" % (F.to_spec(),))
    return F

@utils.add_suite('ruled_films', 'is at most 8')
def ruled_films(sampler, cfg):
    """
    Corner and seam identities of a random certified film, the gluing of its extended film,
    film-plane counts, and containment of the film in the cone at its corner index.
    """
    T = sampler.element()
    x = sampler.point()
    z = sampler.point_near(x, sampler.draw('radius'))
    F = _certified_film(T, x, z)
    inputs = {'film': F.to_spec()}
    seam_tol = conf.tolerance('seam')

    ticks = np.array([sampler.uniform(0.0, 1.0) for _ in range(CONE_SAMPLES)])
    seam = _gap(F.sheet_points(LAMBDA, ticks, np.ones_like(ticks)), F.sheet_points(THETA, ticks, np.zeros_like(ticks)))
    corners = max(_gap(film_point(F, LAMBDA, 0.0, 0.0).coords, x.coords),
                  _gap(film_point(F, THETA, 0.0, 1.0).coords, T.apply(x).coords),
                  _gap(film_point(F, THETA, 1.0, 1.0).coords, T.apply(z).coords))
    checks = [Check.upper('seam', inputs, seam, seam_tol),
              Check.upper('corners', inputs, corners, seam_tol)]

    extended = ExtendedRuledFilm(F)
    checks.append(Check.upper('gluing', inputs, extended.gluing_error(), GLUING_TOL))
    loops = extended.quotient_boundary()
    checks.append(Check.upper('quotient_loops', inputs, abs(len(loops) - 2), 0,
                              loops=[c.label for c in loops]))

    centre, radius = F.bounding_ball
    try:
        P = GeodesicPlane2.through_points(*(sampler.point_near(centre, radius) for _ in range(3)))
    except utils.GeometryError as e:
        raise utils.HypothesisRejected("plane: %s" % e)
    hits = count_film_plane_intersections(F, P)
    checks.append(Check.upper('plane_count', dict(inputs, plane=[list(n) for n in P.normals]),
                              hits.count, MAX_PLANE_HITS, candidates=hits.candidates))

    level = F.corner_index()
    worst = -math.inf
    outside = 0
    for s, t in zip(ticks, ticks[::-1]):
        sheet = sampler.choice(F.sheets)
        p = film_point(F, sheet, float(s), float(t))
        worst = max(worst, index(T, p) - level)
        if not film_in_cone(F, p):
            outside += 1
    checks.append(Check.upper('film_index', dict(inputs, corner_index=level), worst, 1e-9 * (1.0 + level)))
    checks.append(Check.upper('film_in_cone', inputs, outside, 0))
    return checks

@ruled_films.finalizer
def ruled_films_summary(checks, cfg):
    counts = [c.measured for c in checks if c.label == 'plane_count']
    histogram = {}
    for n in counts:
        histogram[str(int(n))] = histogram.get(str(int(n)), 0) + 1
    return [], {'plane_count_histogram': dict(sorted(histogram.items(), key=lambda kv: int(kv[0])))}


def _film_pair(label, g, h, points, G, nu, bound):
    """Counts F1 = S_{g p0 p1} against the translates of F2 = S_{h p2 p3} and checks |count| ≤ bound(C, ν)."""
    a, b, c, d = points
    F1 = _certified_film(g, a, b)
    F2 = _certified_film(h, c, d)
    C = max(index(g, a), index(g, b), index(h, c), index(h, d))
    result = count_film_film_intersections(F1, F2, G)
    inputs = {'film1': F1.to_spec(), 'film2': F2.to_spec(), 'nu': nu, 'C': C}
    return C, result, Check.upper(label, inputs, math.log(abs(result.count)) if result.count else -math.inf,
                                  bound(C, nu).log_value, log_scale=True, count=result.count,
                                  roots=result.unsigned)

@utils.add_suite('thm4', 'N(C, ν) = (exp³(4C + 4))/ν³', max_trials=50)
def thm4(sampler, cfg):
    """
    Films of powers of a short loxodromic q, spanned between points of the boundary of its
    cone, meet the ⟨q⟩-translates of each other at most N(C, ν) times (signed).
    """
    nu = cfg.nu
    theta = sampler.draw('theta') if sampler.rng.random() < 0.5 else 0.0
    q = sampler.loxodromic(log_lambda=sampler.uniform(0.25 * nu, nu), theta=theta)
    G = ElementaryGroup.cyclic(q)
    K = MargulisCone(G, nu)
    points = [project_phi(K, sampler.sphere_point()) for _ in range(4)]
    g = power(q, sampler.integer(1, 2))
    h = power(q, sampler.integer(1, 2))
    C, result, check = _film_pair('thm4', g, h, points, G, nu, bounds.N_theorem4)
    check.info['rotation'] = theta
    if theta == 0.0:
        trivial = bounds.trivial_rotation_count(C, nu).value
        check.info['trivial_count'] = trivial
        check.info['within_trivial_count'] = abs(result.count) <= trivial
    return [check]

@thm4.finalizer
def thm4_summary(checks, cfg):
    trivial = [c for c in checks if 'trivial_count' in c.info]
    return [], {'trivial_rotation_trials': len(trivial),
                'trivial_count_exceeded': sum(1 for c in trivial if not c.info['within_trivial_count'])}

@utils.add_suite('thm5', 'N′(C, ν)', max_trials=50)
def thm5(sampler, cfg):
    """Films of a rank-2 lattice between points of its cone boundary meet at most N′(C, ν) times."""
    nu = cfg.nu
    G = sampler.lattice(2)
    K = MargulisCone(G, nu)
    a = sampler.point()
    points = [project_phi(K, sampler.point_near(a, 1.0)) for _ in range(4)]
    words = [(m, n) for m in (-1, 0, 1) for n in (-1, 0, 1) if (m, n) != (0, 0)]
    g = G.element(sampler.choice(words))
    h = G.element(sampler.choice(words))
    _, _, check = _film_pair('thm5', g, h, points, G, nu, bounds.Nprime_theorem5)
    return [check]

@thm5.finalizer
def thm5_summary(checks, cfg):
    offset = bounds.thm5_boundary_offset(cfg.nu).value
    printed = bounds.thm5_boundary_offset_bound(cfg.nu).value
    return [], {'boundary_offset': {'value': offset, 'printed_bound': printed, 'exceeded': offset > printed}}
