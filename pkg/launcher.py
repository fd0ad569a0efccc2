#!/usr/bin/env python3
"""
hyp4tubes launcher.
"""

import argparse
import json
import sys

from hyp4tubes import __version__, conf, real_version, world

args = None

# Exit codes
EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

def _print_json(data):
    from hyp4tubes.structures import jsonable
    print(json.dumps(jsonable(data), indent=4, sort_keys=True))

def _verify(args):
    from hyp4tubes import verify
    from hyp4tubes.log import log
    from hyp4tubes.structures import JSONReportStore

    overrides = {key: getattr(args, key) for key in ('trials', 'seed', 'mu', 'nu', 'family', 'workers')}
    reports = verify.run_suites(args.suites, **overrides)

    if args.json:
        store = JSONReportStore('reports', args.json, data_dir='')
    elif world.testing:
        store = None
    else:
        store = JSONReportStore('reports', conf.conf['verify']['report_file'])
    if store is not None:
        for report in reports:
            store.put(report)
        store.save()

    for report in reports:
        print('%-14s %s  trials=%-6s checks=%-7s violations=%-4s worst_margin=%s'
              % (report.suite_id, 'PASS' if report.passed else 'FAIL', report.trials, report.checks,
                 len(report.violations), report.worst_margin))
    failed = [report.suite_id for report in reports if not report.passed]
    if failed:
        log.error('Verification failed for: %s', ', '.join(failed))
        return EXIT_VIOLATION
    return EXIT_PASS

def _bounds(args):
    from hyp4tubes import bounds, utils

    result = bounds.evaluate(args.formula_id, **utils.parse_assignments(args.inputs))
    if isinstance(result, bool):
        _print_json({'formula_id': args.formula_id, 'value': result})
    elif args.log_space:
        _print_json(dict(result.to_dict(), log10_value=result.log10_value))
    else:
        _print_json({'formula_id': result.formula_id, 'inputs': result.inputs, 'value': result.natural()})
    return EXIT_PASS

def _orbit(args):
    from hyp4tubes import bounds, utils
    from hyp4tubes.geometry import Point4
    from hyp4tubes.margulis import ElementaryGroup, min_index, orbit_count, overlap_count

    G = ElementaryGroup.from_spec(utils.load_spec(args.group))
    x = Point4(*utils.parse_vector(args.center, 4))
    nu = args.nu if args.nu is not None else conf.conf['hyp4tubes']['nu']
    r = args.radius
    _print_json({'group': G.kind, 'center': list(x), 'radius': r, 'nu': nu, 'min_index': min_index(G, x),
                 'count': orbit_count(G, x, r), 'lemma1_bound': bounds.lemma1_count_bound(r, nu).to_dict(),
                 'overlap_count': overlap_count(G, x, r),
                 'lemma2_bound': bounds.lemma2_count_bound(r, nu).to_dict()})
    return EXIT_PASS

def _cone_mesh(args):
    from hyp4tubes import export, utils
    from hyp4tubes.margulis import ElementaryGroup, MargulisCone, cone_boundary_mesh

    G = ElementaryGroup.from_spec(utils.load_spec(args.group))
    nu = args.nu if args.nu is not None else conf.conf['hyp4tubes']['nu']
    mesh = cone_boundary_mesh(MargulisCone(G, nu), args.res)
    export.write_obj(mesh, args.out)
    if args.csv:
        export.write_mesh_csv(mesh, args.csv)
    _print_json({'vertices': len(mesh), 'quads': len(mesh.quads), 'max_residual': mesh.max_residual,
                 'out': args.out})
    return EXIT_PASS

def _film_count(args):
    from hyp4tubes import export, utils
    from hyp4tubes.films import RuledFilm, count_film_film_intersections, count_film_plane_intersections
    from hyp4tubes.geometry import GeodesicPlane2, Point4
    from hyp4tubes.margulis import ElementaryGroup

    spec = utils.load_spec(args.spec)
    if not isinstance(spec, dict):
        raise utils.InvalidSpecError("Film-count SPEC must be a JSON object")
    try:
        if 'plane' in spec:
            F = RuledFilm.from_spec(spec['film'])
            P = GeodesicPlane2.through_points(*(Point4(*p) for p in spec['plane']['points']))
            mode, result = 'film-plane', count_film_plane_intersections(F, P)
        else:
            F1 = RuledFilm.from_spec(spec['film1'])
            F2 = RuledFilm.from_spec(spec['film2'])
            G = ElementaryGroup.from_spec(spec['group']) if 'group' in spec else ElementaryGroup.cyclic(F1.T)
            mode, result = 'film-film', count_film_film_intersections(F1, F2, G)
    except (KeyError, TypeError) as e:
        raise utils.InvalidSpecError("Film-count SPEC needs film and plane.points, or film1 and film2: %r" % e)

    if args.roots_csv:
        export.write_roots_csv(result.roots, args.roots_csv)
    _print_json({'mode': mode, 'count': result.count, 'roots': result.unsigned, 'candidates': result.candidates})
    return EXIT_PASS

COMMANDS = {'verify': _verify, 'bounds': _bounds, 'orbit': _orbit, 'cone-mesh': _cone_mesh,
            'film-count': _film_count}

def _build_parser():
    parser = argparse.ArgumentParser(prog='hyp4tubes',
                                     description='Verifies the quantitative lemmas of thin tubes in hyperbolic 4-manifolds.')
    parser.add_argument("-v", "--version", help="displays the program version and exits", action='store_true')
    parser.add_argument("-c", "--config", help="specifies the path to a YAML config file (defaults are used otherwise)")
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('verify', help='runs verification suites')
    p.add_argument('suites', nargs='+', help="suite ids, or 'all'")
    p.add_argument('--trials', type=int, help='trials per Monte-Carlo suite')
    p.add_argument('--seed', type=int, help='base seed of the random streams')
    p.add_argument('--mu', type=float, help='Margulis constant')
    p.add_argument('--nu', type=float, help='cone level')
    p.add_argument('--family', help='group family: mixed, loxodromic, parabolic or translation')
    p.add_argument('--workers', type=int, help='threads running trials concurrently')
    p.add_argument('--json', help='writes the reports to this path')

    p = sub.add_parser('bounds', help='evaluates a bound formula')
    p.add_argument('formula_id')
    p.add_argument('--in', dest='inputs', nargs='*', default=[], metavar='NAME=VALUE', help='formula inputs')
    p.add_argument('--log-space', help='prints the logarithm alongside the value', action='store_true')

    p = sub.add_parser('orbit', help='counts orbit points in a ball against the counting bounds')
    p.add_argument('--group', required=True, help='group SPEC (JSON text or path)')
    p.add_argument('--center', required=True, help='x1,x2,x3,x4')
    p.add_argument('--radius', required=True, type=float)
    p.add_argument('--nu', type=float, help='level used by the bounds (defaults to hyp4tubes:nu)')

    p = sub.add_parser('cone-mesh', help='exports a mesh of a cone boundary')
    p.add_argument('--group', required=True, help='group SPEC (JSON text or path)')
    p.add_argument('--nu', type=float, help='cone level (defaults to hyp4tubes:nu)')
    p.add_argument('--res', type=int, default=32, help='grid resolution')
    p.add_argument('--out', required=True, help='OBJ output path')
    p.add_argument('--csv', help='also writes the vertices as CSV')

    p = sub.add_parser('film-count', help='counts film-plane or film-film intersections')
    p.add_argument('--spec', required=True, help='film-count SPEC (JSON text or path)')
    p.add_argument('--roots-csv', help='writes the roots as CSV')
    return parser

def main(argv=None):
    global args

    from hyp4tubes import utils
    from hyp4tubes.log import log, reload_handlers

    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.version:  # Display version and exit
        print('hyp4tubes %s (in VCS: %s)' % (__version__, real_version))
        return EXIT_PASS
    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    try:
        if args.config:
            conf.load_conf(args.config, errors_fatal=False, logger=log)
            reload_handlers()
        return COMMANDS[args.command](args)
    except conf.ConfigurationError as e:
        log.error('Configuration error: %s', e)
    except (utils.UnknownSuiteError, utils.UnknownFormulaError) as e:
        log.error('%s', e.args[0] if e.args else e)
    except (utils.InvalidSpecError, utils.BoundOverflowError) as e:
        log.error('%s', e)
    except (utils.GeometryError, utils.TruncationError, utils.DegenerateIntersectionError, ValueError) as e:
        log.error('%s: %s', type(e).__name__, e)
    return EXIT_ERROR

if __name__ == '__main__':
    sys.exit(main())
