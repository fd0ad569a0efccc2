"""
conf.py - hyp4tubes configuration core.

This module is used to access the configuration of the current hyp4tubes run.
It provides simple checks for validating and loading YAML-format configurations from arbitrary files.
"""

try:
    import yaml
except ImportError:
    raise ImportError("hyp4tubes requires PyYAML to function; please install it and try again.")

import copy
import logging
import math
import os.path
import sys

from . import world

__all__ = ['ConfigurationError', 'conf', 'confname', 'validate', 'load_conf',
           'numeric', 'tolerance', 'reset']


class ConfigurationError(RuntimeError):
    """Error when config conditions aren't met."""

DEFAULTS = {
    'hyp4tubes':
        {
            # The Margulis constant is an input; no claim of validity is attached to the default.
            'margulis_constant': 0.1,
            'nu': 0.5,
            'exp3_reading': 'triple_arg',
            'x4_floor': 1e-300,
        },
    'verify':
        {
            'trials': 1000,
            'seed': 42,
            'workers': 1,
            'max_attempts': 200,
            'family': 'mixed',
            'suites': [],
            'max_pq': 12,
            # Reports go to <report_dir>/<report_file> unless verify --json names a path.
            'report_dir': '',
            'report_file': 'hyp4tubes-reports.json',
            'ranges':
                {
                    'height': [0.1, 10.0],
                    'offset': [-5.0, 5.0],
                    'log_lambda': [0.0, 2.0],
                    'theta': [0.0, math.pi],
                    'nu': [0.05, 1.0],
                    'radius': [0.1, 3.0],
                    'translation': [0.5, 5.0],
                    'short_log_lambda': [0.001, 0.1],
                },
        },
    'tolerances':
        {
            'boundary_residual': 1e-8,
            'mesh_residual': 1e-6,
            'seam': 1e-12,
            'commutator_trace': 1e-9,
            'isometry': 1e-10,
            'general_position': 1e-6,
            'audit': 1e-9,
        },
    'numerics':
        {
            'ternary_tol': 1e-12,
            'ternary_maxiter': 200,
            'bisect_xtol': 1e-10,
            'bisect_maxiter': 200,
            'newton_seeds': 32,
            'newton_maxiter': 50,
            'newton_tol': 1e-11,
            'jacobian_threshold': 1e-7,
            'dedup_radius': 1e-6,
        },
    'logging':
        {
            'console': 'INFO'
        },
}

conf = copy.deepcopy(DEFAULTS)
confname = 'unconfigured'

def validate(condition, errmsg):
    """Raises ConfigurationError with errmsg unless the given condition is met."""
    if not condition:
        raise ConfigurationError(errmsg)

def _log(level, text, *args, logger=None, **kwargs):
    if logger:
        logger.log(level, text, *args, **kwargs)
    else:
        world._log_queue.append((level, text % args if args else text))

def _merge_defaults(target, defaults):
    """Fills in missing keys of target from defaults, recursing into nested dicts."""
    for key, value in defaults.items():
        if key not in target:
            target[key] = copy.deepcopy(value)
        elif isinstance(value, dict) and isinstance(target[key], dict):
            _merge_defaults(target[key], value)
    return target

def _validate_conf(conf, logger=None):
    """Validates a parsed configuration dict."""
    if conf is None:  # empty file
        conf = {}
    validate(isinstance(conf, dict),
            "Invalid configuration given: should be type dict, not %s."
            % type(conf).__name__)

    for section in conf:
        if section not in DEFAULTS:
            _log(logging.WARNING, "Ignoring unknown configuration section %r.", section, logger=logger)
        else:
            validate(isinstance(conf[section], dict),
                     "Section %r should be a mapping, not %s." % (section, type(conf[section]).__name__))

    conf = _merge_defaults(conf, DEFAULTS)

    core = conf['hyp4tubes']
    validate(core['exp3_reading'] in world.exp3_readings,
             "hyp4tubes:exp3_reading must be one of %s, not %r" % (', '.join(world.exp3_readings), core['exp3_reading']))
    for key in ('margulis_constant', 'nu', 'x4_floor'):
        validate(isinstance(core[key], (int, float)) and core[key] > 0,
                 "hyp4tubes:%s must be a positive number (got %r)" % (key, core[key]))

    verify = conf['verify']
    validate(isinstance(verify['trials'], int) and verify['trials'] >= 1,
             "verify:trials must be an integer >= 1 (got %r)" % verify['trials'])
    validate(isinstance(verify['seed'], int) and 0 <= verify['seed'] < 2**64,
             "verify:seed must be a 64-bit unsigned integer (got %r)" % verify['seed'])
    validate(isinstance(verify['workers'], int) and verify['workers'] >= 1,
             "verify:workers must be an integer >= 1 (got %r)" % verify['workers'])
    validate(isinstance(verify['max_attempts'], int) and verify['max_attempts'] >= 1,
             "verify:max_attempts must be an integer >= 1 (got %r)" % verify['max_attempts'])
    validate(verify['family'] in ('mixed', 'loxodromic', 'parabolic', 'translation'),
             "verify:family must be one of mixed, loxodromic, parabolic, translation (got %r)" % verify['family'])
    validate(isinstance(verify['suites'], list), "verify:suites must be a list of suite names")
    validate(isinstance(verify['max_pq'], int) and verify['max_pq'] >= 1,
             "verify:max_pq must be an integer >= 1 (got %r)" % verify['max_pq'])

    for name, pair in verify['ranges'].items():
        validate(isinstance(pair, (list, tuple)) and len(pair) == 2,
                 "verify:ranges:%s must be a [low, high] pair (got %r)" % (name, pair))
        validate(pair[0] < pair[1], "verify:ranges:%s has low >= high (%r)" % (name, pair))
    for name in ('height', 'nu', 'radius', 'translation', 'short_log_lambda'):
        validate(verify['ranges'][name][0] > 0, "verify:ranges:%s must be positive" % name)

    for section in ('tolerances', 'numerics'):
        for name, value in conf[section].items():
            validate(isinstance(value, (int, float)) and value > 0,
                     "%s:%s must be positive (got %r)" % (section, name, value))

    if conf['logging'].get('stdout'):
        _log(logging.WARNING, 'The logging:stdout option is not supported; use logging:console instead.',
             logger=logger)

    return conf

def load_conf(filename, errors_fatal=True, logger=None):
    """Loads a hyp4tubes configuration file from the filename given."""
    global confname, conf, fname
    fname = filename
    # For the internal config name, strip off any .yml extensions and absolute paths
    confname = os.path.splitext(os.path.basename(filename))[0]
    try:
        with open(filename, 'r') as f:
            loaded = _validate_conf(yaml.safe_load(f), logger=logger)
    except Exception as e:
        e = 'Failed to load config from %r: %s: %s' % (filename, type(e).__name__, e)

        if logger:  # Prefer using the Python logger when available
            logger.error(e)
        else:  # Otherwise, fall back to a print() call.
            print('ERROR: %s' % e, file=sys.stderr)

        if errors_fatal:
            sys.exit(2)

        raise ConfigurationError(e)
    else:
        conf = loaded
        return conf

def reset():
    """Restores the built-in defaults (used by tests and by runs without a config file)."""
    global conf, confname
    conf = copy.deepcopy(DEFAULTS)
    confname = 'unconfigured'
    return conf

def numeric(name):
    """Returns the solver parameter with the given name from the numerics: block."""
    return conf['numerics'][name]

def tolerance(name):
    """Returns the named tolerance from the tolerances: block."""
    return conf['tolerances'][name]
