"""
utils.py - hyp4tubes utilities module.

This module contains the exception hierarchy, the suite registration decorators, and small numeric
helpers shared by the geometry modules.
"""

import importlib
import json
import math
import os

from scipy import optimize

# Load the suites package.
from hyp4tubes import suites

from . import conf, world
from .log import log

__all__ = ['SUITE_PREFIX', 'GeometryError', 'EllipticIsometryError', 'EmptyConeError',
           'NonHyperbolicElementError', 'TruncationError', 'DegenerateIntersectionError',
           'HypothesisRejected', 'SamplingStarvationError', 'UnknownSuiteError',
           'UnknownFormulaError', 'InvalidSpecError', 'BoundOverflowError', 'Suite',
           'add_suite', 'expand_path', 'parse_vector', 'parse_assignments', 'load_spec',
           'arccosh_clamped', 'minimize_on_interval', 'bracket_root']


SUITE_PREFIX = suites.__name__ + '.'

class GeometryError(ValueError):
    """
    Exception raised when a geometric object is invalid or degenerate (points on the boundary,
    coincident segment endpoints, inputs on an axis, isometries outside normal position).
    """

class EllipticIsometryError(GeometryError):
    """
    Exception raised when an elliptic (or trivial) element is offered where a nonelliptic one is required.
    """

class EmptyConeError(GeometryError):
    """
    Exception raised when a Margulis cone is empty, or a projection ray never meets it.
    """

class NonHyperbolicElementError(GeometryError):
    """
    Exception raised when a Moebius transformation with |trace| <= 2 is given a translation length.
    """

class TruncationError(RuntimeError):
    """
    Exception raised when the orbit enumeration window needed for a query exceeds the group's truncation.
    """

class DegenerateIntersectionError(ArithmeticError):
    """
    Exception raised when an intersection root is not transversal (Jacobian below threshold).
    """
    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root

class HypothesisRejected(Exception):
    """
    Exception raised by a suite trial when the sampled configuration does not satisfy the
    hypotheses of the result under test. The trial is redrawn, never scored.
    """

class SamplingStarvationError(RuntimeError):
    """
    Exception raised when rejection sampling exhausts its attempts. counts holds the number of
    (rejected, truncated, degenerate) attempts.
    """
    def __init__(self, message, counts=(0, 0, 0)):
        super().__init__(message)
        self.counts = tuple(counts)

class UnknownSuiteError(KeyError):
    """
    Exception raised when a suite name is not registered.
    """

class UnknownFormulaError(KeyError):
    """
    Exception raised when a bound formula id is not registered.
    """

class InvalidSpecError(ValueError):
    """
    Exception raised when a group, film or plane SPEC (JSON) is malformed.
    """

class BoundOverflowError(OverflowError):
    """
    Exception raised when a bound's natural value overflows and log-space output wasn't requested.
    """

class Suite():
    """
    A registered verification suite.

    Monte-Carlo suites provide trial(sampler, cfg) returning a list of Checks; sweep suites provide
    sweep(cfg) returning the checks of a deterministic grid. finalize(checks, cfg), if given,
    returns (extra_checks, notes) computed over the whole run.
    """
    def __init__(self, suite_id, anchor, func, sweep=False, finalize=None, max_trials=None):
        self.suite_id = suite_id
        self.anchor = anchor
        self.func = func
        self.sweep = sweep
        self.finalize = finalize
        self.max_trials = max_trials

    def __repr__(self):
        return '<Suite %s (%s)>' % (self.suite_id, 'sweep' if self.sweep else 'monte-carlo')

def add_suite(suite_id, anchor, sweep=False, max_trials=None):
    """
    Registers a verification suite under the given id.

    The decorated function is a trial function (or a sweep function if sweep=True). A finalizer
    can be attached afterwards with @<function>.finalizer.
    max_trials caps the trial count of expensive suites whatever the configuration asks for.
    """
    def decorator(func):
        if suite_id in world.suites:
            log.warning('Suite %r is being registered twice; the newer definition wins.', suite_id)
        suite = Suite(suite_id, anchor, func, sweep=sweep, max_trials=max_trials)
        world.suites[suite_id] = suite

        def finalizer(fin):
            suite.finalize = fin
            return fin
        func.finalizer = finalizer
        func.suite = suite
        return func
    return decorator

def expand_path(path):
    """
    Returns a path expanded with environment variables and home folders (~) expanded, in that order."""
    return os.path.expanduser(os.path.expandvars(path))

def _load_suite_module(name):
    """
    Imports and returns the requested suite module.
    """
    return importlib.import_module(SUITE_PREFIX + name)

def parse_vector(text, length=None):
    """
    Parses a comma-separated list of numbers, e.g. "0,0,0,1".
    """
    try:
        values = tuple(float(part) for part in text.split(','))
    except (AttributeError, ValueError):
        raise InvalidSpecError("Invalid vector %r: expected comma-separated numbers" % (text,))
    if length is not None and len(values) != length:
        raise InvalidSpecError("Invalid vector %r: expected %s components, got %s" % (text, length, len(values)))
    return values

def parse_assignments(pairs):
    """
    Parses a list of "name=value" strings into a dict of numbers. Integers stay integers.
    """
    result = {}
    for pair in pairs:
        name, sep, value = pair.partition('=')
        if not sep or not name:
            raise InvalidSpecError("Invalid input %r: expected name=value" % pair)
        try:
            result[name] = int(value)
        except ValueError:
            try:
                result[name] = float(value)
            except ValueError:
                raise InvalidSpecError("Invalid value for %r: %r is not a number" % (name, value))
    return result

def load_spec(text):
    """
    Loads a JSON SPEC given either inline or as a path to a file.
    """
    try:
        if os.path.exists(expand_path(text)):
            with open(expand_path(text)) as f:
                return json.load(f)
        return json.loads(text)
    except (OSError, ValueError) as e:
        raise InvalidSpecError("Could not read SPEC %r: %s: %s" % (text, type(e).__name__, e))

def arccosh_clamped(value):
    """arccosh with the argument clamped to >= 1 to absorb roundoff."""
    return math.acosh(max(value, 1.0))

def minimize_on_interval(func, lo, hi):
    """
    Minimizes a unimodal function on [lo, hi], returning (argmin, minimum).

    Uses bounded Brent/golden-section search; the endpoints are compared explicitly since the
    bounded search never evaluates them.
    """
    result = optimize.minimize_scalar(func, bounds=(lo, hi), method='bounded',
                                      options={'xatol': conf.numeric('ternary_tol'),
                                               'maxiter': int(conf.numeric('ternary_maxiter'))})
    best = (result.x, result.fun)
    for endpoint in (lo, hi):
        value = func(endpoint)
        if value < best[1]:
            best = (endpoint, value)
    return best

def bracket_root(func, lo, hi, grow=2.0, max_expansions=64, xtol=None):
    """
    Finds the crossing of a function that is <= 0 at lo and becomes positive further out.

    hi is pushed outwards (hi = lo + grow * (hi - lo)) until func(hi) > 0, then the crossing is
    located by Brent's bracketing bisection, to bisect_xtol unless xtol is given. Raises
    ValueError when no sign change is found.
    """
    flo = func(lo)
    if flo > 0:
        raise ValueError("function is already positive at the start of the bracket")
    if flo == 0:
        return lo
    fhi = func(hi)
    expansions = 0
    while fhi <= 0:
        if expansions >= max_expansions:
            raise ValueError("no sign change found after %s expansions" % max_expansions)
        lo, hi = hi, lo + grow * (hi - lo)
        fhi = func(hi)
        expansions += 1
    if xtol is None:
        xtol = conf.numeric('bisect_xtol')
    return optimize.brentq(func, lo, hi, xtol=xtol,
                           maxiter=int(conf.numeric('bisect_maxiter')))
