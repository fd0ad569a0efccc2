"""
bounds.py - Closed-form constants and bound functions.

Every evaluator works in log space and returns a BoundValue carrying both the natural value
(inf once it overflows a double) and its logarithm. Predicates return plain booleans. All of
them are registered by id in world.formulas for the command line.

exp³(a) follows the hyp4tubes:exp3_reading option: 'triple_arg' reads it as exp(3a) (the cube of
the exponential), 'triple_compose' as exp(exp(exp(a))).
"""

import functools
import inspect
import math
from dataclasses import dataclass

import numpy as np

from . import conf, world
from .utils import BoundOverflowError, UnknownFormulaError

__all__ = ['BoundValue', 'formula', 'evaluate', 'exp3_log', 'curve_bound_K', 'sinh_product_test',
           'lemma1_count_bound', 'lemma2_count_bound', 'C1', 'k_lemma5', 'C_plus', 'C_minus',
           'lemma4_bound', 'prop4_bound', 'N_theorem4', 'Nprime_theorem5', 'C2', 'C3', 'C4', 'C5',
           'final_intersection_bound', 'link_count_bound', 'appendix_bound', 'milnor_wood_test',
           'theorem2_range_test']

# Largest x with exp(x) finite in double precision.
MAX_LOG = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluated in log space."""
    value: float
    log_value: float
    formula_id: str
    inputs: dict

    @classmethod
    def from_log(cls, log_value, formula_id, inputs):
        log_value = float(log_value)
        if log_value > MAX_LOG:
            value = math.inf
        else:
            value = math.exp(log_value)
        return cls(value, log_value, formula_id, inputs)

    @property
    def overflows(self):
        return math.isinf(self.value)

    def natural(self):
        """The natural value; raises BoundOverflowError when it does not fit in a double."""
        if self.overflows:
            raise BoundOverflowError("%s%r overflows (log value %s); request log-space output"
                                     % (self.formula_id, self.inputs, self.log_value))
        return self.value

    @property
    def log10_value(self):
        return self.log_value / math.log(10.0)

    def __float__(self):
        return self.value

    def to_dict(self):
        return {'formula_id': self.formula_id, 'inputs': self.inputs, 'value': self.value,
                'log_value': self.log_value}


def formula(formula_id):
    """
    Registers a bound evaluator under formula_id. The decorated function returns the natural log
    of the bound (or a bool for predicates); callers receive a BoundValue.
    """
    def decorator(func):
        signature = inspect.signature(func)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            inputs = dict(signature.bind(*args, **kwargs).arguments)
            result = func(*args, **kwargs)
            if isinstance(result, bool):
                return result
            return BoundValue.from_log(result, formula_id, inputs)

        wrapper.formula_id = formula_id
        wrapper.parameters = tuple(signature.parameters)
        world.formulas[formula_id] = wrapper
        return wrapper
    return decorator

def evaluate(formula_id, **inputs):
    """Evaluates a registered formula by id with named inputs."""
    try:
        func = world.formulas[formula_id]
    except KeyError:
        raise UnknownFormulaError("Unknown formula %r; known formulas: %s"
                                  % (formula_id, ', '.join(sorted(world.formulas))))
    missing = set(func.parameters) - set(inputs)
    extra = set(inputs) - set(func.parameters)
    if missing or extra:
        raise ValueError("%s takes inputs %s (missing: %s, unexpected: %s)"
                         % (formula_id, ', '.join(func.parameters), ', '.join(sorted(missing)) or 'none',
                            ', '.join(sorted(extra)) or 'none'))
    return func(**inputs)

def _positive(**values):
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ValueError("%s must be a positive number, got %r" % (name, value))

def _genus(**values):
    for name, value in values.items():
        if not (isinstance(value, int) and not isinstance(value, bool) and value >= 2):
            raise ValueError("%s must be an integer genus >= 2, got %r" % (name, value))

def _logsumexp(*logs):
    return float(functools.reduce(np.logaddexp, logs))

def _log_sinh(x):
    """log sinh(x) for x > 0, without overflow."""
    if x > 20:
        return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x))

def exp3_log(arg):
    """log exp³(arg) under the configured reading."""
    reading = conf.conf['hyp4tubes']['exp3_reading']
    if reading == 'triple_arg':
        return 3.0 * arg
    try:
        return math.exp(math.exp(arg))
    except OverflowError:
        return math.inf


@formula('curve_bound_K')
def curve_bound_K(l1, l2):
    """2e^{l2}(π/2 + l1) + (π/2 + l1)/(l2/2 − log(e^{l2/2} − 1))."""
    _positive(l1=l1, l2=l2)
    a = math.log(math.pi / 2.0 + l1)
    # l2/2 − log(e^{l2/2} − 1) = −log(1 − e^{−l2/2}) > 0
    denominator = -math.log1p(-math.exp(-l2 / 2.0))
    return _logsumexp(math.log(2.0) + l2 + a, a - math.log(denominator))

@formula('sinh_product_test')
def sinh_product_test(l1, l2):
    """Whether sinh(l1/2)·sinh(l2/2) ≥ 1."""
    _positive(l1=l1, l2=l2)
    return bool(math.sinh(l1 / 2.0) * math.sinh(l2 / 2.0) >= 1.0)

@formula('lemma1_count_bound')
def lemma1_count_bound(r, nu):
    """exp³(r + ν)/ν³: orbit points in a ball of radius r around a point with Ir ≥ ν."""
    _positive(r=r, nu=nu)
    return exp3_log(r + nu) - 3.0 * math.log(nu)

@formula('lemma2_count_bound')
def lemma2_count_bound(r, nu):
    """exp³(2r + ν)/ν³: elements h with h·B(x, r) ∩ B(x, r) ≠ ∅."""
    _positive(r=r, nu=nu)
    return exp3_log(2.0 * r + nu) - 3.0 * math.log(nu)

def _log_n(r, nu):
    """log n(r, ν) with n(r, ν) = ⌊exp(18r + 2ν)/ν³⌋ + 1."""
    exponent = 18.0 * r + 2.0 * nu
    log_quotient = exponent - 3.0 * math.log(nu)
    if log_quotient < 36.0:
        # Exact integer part while the quotient stays below 2⁵².
        return math.log(math.floor(math.exp(exponent) / nu ** 3) + 1)
    return log_quotient + math.log1p(math.exp(-log_quotient))

@formula('C1')
def C1(r, nu):
    """C₁(r, ν) = 2r/n(r, ν)."""
    _positive(r=r, nu=nu)
    return math.log(2.0 * r) - _log_n(r, nu)

@formula('k_lemma5')
def k_lemma5(R, nu):
    """k(R, ν) = 2(2 + R)ν³/exp(18(2 + R) + 2ν)."""
    _positive(R=R, nu=nu)
    return math.log(2.0 * (2.0 + R)) + 3.0 * math.log(nu) - 18.0 * (2.0 + R) - 2.0 * nu

@formula('C_plus')
def C_plus(R, mu):
    """C₊(R, μ) = 4R + 6 + 1/k(R, μ)."""
    _positive(R=R, mu=mu)
    return _logsumexp(math.log(4.0 * R + 6.0), -k_lemma5(R, mu).log_value)

@formula('C_minus')
def C_minus(R, mu):
    """C₋(R, μ) = C₁(R + 2, μ)."""
    _positive(R=R, mu=mu)
    return C1(R + 2.0, mu).log_value

@formula('lemma4_bound')
def lemma4_bound(R, nu):
    """R + 1/ν."""
    _positive(R=R, nu=nu)
    return math.log(R + 1.0 / nu)

@formula('prop4_bound')
def prop4_bound(R):
    """2 + R."""
    _positive(R=R)
    return math.log(2.0 + R)

@formula('N_theorem4')
def N_theorem4(C, nu):
    """N(C, ν) = exp³(4C + 4)/ν³."""
    _positive(C=C, nu=nu)
    return exp3_log(4.0 * C + 4.0) - 3.0 * math.log(nu)

@formula('theorem4_const')
def theorem4_const(C):
    """2√(C + 1)."""
    _positive(C=C)
    return math.log(2.0 * math.sqrt(C + 1.0))

@formula('theorem4_cprime')
def theorem4_cprime(C):
    """C′ = √(arcsinh(4 sinh²(C/2)))."""
    _positive(C=C)
    log_arg = math.log(4.0) + 2.0 * _log_sinh(C / 2.0)
    if log_arg > 30.0:
        asinh = log_arg + math.log(2.0)
    else:
        asinh = math.asinh(math.exp(log_arg))
    return 0.5 * math.log(asinh)

@formula('trivial_rotation_count')
def trivial_rotation_count(C, nu):
    """8⌊C/ν⌋ (at least 1, so that the log stays finite)."""
    _positive(C=C, nu=nu)
    return math.log(max(8 * math.floor(C / nu), 1))

@formula('thm5_boundary_offset')
def thm5_boundary_offset(nu):
    """log(sinh(ν/2)/sinh(ν/24)), the offset between the cones of a group and its index-12 subgroup."""
    _positive(nu=nu)
    return math.log(_log_sinh(nu / 2.0) - _log_sinh(nu / 24.0))

@formula('thm5_boundary_offset_bound')
def thm5_boundary_offset_bound(nu):
    """ν/2 + 1."""
    _positive(nu=nu)
    return math.log(nu / 2.0 + 1.0)

@formula('thm5_first_term')
def thm5_first_term(nu):
    """exp(6 + 9ν)/ν³."""
    _positive(nu=nu)
    return 6.0 + 9.0 * nu - 3.0 * math.log(nu)

@formula('thm5_lattice_term')
def thm5_lattice_term(C, nu):
    """96C/ν."""
    _positive(C=C, nu=nu)
    return math.log(96.0 * C / nu)

@formula('thm5_index12_term')
def thm5_index12_term(C, nu):
    """12·10000·exp³(24C)/ν³."""
    _positive(C=C, nu=nu)
    return math.log(12.0 * 10000.0) + exp3_log(24.0 * C) - 3.0 * math.log(nu)

@formula('Nprime_theorem5')
def Nprime_theorem5(C, nu):
    """N′(C, ν) = exp(9ν + 6)/ν³ + 96C/ν + 12·10000·exp³(24C)/ν³."""
    _positive(C=C, nu=nu)
    return _logsumexp(thm5_first_term(nu).log_value, thm5_lattice_term(C, nu).log_value,
                      thm5_index12_term(C, nu).log_value)

@formula('C2')
def C2(mu, g):
    """C₂(μ, g) = (2g − 2)/μ + 6(g − 1) sinh μ, the bound on the thick-part diameter."""
    _positive(mu=mu)
    _genus(g=g)
    return _logsumexp(math.log(2.0 * g - 2.0) - math.log(mu), math.log(6.0 * (g - 1)) + _log_sinh(mu))

@formula('C3')
def C3(mu, g):
    """C₃(μ, g) = C₁(C₂(μ, g), μ)."""
    _positive(mu=mu)
    _genus(g=g)
    return C1(C2(mu, g).value, mu).log_value

def _log_C4(mu, g, nu):
    R = 2.0 * C2(mu, g).value
    return _logsumexp(math.log(4.0 * R + 6.0), -k_lemma5(R, nu).log_value,
                      math.log(4.0) + _log_sinh(mu / 2.0) - C1(3.0 * R + 2.0, mu).log_value)

@formula('C4')
def C4(mu, g, nu):
    """C₄ = 4R + 6 + 1/k(R, ν) + 4 sinh(μ/2)/C₁(3R + 2, μ) with R = 2C₂(μ, g)."""
    _positive(mu=mu, nu=nu)
    _genus(g=g)
    return _log_C4(mu, g, nu)

@formula('C5')
def C5(mu, g, nu):
    """C₅ = max{4R + 6 + 1/C₁(R + 2, ν), C₄} with R = 2C₂(μ, g)."""
    _positive(mu=mu, nu=nu)
    _genus(g=g)
    R = 2.0 * C2(mu, g).value
    first = _logsumexp(math.log(4.0 * R + 6.0), -C1(R + 2.0, nu).log_value)
    return max(first, _log_C4(mu, g, nu))

@formula('lemma9_bound')
def lemma9_bound(R, mu):
    """4 sinh(μ/2)/C₁(3R + 2, μ)."""
    _positive(R=R, mu=mu)
    return math.log(4.0) + _log_sinh(mu / 2.0) - C1(3.0 * R + 2.0, mu).log_value

@formula('axis_distance_bound')
def axis_distance_bound(l, mu):
    """2 sinh(μ/2)/l: how far from the axis a point of the cone of translation length l can lie."""
    _positive(l=l, mu=mu)
    return math.log(2.0) + _log_sinh(mu / 2.0) - math.log(l)

@formula('triangulation_step4')
def triangulation_step4(mu, g):
    """(6g − 6)²C₂(μ, g)."""
    _genus(g=g)
    return 2.0 * math.log(6.0 * g - 6.0) + C2(mu, g).log_value

@formula('triangulation_step5')
def triangulation_step5(mu, g):
    """(16g − 16)²C₂(μ, g)."""
    _genus(g=g)
    return 2.0 * math.log(16.0 * g - 16.0) + C2(mu, g).log_value

@formula('triangle_count')
def triangle_count(g):
    """16(g − 1) triangles in the nice-map triangulation."""
    _genus(g=g)
    return math.log(16.0 * (g - 1))

@formula('boundary_length_bound')
def boundary_length_bound(mu):
    """2 sinh μ."""
    _positive(mu=mu)
    return math.log(2.0) + _log_sinh(mu)

@formula('close_pair_count')
def close_pair_count(R, mu):
    """8exp³(2R + μ/2)/μ³."""
    _positive(R=R, mu=mu)
    return math.log(8.0) + exp3_log(2.0 * R + mu / 2.0) - 3.0 * math.log(mu)

def _log_tube_term(mu, g, nu):
    """log exp³(2C₅ + ν/2)/ν³; infinite once C₅ itself overflows."""
    return exp3_log(2.0 * C5(mu, g, nu).value + nu / 2.0) - 3.0 * math.log(nu)

@formula('cyclic_tube_count')
def cyclic_tube_count(mu, g, nu):
    """3exp³(2C₅ + ν/2)/ν³."""
    _positive(mu=mu, nu=nu)
    _genus(g=g)
    return math.log(3.0) + _log_tube_term(mu, g, nu)

@formula('rank2_tube_count')
def rank2_tube_count(mu, g, nu):
    """6(12(g − 1))²exp³(2C₅ + ν/2)/ν³."""
    _positive(mu=mu, nu=nu)
    _genus(g=g)
    return math.log(6.0) + 2.0 * math.log(12.0 * (g - 1)) + _log_tube_term(mu, g, nu)

@formula('fiber_tube_count')
def fiber_tube_count(mu, g, nu):
    """24exp³(2C₅ + ν/2)/ν³."""
    _positive(mu=mu, nu=nu)
    _genus(g=g)
    return math.log(24.0) + _log_tube_term(mu, g, nu)

@formula('alternative_count')
def alternative_count(R, nu):
    """max{N(R, ν), N′(R, ν), R/ν}."""
    _positive(R=R, nu=nu)
    return max(N_theorem4(R, nu).log_value, Nprime_theorem5(R, nu).log_value, math.log(R / nu))

@formula('short_length_bound')
def short_length_bound(mu, nu):
    """C₁(arccosh(2 sinh(μ/2)/C₋(μ, ν)), ν), the lower bound for short translation lengths."""
    _positive(mu=mu, nu=nu)
    log_arg = math.log(2.0) + _log_sinh(mu / 2.0) - C_minus(mu, nu).log_value
    if log_arg > 30.0:
        r = log_arg + math.log(2.0)
    else:
        r = math.acosh(max(math.exp(log_arg), 1.0))
    if r <= 0.0:
        raise ValueError("short_length_bound is undefined when 2 sinh(μ/2) ≤ C₋(μ, ν)")
    return C1(r, nu).log_value

@formula('prop7_printed_bound')
def prop7_printed_bound(R, nu):
    """1 + R/2 − ν/2, the distance bound to the cone as stated."""
    _positive(R=R, nu=nu)
    value = 1.0 + R / 2.0 - nu / 2.0
    if value <= 0:
        raise ValueError("1 + R/2 − ν/2 is not positive for R=%r, nu=%r" % (R, nu))
    return math.log(value)

@formula('prop7_proof_bound')
def prop7_proof_bound(R, nu):
    """log(sinh(R/2)/sinh(ν/2)), defined for R > ν."""
    _positive(R=R, nu=nu)
    if not R > nu:
        raise ValueError("prop7_proof_bound needs R > nu (got R=%r, nu=%r)" % (R, nu))
    return math.log(_log_sinh(R / 2.0) - _log_sinh(nu / 2.0))

@formula('prop7_cosh_bound')
def prop7_cosh_bound(R, nu):
    """2 sinh(R/2)/C₋(R, ν), the bound on cosh of the distance to the axis."""
    _positive(R=R, nu=nu)
    return math.log(2.0) + _log_sinh(R / 2.0) - C_minus(R, nu).log_value

@formula('final_intersection_bound')
def final_intersection_bound(g, mu):
    """300(g − 1)² exp(4000(g − 1)/μ)/μ²."""
    _positive(mu=mu)
    _genus(g=g)
    return math.log(300.0) + 2.0 * math.log(g - 1) + 4000.0 * (g - 1) / mu - 2.0 * math.log(mu)

@formula('link_count_bound')
def link_count_bound(g1, g2, mu):
    """exp(8000(g₁ + g₂)/μ)."""
    _positive(mu=mu)
    _genus(g1=g1, g2=g2)
    return 8000.0 * (g1 + g2) / mu

@formula('appendix_bound')
def appendix_bound(l1, l2):
    """exp(l₁ + l₂ + 1)."""
    _positive(l1=l1, l2=l2)
    return l1 + l2 + 1.0

def _integer(**values):
    for name, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError("%s must be an integer, got %r" % (name, value))

@formula('milnor_wood_test')
def milnor_wood_test(e, g):
    """Whether 0 ≤ |e| ≤ 2g − 2."""
    _integer(e=e)
    _genus(g=g)
    return bool(abs(e) <= 2 * g - 2)

@formula('theorem2_range_test')
def theorem2_range_test(e, g):
    """Whether 0 < e ≤ (2g − 2)/3."""
    _integer(e=e)
    _genus(g=g)
    return bool(0 < e and 3 * e <= 2 * g - 2)
