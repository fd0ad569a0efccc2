"""
verify.py - Monte-Carlo verification harness.

Runs registered suites: every trial draws a configuration from its own random stream, redraws
it while the result's hypotheses fail, and scores the resulting checks. Reports are a
deterministic function of the suite configuration; wall time is kept in a separate field.
"""

import concurrent.futures
import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import conf, world
from .geometry import Point4, exp_map
from .isometry import Isometry4, _orthogonal_to
from .log import log
from .margulis import ElementaryGroup
from .structures import VerificationReport
from .utils import (DegenerateIntersectionError, HypothesisRejected, SamplingStarvationError,
                    TruncationError, UnknownSuiteError, _load_suite_module)

__all__ = ['SuiteConfig', 'Sampler', 'trial_rng', 'run_suite', 'run_suites', 'load_suites',
           'suite_ids', 'FAMILIES']

FAMILIES = ('mixed', 'loxodromic', 'parabolic', 'translation')


@dataclass
class SuiteConfig:
    """Everything that determines a suite's report."""
    suite_id: str
    trials: int
    seed: int
    mu: float
    nu: float
    tolerances: dict
    exp3_reading: str
    family: str = 'mixed'
    max_attempts: int = 200
    max_pq: int = 12
    ranges: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError("trials must be an integer >= 1, got %r" % (self.trials,))
        if any(not value > 0 for value in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if self.family not in FAMILIES:
            raise ValueError("family must be one of %s, got %r" % (', '.join(FAMILIES), self.family))

    @classmethod
    def from_conf(cls, suite_id, trials=None, seed=None, mu=None, nu=None, family=None, workers=None):
        """Builds a configuration from conf.conf, with command-line overrides where not None."""
        core = conf.conf['hyp4tubes']
        verify = conf.conf['verify']

        def pick(value, default):
            return default if value is None else value

        return cls(suite_id=suite_id,
                   trials=int(pick(trials, verify['trials'])),
                   seed=int(pick(seed, verify['seed'])),
                   mu=float(pick(mu, core['margulis_constant'])),
                   nu=float(pick(nu, core['nu'])),
                   tolerances=dict(conf.conf['tolerances']),
                   exp3_reading=core['exp3_reading'],
                   family=pick(family, verify['family']),
                   max_attempts=int(verify['max_attempts']),
                   max_pq=int(verify['max_pq']),
                   ranges={name: list(pair) for name, pair in verify['ranges'].items()},
                   workers=int(pick(workers, verify['workers'])))

    def to_dict(self):
        """The configuration echo stored in reports. workers does not affect results."""
        return {'suite_id': self.suite_id, 'trials': self.trials, 'seed': self.seed, 'mu': self.mu,
                'nu': self.nu, 'tolerances': dict(sorted(self.tolerances.items())),
                'exp3_reading': self.exp3_reading, 'family': self.family,
                'max_attempts': self.max_attempts, 'max_pq': self.max_pq,
                'ranges': dict(sorted(self.ranges.items()))}


def trial_rng(seed, suite_id, trial, attempt):
    """
    The random stream of one attempt: PCG64 seeded by SeedSequence([seed, crc32(suite_id),
    trial, attempt]). Streams never depend on scheduling.
    """
    key = zlib.crc32(suite_id.encode('utf-8'))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, key, trial, attempt])))


class Sampler():
    """Draws random configurations from the ranges of a SuiteConfig."""

    def __init__(self, rng, cfg):
        self.rng = rng
        self.cfg = cfg

    def uniform(self, low, high):
        """A draw from (low, high]."""
        return float(high - (high - low) * self.rng.random())

    def draw(self, name):
        low, high = self.cfg.ranges[name]
        return self.uniform(low, high)

    def log_uniform(self, low, high):
        return math.exp(self.uniform(math.log(low), math.log(high)))

    def integer(self, low, high):
        """An integer in [low, high]."""
        return int(self.rng.integers(low, high + 1))

    def choice(self, options):
        return options[int(self.rng.integers(len(options)))]

    def sign(self):
        return 1 if self.rng.random() < 0.5 else -1

    def unit_vector(self, dim=3):
        while True:
            v = self.rng.standard_normal(dim)
            norm = float(np.linalg.norm(v))
            if norm > 1e-6:
                return v / norm

    def rotation_plane(self):
        return _orthogonal_to(self.unit_vector())

    def horizontal(self):
        low, high = self.cfg.ranges['offset']
        return np.array([self.uniform(low, high) for _ in range(3)])

    def point(self):
        y = self.horizontal()
        return Point4(y[0], y[1], y[2], self.draw('height'))

    def point_near(self, p, radius):
        """A point at distance at most radius from p, in a uniformly random direction."""
        return exp_map(p, self.unit_vector(4), self.uniform(0.0, radius))

    def sphere_point(self):
        """A point on the hemisphere |x| = 1, away from the vertical axis and the boundary."""
        while True:
            v = self.unit_vector(4)
            v[3] = abs(v[3])
            if v[3] > 1e-3 and np.linalg.norm(v[:3]) > 1e-3:
                return Point4(v[0], v[1], v[2], v[3])

    def loxodromic(self, log_lambda=None, theta=None):
        if log_lambda is None:
            log_lambda = self.draw('log_lambda')
        if theta is None:
            theta = self.draw('theta')
        return Isometry4.loxodromic(math.exp(log_lambda), theta=theta, rotation_plane=self.rotation_plane(),
                                    orientation=self.sign())

    def translation(self):
        return self.draw('translation') * self.unit_vector()

    def parabolic(self, screw=None):
        """
        A pure translation, or (with screw) a screw motion along a random axis. Half of the screws
        carry an off-axis translation, so they turn about a line away from the origin.
        """
        if screw is None:
            screw = self.rng.random() < 0.5
        if not screw:
            return Isometry4.parabolic(tuple(self.translation()))
        axis = self.unit_vector()
        tau = self.draw('translation') * axis
        if self.rng.random() < 0.5:
            u, v = (np.asarray(w) for w in _orthogonal_to(axis))
            phi = self.uniform(0.0, 2.0 * math.pi)
            tau = tau + self.draw('translation') * (math.cos(phi) * u + math.sin(phi) * v)
        return Isometry4.parabolic(tuple(tau), theta=self.draw('theta'), rotation_axis=tuple(axis),
                                   orientation=self.sign())

    def element(self, family=None):
        """A single nonelliptic element from the given family (default: the configured one)."""
        family = family or self.cfg.family
        if family == 'mixed':
            family = self.choice(FAMILIES[1:])
        if family == 'loxodromic':
            return self.loxodromic()
        elif family == 'parabolic':
            return self.parabolic()
        return self.parabolic(screw=False)

    def lattice(self, rank):
        """A lattice of rank pure translations; near-degenerate bases are redrawn."""
        gens = tuple(Isometry4.parabolic(tuple(self.translation())) for _ in range(rank))
        matrix = np.array([g.translation for g in gens])
        sigma = np.linalg.svd(matrix, compute_uv=False)
        if sigma[-1] < 0.2 * sigma[0]:
            raise HypothesisRejected("lattice basis is too close to degenerate")
        return ElementaryGroup(gens)

    def group(self, family=None):
        """An elementary group from the given family (default: the configured one)."""
        family = family or self.cfg.family
        if family == 'mixed':
            family = self.choice(FAMILIES[1:])
        if family == 'loxodromic':
            return ElementaryGroup.cyclic(self.loxodromic())
        elif family == 'parabolic':
            return ElementaryGroup.cyclic(self.parabolic())
        rank = self.integer(1, 3)
        if rank == 1:
            return ElementaryGroup.cyclic(self.parabolic(screw=False))
        return self.lattice(rank)


def load_suites():
    """Imports every suite module so the suites register themselves."""
    from . import suites
    for name in suites.__all__:
        _load_suite_module(name)
    return list(world.suites)

def suite_ids():
    """Suite ids in run order: verify:suites when set, otherwise every registered suite."""
    load_suites()
    configured = conf.conf['verify']['suites']
    return list(configured) if configured else list(world.suites)

def _get_suite(suite_id):
    try:
        return world.suites[suite_id]
    except KeyError:
        raise UnknownSuiteError("Unknown suite %r; known suites: %s"
                                % (suite_id, ', '.join(sorted(world.suites))))

def _run_trial(suite, cfg, trial):
    """
    Runs one trial with rejection sampling. Returns (checks, rejected, truncated, degenerate);
    raises SamplingStarvationError when every attempt was redrawn.
    """
    rejected = truncated = degenerate = 0
    for attempt in range(cfg.max_attempts):
        sampler = Sampler(trial_rng(cfg.seed, suite.suite_id, trial, attempt), cfg)
        try:
            checks = suite.func(sampler, cfg)
        except HypothesisRejected as e:
            log.debug('(%s) trial %s attempt %s rejected: %s', suite.suite_id, trial, attempt, e)
            rejected += 1
        except TruncationError as e:
            log.debug('(%s) trial %s attempt %s is out of enumeration reach: %s', suite.suite_id,
                      trial, attempt, e)
            truncated += 1
        except DegenerateIntersectionError as e:
            log.debug('(%s) trial %s attempt %s is degenerate: %s', suite.suite_id, trial, attempt, e)
            degenerate += 1
        else:
            for check in checks:
                check.inputs = dict(check.inputs, trial=trial)
            return checks, rejected, truncated, degenerate
    raise SamplingStarvationError("Trial %s of %s: no configuration satisfying the hypotheses in %s attempts"
                                  % (trial, suite.suite_id, cfg.max_attempts),
                                  counts=(rejected, truncated, degenerate))

def _run_trial_safe(suite, cfg, trial):
    try:
        return _run_trial(suite, cfg, trial) + (None,)
    except SamplingStarvationError as e:
        return ([],) + e.counts + (str(e),)

def run_suite(cfg):
    """Runs one suite and returns its VerificationReport."""
    suite = _get_suite(cfg.suite_id)
    started = time.time()
    report = VerificationReport(cfg.suite_id, cfg.to_dict())
    report.note('anchor', suite.anchor)
    log.info('(%s) starting (%s)', cfg.suite_id, 'sweep' if suite.sweep else '%s trials' % cfg.trials)

    all_checks = []
    if suite.sweep:
        all_checks = list(suite.func(cfg))
        report.trials = len(all_checks)
        for check in all_checks:
            report.add(check)
    else:
        trials = cfg.trials
        if suite.max_trials is not None and trials > suite.max_trials:
            log.info('(%s) capping %s trials at %s', cfg.suite_id, trials, suite.max_trials)
            report.note('trial_cap', suite.max_trials)
            trials = suite.max_trials

        if cfg.workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(lambda i: _run_trial_safe(suite, cfg, i), range(trials)))
        else:
            results = [_run_trial_safe(suite, cfg, i) for i in range(trials)]

        rejected = truncated = 0
        for trial, (checks, trial_rejected, trial_truncated, degenerate, starved) in enumerate(results):
            rejected += trial_rejected
            truncated += trial_truncated
            report.degeneracies += degenerate
            if starved:
                log.warning('(%s) %s', cfg.suite_id, starved)
                report.violations.append({'label': 'sampling_starvation', 'inputs': {'trial': trial},
                                          'measured': None, 'bound': None, 'margin': None})
                continue
            report.trials += 1
            for check in checks:
                report.add(check)
            all_checks.extend(checks)
        report.note('rejected', rejected)
        report.note('truncated', truncated)
        if report.degeneracies:
            log.warning('(%s) %s degenerate configuration(s) redrawn', cfg.suite_id, report.degeneracies)

    if suite.finalize is not None:
        extra, notes = suite.finalize(all_checks, cfg)
        for check in extra:
            report.add(check)
        for key, value in sorted(notes.items()):
            report.note(key, value)

    report.timing = {'wall_time': time.time() - started, 'timestamp': time.strftime('%Y-%m-%dT%H:%M:%S%z')}
    log.info('(%s) %s: %s checks, %s violation(s), worst margin %s', cfg.suite_id,
             'PASS' if report.passed else 'FAIL', report.checks, len(report.violations), report.worst_margin)
    return report

def run_suites(names, **overrides):
    """Runs the named suites ('all' expands to every suite) and returns their reports in order."""
    known = suite_ids()
    if names == 'all' or names == ['all']:
        names = known
    elif isinstance(names, str):
        names = [names]
    reports = []
    for name in names:
        reports.append(run_suite(SuiteConfig.from_conf(name, **overrides)))
    return reports
