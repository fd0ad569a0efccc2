"""
structures.py - hyp4tubes data structures module.

This module contains the records shared between the geometry modules, the verification harness
and the exporters: verification checks and reports, boundary meshes, and the JSON report store.
"""

import json
import math
import os
import threading
from dataclasses import dataclass, field

import numpy as np

from . import conf
from .log import log

__all__ = ['Check', 'VerificationReport', 'Mesh', 'DataStore', 'JSONReportStore', 'jsonable']


def jsonable(value):
    """
    Converts numpy scalars/arrays and tuples to plain JSON types. Non-finite floats become the
    strings "inf", "-inf" and "nan" so that the output stays strict JSON.
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    elif isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    elif isinstance(value, (bool, np.bool_)):
        return bool(value)
    elif isinstance(value, (int, np.integer)):
        return int(value)
    elif isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        elif math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


@dataclass
class Check:
    """
    One measured-versus-bound comparison.

    margin is signed so that margin >= 0 means the check holds (bound − measured for upper
    bounds, measured − bound for lower bounds). With log_scale set, measured and bound are
    natural logarithms of the compared quantities. Strict checks fail on margin == 0.
    """
    label: str
    inputs: dict
    measured: float
    bound: float
    margin: float
    log_scale: bool = False
    strict: bool = False
    info: dict = field(default_factory=dict)

    @classmethod
    def upper(cls, label, inputs, measured, bound, strict=False, log_scale=False, **info):
        """measured ≤ bound (or < bound when strict)."""
        return cls(label, inputs, float(measured), float(bound), float(bound) - float(measured),
                   log_scale=log_scale, strict=strict, info=info)

    @classmethod
    def lower(cls, label, inputs, measured, bound, strict=False, log_scale=False, **info):
        """measured ≥ bound (or > bound when strict)."""
        return cls(label, inputs, float(measured), float(bound), float(measured) - float(bound),
                   log_scale=log_scale, strict=strict, info=info)

    @classmethod
    def either(cls, label, inputs, checks, **info):
        """Holds when at least one of the given alternative checks holds; keeps the best margin."""
        best = max(checks, key=lambda check: check.margin)
        info.setdefault('alternative', best.label)
        return cls(label, inputs, best.measured, best.bound, best.margin, log_scale=best.log_scale,
                   strict=best.strict, info=info)

    @property
    def ok(self):
        if math.isnan(self.margin):
            return False
        return self.margin > 0 if self.strict else self.margin >= 0

    def to_dict(self):
        return jsonable({'label': self.label, 'inputs': self.inputs, 'measured': self.measured,
                         'bound': self.bound, 'margin': self.margin})


@dataclass
class VerificationReport:
    """
    The outcome of a verification suite run.

    Everything but timing is a deterministic function of the suite configuration, so two runs
    with the same seed produce byte-identical reports once timing is dropped.
    """
    suite_id: str
    config: dict
    trials: int = 0
    checks: int = 0
    violations: list = field(default_factory=list)
    worst_margin: float = math.inf
    degeneracies: int = 0
    notes: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def add(self, check):
        """Scores a single check."""
        self.checks += 1
        if not math.isnan(check.margin):
            self.worst_margin = min(self.worst_margin, check.margin)
        if not check.ok:
            log.debug('(%s) violation: %s measured=%s bound=%s', self.suite_id, check.label,
                      check.measured, check.bound)
            self.violations.append(check.to_dict())

    def note(self, key, value):
        self.notes[key] = value

    def to_dict(self, with_timing=True):
        data = {'suite_id': self.suite_id, 'config': self.config, 'trials': self.trials,
                'checks': self.checks, 'violations': self.violations,
                'worst_margin': self.worst_margin, 'degeneracies': self.degeneracies,
                'notes': self.notes, 'pass': self.passed}
        if with_timing:
            data['timing'] = self.timing
        return jsonable(data)

    def to_json(self, with_timing=True):
        return json.dumps(self.to_dict(with_timing=with_timing), indent=4, sort_keys=True)


@dataclass
class Mesh:
    """
    A quad mesh sampled on a cone boundary.

    vertices holds the points of H⁴ (shape (N, 4)); chart holds their images in the 3-coordinate
    viewing chart (shape (N, 3)); quads indexes vertices (0-based) counter-clockwise; residuals
    holds the per-vertex boundary residual.
    """
    vertices: np.ndarray
    chart: np.ndarray
    quads: list
    residuals: np.ndarray
    chart_names: tuple = ('c1', 'c2', 'c3')
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.vertices)

    @property
    def max_residual(self):
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0


class DataStore:
    """
    Generic on-disk store for verification output. Subclasses implement load() and save().
    """
    def __init__(self, name, filename, default_db=None, data_dir=None):
        if data_dir is None:
            data_dir = conf.conf['verify'].get('report_dir', '')

        filename = os.path.join(data_dir, filename)

        self.name = name
        self.filename = filename
        self.tmp_filename = filename + '.tmp'

        log.debug('(DataStore:%s) using implementation %s', self.name, self.__class__.__name__)
        log.debug('(DataStore:%s) report path set to %s', self.name, self.filename)

        if default_db is not None:
            self.store = default_db
        else:
            self.store = {}
        self.store_lock = threading.Lock()

    def load(self):
        raise NotImplementedError

    def save(self):
        raise NotImplementedError

class JSONReportStore(DataStore):
    """
    Keeps verification reports keyed by suite id and writes them atomically as pretty-printed JSON.
    """
    def load(self):
        """Loads previously saved reports, if any."""
        with self.store_lock:
            try:
                with open(self.filename, "r") as f:
                    self.store.clear()
                    self.store.update(json.load(f))
            except (ValueError, IOError, OSError):
                log.info("(DataStore:%s) failed to load reports from %s; starting empty",
                         self.name, self.filename)

    def put(self, report, with_timing=True):
        with self.store_lock:
            self.store[report.suite_id] = report.to_dict(with_timing=with_timing)

    def save(self):
        """Saves the reports given via JSON."""
        with self.store_lock:
            directory = os.path.dirname(self.filename)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.tmp_filename, 'w') as f:
                json.dump(jsonable(self.store), f, indent=4, sort_keys=True)
            os.replace(self.tmp_filename, self.filename)
        log.info('(DataStore:%s) wrote %s report(s) to %s', self.name, len(self.store), self.filename)
