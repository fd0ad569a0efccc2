"""
world.py: Stores global variables for hyp4tubes, including the registries of verification suites
and bound formulas.
"""

import time
from collections import deque

__all__ = ['testing', 'suites', 'formulas', 'start_ts', 'exp3_readings']

# This indicates whether we're running in tests mode. Suites started while this is set skip
# writing report files unless a path is given explicitly.
testing = False

# Verification suites registered through utils.add_suite(): suite_id -> Suite
suites = {}

# Bound evaluators registered through bounds.formula(): formula_id -> callable
formulas = {}

# Accepted readings of the exp³ notation, in order of preference.
exp3_readings = ('triple_arg', 'triple_compose')

# Global starting time.
start_ts = time.time()

# Defines messages to be logged as soon as the log system is set up, for modules like conf that are
# initialized before log. This is processed (and then not used again) when the log module loads.
_log_queue = deque()

# Console log handler, set by the log module.
console_handler = None
