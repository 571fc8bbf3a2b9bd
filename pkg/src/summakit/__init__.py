"""summakit: horizon-bounded summability experiments over real sequences.

Gauge-function norms, block decompositions, computable set ideals,
windowed convergence verdicts, and falsification suites for the windowed
inclusion laws, all deterministic and reproducible from (config, seed).
"""

__version__ = "0.1.0"

REPORT_SCHEMA_VERSION = "1.0"
