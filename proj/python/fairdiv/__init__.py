"""Fair allocation of indivisible goods: maximin shares with EFX and EF1.

Instances are lists of integer valuation rows (one per agent) or dicts with a
``valuations`` key. Ratios are exact and passed as ``"p/q"`` strings.
"""

import json

from ._fairdiv import DEFAULT_EXACT_CAP, InvariantError, ValidationError
from . import _fairdiv

__all__ = [
    "DEFAULT_EXACT_CAP",
    "InvariantError",
    "ValidationError",
    "fixture",
    "generate",
    "mms",
    "solve",
    "verify",
]


def _instance_text(instance):
    if isinstance(instance, dict):
        return json.dumps(instance)
    return json.dumps({"valuations": [list(row) for row in instance]})


def mms(instance, parts=0, method="exact", epsilon="0", exact_cap=DEFAULT_EXACT_CAP):
    """Per-agent MMS records. ``method`` is exact, bruteforce or approx."""
    return json.loads(_fairdiv.mms_json(_instance_text(instance), parts, method, str(epsilon), exact_cap))


def solve(instance, goal="ef1-mms", epsilon="0", delta="0", exact_cap=DEFAULT_EXACT_CAP, trace=False):
    """Run one of the goals mms, efx-mms, ef1-mms and return the report dict."""
    text = _fairdiv.solve_json(_instance_text(instance), goal, str(epsilon), str(delta), exact_cap, trace)
    return json.loads(text)


def verify(instance, allocation, alpha="1", mms=None):
    """Fairness report for an allocation dict or a solve report."""
    return json.loads(_fairdiv.verify_json(_instance_text(instance), json.dumps(allocation), str(alpha), mms))


def fixture(name, n):
    """Named lower-bound fixtures: prop1 or prop2."""
    return json.loads(_fairdiv.fixture_json(name, n))


def generate(n, m, distribution="uniform", lo=1, hi=50, a=1, b=2, p="1/2", seed=0):
    return json.loads(_fairdiv.generate_json(n, m, distribution, lo, hi, a, b, str(p), seed))
