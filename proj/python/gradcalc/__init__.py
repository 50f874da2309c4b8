"""Exact tensor calculus on graded charts."""

import json

from . import _gradcalc
from ._gradcalc import (
    Chart,
    ChartMismatch,
    DomainError,
    Error,
    Prolongation,
    ScriptError,
    Tensor,
    ValenceError,
    __version__,
    d,
    fn_bracket,
    interior,
    lie_bracket,
    lie_derivative,
    nijenhuis_torsion,
    nr_bracket,
    schouten,
)


def run(script, seed=42, samples=8):
    """Run a script and return the JSON document as a dict."""
    return json.loads(_gradcalc.run_json(script, seed, samples))


def check_suite(seed=42, cases=200):
    return json.loads(_gradcalc.check_suite_json(seed, cases))

