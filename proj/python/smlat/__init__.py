"""Stable matchings shared by nearby instances.

Matchings are lists of 0-based firm ids indexed by worker.
"""

import json as _json

from ._smlat import (
    Error,
    Instance,
    blocking_pairs,
    compound_firm_optimal,
    compound_worker_optimal,
    firm_optimal,
    is_stable,
    multiroom_firm_optimal,
    multiroom_worker_optimal,
    rotation_poset,
    solve_lp,
    stable_matchings,
    stable_under_all,
    theta_round,
    worker_optimal,
)
from ._smlat import fuzz as _fuzz
from ._smlat import worked_examples as _worked_examples


def worked_examples(fixtures=""):
    return _json.loads(_worked_examples(fixtures))


def fuzz(**kwargs):
    return _json.loads(_fuzz(**kwargs))


__all__ = [
    "Error",
    "Instance",
    "blocking_pairs",
    "compound_firm_optimal",
    "compound_worker_optimal",
    "firm_optimal",
    "fuzz",
    "is_stable",
    "multiroom_firm_optimal",
    "multiroom_worker_optimal",
    "worked_examples",
    "rotation_poset",
    "solve_lp",
    "stable_matchings",
    "stable_under_all",
    "theta_round",
    "worker_optimal",
]
