"""Temporal abstraction, time-interval pattern mining and cohort comparison."""

import json

from ._tirpforge import (
    DataError,
    UsageError,
    abstract,
    classify_relation,
    compose,
    information_gain,
    ks_two_sample,
    mine,
    mine_files,
    proportion_test,
    synth,
)
from ._tirpforge import discriminate_json as _discriminate_json

__all__ = [
    "DataError",
    "UsageError",
    "abstract",
    "classify_relation",
    "compose",
    "discriminate",
    "information_gain",
    "ks_two_sample",
    "mine",
    "mine_files",
    "proportion_test",
    "synth",
]


def discriminate(*args, **kwargs):
    """Compare two mined classes; writes the report and returns it as a dict."""
    return json.loads(_discriminate_json(*args, **kwargs))
