"""Delay-based audio fingerprint embedding, desynchronization attacks and tracing."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, _report_json, _trace_json


def trace_report_dict(report):
    """TraceReport as a plain dict."""
    return _json.loads(_trace_json(report))


def experiment_report_dict(report):
    """Aggregate ExperimentReport record (config echo, codebook tag, rates) as a dict."""
    return _json.loads(_report_json(report))
