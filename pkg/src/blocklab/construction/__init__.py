"""The stage-wise copy construction: engine, M-state, events, runner."""

from .events import EventSink, ListSink, NdjsonSink, TeeSink, canonical_json, digest

__all__ = [
    "EventSink",
    "ListSink",
    "NdjsonSink",
    "TeeSink",
    "canonical_json",
    "digest",
]
