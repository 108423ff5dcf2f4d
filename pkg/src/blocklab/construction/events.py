"""Trace events: the shared record vocabulary of both construction engines.

Every run emits a line-delimited stream of JSON records with stable
field order.  The tree-driven engine and the straight-line replay
interpreter must produce identical streams for identical inputs; the
record constructors here pin the field layout, and the docstrings pin
the emission points.

Emission contract (per stage, in order):

1. ``stage-begin``, then ``on-set``.
2. For each level n = 1..s, events in construction order:
   pruning caused by a path choice comes first (each killed node:
   its ``label-remove`` events in current M order, then one ``prune``);
   then ``node-create`` (fresh incarnations only), then ``path-node``,
   then that node's action events (``label-remove`` / ``m-insert`` /
   ``label-add``).  Kills are pre-order: node before its descendants,
   descendants ascending by branch.  ``why`` is ``right`` for blanket
   pruning (including the skip branch), ``preimage`` for image/preimage
   change injuries, ``referent`` for candidate-list reorder injuries.
3. ``nonblock-pair`` records for this stage's newly logged pairs with
   both ids within the configured bound, sorted; then ``f-snapshot``
   (bounded prefix of the stage map, plus inverse); then ``stage-end``
   with exact counts (counts cover all pairs, not just emitted ones)
   and optional whole-state digests.

Within one cluster operation, growth is emitted anchor-first, then the
left side outward, then the right side outward; shrinking removes
labels outermost-first.  Relabelling an existing cluster is emitted in
ascending M order.
"""

from __future__ import annotations

import hashlib
import json
from typing import IO, Iterable, List, Optional


def canonical_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


# -- record constructors (field order is part of the format) ---------------


def ev_header(config: dict, config_hash: str) -> dict:
    return {"kind": "header", "format": 1, "config": config, "configHash": config_hash}


def ev_stage_begin(stage: int) -> dict:
    return {"kind": "stage-begin", "stage": stage}


def ev_on_set(stage: int, on: List[int]) -> dict:
    return {"kind": "on-set", "stage": stage, "on": on}


def ev_node_create(stage: int, node: int, level: int, sub: int, choice: str, parent: int) -> dict:
    return {
        "kind": "node-create",
        "stage": stage,
        "node": node,
        "level": level,
        "sub": sub,
        "choice": choice,
        "parent": parent,
    }


def ev_path_s1(stage: int, node: int, ref: int, block_size: int) -> dict:
    return {
        "kind": "path-node",
        "stage": stage,
        "sub": 1,
        "node": node,
        "ref": ref,
        "blockSize": block_size,
    }


def ev_path_s2(
    stage: int,
    node: int,
    pair: List[int],
    fallow: List[int],
    preimage: Optional[List[int]],
) -> dict:
    return {
        "kind": "path-node",
        "stage": stage,
        "sub": 2,
        "node": node,
        "pair": pair,
        "fallow": fallow,
        "preimage": preimage,
    }


def ev_path_s3(stage: int, node: int, ref: int, cand: int) -> dict:
    return {
        "kind": "path-node",
        "stage": stage,
        "sub": 3,
        "node": node,
        "ref": ref,
        "cand": cand,
    }


def ev_label_add(stage: int, node: int, m: int) -> dict:
    return {"kind": "label-add", "stage": stage, "node": node, "m": m}


def ev_label_remove(stage: int, node: int, m: int) -> dict:
    return {"kind": "label-remove", "stage": stage, "node": node, "m": m}


def ev_m_insert(stage: int, m: int, left: int, right: int) -> dict:
    return {"kind": "m-insert", "stage": stage, "m": m, "left": left, "right": right}


def ev_nonblock(stage: int, a: int, b: int) -> dict:
    return {"kind": "nonblock-pair", "stage": stage, "a": a, "b": b}


def ev_prune(stage: int, node: int, why: str) -> dict:
    return {"kind": "prune", "stage": stage, "node": node, "why": why}


def ev_f_snapshot(stage: int, f_entries: list, finv_entries: list) -> dict:
    return {"kind": "f-snapshot", "stage": stage, "f": f_entries, "finv": finv_entries}


def ev_fault(stage: int, code: str, detail: str) -> dict:
    return {"kind": "fault", "stage": stage, "code": code, "detail": detail}


def ev_stage_end(
    stage: int,
    m_size: int,
    f_size: int,
    new_nonblock: int,
    path_len: int,
    hashes: Optional[dict] = None,
) -> dict:
    rec = {
        "kind": "stage-end",
        "stage": stage,
        "mSize": m_size,
        "fSize": f_size,
        "newNonblock": new_nonblock,
        "pathLen": path_len,
    }
    if hashes is not None:
        rec["hashes"] = hashes
    return rec


# -- sinks ------------------------------------------------------------------


class EventSink:
    def emit(self, record: dict) -> None:
        raise NotImplementedError

    def close(self) -> None:
        pass


class ListSink(EventSink):
    def __init__(self):
        self.records: List[dict] = []

    def emit(self, record: dict) -> None:
        self.records.append(record)


class NdjsonSink(EventSink):
    def __init__(self, fh: IO[str]):
        self._fh = fh

    def emit(self, record: dict) -> None:
        self._fh.write(canonical_json(record))
        self._fh.write("\n")

    def close(self) -> None:
        self._fh.flush()


class TeeSink(EventSink):
    def __init__(self, *sinks: EventSink):
        self._sinks = sinks

    def emit(self, record: dict) -> None:
        for s in self._sinks:
            s.emit(record)

    def close(self) -> None:
        for s in self._sinks:
            s.close()


class CallbackSink(EventSink):
    def __init__(self, fn):
        self._fn = fn

    def emit(self, record: dict) -> None:
        self._fn(record)


def read_ndjson(fh: IO[str]) -> Iterable[dict]:
    for line in fh:
        line = line.strip()
        if line:
            yield json.loads(line)
