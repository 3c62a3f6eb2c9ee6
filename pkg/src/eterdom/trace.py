"""JSONL trace records for simulation runs.

One JSON object per line. The first line is a header carrying the schema
tag, the command parameters, and the seed; every following line is one
round. Records contain no wall-clock data, so identical commands with
identical seeds produce byte-identical files. The full field table lives
in docs/trace-format.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .grid import Cell, MovePlan
from .pattern import LatticePlacement

TRACE_SCHEMA = "eterdom-trace/1"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_M64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _M64
    return h


def placement_digest(cells: Iterable[Cell]) -> tuple[list[list[int]], str]:
    """Sorted cell list plus a 64-bit FNV-1a content hash of it."""
    ordered = sorted(cells)
    blob = ";".join(f"{r},{c}" for r, c in ordered).encode("ascii")
    return [list(c) for c in ordered], f"{fnv1a64(blob):016x}"


@dataclass(frozen=True)
class TraceRecord:
    round: int
    attack: Cell
    plan: MovePlan
    cells_after: tuple[Cell, ...]
    pattern_after: LatticePlacement
    invariant_flags: dict[str, bool]

    def to_json(self) -> str:
        cells, digest = placement_digest(self.cells_after)
        doc = {
            "round": self.round,
            "attack": list(self.attack),
            "plan": [[list(a), list(b)] for a, b in sorted(self.plan.pairs)],
            "cells": cells,
            "hash": digest,
            "pattern": {
                "family": self.pattern_after.family.value,
                "t": self.pattern_after.t,
            },
            "flags": dict(sorted(self.invariant_flags.items())),
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def header_line(command: str, params: dict, seed: Optional[int]) -> str:
    doc = {"schema": TRACE_SCHEMA, "command": command, "params": params}
    if seed is not None:
        doc["seed"] = seed
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


class TraceIntegrityError(ValueError):
    pass


def revalidate_trace(lines: list[str]) -> int:
    """Recheck every record's content hash; returns the record count."""
    if not lines:
        raise TraceIntegrityError("empty trace")
    head = json.loads(lines[0])
    if head.get("schema") != TRACE_SCHEMA:
        raise TraceIntegrityError(f"unknown schema {head.get('schema')!r}")
    count = 0
    for line in lines[1:]:
        doc = json.loads(line)
        cells = [tuple(c) for c in doc["cells"]]
        _, digest = placement_digest(cells)
        if digest != doc["hash"]:
            raise TraceIntegrityError(f"hash mismatch at round {doc.get('round')}")
        count += 1
    return count
