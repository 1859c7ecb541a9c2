"""Text formats: edge lists, capacity files and result bundles.

Edge list: one edge per line, ``edge_id<TAB>owner,owner,...<TAB>[weight]``.
Capacity file: ``user_id<TAB>capacity``. In both, blank lines and lines
starting with ``#`` are ignored. Ids are decimal unsigned 64-bit integers.

A result bundle is a selected-edges file (one id per line, ascending) plus a
JSON summary tagged with :data:`FORMAT_VERSION`.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (DuplicateEdgeId, EmptyOwnerList, HyperboundError, IntegerOverflow,
                     MalformedLine)
from .hypergraph import U64_MAX, CapacityMap, Hypergraph

FORMAT_VERSION = "hyperbound/1"

_UINT = r"[0-9]+"
_WEIGHT = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
_EDGE_LINE = re.compile(rf"({_UINT})\t({_UINT}(?:,{_UINT})*)(?:\t({_WEIGHT})?)?")
_UINT_RE = re.compile(_UINT)
_WEIGHT_RE = re.compile(_WEIGHT)
_CAP_LINE = re.compile(rf"({_UINT})\t({_UINT})")


def _skip(line: str) -> bool:
    return not line.strip() or line.startswith("#")


def _lines(text: str):
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        if not _skip(line):
            yield lineno, line


def _diagnose_edge_line(lineno: int, line: str) -> HyperboundError:
    parts = line.split("\t")
    if len(parts) not in (2, 3):
        return MalformedLine(f"expected 2 or 3 tab-separated fields, got {len(parts)}", line=lineno)
    if not _UINT_RE.fullmatch(parts[0]):
        return MalformedLine(f"edge id {parts[0]!r} is not an unsigned integer", line=lineno)
    if parts[1] == "":
        return EmptyOwnerList(f"edge {parts[0]} has no owners", line=lineno)
    for tok in parts[1].split(","):
        if not _UINT_RE.fullmatch(tok):
            return MalformedLine(f"owner id {tok!r} is not an unsigned integer", line=lineno)
    return MalformedLine(f"weight {parts[2]!r} is not a non-negative decimal", line=lineno)


def parse_edge_list(text: str, capacities: CapacityMap | None = None) -> Hypergraph:
    """Parse an edge-list document.

    Raises:
        MalformedLine, EmptyOwnerList, DuplicateEdgeId, IntegerOverflow: with the
            offending 1-based line number in ``.line``.
    """
    ids: list[int] = []
    linenos: list[int] = []
    ptr = [0]
    owners: list[int] = []
    weights: list[float] = []
    nan = float("nan")
    match = _EDGE_LINE.fullmatch
    for lineno, line in _lines(text):
        mo = match(line)
        if mo is None:
            raise _diagnose_edge_line(lineno, line)
        eid_s, own_s, w_s = mo.groups()
        eid = int(eid_s)
        own = [int(t) for t in own_s.split(",")]
        if eid > U64_MAX or max(own) > U64_MAX:
            raise IntegerOverflow("id does not fit in 64 bits", line=lineno)
        if w_s is None:
            w = nan
        else:
            w = float(w_s)
            if w == float("inf"):
                raise MalformedLine(f"weight {w_s!r} is not finite", line=lineno)
        ids.append(eid)
        linenos.append(lineno)
        owners.extend(own)
        ptr.append(len(owners))
        weights.append(w)

    id_arr = np.array(ids, dtype=np.uint64)
    if id_arr.size:
        order = np.argsort(id_arr, kind="stable")
        dup = np.flatnonzero(id_arr[order][1:] == id_arr[order][:-1])
        if dup.size:
            later = order[dup + 1]
            first = int(later[np.argmin(np.asarray(linenos)[later])])
            raise DuplicateEdgeId(f"edge id {ids[first]} already defined", line=linenos[first])
    extra = capacities.overrides.keys() if capacities is not None else ()
    return Hypergraph.from_arrays(
        id_arr,
        np.array(ptr, dtype=np.int64),
        np.array(owners, dtype=np.uint64),
        np.array(weights, dtype=np.float64),
        extra_vertices=extra,
    )


def format_weight(w: float) -> str:
    return repr(float(w))


def serialize_edge_list(g: Hypergraph) -> str:
    """Edge-list text for ``g``: edges in stored order, owners ascending, trailing tab when
    unweighted."""
    ids = g.edge_ids.tolist()
    ptr = g.edge_ptr.tolist()
    owner_text = [str(u) for u in g.vertex_ids[g.edge_owners].tolist()]
    weights = g.weights.tolist()
    out = []
    for e, eid in enumerate(ids):
        w = weights[e]
        wtxt = "" if w != w else format_weight(w)
        out.append(f"{eid}\t{','.join(owner_text[ptr[e]:ptr[e + 1]])}\t{wtxt}\n")
    return "".join(out)


def parse_capacities(text: str, default: int = 1) -> CapacityMap:
    """Parse a capacity file; users not listed take ``default``."""
    overrides: dict[int, int] = {}
    for lineno, line in _lines(text):
        mo = _CAP_LINE.fullmatch(line)
        if mo is None:
            raise MalformedLine("expected 'user_id<TAB>capacity' with unsigned integers", line=lineno)
        u, b = int(mo.group(1)), int(mo.group(2))
        if u > U64_MAX or b > U64_MAX:
            raise IntegerOverflow("value does not fit in 64 bits", line=lineno)
        if u in overrides:
            raise MalformedLine(f"user {u} listed twice", line=lineno)
        overrides[u] = b
    return CapacityMap(default, overrides)


def serialize_capacities(caps: CapacityMap) -> str:
    return "".join(f"{u}\t{b}\n" for u, b in sorted(caps.overrides.items()))


def read_edge_list(path, capacities: CapacityMap | None = None) -> Hypergraph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"), capacities)


def write_edge_list(path, g: Hypergraph):
    Path(path).write_text(serialize_edge_list(g), encoding="utf-8")


# -- result bundle ------------------------------------------------------------


def serialize_selected(matched: Iterable[int]) -> str:
    return "".join(f"{e}\n" for e in sorted(matched))


def serialize_summary(summary: dict) -> str:
    return json.dumps({"format": FORMAT_VERSION, **summary}, indent=2, sort_keys=True) + "\n"


def parse_selected(text: str) -> list[int]:
    out = []
    for lineno, line in _lines(text):
        if not _UINT_RE.fullmatch(line):
            raise MalformedLine(f"edge id {line!r} is not an unsigned integer", line=lineno)
        out.append(int(line))
    return out


def write_bundle(selected_path, summary_path, matched, summary: dict):
    """Write the selected-edges file and summary, then check they agree.

    Either path may be None to skip that file. Raises HyperboundError if the
    written edge count disagrees with ``summary['report']['matched_count']``.
    """
    selected_text = serialize_selected(matched)
    summary_text = serialize_summary(summary)
    expected = summary["report"]["matched_count"]
    if selected_path is not None:
        Path(selected_path).write_text(selected_text, encoding="utf-8")
        written = len(parse_selected(Path(selected_path).read_text(encoding="utf-8")))
    else:
        written = len(parse_selected(selected_text))
    if written != expected:
        raise HyperboundError(f"bundle mismatch: {written} selected edges, summary says {expected}")
    if summary_path is not None:
        Path(summary_path).write_text(summary_text, encoding="utf-8")
    return selected_text, summary_text
