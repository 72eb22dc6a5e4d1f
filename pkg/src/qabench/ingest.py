"""Graphs grown from timestamped interaction logs.

Input is JSON lines. Message records look like
``{"t": "2024-01-01T10:00:00", "from": "alice", "refs": ["bob"]}`` and path
records like ``{"t": "...", "path": ["7018", "3356", "1299"]}``. Ids are
strings; they get dense integer ids in first-seen order, and the returned
graph carries them as labels (the id map sidecar).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .graph import Graph, largest_component

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MessageRecord:
    t: datetime
    sender: str
    referred: tuple[str, ...]

    @classmethod
    def from_dict(cls, d: dict) -> "MessageRecord":
        sender = d["from"]
        refs = d.get("refs", [])
        if not isinstance(sender, (str, int)) or str(sender) == "":
            raise ValueError("empty sender")
        if not isinstance(refs, list):
            raise ValueError("refs must be a list")
        return cls(parse_time(d["t"]), str(sender), tuple(str(r) for r in refs))


@dataclass(frozen=True)
class PathRecord:
    t: datetime
    path: tuple[str, ...]

    @classmethod
    def from_dict(cls, d: dict) -> "PathRecord":
        path = d["path"]
        if not isinstance(path, list) or not path:
            raise ValueError("path must be a non-empty list")
        path = tuple(str(x) for x in path)
        if any(a == b for a, b in zip(path, path[1:])):
            raise ValueError("repeated consecutive path entry")
        return cls(parse_time(d["t"]), path)


@dataclass
class IngestResult:
    graph: Graph
    skipped: int
    in_window: int

    @property
    def id_map(self) -> dict[int, str]:
        return dict(enumerate(self.graph.labels or ()))

    def format_id_map(self) -> str:
        return "".join(f"{i} {label}\n" for i, label in self.id_map.items())


def parse_time(t) -> datetime:
    """ISO-8601 timestamp; naive values are taken as UTC."""
    if not isinstance(t, str):
        raise ValueError("timestamp must be a string")
    dt = datetime.fromisoformat(t.replace("Z", "+00:00"))
    return dt if dt.tzinfo else dt.replace(tzinfo=timezone.utc)


def _coerce(records: Iterable, kind) -> tuple[list, int]:
    """Accept record objects, dicts or JSON lines; count the malformed ones."""
    out, skipped = [], 0
    for r in records:
        if isinstance(r, kind):
            out.append(r)
            continue
        try:
            if isinstance(r, str):
                if not r.strip():
                    continue
                r = json.loads(r)
            out.append(kind.from_dict(r))
        except (ValueError, KeyError, TypeError) as e:
            skipped += 1
            log.debug("skipping malformed record: %s", e)
    return out, skipped


def _window(start, end):
    start = parse_time(start) if isinstance(start, str) else start
    end = parse_time(end) if isinstance(end, str) else end
    if start is not None and end is not None and start > end:
        raise ValueError("start must not be after end")
    return start, end


def _in_window(t: datetime, start, end) -> bool:
    return (start is None or t >= start) and (end is None or t <= end)


class _Ids:
    def __init__(self):
        self.index: dict[str, int] = {}

    def __call__(self, key: str) -> int:
        return self.index.setdefault(key, len(self.index))

    @property
    def labels(self) -> list[str]:
        return list(self.index)


def _component_graph(edges: set, ids: _Ids) -> Graph:
    g = Graph.from_edges(edges, len(ids.index), ids.labels)
    sub, _ = g.induced_subgraph(largest_component(g))
    return sub


def mention_edges(records: list[MessageRecord], start=None, end=None) -> tuple[set, _Ids, int]:
    """Mutual-mention edges before component extraction, plus the id table."""
    ids = _Ids()
    directed = set()
    count = 0
    for r in records:
        if not _in_window(r.t, start, end):
            continue
        count += 1
        u = ids(r.sender)
        for ref in r.referred:
            if ref == r.sender:
                continue
            directed.add((u, ids(ref)))
    edges = {(min(u, v), max(u, v)) for u, v in directed if (v, u) in directed}
    return edges, ids, count


def path_edges(records: list[PathRecord], start=None, end=None) -> tuple[set, _Ids, int]:
    ids = _Ids()
    edges = set()
    count = 0
    for r in records:
        if not _in_window(r.t, start, end):
            continue
        count += 1
        nodes = [ids(x) for x in r.path]
        for a, b in zip(nodes, nodes[1:]):
            edges.add((min(a, b), max(a, b)))
    return edges, ids, count


def grow_mention_graph(records: Iterable, start=None, end=None) -> IngestResult:
    """Keep {u, v} only if u refers v and v refers u inside the (inclusive)
    window; return the largest connected component."""
    start, end = _window(start, end)
    recs, skipped = _coerce(records, MessageRecord)
    edges, ids, count = mention_edges(recs, start, end)
    if count == 0:
        raise ValueError("no records in window")
    return IngestResult(_component_graph(edges, ids), skipped, count)


def grow_path_graph(records: Iterable, start=None, end=None) -> IngestResult:
    """Undirected edge per consecutive pair of every in-window path."""
    start, end = _window(start, end)
    recs, skipped = _coerce(records, PathRecord)
    edges, ids, count = path_edges(recs, start, end)
    if count == 0:
        raise ValueError("no records in window")
    return IngestResult(_component_graph(edges, ids), skipped, count)


def read_jsonl(path: str | Path) -> list[str]:
    return Path(path).read_text().splitlines()


def detect_kind(lines: list[str]) -> str:
    """'mention' or 'path', from the first parseable record."""
    for line in lines:
        try:
            d = json.loads(line)
        except ValueError:
            continue
        if isinstance(d, dict):
            if "path" in d:
                return "path"
            if "from" in d:
                return "mention"
    raise ValueError("cannot detect record kind")
