"""Reader for the simulator's commented-CSV tables.

Tables carry ``#``-prefixed comment lines (a ``config: {...}`` echo plus
optional ``key[label]: value`` metadata such as existence boundaries), a
header row, and comma-separated data rows.  This package never recomputes
physics: everything a figure shows comes out of these files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Dict, List


class TableError(Exception):
    """Raised for unreadable, empty or column-mismatched tables."""


@dataclass
class Table:
    path: str
    header: List[str]
    rows: List[List[str]]
    config: dict = field(default_factory=dict)
    metadata: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def column(self, name):
        import numpy as np

        if name not in self.header:
            raise TableError(f"{self.path}: missing column {name!r} (has {self.header})")
        idx = self.header.index(name)
        values = [row[idx] for row in self.rows]
        try:
            return np.array([float(v) for v in values])
        except ValueError:
            return values

    def require_columns(self, names):
        missing = [n for n in names if n not in self.header]
        if missing:
            raise TableError(f"{self.path}: missing columns {missing} (has {self.header})")


def _parse_metadata(comment: str, metadata: Dict[str, Dict[str, float]]):
    # shape: key[label]: value
    head, _, value = comment.partition(":")
    if "[" not in head or not head.endswith("]"):
        return
    key, _, label = head.partition("[")
    label = label[:-1]
    try:
        metadata.setdefault(key.strip(), {})[label] = float(value.strip().split()[0])
    except (ValueError, IndexError):
        pass


def read_table(path: str) -> Table:
    header = None
    rows: List[List[str]] = []
    config: dict = {}
    metadata: Dict[str, Dict[str, float]] = {}
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            for line in handle:
                if line.startswith("#"):
                    comment = line[1:].strip()
                    if comment.startswith("config: "):
                        try:
                            config = json.loads(comment[len("config: "):])
                        except json.JSONDecodeError:
                            pass
                    else:
                        _parse_metadata(comment, metadata)
                    continue
                if not line.strip():
                    continue
                record = next(csv.reader([line]))
                if header is None:
                    header = record
                else:
                    rows.append(record)
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    if header is None or not rows:
        raise TableError(f"{path}: no data rows")
    return Table(path=path, header=header, rows=rows, config=config, metadata=metadata)


def merge_tables(tables: List[Table]) -> Table:
    first = tables[0]
    for other in tables[1:]:
        if other.header != first.header:
            raise TableError(
                f"{other.path}: header {other.header} does not match {first.path} ({first.header})"
            )
    merged = Table(
        path=", ".join(t.path for t in tables),
        header=first.header,
        rows=[row for t in tables for row in t.rows],
        config=first.config,
    )
    for t in tables:
        for key, entries in t.metadata.items():
            merged.metadata.setdefault(key, {}).update(entries)
    return merged
