"""File formats shared with the CLI: edge lists, feature CSVs, label CSVs."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

import numpy as np

from .errors import InputError
from .graph import WeightedGraph


def read_edge_list(path) -> WeightedGraph:
    """Read "u v [w]" lines; ids 0- or 1-based, auto-detected by minimum id.

    Missing weights default to 1.0. Duplicate pairs are rejected.
    """
    rows = []
    min_id = None
    max_id = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) not in (2, 3):
                raise InputError(f"{path}:{lineno}: expected 'u v [w]', got {line.strip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
            if u < 0 or v < 0:
                raise InputError(f"{path}:{lineno}: negative node id")
            rows.append((lineno, u, v, w))
            lo = min(u, v)
            min_id = lo if min_id is None else min(min_id, lo)
            max_id = max(max_id, u, v)
    if not rows:
        raise InputError(f"{path}: no edges found")
    offset = 1 if min_id >= 1 else 0
    n = max_id + 1 - offset
    seen = {}
    edges = []
    for lineno, u, v, w in rows:
        u -= offset
        v -= offset
        if u == v:
            raise InputError(f"{path}:{lineno}: self-loop on node {u + offset}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputError(
                f"{path}:{lineno}: duplicate edge for pair {key} (first at line {seen[key]})")
        seen[key] = lineno
        edges.append((u, v, w))
    return WeightedGraph(n, edges)


def write_edge_list(path, g: WeightedGraph, one_based: bool = False) -> None:
    off = 1 if one_based else 0
    with open(path, "w") as fh:
        for u, v, w in g.edges():
            if w == 1.0:
                fh.write(f"{u + off} {v + off}\n")
            else:
                fh.write(f"{u + off} {v + off} {w!r}\n")


def read_features_csv(path) -> np.ndarray:
    """Read one sample per row of comma-separated reals.

    A non-numeric first row is treated as a header and skipped.
    """
    rows = []
    width = None
    with open(path) as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise InputError(f"{path}:{lineno}: non-numeric value in {row}")
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise InputError(
                    f"{path}:{lineno}: expected {width} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise InputError(f"{path}: no feature rows found")
    x = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(x).all():
        raise InputError(f"{path}: non-finite feature value")
    return x


def write_features_csv(path, x: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(x, dtype=float):
            writer.writerow([repr(float(v)) for v in row])


def read_labels_csv(path) -> dict[int, int]:
    """Read "node_id,class" rows into a mapping; a header row is skipped."""
    out = {}
    with open(path) as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                node, cls = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                if lineno == 1:
                    continue
                raise InputError(f"{path}:{lineno}: expected 'node_id,class'")
            if node in out:
                raise InputError(f"{path}:{lineno}: duplicate label for node {node}")
            out[node] = cls
    if not out:
        raise InputError(f"{path}: no labels found")
    return out


def write_labels_csv(path, labels, header: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(["node_id", "class"])
        if isinstance(labels, dict):
            items = sorted(labels.items())
        else:
            items = enumerate(np.asarray(labels, dtype=int).tolist())
        for node, cls in items:
            writer.writerow([int(node), int(cls)])


def file_digest(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()
