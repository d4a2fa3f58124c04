"""Readers for the solver's CSV artifact contract.

Artifacts start with ``#`` comment lines (``# key: value`` metadata), then a
CSV header row, then data rows.  Readers validate the columns they need and
raise ValueError on anything malformed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class Artifact:
    def __init__(self, meta: dict[str, str], columns: list[str], data: np.ndarray):
        self.meta = meta
        self.columns = columns
        self.data = data

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def read_artifact(path: str | Path, required: tuple[str, ...]) -> Artifact:
    lines = Path(path).read_text().splitlines()
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for line in lines:
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line.lstrip("# ").rstrip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise ValueError(f"{path}: row has {len(parts)} fields, header has {len(header)}")
        rows.append([float(p) if p.strip() else np.nan for p in parts])
    if header is None:
        raise ValueError(f"{path}: no CSV header found")
    missing = [c for c in required if c not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {missing} (have {header})")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Artifact(meta=meta, columns=header, data=np.asarray(rows, dtype=float))


def run_label(meta: dict[str, str], fallback: str) -> str:
    """Legend label for one run, taken from the artifact header."""
    if "limiting" in meta:
        return meta["limiting"]
    mode = meta.get("mode", "")
    k = meta.get("K", "")
    if mode and k:
        return f"{mode} (K = {k})"
    return mode or fallback
