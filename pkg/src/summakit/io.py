"""File ingestion and report emission.

CSV readers validate eagerly and report the offending line number, since a
malformed corpus should stop a run before any mathematics happens. Report
writers are atomic (temp file plus rename) and byte-stable: keys are sorted
and no timestamps are embedded, so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError
from .orlicz import SequencePrefix


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report(path: str | Path, report: dict) -> None:
    atomic_write_text(path, dumps_report(report))


def read_sequence_csv(path: str | Path) -> SequencePrefix:
    """Read an (index,value) CSV with header into a sequence prefix.

    Indices must run 1..n contiguously; any malformed row raises with its
    line number.
    """
    values: list[float] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["index", "value"]:
            raise ValidationError(f"{path}: line 1: expected header 'index,value'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise ValidationError(f"{path}: line {lineno}: expected two columns")
            try:
                idx = int(row[0])
                val = float(row[1])
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
            if idx != len(values) + 1:
                raise ValidationError(
                    f"{path}: line {lineno}: index {idx} breaks the 1..n order"
                )
            values.append(val)
    if not values:
        raise ValidationError(f"{path}: no data rows")
    return SequencePrefix(tuple(values))


def write_sequence_csv(path: str | Path, x: SequencePrefix) -> None:
    rows = ["index,value"] + [f"{i},{v!r}" for i, v in enumerate(x.values, start=1)]
    atomic_write_text(path, "\n".join(rows) + "\n")


def read_theta_csv(path: str | Path) -> list[int]:
    """Read a one-column boundary list (optional 'boundary' header)."""
    out: list[int] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        for lineno, row in enumerate(reader, start=1):
            if not row or not row[0].strip():
                continue
            cell = row[0].strip()
            if lineno == 1 and not cell.lstrip("-").isdigit():
                continue  # header line
            try:
                out.append(int(cell))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
    if not out:
        raise ValidationError(f"{path}: no boundaries found")
    return out


def write_theta_csv(path: str | Path, boundaries: Sequence[int]) -> None:
    atomic_write_text(path, "boundary\n" + "\n".join(str(b) for b in boundaries) + "\n")


def read_tabulated_csv(path: str | Path) -> list[tuple[float, float]]:
    """Read (u, M) pairs for a tabulated gauge function."""
    out: list[tuple[float, float]] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        for lineno, row in enumerate(reader, start=1):
            if not row or not row[0].strip():
                continue
            if lineno == 1 and any(c.isalpha() for c in row[0]):
                continue  # header line
            if len(row) < 2:
                raise ValidationError(f"{path}: line {lineno}: expected two columns")
            try:
                out.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
    if len(out) < 2:
        raise ValidationError(f"{path}: need at least two grid points")
    return out


def write_windows_csv(path: str | Path, rows: Iterable[dict]) -> None:
    """Dump per-window diagnostics (index, width, count, density, total, mean)."""
    lines = ["index,lo,hi,width,count,density,total,mean"]
    for r in rows:
        lines.append(
            ",".join(
                "" if r.get(k) is None else repr(r[k]) if isinstance(r[k], float) else str(r[k])
                for k in ("index", "lo", "hi", "width", "count", "density", "total", "mean")
            )
        )
    atomic_write_text(path, "\n".join(lines) + "\n")
