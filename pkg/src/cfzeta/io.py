"""CSV/JSON output with a metadata header, plus row-granular resume."""
from __future__ import annotations

import json
from pathlib import Path

from . import __version__

DETERMINISM = "chunked pairwise reduction, chunk 1024; results independent of worker count"


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def header_lines(command: str, config: dict) -> list[str]:
    return [
        f"# cfzeta {__version__}",
        f"# command: {command}",
        f"# config: {json.dumps(config, sort_keys=True)}",
        f"# determinism: {DETERMINISM}",
    ]


class CSVWriter:
    """Writes header + rows; with ``resume`` keeps the complete rows of a matching file.

    ``group`` is the number of data rows that form one checkpoint unit;
    trailing partial groups are dropped on resume.
    """

    def __init__(self, path, command: str, config: dict, columns: list[str], resume: bool = False, group: int = 1):
        self.path = Path(path)
        self.head = header_lines(command, config) + [",".join(columns)]
        self.existing: list[list[str]] = []
        if resume and self.path.exists():
            lines = self.path.read_text().splitlines()
            if lines[: len(self.head)] != self.head:
                raise ValueError(f"{self.path} was written with a different config; refusing to resume")
            rows = [ln for ln in lines[len(self.head) :] if ln]
            keep = len(rows) - len(rows) % group
            self.existing = [r.split(",") for r in rows[:keep]]
        self.fh = open(self.path, "w", newline="\n")
        self.fh.write("\n".join(self.head) + "\n")
        for r in self.existing:
            self.fh.write(",".join(r) + "\n")
        self.fh.flush()

    def write(self, row) -> None:
        self.fh.write(",".join(fmt(v) for v in row) + "\n")

    def flush(self) -> None:
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def read_csv(path) -> tuple[list[str], list[dict]]:
    """Returns (metadata lines, rows as dicts of strings)."""
    meta, rows, columns = [], [], None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            meta.append(line)
        elif not line:
            continue
        elif columns is None:
            columns = [c.strip() for c in line.split(",")]
        else:
            rows.append(dict(zip(columns, (v.strip() for v in line.split(",")))))
    return meta, rows
