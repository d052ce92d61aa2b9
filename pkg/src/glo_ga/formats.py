"""Instance file formats, key-value configs and delimited result files."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Mapping

from .problems import MaxCut, MaxSat


class FormatError(ValueError):
    """Malformed input; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_dimacs_cnf(text: str, K: int = 1) -> MaxSat:
    """Parse DIMACS CNF into a MAX-SAT instance.

    Clauses may span lines and end with ``0``; a final clause missing its
    terminating ``0`` is accepted at end of input. A ``%`` line ends the
    clause section (SATLIB convention).
    """
    header = None
    header_line = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise FormatError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad problem line {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"bad problem line {line!r}", lineno) from None
            if header[0] < 1 or header[1] < 0:
                raise FormatError("variable count must be >= 1 and clause count >= 0", lineno)
            header_line = lineno
            continue
        if header is None:
            raise FormatError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"non-integer literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise FormatError("zero-length clause", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise FormatError(f"literal {lit} out of range for {header[0]} variables", lineno)
            else:
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if not clauses:
        raise FormatError("instance has no clauses", header_line)
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}", lineno)
    return MaxSat(header[0], clauses, K)


def write_dimacs_cnf(instance: MaxSat) -> str:
    lines = [f"p cnf {instance.n} {len(instance.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in instance.clauses]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, K: int = 1) -> MaxCut:
    """Parse ``<vertices> <edges>`` followed by ``u v w`` lines (1-based vertices).

    Blank lines and lines starting with ``#`` are ignored.
    """
    header = None
    edges: list[tuple[int, int, int]] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise FormatError(f"non-integer field in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 2 or nums[0] < 1 or nums[1] < 0:
                raise FormatError("header must be '<vertices> <edges>'", lineno)
            header = nums
            continue
        if len(nums) != 3:
            raise FormatError("edge line must be 'u v w'", lineno)
        u, v, w = nums
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise FormatError(f"vertex out of range 1..{header[0]}", lineno)
        if u == v:
            raise FormatError(f"self-loop on vertex {u}", lineno)
        if w <= 0:
            raise FormatError(f"weight must be a positive integer, got {w}", lineno)
        edges.append((u - 1, v - 1, w))
    if header is None:
        raise FormatError("empty edge list")
    if len(edges) != header[1]:
        raise FormatError(f"header declares {header[1]} edges, found {len(edges)}", lineno)
    if not edges:
        raise FormatError("graph has no edges", lineno)
    return MaxCut(header[0], edges, K)


def write_edge_list(instance: MaxCut) -> str:
    lines = [f"{instance.n} {len(instance.edges)}"]
    lines += [f"{u + 1} {v + 1} {w}" for u, v, w in instance.edges]
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment. Keys are normalized to underscores."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise FormatError("empty key", lineno)
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_results(
    rows: Iterable[Mapping[str, object]],
    columns: list[str],
    footer: Mapping[str, object],
    fmt: str = "csv",
) -> str:
    """Header + one line per row, then ``# key=value`` footer lines."""
    if fmt not in ("csv", "tsv"):
        raise ValueError(f"unknown result format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="," if fmt == "csv" else "\t", lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    buf.write("# footer\n")
    for key, value in footer.items():
        buf.write(f"# {key}={_cell(value)}\n")
    return buf.getvalue()


def read_results(text: str, fmt: str = "csv") -> tuple[list[dict[str, str]], dict[str, str]]:
    """Inverse of :func:`format_results` (values come back as strings)."""
    body = [l for l in text.splitlines() if not l.startswith("#")]
    footer = {}
    for l in text.splitlines():
        if l.startswith("# ") and "=" in l:
            key, value = l[2:].split("=", 1)
            footer[key] = value
    reader = csv.DictReader(body, delimiter="," if fmt == "csv" else "\t")
    return list(reader), footer
