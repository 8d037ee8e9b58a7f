"""Reading and writing the PACE 2022 instance and solution formats.

Instance files: a header line ``n m 0`` followed by ``n`` lines, line ``i``
listing the out-neighbors of vertex ``i`` (possibly empty).  Lines starting
with ``%`` are comments and may appear anywhere.  Solutions are vertex ids,
one per line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import DirectedGraph


class PaceParseError(ValueError):
    """Malformed instance or solution text; message names the line."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class PaceInstance:
    graph: DirectedGraph
    duplicate_arcs: int


def _as_text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("ascii")
    return data


def read_instance(data: str | bytes) -> PaceInstance:
    """Parse an instance, collapsing duplicate arcs and counting them."""
    lines = _as_text(data).splitlines()
    header: tuple[int, int] | None = None
    header_line = 0
    graph = DirectedGraph()
    duplicates = 0
    arcs_read = 0
    vertex = 0
    n = m = 0

    for lineno, raw in enumerate(lines, start=1):
        if raw.startswith("%"):
            continue
        if header is None:
            fields = raw.split()
            if len(fields) != 3:
                raise PaceParseError("header must be three integers 'n m 0'", lineno)
            try:
                n, m, tag = (int(f) for f in fields)
            except ValueError:
                raise PaceParseError("non-integer field in header", lineno) from None
            if n < 0 or m < 0 or tag != 0:
                raise PaceParseError("header must be 'n m 0' with n, m >= 0", lineno)
            header = (n, m)
            header_line = lineno
            for v in range(1, n + 1):
                graph.add_vertex(v)
            continue
        if vertex >= n:
            if raw.strip():
                raise PaceParseError("unexpected content after all vertex lines", lineno)
            continue
        vertex += 1
        for field in raw.split():
            try:
                w = int(field)
            except ValueError:
                raise PaceParseError(f"non-integer neighbor {field!r}", lineno) from None
            if not 1 <= w <= n:
                raise PaceParseError(f"neighbor {w} outside 1..{n}", lineno)
            arcs_read += 1
            if not graph.add_arc(vertex, w):
                duplicates += 1

    if header is None:
        raise PaceParseError("missing header", max(len(lines), 1))
    # trailing empty neighbor lines may be absent; the arc count still decides
    if arcs_read != m:
        raise PaceParseError(
            f"header declares {m} arcs but {arcs_read} were listed", header_line
        )
    return PaceInstance(graph, duplicates)


def parse_pace(data: str | bytes) -> DirectedGraph:
    return read_instance(data).graph


def serialize_pace(g: DirectedGraph) -> str:
    """Render a graph in instance format.

    Vertex ids above the maximum present are not invented; ids missing below
    it come out as isolated vertices, so arc sets round-trip exactly.
    """
    n = max(g.vertices(), default=0)
    lines = [f"{n} {g.arc_count()} 0"]
    for v in range(1, n + 1):
        if v in g:
            lines.append(" ".join(str(w) for w in g.successors(v)))
        else:
            lines.append("")
    return "\n".join(lines) + "\n"


def write_solution(vertices) -> str:
    """Solution text: ascending ids, one per line; empty set gives ''. """
    chosen = sorted(vertices)
    if not chosen:
        return ""
    return "\n".join(str(v) for v in chosen) + "\n"


def parse_solution(data: str | bytes) -> list[int]:
    out: list[int] = []
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        if raw.startswith("%") or not raw.strip():
            continue
        try:
            out.append(int(raw.strip()))
        except ValueError:
            raise PaceParseError(f"non-integer solution line {raw!r}", lineno) from None
    return out
