"""MovingAI ``.map`` / ``.scen`` parsing and the 4-connected search graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

__all__ = [
    "AgentTask",
    "GridMap",
    "MapFormatError",
    "Scenario",
    "ScenarioFormatError",
    "SearchGraph",
    "build_graph",
    "parse_map",
    "parse_scen",
    "render_map",
    "render_scen",
]

PASSABLE = frozenset(".G")
BLOCKED = frozenset("@OTW")


class MapFormatError(ValueError):
    pass


class ScenarioFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GridMap:
    width: int
    height: int
    passable: tuple[bool, ...]  # row-major, index y * width + x
    rows: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise MapFormatError("map dimensions must be at least 1x1")
        if len(self.passable) != self.width * self.height:
            raise MapFormatError(
                f"expected {self.width * self.height} cells, got {len(self.passable)}"
            )

    def is_passable(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height and self.passable[y * self.width + x]

    @property
    def num_passable(self) -> int:
        return sum(self.passable)

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "GridMap":
        """Build from rows of map characters (``.`` open, ``@`` blocked, ...)."""
        text = f"type octile\nheight {len(rows)}\nwidth {len(rows[0]) if rows else 0}\nmap\n"
        return parse_map(text + "\n".join(rows) + "\n")


@dataclass(frozen=True, eq=False)
class SearchGraph:
    """Passable cells as vertices ``0..n-1`` with cardinal-move adjacency.

    Waiting is not an edge; planners add it explicitly.
    """

    width: int
    height: int
    coords: tuple[tuple[int, int], ...]  # vertex -> (x, y)
    neighbors: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False)  # (x, y) -> vertex

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def num_vertices(self) -> int:
        return len(self.coords)

    def vertex(self, x: int, y: int) -> int:
        try:
            return self.index[(x, y)]
        except KeyError:
            raise KeyError(f"cell ({x}, {y}) is not a passable vertex") from None

    def edges(self) -> Iterator[tuple[int, int]]:
        """Undirected edges as ``(u, v)`` with ``u < v``."""
        for u, nbrs in enumerate(self.neighbors):
            for v in nbrs:
                if u < v:
                    yield u, v


@dataclass(frozen=True)
class AgentTask:
    agent_id: int
    start: int
    goal: int


@dataclass(frozen=True)
class Scenario:
    map_name: str
    tasks: tuple[AgentTask, ...]

    def first(self, n: int) -> list[AgentTask]:
        """The standard ``n``-agent instance: the first ``n`` tasks."""
        if n > len(self.tasks):
            raise ValueError(f"scenario has {len(self.tasks)} tasks, {n} requested")
        return list(self.tasks[:n])


def _decode(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MapFormatError(f"non-ASCII content: {exc}") from None
    return data


def _header_int(line: str, key: str, err) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise err(f"expected '{key} <int>', got {line!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise err(f"bad {key} value {parts[1]!r}") from None
    if value < 1:
        raise err(f"{key} must be positive, got {value}")
    return value


def parse_map(data: bytes | str) -> GridMap:
    """Parse a MovingAI ``.map`` file.

    ``.`` and ``G`` are passable; ``@``, ``O``, ``T`` and ``W`` are blocked.
    Any other grid character, a malformed header or a grid that does not
    match the declared size raises :class:`MapFormatError`.
    """
    lines = [ln.rstrip() for ln in _decode(data).replace("\r\n", "\n").split("\n")]
    while lines and not lines[-1]:
        lines.pop()
    if len(lines) < 4:
        raise MapFormatError("truncated header")
    if lines[0].split() != ["type", "octile"]:
        raise MapFormatError(f"expected 'type octile', got {lines[0]!r}")
    height = _header_int(lines[1], "height", MapFormatError)
    width = _header_int(lines[2], "width", MapFormatError)
    if lines[3].strip() != "map":
        raise MapFormatError(f"expected 'map', got {lines[3]!r}")
    rows = lines[4:]
    if len(rows) < height:
        raise MapFormatError(f"header declares height {height}, found {len(rows)} rows")
    if len(rows) > height:
        raise MapFormatError(f"header declares height {height}, found {len(rows)} rows")
    cells = []
    for y, row in enumerate(rows):
        if len(row) != width:
            raise MapFormatError(f"row {y} has length {len(row)}, expected {width}")
        for x, ch in enumerate(row):
            if ch in PASSABLE:
                cells.append(True)
            elif ch in BLOCKED:
                cells.append(False)
            else:
                raise MapFormatError(f"unknown map character {ch!r} at ({x}, {y})")
    return GridMap(width, height, tuple(cells), tuple(rows))


def render_map(grid: GridMap) -> str:
    rows = grid.rows or tuple(
        "".join("." if grid.passable[y * grid.width + x] else "@" for x in range(grid.width))
        for y in range(grid.height)
    )
    return f"type octile\nheight {grid.height}\nwidth {grid.width}\nmap\n" + "\n".join(rows) + "\n"


def build_graph(grid: GridMap) -> SearchGraph:
    coords = [
        (x, y) for y in range(grid.height) for x in range(grid.width) if grid.passable[y * grid.width + x]
    ]
    index = {c: i for i, c in enumerate(coords)}
    neighbors = []
    for x, y in coords:
        nbrs = []
        for dx, dy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
            j = index.get((x + dx, y + dy))
            if j is not None:
                nbrs.append(j)
        neighbors.append(tuple(sorted(nbrs)))
    return SearchGraph(grid.width, grid.height, tuple(coords), tuple(neighbors), index)


def parse_scen(data: bytes | str, graph: SearchGraph) -> Scenario:
    """Parse a MovingAI ``.scen`` file against the graph of its map.

    Each line is ``bucket map width height sx sy gx gy optimal``; coordinates
    are (column, row). Tasks keep file order and are numbered from 0.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ScenarioFormatError(f"non-ASCII content: {exc}") from None
    lines = [ln.strip() for ln in data.replace("\r\n", "\n").split("\n")]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ScenarioFormatError("empty scenario file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "version":
        raise ScenarioFormatError(f"expected 'version <n>' header, got {lines[0]!r}")
    if head[1] not in ("1", "1.0"):
        raise ScenarioFormatError(f"unknown scenario version {head[1]!r}")

    map_name = ""
    tasks = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) != 9:
            raise ScenarioFormatError(f"line {lineno}: expected 9 fields, got {len(fields)}")
        try:
            _bucket = int(fields[0])
            w, h, sx, sy, gx, gy = (int(f) for f in fields[2:8])
            float(fields[8])
        except ValueError:
            raise ScenarioFormatError(f"line {lineno}: non-numeric field") from None
        if (w, h) != (graph.width, graph.height):
            raise ScenarioFormatError(
                f"line {lineno}: map size {w}x{h} does not match {graph.width}x{graph.height}"
            )
        for label, x, y in (("start", sx, sy), ("goal", gx, gy)):
            if not (0 <= x < w and 0 <= y < h):
                raise ScenarioFormatError(f"line {lineno}: {label} ({x}, {y}) out of bounds")
            if (x, y) not in graph.index:
                raise ScenarioFormatError(f"line {lineno}: {label} ({x}, {y}) is blocked")
        map_name = map_name or fields[1]
        tasks.append(AgentTask(len(tasks), graph.index[(sx, sy)], graph.index[(gx, gy)]))
    return Scenario(map_name, tuple(tasks))


def render_scen(map_name: str, graph: SearchGraph, tasks: Sequence[AgentTask], optimal=None) -> str:
    """Write tasks in ``.scen`` format; ``optimal`` maps task -> length (default 0)."""
    out = ["version 1"]
    for k, task in enumerate(tasks):
        sx, sy = graph.coords[task.start]
        gx, gy = graph.coords[task.goal]
        length = optimal[k] if optimal is not None else 0
        out.append(
            "\t".join(
                str(v) for v in (k // 10, map_name, graph.width, graph.height, sx, sy, gx, gy, f"{length:.8f}")
            )
        )
    return "\n".join(out) + "\n"
