"""Line-oriented text formats for instances, schedules and expansion dumps.

Instance files ('#' starts a comment, blank lines ignored):

    mapf 1
    vertices <n>
    edges <m>
    <u> <v>            (m lines, 0-indexed)
    agents <k>
    <start> <target>   (k lines)
    makespan <l>
    swaps allowed|forbidden

Schedule files: a `schedule <l>` header followed by l rows of k vertex ids in
agent order.  Generator metadata sidecars are key=value lines.
"""

from __future__ import annotations

from .expansion import ExpansionMode, TimeExpandedGraph
from .graphs import Graph
from .instance import Instance, Schedule, SwapPolicy


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _content_lines(text: str):
    """(line_no, stripped content) for every non-blank, non-comment line."""
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield idx, line


class _Cursor:
    def __init__(self, text: str):
        self._lines = list(_content_lines(text))
        self._pos = 0
        self.last_line_no = 0

    def next(self, what: str) -> str:
        if self._pos >= len(self._lines):
            raise ParseError(self.last_line_no + 1, f"unexpected end of file, expected {what}")
        no, line = self._lines[self._pos]
        self._pos += 1
        self.last_line_no = no
        return line

    def done(self) -> bool:
        return self._pos >= len(self._lines)

    def next_keyword_int(self, keyword: str) -> int:
        line = self.next(f"'{keyword} <value>'")
        parts = line.split()
        if len(parts) != 2 or parts[0] != keyword:
            raise ParseError(self.last_line_no, f"expected '{keyword} <value>', got '{line}'")
        try:
            return int(parts[1])
        except ValueError:
            raise ParseError(self.last_line_no, f"'{parts[1]}' is not an integer") from None

    def next_int_pair(self, what: str) -> tuple[int, int]:
        line = self.next(what)
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(self.last_line_no, f"expected two integers for {what}, got '{line}'")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(self.last_line_no, f"non-integer in {what}: '{line}'") from None


def parse_instance(text: str) -> Instance:
    cur = _Cursor(text)
    header = cur.next("'mapf 1' header")
    if header.split() != ["mapf", "1"]:
        raise ParseError(cur.last_line_no, f"expected 'mapf 1' header, got '{header}'")
    n = cur.next_keyword_int("vertices")
    if n < 0:
        raise ParseError(cur.last_line_no, "vertex count must be non-negative")
    m = cur.next_keyword_int("edges")
    edges = [cur.next_int_pair("edge") for _ in range(m)]
    k = cur.next_keyword_int("agents")
    agents = [cur.next_int_pair("agent start/target") for _ in range(k)]
    makespan = cur.next_keyword_int("makespan")
    swaps_line = cur.next("'swaps allowed|forbidden'")
    parts = swaps_line.split()
    if len(parts) != 2 or parts[0] != "swaps" or parts[1] not in ("allowed", "forbidden"):
        raise ParseError(cur.last_line_no, f"expected 'swaps allowed|forbidden', got '{swaps_line}'")
    if not cur.done():
        raise ParseError(cur.last_line_no + 1, "trailing content after instance")
    try:
        inst = Instance(
            graph=Graph(n, edges),
            starts=tuple(s for s, _ in agents),
            targets=tuple(t for _, t in agents),
            makespan=makespan,
            policy=SwapPolicy(parts[1]),
        )
    except ValueError as exc:
        raise ParseError(cur.last_line_no, str(exc)) from None
    return inst


def write_instance(inst: Instance) -> str:
    lines = ["mapf 1", f"vertices {inst.graph.n}", f"edges {inst.graph.m}"]
    lines.extend(f"{u} {v}" for u, v in inst.graph.edges())
    lines.append(f"agents {inst.k}")
    lines.extend(f"{s} {t}" for s, t in zip(inst.starts, inst.targets))
    lines.append(f"makespan {inst.makespan}")
    lines.append(f"swaps {inst.policy.value}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> Schedule:
    cur = _Cursor(text)
    length = cur.next_keyword_int("schedule")
    if length < 0:
        raise ParseError(cur.last_line_no, "schedule length must be non-negative")
    rows = []
    width = None
    for _ in range(length):
        line = cur.next("schedule row")
        try:
            row = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(cur.last_line_no, f"non-integer in schedule row '{line}'") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(cur.last_line_no, "schedule rows have inconsistent widths")
        rows.append(row)
    if not cur.done():
        raise ParseError(cur.last_line_no + 1, "trailing content after schedule")
    return Schedule(tuple(rows))


def write_schedule(sched: Schedule) -> str:
    lines = [f"schedule {len(sched)}"]
    lines.extend(" ".join(str(v) for v in row) for row in sched.rows)
    return "\n".join(lines) + "\n"


def write_teg(teg: TimeExpandedGraph) -> str:
    """Plain arc-list dump of an expanded graph for external inspection."""
    mode = "swap" if teg.mode is ExpansionMode.SWAP else "swapfree"
    lines = [f"teg {mode} {teg.layers}"]
    for u in range(teg.node_count):
        for v in teg.successors[u]:
            lines.append(f"arc {u} {v}")
    return "\n".join(lines) + "\n"


def write_metadata(entries: dict[str, str]) -> str:
    return "".join(f"{key}={value}\n" for key, value in entries.items())


def parse_metadata(text: str) -> dict[str, str]:
    entries = {}
    for no, line in _content_lines(text):
        if "=" not in line:
            raise ParseError(no, f"expected key=value, got '{line}'")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries
