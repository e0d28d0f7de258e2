"""
Line-oriented text format for set families, graphs and patterns.

    p hs <d> <n> <m> <k>     followed by m lines of space-separated elements
    p sp <d> <n> <m> <k>     same body
    p gr <n> <m> <k>         followed by m lines `e <u> <v>`
    p pat <v>                followed by `e <i> <j>` lines (pattern files only)

Lines starting with `c` are comments.
"""

from typing import Iterator

import structlog
from pydantic import ValidationError

from src.core.errors import InstanceFormatError
from src.core.model import (
    Edge,
    GraphInstance,
    Instance,
    InstanceKind,
    Pattern,
    PatternSet,
    SetTuple,
    edge_problem,
    set_problem,
)

# Initialize logger for this module
logger = structlog.get_logger(__name__)


def _is_comment(line: str) -> bool:
    return line == "c" or line.startswith("c ") or line.startswith("c\t")


def _numbered_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if _is_comment(line):
            continue
        yield number, line


def _ints(tokens: list[str], line: int, what: str) -> list[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise InstanceFormatError(f"non-integer {what}: {' '.join(tokens)}", line)


def _parse_header(line: str, number: int) -> tuple[InstanceKind, list[int]]:
    tokens = line.split()
    if len(tokens) < 2 or tokens[0] != "p":
        raise InstanceFormatError("malformed header, expected 'p <kind> ...'", number)

    try:
        kind = InstanceKind(tokens[1])
    except ValueError:
        raise InstanceFormatError(f"unknown instance kind '{tokens[1]}'", number)

    expected = 3 if kind == InstanceKind.GRAPH else 4
    values = _ints(tokens[2:], number, "header field")
    if len(values) != expected:
        raise InstanceFormatError(
            f"malformed header, expected {expected} numbers after 'p {kind.value}'",
            number,
        )
    if any(v < 0 for v in values):
        raise InstanceFormatError("negative header field", number)
    return kind, values


def parse_instance(text: str) -> Instance | GraphInstance:
    """
    Parses one instance. Sets are canonicalized (sorted); family order is kept.
    Every validation failure is reported with its line number.
    """
    lines = _numbered_lines(text)

    # 1. Header (leading blank lines are skipped)
    for number, line in lines:
        if line:
            kind, values = _parse_header(line, number)
            header_line = number
            break
    else:
        raise InstanceFormatError("missing header")

    if kind == InstanceKind.GRAPH:
        instance = _parse_graph_body(lines, values, header_line)
    else:
        instance = _parse_family_body(lines, kind, values, header_line)

    logger.debug("instance_parsed", kind=kind.value, n=instance.n, m=instance.m)
    return instance


def _parse_family_body(lines, kind, values, header_line) -> Instance:
    d, n, m, k = values
    if d < 1 or n < 1:
        raise InstanceFormatError("d and n must be positive", header_line)

    family: list[SetTuple] = []
    last_line = header_line
    for number, line in lines:
        last_line = number
        if len(family) == m:
            if line:
                raise InstanceFormatError(f"more than the declared {m} sets", number)
            continue
        # Inside the body a blank line is an empty set
        members = tuple(sorted(_ints(line.split(), number, "element")))
        problem = set_problem(members, n, d)
        if problem:
            raise InstanceFormatError(problem, number)
        family.append(members)

    if len(family) < m:
        raise InstanceFormatError(
            f"expected {m} sets, found {len(family)}", last_line
        )

    try:
        return Instance(kind=kind, d=d, n=n, k=k, family=family)
    except ValidationError as e:
        raise InstanceFormatError(str(e), header_line) from e


def _parse_edge_line(line: str, number: int) -> Edge:
    tokens = line.split()
    if len(tokens) != 3 or tokens[0] != "e":
        raise InstanceFormatError("malformed edge line, expected 'e <u> <v>'", number)
    u, v = _ints(tokens[1:], number, "vertex")
    return min(u, v), max(u, v)


def _parse_graph_body(lines, values, header_line) -> GraphInstance:
    n, m, k = values
    if n < 1:
        raise InstanceFormatError("n must be positive", header_line)

    edges: list[Edge] = []
    seen: set[Edge] = set()
    last_line = header_line
    for number, line in lines:
        last_line = number
        if not line:
            continue
        if len(edges) == m:
            raise InstanceFormatError(f"more than the declared {m} edges", number)
        edge = _parse_edge_line(line, number)
        problem = edge_problem(edge, n, seen)
        if problem:
            raise InstanceFormatError(problem, number)
        seen.add(edge)
        edges.append(edge)

    if len(edges) < m:
        raise InstanceFormatError(f"expected {m} edges, found {len(edges)}", last_line)

    return GraphInstance(n=n, k=k, edges=edges)


def serialize_instance(inst: Instance | GraphInstance) -> str:
    if isinstance(inst, GraphInstance):
        head = f"p gr {inst.n} {inst.m} {inst.k}\n"
        return head + "".join(f"e {u} {v}\n" for u, v in inst.edges)

    head = f"p {inst.kind.value} {inst.d} {inst.n} {inst.m} {inst.k}\n"
    return head + "".join(" ".join(map(str, s)) + "\n" for s in inst.family)


def parse_patterns(text: str, name: str = "H") -> PatternSet:
    """Parses one or more `p pat <v>` blocks into a pattern set."""
    blocks: list[tuple[int, int, list[Edge]]] = []
    for number, line in _numbered_lines(text):
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if len(tokens) != 3 or tokens[1] != "pat":
                raise InstanceFormatError("malformed header, expected 'p pat <v>'", number)
            (order,) = _ints(tokens[2:], number, "pattern order")
            blocks.append((number, order, []))
            continue
        if not blocks:
            raise InstanceFormatError("edge before any 'p pat' header", number)
        blocks[-1][2].append(_parse_edge_line(line, number))

    if not blocks:
        raise InstanceFormatError("no pattern found")

    patterns = []
    for index, (number, order, edges) in enumerate(blocks):
        label = name if len(blocks) == 1 else f"{name}{index + 1}"
        try:
            patterns.append(Pattern(name=label, order=order, edges=edges))
        except ValidationError as e:
            raise InstanceFormatError(str(e), number) from e
    return PatternSet(patterns=patterns)


def serialize_pattern(pattern: Pattern) -> str:
    return f"p pat {pattern.order}\n" + "".join(
        f"e {u} {v}\n" for u, v in pattern.edges
    )
