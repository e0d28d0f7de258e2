from enum import Enum
from typing import Iterable

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# A set of the family: strictly increasing element ids
SetTuple = tuple[int, ...]
Edge = tuple[int, int]


class InstanceKind(str, Enum):
    HITTING_SET = "hs"
    SET_PACKING = "sp"
    GRAPH = "gr"


class Instance(BaseModel):
    """
    A d-Hitting Set or d-Set Packing instance over the ground set 1..n.
    Family order is significant: every streaming kernel is defined relative to it.
    """

    model_config = ConfigDict(frozen=True)

    kind: InstanceKind = InstanceKind.HITTING_SET
    d: int = Field(..., ge=1, description="Maximum set size")
    n: int = Field(..., ge=1, description="Ground set size")
    k: int = Field(..., ge=0, description="Parameter")
    family: tuple[SetTuple, ...] = Field(default_factory=tuple)

    @field_validator("family", mode="before")
    @classmethod
    def _canonicalize_sets(cls, value: Iterable[Iterable[int]]):
        return tuple(tuple(sorted(members)) for members in value)

    @model_validator(mode="after")
    def _check_family(self) -> "Instance":
        if self.kind == InstanceKind.GRAPH:
            raise ValueError("graph instances are GraphInstance, not Instance")
        for index, members in enumerate(self.family):
            problem = set_problem(members, self.n, self.d)
            if problem:
                raise ValueError(f"set {index}: {problem}")
        return self

    @property
    def m(self) -> int:
        return len(self.family)


def set_problem(members: SetTuple, n: int, d: int) -> str | None:
    """Returns why a canonical (sorted) set is invalid, or None."""
    if not members:
        return "empty set"
    if len(members) > d:
        return f"set size {len(members)} exceeds d={d}"
    if members[0] < 1 or members[-1] > n:
        return f"element id out of range 1..{n}"
    if any(a == b for a, b in zip(members, members[1:])):
        return "duplicate element in set"
    return None


def _canonical_edges(value: Iterable[Iterable[int]]) -> tuple[Edge, ...]:
    edges = []
    for pair in value:
        u, v = pair
        edges.append((min(u, v), max(u, v)))
    return tuple(edges)


def edge_problem(edge: Edge, n: int, seen: set[Edge]) -> str | None:
    u, v = edge
    if u == v:
        return "self-loop"
    if u < 1 or v > n:
        return f"vertex id out of range 1..{n}"
    if edge in seen:
        return "duplicate edge"
    return None


class GraphInstance(BaseModel):
    """A simple undirected graph on vertices 1..n plus the parameter k."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Vertex count")
    k: int = Field(..., ge=0, description="Parameter")
    edges: tuple[Edge, ...] = Field(default_factory=tuple)

    @field_validator("edges", mode="before")
    @classmethod
    def _canonicalize_edges(cls, value):
        return _canonical_edges(value)

    @model_validator(mode="after")
    def _check_edges(self) -> "GraphInstance":
        seen: set[Edge] = set()
        for index, edge in enumerate(self.edges):
            problem = edge_problem(edge, self.n, seen)
            if problem:
                raise ValueError(f"edge {index}: {problem}")
            seen.add(edge)
        return self

    @property
    def kind(self) -> InstanceKind:
        return InstanceKind.GRAPH

    @property
    def m(self) -> int:
        return len(self.edges)


class Pattern(BaseModel):
    """A small forbidden/packed graph H on vertices 1..order."""

    model_config = ConfigDict(frozen=True)

    name: str = "H"
    order: int = Field(..., ge=1)
    edges: tuple[Edge, ...] = Field(default_factory=tuple)

    @field_validator("edges", mode="before")
    @classmethod
    def _canonicalize_edges(cls, value):
        return _canonical_edges(value)

    @model_validator(mode="after")
    def _check_edges(self) -> "Pattern":
        seen: set[Edge] = set()
        for edge in self.edges:
            problem = edge_problem(edge, self.order, seen)
            if problem:
                raise ValueError(f"pattern {self.name}: {problem}")
            seen.add(edge)
        return self


class PatternSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    patterns: tuple[Pattern, ...] = Field(..., min_length=1)

    @property
    def d(self) -> int:
        return max(p.order for p in self.patterns)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(sorted({p.order for p in self.patterns}))


BUILTIN_PATTERNS: dict[str, Pattern] = {
    "k3": Pattern(name="k3", order=3, edges=((1, 2), (1, 3), (2, 3))),
    "p3": Pattern(name="p3", order=3, edges=((1, 2), (2, 3))),
}


def canonical_relabel(inst: Instance) -> Instance:
    """
    Renames elements to 1..n' in order of first occurrence in the family stream.
    An empty family keeps n'=1 so the header stays well-formed.
    """
    mapping: dict[int, int] = {}
    relabeled = []
    for members in inst.family:
        for element in members:
            if element not in mapping:
                mapping[element] = len(mapping) + 1
        relabeled.append([mapping[element] for element in members])

    return Instance(
        kind=inst.kind,
        d=inst.d,
        n=max(1, len(mapping)),
        k=inst.k,
        family=relabeled,
    )


def canonical_no_instance(kind: InstanceKind, d: int = 2) -> Instance | GraphInstance:
    """The fixed unsatisfiable instance a kernel emits once it proves infeasibility."""
    if kind == InstanceKind.HITTING_SET:
        return Instance(kind=kind, d=d, n=1, k=0, family=[(1,)])
    if kind == InstanceKind.SET_PACKING:
        return Instance(kind=kind, d=d, n=1, k=1, family=[])
    return GraphInstance(n=2, k=0, edges=[(1, 2)])
