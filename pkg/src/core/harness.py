"""
Streaming harness: a read-only input tape, a write-only output sink and a
meter for working-state bits.

Algorithms run under the harness declare every piece of working state through
the SpaceMeter (a register per counter, cursor or held set). Nothing is checked
at the type level; the meter only records, and raises when armed with a budget.
"""

from typing import Iterable, Protocol

import structlog
from pydantic import BaseModel, Field

from src.core.config import settings as _settings
from src.core.errors import SpaceBudgetExceeded, TapeIndexError
from src.core.model import (
    Edge,
    GraphInstance,
    Instance,
    InstanceKind,
    SetTuple,
)
from src.core.observability import trace_run

# Initialize logger for this module
logger = structlog.get_logger(__name__)


def bit_width(value: int) -> int:
    """A register holding v costs max(1, ceil(log2(v+1))) bits."""
    return max(1, int(value).bit_length())


# ---------------------------------------------------------
# 1. Input tape
# ---------------------------------------------------------
class InputTape:
    """
    Read-only view of an instance. Every access to a set (or an edge) counts
    as one read; header fields are free.
    """

    def __init__(self, source: Instance | GraphInstance):
        self._source = source
        self._items: tuple[SetTuple, ...] | tuple[Edge, ...] = (
            source.edges if isinstance(source, GraphInstance) else source.family
        )
        # Adjacency lookups model an adjacency-matrix encoding of the graph
        self._adjacency: frozenset[Edge] = (
            frozenset(source.edges) if isinstance(source, GraphInstance) else frozenset()
        )
        self.reads = 0

    @property
    def instance(self) -> Instance | GraphInstance:
        return self._source

    @property
    def positions(self) -> int:
        return len(self._items)

    def read(self, t: int) -> SetTuple:
        if not 0 <= t < len(self._items):
            raise TapeIndexError(f"tape index {t} out of range 0..{len(self._items) - 1}")
        self.reads += 1
        return self._items[t]

    def has_edge(self, u: int, v: int) -> bool:
        if not isinstance(self._source, GraphInstance):
            raise TypeError("adjacency queries need a graph tape")
        self.reads += 1
        return (min(u, v), max(u, v)) in self._adjacency


def tape_read_set(tape: InputTape, t: int) -> SetTuple:
    return tape.read(t)


# ---------------------------------------------------------
# 2. Space meter
# ---------------------------------------------------------
class SpaceMeter:
    """
    Tracks live registers and the peak of their summed widths.
    With a budget, exceeding it raises SpaceBudgetExceeded.
    """

    def __init__(self, budget: int | None = None):
        self.budget = budget if budget is not None else _settings.BIT_BUDGET
        self._registers: dict[str, int] = {}
        self._live = 0
        self.peak_bits = 0

    @property
    def live_bits(self) -> int:
        return self._live

    def set(self, name: str, value: int) -> None:
        self._store(name, bit_width(value))

    def hold(self, name: str, elements: Iterable[int]) -> None:
        """A held set costs the sum of its element widths (at least 1 bit)."""
        self._store(name, max(1, sum(bit_width(e) for e in elements)))

    def release(self, name: str) -> None:
        self._live -= self._registers.pop(name, 0)

    def _store(self, name: str, bits: int) -> None:
        self._live += bits - self._registers.get(name, 0)
        self._registers[name] = bits
        if self._live > self.peak_bits:
            self.peak_bits = self._live
            if self.budget is not None and self._live > self.budget:
                raise SpaceBudgetExceeded(self._live, self.budget, name)


def register_set(meter: SpaceMeter, name: str, value: int) -> None:
    meter.set(name, value)


def space_bound(d: int, encoded_size: int) -> int:
    """SPACE_CONSTANT * d^2 * ceil(log2(N + 2)) for an input of N characters."""
    return _settings.SPACE_CONSTANT * d * d * (encoded_size + 1).bit_length()


# ---------------------------------------------------------
# 3. Output sink and run report
# ---------------------------------------------------------
class OutputSink:
    """Write-only output tape. Only the harness drains it."""

    def __init__(self):
        self._header: dict | None = None
        self._items: list[tuple[int, ...]] = []

    def write_header(self, *, kind: InstanceKind, n: int, k: int, d: int = 2) -> None:
        self._header = {"kind": InstanceKind(kind), "n": n, "k": k, "d": d}

    def write(self, item: Iterable[int]) -> None:
        self._items.append(tuple(item))

    @property
    def emitted(self) -> int:
        return len(self._items)

    def _drain(self) -> tuple[dict | None, list[tuple[int, ...]]]:
        return self._header, self._items


class RunReport(BaseModel):
    peak_bits: int = Field(0, ge=0)
    tape_reads: int = Field(0, ge=0)
    sets_emitted: int = Field(0, ge=0)

    def format(self) -> str:
        return (
            f"peak_bits={self.peak_bits} reads={self.tape_reads} "
            f"emitted={self.sets_emitted}"
        )


class StreamingKernel(Protocol):
    """A kernel that reads a tape, meters its state and writes to a sink."""

    def run(self, tape: InputTape, meter: SpaceMeter, sink: OutputSink) -> None: ...


def _assemble(header: dict | None, items: list[tuple[int, ...]]) -> Instance | GraphInstance:
    if header is None:
        raise ValueError("kernel finished without writing an output header")
    if header["kind"] == InstanceKind.GRAPH:
        return GraphInstance(n=header["n"], k=header["k"], edges=items)
    return Instance(
        kind=header["kind"], d=header["d"], n=header["n"], k=header["k"], family=items
    )


@trace_run
def run_metered(
    kernel: StreamingKernel, tape: InputTape, meter: SpaceMeter | None = None
) -> tuple[Instance | GraphInstance, RunReport]:
    """Runs a streaming kernel and returns its output with the run report."""
    meter = meter if meter is not None else SpaceMeter()
    sink = OutputSink()

    kernel.run(tape, meter, sink)

    header, items = sink._drain()
    report = RunReport(
        peak_bits=meter.peak_bits, tape_reads=tape.reads, sets_emitted=len(items)
    )
    return _assemble(header, items), report
