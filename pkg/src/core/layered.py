"""
Layered streaming engine shared by the hitting-set, set-packing, EDS and
graph kernels.

Layer l keeps a set F at position t iff layer l+1 keeps it and, for every
C ⊆ F with |C| = l, fewer than base^(d-|C|) sets kept by layer l+1 before t
contain C. Layer d keeps the first copy of every set. Nothing is stored:
each count is obtained by simulating layer l+1 again.
"""

from collections import Counter
from itertools import combinations
from typing import Callable, Iterable, Protocol

import structlog

from src.core.harness import InputTape, OutputSink, SpaceMeter
from src.core.model import Instance, SetTuple

# Initialize logger for this module
logger = structlog.get_logger(__name__)

_FRAME_REGISTERS = ("t", "F", "C", "s", "count")


class FamilyTape(Protocol):
    """A stream of positions; a position holds a set or nothing (None)."""

    @property
    def positions(self) -> int: ...

    def read(self, p: int) -> SetTuple | None: ...


class LayeredSimulation:
    """
    Decides membership in the layer families by nested re-simulation.
    Recursion depth is at most d+1 and every frame meters its registers.
    """

    def __init__(
        self,
        tape: FamilyTape,
        d: int,
        base: int,
        meter: SpaceMeter,
        distinct: bool = False,
    ):
        self._tape = tape
        self._meter = meter
        self.d = d
        self.base = base
        # Layer d is the identity when the stream cannot repeat a set
        self._distinct = distinct
        self._thresholds = tuple(base ** (d - size) for size in range(d + 1))
        meter.set("base", base)

    def threshold(self, core_size: int) -> int:
        return self._thresholds[core_size]

    def would_output(self, layer: int, t: int) -> bool:
        if not 0 <= layer <= self.d:
            raise ValueError(f"layer {layer} outside 0..{self.d}")
        members = self._tape.read(t)
        if members is None:
            return False
        return self._keeps(layer, t, members)

    def _keeps(self, layer: int, t: int, members: SetTuple) -> bool:
        meter = self._meter
        frame = f"L{layer}"
        meter.set(f"{frame}.t", t)
        meter.hold(f"{frame}.F", members)
        try:
            if layer == self.d:
                return self._distinct or self._first_copy(frame, t, members)

            if not self._keeps(layer + 1, t, members):
                return False

            # Subsets of size `layer`, lexicographic
            for core in combinations(members, layer):
                meter.hold(f"{frame}.C", core)
                if self._count_reaches(frame, layer, core, t):
                    return False
            return True
        finally:
            for register in _FRAME_REGISTERS:
                meter.release(f"{frame}.{register}")

    def _count_reaches(self, frame: str, layer: int, core: SetTuple, t: int) -> bool:
        """Do at least threshold(|C|) sets kept by layer+1 before t contain C?"""
        meter = self._meter
        threshold = self._thresholds[len(core)]
        count = 0
        meter.set(f"{frame}.count", count)

        for s in range(t):
            # Remaining positions can no longer reach the threshold
            if count + (t - s) < threshold:
                return False
            meter.set(f"{frame}.s", s)

            other = self._tape.read(s)
            if other is None or not _contains(other, core):
                continue
            if self._keeps(layer + 1, s, other):
                count += 1
                meter.set(f"{frame}.count", count)
                if count >= threshold:
                    return True
        return False

    def _first_copy(self, frame: str, t: int, members: SetTuple) -> bool:
        for s in range(t):
            self._meter.set(f"{frame}.s", s)
            if self._tape.read(s) == members:
                return False
        return True


def _contains(members: SetTuple, core: SetTuple) -> bool:
    return all(x in members for x in core)


class StreamRelabeler:
    """
    Relabeling layer for a kept stream: the label of an element is one plus
    the number of distinct elements whose first kept occurrence comes earlier.
    Occurrences are ordered by (position, index within the sorted set).
    """

    def __init__(self, tape: FamilyTape, keep: Callable[[int], bool], meter: SpaceMeter):
        self._tape = tape
        self._keep = keep
        self._meter = meter

    def relabel(self, members: SetTuple, horizon: int) -> SetTuple:
        """Labels for the elements of a kept set; every occurrence lies at <= horizon."""
        meter = self._meter
        firsts = [self._first_occurrence(e, horizon) for e in members]
        meter.hold("R.firsts", [x for first in firsts for x in first])

        labels = [0] * len(members)
        last = max(firsts)
        count = 0
        meter.set("R.count", count)
        try:
            for p in range(last[0] + 1):
                meter.set("R.p", p)
                raw = self._tape.read(p)
                if raw is None or not self._keep(p):
                    continue
                for i, f in enumerate(raw):
                    meter.set("R.i", i)
                    for j, first in enumerate(firsts):
                        if first == (p, i):
                            labels[j] = count + 1
                            meter.hold("R.labels", labels)
                    if (p, i) >= last:
                        return tuple(labels)
                    if self._is_first(f, p):
                        count += 1
                        meter.set("R.count", count)
            return tuple(labels)
        finally:
            for register in ("firsts", "labels", "count", "p", "i", "q"):
                meter.release(f"R.{register}")

    def _first_occurrence(self, e: int, horizon: int) -> tuple[int, int]:
        for p in range(horizon + 1):
            self._meter.set("R.q", p)
            raw = self._tape.read(p)
            if raw is not None and e in raw and self._keep(p):
                return p, raw.index(e)
        raise ValueError(f"element {e} does not occur in the kept stream up to {horizon}")

    def _is_first(self, f: int, p: int) -> bool:
        for q in range(p):
            self._meter.set("R.q", q)
            raw = self._tape.read(q)
            if raw is not None and f in raw and self._keep(q):
                return False
        return True


class LayeredKernel:
    """
    Streaming kernel over a set-family tape that emits the layer family F(layer),
    relabeled by first occurrence unless relabel=False.

    `base_of(d, k)` gives the threshold base: k+1 for hitting set,
    d(k-1)+1 for set packing.
    """

    def __init__(
        self,
        base_of: Callable[[int, int], int],
        *,
        layer: int = 0,
        relabel: bool = True,
    ):
        self._base_of = base_of
        self.layer = layer
        self.relabel = relabel

    def run(self, tape: InputTape, meter: SpaceMeter, sink: OutputSink) -> None:
        inst: Instance = tape.instance
        d, k = inst.d, inst.k
        base = self._base_of(d, k)
        layer = self.layer
        log = logger.bind(kind=inst.kind.value, d=d, k=k, base=base, layer=layer)

        if not 0 <= layer <= d:
            raise ValueError(f"layer {layer} outside 0..{d}")

        simulation = LayeredSimulation(tape, d, base, meter)

        # Below any kept position, layer 0 keeps exactly what layer 1 keeps
        keep_layer = layer + 1 if layer == 0 else layer
        relabeler = StreamRelabeler(
            tape, lambda p: simulation.would_output(keep_layer, p), meter
        )

        # Layer 0 rejects everything once base^d sets are out
        limit = base**d if layer == 0 else None

        emitted = 0
        labels_used = 0
        for t in range(tape.positions):
            meter.set("cursor", t)
            if not simulation.would_output(layer, t):
                continue

            members = tape.read(t)
            if self.relabel:
                members = relabeler.relabel(members, t)
                labels_used = max(labels_used, *members)
                meter.set("n_out", labels_used)
            sink.write(members)

            emitted += 1
            meter.set("emitted", emitted)
            if limit is not None and emitted >= limit:
                break

        n_out = max(1, labels_used) if self.relabel else inst.n
        sink.write_header(kind=inst.kind, d=d, n=n_out, k=k)
        log.info("layered_pass_complete", emitted=emitted, reads=tape.reads)


def superset_counts_bounded(
    family: Iterable[SetTuple], d: int, base: int, min_core: int = 0
) -> bool:
    """
    True iff every C with min_core <= |C| <= d has at most base^(d-|C|)
    supersets in the family. Only cores inside some member are counted.
    """
    counts: Counter[SetTuple] = Counter()
    size = 0
    for members in family:
        size += 1
        for core_size in range(max(1, min_core), len(members) + 1):
            for core in combinations(members, core_size):
                counts[core] += 1

    if min_core == 0 and size > base**d:
        return False
    return all(count <= base ** (d - len(core)) for core, count in counts.items())
