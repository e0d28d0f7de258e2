"""
Kernels over implicit families of pattern occurrences in a graph.

R_0 runs the layered hitting-set (or set-packing) kernel over the stream of
vertex sets that host a pattern; the sets are enumerated on the fly, never
stored. R_1 turns the kept occurrences into edges, emitting each edge once.
"""

from itertools import combinations
from math import comb
from typing import Callable, Iterator

import networkx as nx
import structlog
from networkx.algorithms.isomorphism import GraphMatcher

from src.core.errors import InfeasibleParametersError, TapeIndexError
from src.core.harness import InputTape, OutputSink, SpaceMeter, run_metered
from src.core.kernel_hs_logspace import hitting_set_base
from src.core.kernel_sp_logspace import packing_base
from src.core.layered import LayeredSimulation, StreamRelabeler
from src.core.model import (
    GraphInstance,
    Instance,
    InstanceKind,
    Pattern,
    PatternSet,
    SetTuple,
)

# Initialize logger for this module
logger = structlog.get_logger(__name__)

# Adjacency tables hold 2^(r(r-1)/2) entries per pattern order r
MAX_PATTERN_ORDER = 6


# ---------------------------------------------------------
# 1. Pattern matching
# ---------------------------------------------------------
class PatternMatcher:
    """
    Precomputes, per pattern order r, every adjacency mask on r labelled
    vertices that matches a pattern: induced copies (isomorphism) or
    spanning-subgraph copies (monomorphism).
    """

    def __init__(self, patterns: PatternSet, induced: bool):
        self.induced = induced
        self._tables: dict[int, frozenset[int]] = {}
        for order in patterns.orders:
            if order > MAX_PATTERN_ORDER:
                raise InfeasibleParametersError(
                    f"pattern order {order} exceeds {MAX_PATTERN_ORDER}"
                )
            same_order = [p for p in patterns.patterns if p.order == order]
            self._tables[order] = self._build_table(order, same_order)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(sorted(self._tables))

    def matches(self, order: int, mask: int) -> bool:
        table = self._tables.get(order)
        return table is not None and mask in table

    def _build_table(self, order: int, patterns: list[Pattern]) -> frozenset[int]:
        pairs = list(combinations(range(order), 2))
        targets = [_as_graph(order, [(u - 1, v - 1) for u, v in p.edges]) for p in patterns]

        table = set()
        for mask in range(1 << len(pairs)):
            host = _as_graph(order, [pairs[j] for j in range(len(pairs)) if mask >> j & 1])
            for target in targets:
                if self.induced:
                    hit = nx.is_isomorphic(host, target)
                else:
                    hit = GraphMatcher(host, target).subgraph_is_monomorphic()
                if hit:
                    table.add(mask)
                    break

        logger.debug(
            "pattern_table_built", order=order, induced=self.induced, masks=len(table)
        )
        return frozenset(table)


def _as_graph(order: int, edges) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(order))
    graph.add_edges_from(edges)
    return graph


def _mask(has_edge: Callable[[int, int], bool], vertices: SetTuple) -> int:
    mask = 0
    for j, (a, b) in enumerate(combinations(vertices, 2)):
        if has_edge(a, b):
            mask |= 1 << j
    return mask


def induced_match(g: GraphInstance, vertices: SetTuple, patterns: PatternSet) -> bool:
    """True iff G[S] is isomorphic to some pattern."""
    edges = set(g.edges)
    vertices = tuple(sorted(vertices))
    mask = _mask(lambda a, b: (a, b) in edges, vertices)
    return PatternMatcher(patterns, induced=True).matches(len(vertices), mask)


# ---------------------------------------------------------
# 2. Occurrence stream
# ---------------------------------------------------------
def _unrank(n: int, size: int, rank: int) -> SetTuple:
    """The rank-th size-subset of 1..n in lexicographic order."""
    chosen = []
    x = 1
    for slots in range(size, 0, -1):
        while True:
            starting_here = comb(n - x, slots - 1)
            if rank < starting_here:
                chosen.append(x)
                x += 1
                break
            rank -= starting_here
            x += 1
    return tuple(chosen)


class OccurrenceStream:
    """
    Vertex subsets of the pattern sizes, ordered by size and then
    lexicographically. A position reads as its subset when the subset hosts a
    pattern and as None otherwise. Every adjacency test is one tape read.
    """

    def __init__(
        self,
        tape: InputTape,
        matcher: PatternMatcher,
        meter: SpaceMeter | None = None,
    ):
        self._tape = tape
        self._matcher = matcher
        self._meter = meter if meter is not None else SpaceMeter()
        self._n = tape.instance.n
        self._blocks = [(size, comb(self._n, size)) for size in matcher.sizes]

    @property
    def positions(self) -> int:
        return sum(count for _, count in self._blocks)

    def subset_at(self, p: int) -> SetTuple:
        if not 0 <= p < self.positions:
            raise TapeIndexError(f"stream position {p} out of range")
        rank = p
        for size, count in self._blocks:
            if rank < count:
                return _unrank(self._n, size, rank)
            rank -= count
        raise TapeIndexError(f"stream position {p} out of range")

    def read(self, p: int) -> SetTuple | None:
        subset = self.subset_at(p)
        self._meter.hold("O.S", subset)
        mask = _mask(self._tape.has_edge, subset)
        return subset if self._matcher.matches(len(subset), mask) else None


class CoveredVertices:
    """View of an occurrence stream: the vertices of S with a neighbour in S."""

    def __init__(self, stream: OccurrenceStream, tape: InputTape):
        self._stream = stream
        self._tape = tape

    @property
    def positions(self) -> int:
        return self._stream.positions

    def read(self, p: int) -> SetTuple | None:
        subset = self._stream.read(p)
        if subset is None:
            return None
        covered = tuple(
            v
            for v in subset
            if any(self._tape.has_edge(v, w) for w in subset if w != v)
        )
        return covered or None


def occurrence_at(stream: OccurrenceStream, t: int) -> SetTuple:
    """The t-th qualifying vertex set of the stream."""
    seen = 0
    for p in range(stream.positions):
        subset = stream.read(p)
        if subset is None:
            continue
        if seen == t:
            return subset
        seen += 1
    raise TapeIndexError(f"occurrence {t} beyond the end of the stream ({seen} occurrences)")


# ---------------------------------------------------------
# 3. R_0 / R_1
# ---------------------------------------------------------
class OccurrenceKernel:
    """
    R_0 keeps occurrences with the layered kernel (base from `base_of`);
    R_1 emits each edge of a kept occurrence the first time it is seen.
    """

    def __init__(
        self,
        patterns: PatternSet,
        *,
        induced: bool,
        base_of: Callable[[int, int], int],
    ):
        self.patterns = patterns
        self.induced = induced
        self._base_of = base_of
        self._matcher = PatternMatcher(patterns, induced=induced)

    def kept_occurrences(
        self, tape: InputTape, meter: SpaceMeter
    ) -> Iterator[tuple[int, SetTuple, LayeredSimulation]]:
        """Yields (position, vertex set, simulation) for every occurrence R_0 keeps."""
        g: GraphInstance = tape.instance
        d = self.patterns.d
        base = self._base_of(d, g.k)
        stream = OccurrenceStream(tape, self._matcher, meter)
        simulation = LayeredSimulation(stream, d, base, meter, distinct=True)
        limit = base**d

        kept = 0
        for p in range(stream.positions):
            meter.set("cursor", p)
            if not simulation.would_output(0, p):
                continue
            kept += 1
            meter.set("kept", kept)
            yield p, stream.subset_at(p), simulation
            if kept >= limit:
                return

    def run(self, tape: InputTape, meter: SpaceMeter, sink: OutputSink) -> None:
        g: GraphInstance = tape.instance
        log = logger.bind(n=g.n, m=g.m, k=g.k, d=self.patterns.d, induced=self.induced)

        stream = OccurrenceStream(tape, self._matcher, meter)
        covered = CoveredVertices(stream, tape)

        labels_used = 0
        occurrences = 0
        for p, subset, simulation in self.kept_occurrences(tape, meter):
            occurrences += 1

            # Below a kept position, layer 0 keeps exactly what layer 1 keeps
            def keep(q: int) -> bool:
                return simulation.would_output(1, q)

            relabeler = StreamRelabeler(covered, keep, meter)
            labels: dict[int, int] | None = None

            for a, b in combinations(subset, 2):
                meter.hold("E", (a, b))
                if not tape.has_edge(a, b):
                    continue
                if self._emitted_before(stream, keep, a, b, p, meter):
                    continue
                if labels is None:
                    vertices = covered.read(p)
                    labels = dict(zip(vertices, relabeler.relabel(vertices, p)))
                    labels_used = max(labels_used, *labels.values())
                    meter.set("n_out", labels_used)
                sink.write((labels[a], labels[b]))
            meter.release("E")

        sink.write_header(kind=InstanceKind.GRAPH, n=max(1, labels_used), k=g.k)
        log.info("occurrence_kernel_complete", occurrences=occurrences, edges_out=sink.emitted)

    @staticmethod
    def _emitted_before(stream, keep, a: int, b: int, p: int, meter: SpaceMeter) -> bool:
        for q in range(p):
            meter.set("q", q)
            other = stream.read(q)
            if other is not None and a in other and b in other and keep(q):
                return True
        return False


class HFreeDeletionKernel(OccurrenceKernel):
    def __init__(self, patterns: PatternSet):
        super().__init__(patterns, induced=True, base_of=hitting_set_base)


class HPackingKernel(OccurrenceKernel):
    def __init__(self, pattern: Pattern):
        super().__init__(
            PatternSet(patterns=[pattern]), induced=False, base_of=packing_base
        )


def kernelize_hfree_vd(g: GraphInstance, patterns: PatternSet) -> GraphInstance:
    output, _ = run_metered(HFreeDeletionKernel(patterns), InputTape(g))
    return output


def kernelize_hpack(g: GraphInstance, pattern: Pattern) -> GraphInstance:
    """k = 0 asks for an empty packing and passes through unchanged."""
    if g.k == 0:
        logger.info("packing_passthrough", reason="k_is_zero", m=g.m)
        return g
    output, _ = run_metered(HPackingKernel(pattern), InputTape(g))
    return output


def hfree_edge_bound(d: int, k: int) -> int:
    return d * (d - 1) // 2 * (k + 1) ** d


def hpack_edge_bound(d: int, k: int) -> int:
    return d * (d - 1) // 2 * (d * (max(k, 1) - 1) + 1) ** d


def explicit_occurrence_family(
    g: GraphInstance, patterns: PatternSet, *, induced: bool = True
) -> Instance:
    """
    Materializes the occurrence family as an instance over the vertex set
    (hs for induced copies, sp for subgraph copies), in stream order.
    """
    stream = OccurrenceStream(InputTape(g), PatternMatcher(patterns, induced=induced))
    family = [s for s in (stream.read(p) for p in range(stream.positions)) if s is not None]
    return Instance(
        kind=InstanceKind.HITTING_SET if induced else InstanceKind.SET_PACKING,
        d=patterns.d,
        n=g.n,
        k=g.k,
        family=family,
    )
