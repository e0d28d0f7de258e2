"""
Edge Dominating Set kernel built on the vertex-cover instance of the d=2
hitting-set kernel with parameter 2k (threshold base 2k+1).

    (a) more than (2k+1)^2 edges survive layer 1   -> no-instance
    (b) more than 2k vertices with >= 2k+1 kept edges -> no-instance
    (c) otherwise every input edge whose endpoints both touch a kept edge
"""

from math import comb

import structlog

from src.core.harness import InputTape, OutputSink, SpaceMeter, run_metered
from src.core.layered import LayeredSimulation, StreamRelabeler
from src.core.model import GraphInstance, InstanceKind, canonical_no_instance

# Initialize logger for this module
logger = structlog.get_logger(__name__)


class VcSimulation:
    """
    The vertex-cover kernel over a graph tape: edges are 2-sets, d=2 and the
    parameter is 2k. Edges never repeat, so the duplicate layer is skipped.
    """

    def __init__(self, tape: InputTape, meter: SpaceMeter):
        graph: GraphInstance = tape.instance
        self.parameter = 2 * graph.k
        self._tape = tape
        self._meter = meter
        self._simulation = LayeredSimulation(
            tape, d=2, base=self.parameter + 1, meter=meter, distinct=True
        )
        # Set once layer 1 is known to emit at most base^2 edges
        self.core_bounded = False

    @property
    def base(self) -> int:
        return self.parameter + 1

    def kept(self, p: int) -> bool:
        # With a bounded empty core, layer 0 emits exactly what layer 1 emits
        layer = 1 if self.core_bounded else 0
        return self._simulation.would_output(layer, p)

    def empty_core_fires(self) -> bool:
        limit = self.base**2
        count = 0
        for p in range(self._tape.positions):
            self._meter.set("V.p", p)
            if self._simulation.would_output(1, p):
                count += 1
                self._meter.set("V.count", count)
                if count > limit:
                    return True
        return False

    def output_degree(self, v: int, cap: int) -> int:
        count = 0
        self._meter.set("V.v", v)
        for p in range(self._tape.positions):
            if count >= cap:
                break
            self._meter.set("V.p", p)
            if v in self._tape.read(p) and self.kept(p):
                count += 1
                self._meter.set("V.count", count)
        return count


def vc_output_degree(g: GraphInstance, v: int, cap: int) -> int:
    """Edges at v that the vertex-cover kernel (parameter 2k) keeps, truncated at cap."""
    vc = VcSimulation(InputTape(g), SpaceMeter())
    return vc.output_degree(v, cap)


def eds_edge_bound(k: int) -> int:
    """
    Edges inside the high-degree set, plus edges among low-degree vertices,
    plus edges between the two.
    """
    return comb(2 * k, 2) + (2 * k + 1) ** 2 + 2 * k * 2 * (2 * k + 1) ** 2


def _write_no_instance(sink: OutputSink) -> None:
    no = canonical_no_instance(InstanceKind.GRAPH)
    for edge in no.edges:
        sink.write(edge)
    sink.write_header(kind=InstanceKind.GRAPH, n=no.n, k=no.k)


class EdgeDominatingSetKernel:
    def run(self, tape: InputTape, meter: SpaceMeter, sink: OutputSink) -> None:
        g: GraphInstance = tape.instance
        k = g.k
        log = logger.bind(n=g.n, m=g.m, k=k)
        vc = VcSimulation(tape, meter)

        # 1. Empty-core threshold of the vertex-cover kernel
        if vc.empty_core_fires():
            log.info("eds_no_instance", reason="empty_core_threshold")
            _write_no_instance(sink)
            return
        vc.core_bounded = True

        # 2. High-degree vertices
        high = 0
        for v in range(1, g.n + 1):
            meter.set("v", v)
            if vc.output_degree(v, cap=2 * k + 1) >= 2 * k + 1:
                high += 1
                meter.set("high", high)
                if high > 2 * k:
                    log.info("eds_no_instance", reason="too_many_high_degree", high=high)
                    _write_no_instance(sink)
                    return

        # 3. Edges between vertices touched by the vertex-cover kernel
        def touches(x: int) -> bool:
            return vc.output_degree(x, cap=1) >= 1

        def kept(p: int) -> bool:
            u, v = tape.read(p)
            return touches(u) and touches(v)

        relabeler = StreamRelabeler(tape, kept, meter)
        labels_used = 0
        for p in range(tape.positions):
            meter.set("cursor", p)
            if not kept(p):
                continue
            edge = relabeler.relabel(tape.read(p), p)
            labels_used = max(labels_used, *edge)
            meter.set("n_out", labels_used)
            sink.write(edge)

        sink.write_header(kind=InstanceKind.GRAPH, n=max(1, labels_used), k=k)
        log.info("eds_kernel_complete", high=high, edges_out=sink.emitted)


def kernelize_eds(g: GraphInstance) -> GraphInstance:
    output, _ = run_metered(EdgeDominatingSetKernel(), InputTape(g))
    return output
