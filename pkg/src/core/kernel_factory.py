from typing import Protocol

import structlog
from pydantic import BaseModel

from src.core.config import KernelMode as _KernelMode, ProblemType as _ProblemType
from src.core.errors import UnsupportedModeError
from src.core.harness import InputTape, RunReport, run_metered
from src.core.kernel_eds import EdgeDominatingSetKernel, eds_edge_bound
from src.core.kernel_graph import (
    HFreeDeletionKernel,
    HPackingKernel,
    hfree_edge_bound,
    hpack_edge_bound,
)
from src.core.kernel_hs_logspace import HittingSetLogspaceKernel, hs_size_bound
from src.core.kernel_linear import (
    HittingSetLinearKernel,
    LinearKernel,
    LinearStats,
    SetPackingLinearKernel,
)
from src.core.kernel_sp_logspace import SetPackingLogspaceKernel, sp_size_bound
from src.core.model import GraphInstance, Instance, InstanceKind, PatternSet

# Initialize Logger
logger = structlog.get_logger(__name__)


class KernelResult(BaseModel):
    instance: Instance | GraphInstance
    bound: int
    report: RunReport | None = None
    linear_stats: LinearStats | None = None


class IKernel(Protocol):
    """Interface for any kernelization (logspace or linear)."""

    def kernelize(self, inst: Instance | GraphInstance) -> KernelResult: ...


def _expect(inst, kind: InstanceKind) -> None:
    if inst.kind != kind:
        raise UnsupportedModeError(
            f"expected a '{kind.value}' instance, got '{inst.kind.value}'"
        )


class FamilyKernel(IKernel):
    """hs / sp, either mode. k = 0 packing passes through unchanged."""

    def __init__(self, problem: _ProblemType, streaming, layer: int = 0):
        self.problem = problem
        self.streaming = streaming
        self.layer = layer

    def kernelize(self, inst: Instance) -> KernelResult:
        packing = self.problem == _ProblemType.SET_PACKING
        _expect(inst, InstanceKind.SET_PACKING if packing else InstanceKind.HITTING_SET)
        if self.layer > inst.d:
            raise UnsupportedModeError(f"--layer {self.layer} outside 0..{inst.d}")
        bound = (sp_size_bound if packing else hs_size_bound)(inst.d, inst.k)

        if packing and inst.k == 0:
            return KernelResult(instance=inst, bound=bound)

        if isinstance(self.streaming, LinearKernel):
            tape = InputTape(self.streaming.prepare(inst))
            output, report = run_metered(self.streaming, tape)
            return KernelResult(
                instance=output,
                bound=bound,
                report=report,
                linear_stats=self.streaming.stats,
            )

        output, report = run_metered(self.streaming, InputTape(inst))
        return KernelResult(instance=output, bound=bound, report=report)


class GraphKernel(IKernel):
    def __init__(self, problem: _ProblemType, streaming, bound_of):
        self.problem = problem
        self.streaming = streaming
        self._bound_of = bound_of

    def kernelize(self, inst: GraphInstance) -> KernelResult:
        _expect(inst, InstanceKind.GRAPH)
        bound = self._bound_of(inst.k)
        if self.problem == _ProblemType.H_PACKING and inst.k == 0:
            return KernelResult(instance=inst, bound=bound)
        output, report = run_metered(self.streaming, InputTape(inst))
        return KernelResult(instance=output, bound=bound, report=report)


class KernelFactory:
    """Factory returning the kernel for a (problem, mode) pair."""

    @staticmethod
    def get_kernel(
        problem: _ProblemType | str,
        mode: _KernelMode | str = _KernelMode.LOGSPACE,
        *,
        patterns: PatternSet | None = None,
        audit: bool = False,
        sort: bool = True,
        layer: int = 0,
    ) -> IKernel:
        problem = _ProblemType(problem)
        mode = _KernelMode(mode)

        logger.info("kernel_selected", problem=problem.value, mode=mode.value)

        if layer and (mode != _KernelMode.LOGSPACE or problem not in _FAMILY_PROBLEMS):
            raise UnsupportedModeError("--layer is available for logspace hs/sp only")
        if layer < 0:
            raise UnsupportedModeError(f"--layer {layer} is negative")

        if problem == _ProblemType.HITTING_SET:
            if mode == _KernelMode.LINEAR:
                return FamilyKernel(problem, HittingSetLinearKernel(sort=sort, audit=audit))
            return FamilyKernel(problem, HittingSetLogspaceKernel(layer=layer), layer)

        elif problem == _ProblemType.SET_PACKING:
            if mode == _KernelMode.LINEAR:
                return FamilyKernel(problem, SetPackingLinearKernel(sort=sort, audit=audit))
            return FamilyKernel(problem, SetPackingLogspaceKernel(layer=layer), layer)

        if mode != _KernelMode.LOGSPACE:
            logger.error("mode_not_available", problem=problem.value, mode=mode.value)
            raise UnsupportedModeError(f"{mode.value} mode unavailable for {problem.value}")

        if problem == _ProblemType.EDGE_DOMINATING_SET:
            return GraphKernel(problem, EdgeDominatingSetKernel(), eds_edge_bound)

        if patterns is None:
            raise UnsupportedModeError(f"{problem.value} needs --pattern")
        d = patterns.d

        if problem == _ProblemType.H_FREE_DELETION:
            return GraphKernel(
                problem,
                HFreeDeletionKernel(patterns),
                lambda k: hfree_edge_bound(d, k),
            )

        elif problem == _ProblemType.H_PACKING:
            if len(patterns.patterns) != 1:
                raise UnsupportedModeError("hpack takes exactly one pattern")
            return GraphKernel(
                problem,
                HPackingKernel(patterns.patterns[0]),
                lambda k: hpack_edge_bound(d, k),
            )

        else:
            logger.critical("kernel_not_implemented", problem=problem)
            raise NotImplementedError(f"Kernel for {problem} not implemented")


_FAMILY_PROBLEMS = (_ProblemType.HITTING_SET, _ProblemType.SET_PACKING)
