import structlog

from src.core.harness import InputTape, SpaceMeter, run_metered
from src.core.layered import LayeredKernel, LayeredSimulation, superset_counts_bounded
from src.core.model import Instance, InstanceKind

# Initialize logger for this module
logger = structlog.get_logger(__name__)


def hitting_set_base(d: int, k: int) -> int:
    """Layer thresholds are (k+1)^(d-|C|)."""
    return k + 1


def hs_size_bound(d: int, k: int) -> int:
    return (k + 1) ** d


class HittingSetLogspaceKernel(LayeredKernel):
    def __init__(self, *, layer: int = 0, relabel: bool = True):
        super().__init__(hitting_set_base, layer=layer, relabel=relabel)


def would_output(layer: int, t: int, tape: InputTape, meter: SpaceMeter) -> bool:
    """Would layer `layer` of the hitting-set kernel keep the set at position t?"""
    inst = tape.instance
    simulation = LayeredSimulation(tape, inst.d, hitting_set_base(inst.d, inst.k), meter)
    return simulation.would_output(layer, t)


def kernelize_hs_logspace(inst: Instance) -> Instance:
    """
    At most (k+1)^d sets over at most d(k+1)^d elements, a subfamily of the
    input in input order, relabeled by first occurrence.
    """
    output, _ = run_metered(HittingSetLogspaceKernel(), InputTape(inst))
    return output


def invariant_audit(inst: Instance, layer: int) -> bool:
    """
    Materializes F(layer) and checks that every C with layer <= |C| <= d has
    at most (k+1)^(d-|C|) supersets in it.
    """
    kernel = HittingSetLogspaceKernel(layer=layer, relabel=False)
    family_at_layer, _ = run_metered(kernel, InputTape(inst))
    holds = superset_counts_bounded(
        family_at_layer.family, inst.d, hitting_set_base(inst.d, inst.k), min_core=layer
    )
    if not holds:
        logger.error("invariant_violated", kind=InstanceKind.HITTING_SET.value, layer=layer)
    return holds
