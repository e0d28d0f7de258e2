import structlog
from pydantic import BaseModel, ConfigDict, Field

from src.core.harness import InputTape, run_metered
from src.core.layered import LayeredKernel, superset_counts_bounded
from src.core.model import Instance, InstanceKind

# Initialize logger for this module
logger = structlog.get_logger(__name__)


class PackingThreshold(BaseModel):
    """Threshold base d(k-1)+1 of the set-packing layers."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    k: int = Field(..., ge=1)

    @property
    def base(self) -> int:
        return self.d * (self.k - 1) + 1

    def at(self, core_size: int) -> int:
        return self.base ** (self.d - core_size)


def packing_base(d: int, k: int) -> int:
    return PackingThreshold(d=d, k=k).base


def sp_size_bound(d: int, k: int) -> int:
    return PackingThreshold(d=d, k=max(k, 1)).at(0)


class SetPackingLogspaceKernel(LayeredKernel):
    def __init__(self, *, layer: int = 0, relabel: bool = True):
        super().__init__(packing_base, layer=layer, relabel=relabel)


def kernelize_sp_logspace(inst: Instance) -> Instance:
    """
    Same layered procedure as the hitting-set kernel with base d(k-1)+1.
    k = 0 is a trivial yes-instance and passes through unchanged.
    """
    if inst.k == 0:
        logger.info("packing_passthrough", reason="k_is_zero", m=inst.m)
        return inst

    output, _ = run_metered(SetPackingLogspaceKernel(), InputTape(inst))
    return output


def invariant_audit_sp(inst: Instance, layer: int) -> bool:
    if inst.k == 0:
        return True

    kernel = SetPackingLogspaceKernel(layer=layer, relabel=False)
    family_at_layer, _ = run_metered(kernel, InputTape(inst))
    holds = superset_counts_bounded(
        family_at_layer.family, inst.d, packing_base(inst.d, inst.k), min_core=layer
    )
    if not holds:
        logger.error("invariant_violated", kind=InstanceKind.SET_PACKING.value, layer=layer)
    return holds
