"""
Linear-time kernels for d-Hitting Set and d-Set Packing.

One pass over the (radix-sorted) family: a set F is stored unless some
C ⊆ F already has threshold(|C|) stored supersets. Superset counts live in a
trie keyed by sorted element sequences.
"""

from itertools import combinations
from typing import Callable, Iterator, Sequence

import structlog
from pydantic import BaseModel, ConfigDict, Field

from src.core.errors import KernelInvariantError
from src.core.harness import InputTape, OutputSink, SpaceMeter, run_metered
from src.core.kernel_hs_logspace import hitting_set_base
from src.core.kernel_sp_logspace import packing_base
from src.core.layered import superset_counts_bounded
from src.core.model import Instance, SetTuple, canonical_relabel

# Initialize logger for this module
logger = structlog.get_logger(__name__)


# ---------------------------------------------------------
# 1. Superset trie
# ---------------------------------------------------------
class _TrieNode:
    __slots__ = ("children", "count")

    def __init__(self):
        self.children: dict[int, "_TrieNode"] = {}
        self.count = 0


class SupersetTrie:
    """
    Maps every subset C of a stored set to the number of stored supersets.
    Labels strictly increase along a root path; a missing node means count 0.
    `node_visits` counts trie edges traversed.
    """

    def __init__(self):
        self._root = _TrieNode()
        self.node_visits = 0
        self.nodes = 1

    def query(self, core: Sequence[int]) -> int:
        node = self._root
        for x in core:
            self.node_visits += 1
            node = node.children.get(x)
            if node is None:
                return 0
        return node.count

    def increment(self, members: Sequence[int]) -> None:
        """count[C] += 1 for all 2^|F| subsets C of F, prefixes shared."""
        self._increment_from(self._root, members, 0)

    def _increment_from(self, node: _TrieNode, members: Sequence[int], start: int) -> None:
        node.count += 1
        for i in range(start, len(members)):
            self.node_visits += 1
            child = node.children.get(members[i])
            if child is None:
                child = node.children[members[i]] = _TrieNode()
                self.nodes += 1
            self._increment_from(child, members, i + 1)


def trie_query(trie: SupersetTrie, core: Sequence[int]) -> int:
    return trie.query(core)


def trie_increment(trie: SupersetTrie, members: Sequence[int]) -> None:
    trie.increment(members)


# ---------------------------------------------------------
# 2. Radix sort
# ---------------------------------------------------------
def _radix_order(family: Sequence[SetTuple], d: int, n: int) -> tuple[list[int], int]:
    """
    LSD bucket sort of set indices by element sequences padded with 0 to
    length d (shorter sets first on a shared prefix). Stable.
    Returns the order and the work done, d * (n + 1 + m).
    """
    order = list(range(len(family)))
    work = 0
    for position in range(d - 1, -1, -1):
        buckets: list[list[int]] = [[] for _ in range(n + 1)]
        for index in order:
            members = family[index]
            buckets[members[position] if position < len(members) else 0].append(index)
        order = [index for bucket in buckets for index in bucket]
        work += n + 1 + len(family)
    return order, work


def sort_family(inst: Instance) -> Instance:
    order, _ = _radix_order(inst.family, inst.d, inst.n)
    return inst.model_copy(update={"family": tuple(inst.family[i] for i in order)})


# ---------------------------------------------------------
# 3. The kernel
# ---------------------------------------------------------
class StepRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: int
    members: SetTuple
    stored: bool
    blocking_core: SetTuple | None = Field(
        None, description="First core whose threshold was reached, if F was skipped"
    )


class LinearStats(BaseModel):
    node_visits: int = 0
    sort_work: int = 0
    tape_reads: int = 0
    stored: int = 0
    trie_nodes: int = 1


class LinearKernel:
    """
    `base_of(d, k)` gives the threshold base. With audit=True the stored
    family is re-checked against its superset bounds after every step.
    """

    def __init__(
        self,
        base_of: Callable[[int, int], int],
        *,
        sort: bool = True,
        audit: bool = False,
    ):
        self._base_of = base_of
        self.sort = sort
        self.audit = audit
        self.stats = LinearStats()

    def prepare(self, inst: Instance) -> Instance:
        if not self.sort:
            return inst
        order, work = _radix_order(inst.family, inst.d, inst.n)
        self.stats = LinearStats(sort_work=work)
        return inst.model_copy(update={"family": tuple(inst.family[i] for i in order)})

    def iter_steps(
        self, tape: InputTape, meter: SpaceMeter | None = None
    ) -> Iterator[StepRecord]:
        inst: Instance = tape.instance
        d = inst.d
        base = self._base_of(d, inst.k)
        thresholds = [base ** (d - size) for size in range(d + 1)]
        meter = meter if meter is not None else SpaceMeter()

        trie = SupersetTrie()
        stored: list[SetTuple] = []
        for t in range(tape.positions):
            meter.set("cursor", t)
            members = tape.read(t)

            blocking = None
            for size in range(len(members) + 1):
                for core in combinations(members, size):
                    if trie.query(core) >= thresholds[size]:
                        blocking = core
                        break
                if blocking is not None:
                    break

            if blocking is None:
                trie.increment(members)
                stored.append(members)
                meter.set("stored", len(stored))
                meter.set("trie_nodes", trie.nodes)

            if self.audit and not superset_counts_bounded(stored, d, base):
                logger.error("stored_family_invariant_violated", t=t, stored=len(stored))
                raise KernelInvariantError(
                    f"stored family breaks its superset bounds after step {t}"
                )

            self.stats = self.stats.model_copy(
                update={
                    "node_visits": trie.node_visits,
                    "tape_reads": tape.reads,
                    "stored": len(stored),
                    "trie_nodes": trie.nodes,
                }
            )
            yield StepRecord(t=t, members=members, stored=blocking is None, blocking_core=blocking)

    def run(self, tape: InputTape, meter: SpaceMeter, sink: OutputSink) -> None:
        inst: Instance = tape.instance
        log = logger.bind(kind=inst.kind.value, d=inst.d, k=inst.k, m=inst.m)

        kept = [step.members for step in self.iter_steps(tape, meter) if step.stored]
        relabeled = canonical_relabel(inst.model_copy(update={"family": tuple(kept)}))
        for members in relabeled.family:
            sink.write(members)
        sink.write_header(kind=inst.kind, d=inst.d, n=relabeled.n, k=inst.k)

        log.info(
            "linear_pass_complete",
            stored=len(kept),
            node_visits=self.stats.node_visits,
            sort_work=self.stats.sort_work,
        )


class HittingSetLinearKernel(LinearKernel):
    def __init__(self, *, sort: bool = True, audit: bool = False):
        super().__init__(hitting_set_base, sort=sort, audit=audit)


class SetPackingLinearKernel(LinearKernel):
    def __init__(self, *, sort: bool = True, audit: bool = False):
        super().__init__(packing_base, sort=sort, audit=audit)


def _kernelize(kernel: LinearKernel, inst: Instance) -> Instance:
    output, _ = run_metered(kernel, InputTape(kernel.prepare(inst)))
    return output


def kernelize_hs_linear(inst: Instance, *, sort: bool = True, audit: bool = False) -> Instance:
    return _kernelize(HittingSetLinearKernel(sort=sort, audit=audit), inst)


def kernelize_sp_linear(inst: Instance, *, sort: bool = True, audit: bool = False) -> Instance:
    if inst.k == 0:
        logger.info("packing_passthrough", reason="k_is_zero", m=inst.m)
        return inst
    return _kernelize(SetPackingLinearKernel(sort=sort, audit=audit), inst)
