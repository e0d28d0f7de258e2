"""
Exact brute-force solvers and the (sun)flower combinatorics.

Every kernel in the toolkit is verified against these functions. They are
exponential by nature and meant for desk-scale instances only; the `cap`
arguments truncate the search because callers only ever need "<= k vs > k".
"""

from collections import Counter
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

import structlog
from pydantic import BaseModel, ConfigDict, Field

from src.core.errors import InfeasibleParametersError
from src.core.model import GraphInstance, Pattern, PatternSet, SetTuple

# Initialize logger for this module
logger = structlog.get_logger(__name__)

Family = Sequence[Iterable[int]]


class FlowerWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    core: SetTuple = Field(..., description="Flower core C, strictly increasing")
    member_indices: tuple[int, ...] = Field(
        ..., description="Family indices of the supersets of C forming the flower"
    )
    blocking_number: int = Field(
        ..., description="Minimum blocking set size of the restriction onto C"
    )


def restriction(family: Family, core: Iterable[int]) -> list[SetTuple]:
    """[F \\ C for F in family if F ⊇ C], order preserved."""
    core = frozenset(core)
    return [
        tuple(x for x in sorted(members) if x not in core)
        for members in family
        if core <= set(members)
    ]


# ---------------------------------------------------------
# 1. Hitting Set / Packing / EDS oracles
# ---------------------------------------------------------
def min_hitting_set_size(family: Family, cap: int) -> int:
    """
    Minimum hitting set size, truncated at cap+1 (cap+1 means "> cap").
    Branches on the elements of a smallest unhit set; depth is at most cap.
    """
    sets = [frozenset(members) for members in family]
    if any(not members for members in sets):
        return cap + 1

    for budget in range(cap + 1):
        if _can_hit(sets, budget):
            return budget
    return cap + 1


def _can_hit(sets: list[frozenset[int]], budget: int) -> bool:
    if not sets:
        return True
    if budget == 0:
        return False

    unhit = min(sets, key=len)
    for x in sorted(unhit):
        if _can_hit([s for s in sets if x not in s], budget - 1):
            return True
    return False


def max_packing_size(family: Family, cap: int) -> int:
    """Largest number of pairwise-disjoint sets, truncated at cap."""
    # Equal sets intersect each other, so one copy is enough
    sets = list(dict.fromkeys(frozenset(members) for members in family))
    best = 0

    def search(remaining: list[frozenset[int]], size: int) -> None:
        nonlocal best
        best = max(best, size)
        if best >= cap or not remaining:
            return

        elements = frozenset().union(*remaining)
        if size + min(len(remaining), len(elements)) <= best:
            return

        # Either some set takes the smallest element x, or no set uses x
        x = min(elements)
        without_x = [s for s in remaining if x not in s]
        for chosen in (s for s in remaining if x in s):
            search([s for s in without_x if not s & chosen], size + 1)
            if best >= cap:
                return
        search(without_x, size)

    search(sets, 0)
    return min(best, cap)


def min_eds_size(g: GraphInstance, cap: int) -> int:
    """
    Minimum edge dominating set size, truncated at cap+1.
    S dominates E exactly when the endpoints of S cover every edge.
    """
    for size in range(cap + 1):
        for chosen in combinations(g.edges, size):
            covered = {v for edge in chosen for v in edge}
            if all(u in covered or v in covered for u, v in g.edges):
                return size
    return cap + 1


def min_vertex_deletion_size(g: GraphInstance, patterns: PatternSet, cap: int) -> int:
    """Fewest vertices whose deletion leaves no induced copy of any pattern."""
    from src.core.kernel_graph import explicit_occurrence_family

    family = explicit_occurrence_family(g, patterns, induced=True).family
    return min_hitting_set_size(family, cap)


def max_pattern_packing_size(g: GraphInstance, pattern: Pattern, cap: int) -> int:
    """Most vertex-disjoint (not necessarily induced) copies of a pattern."""
    from src.core.kernel_graph import explicit_occurrence_family

    patterns = PatternSet(patterns=[pattern])
    family = explicit_occurrence_family(g, patterns, induced=False).family
    return max_packing_size(family, cap)


# ---------------------------------------------------------
# 2. Flowers and sunflowers
# ---------------------------------------------------------
def is_flower(family: Family, core: Iterable[int], l: int) -> bool:
    """
    True iff every blocking set of the restriction onto C has >= l elements.
    A restriction containing the empty set (C itself is a member) is not a flower.
    """
    restricted = restriction(family, core)
    if any(not members for members in restricted):
        return False
    return min_hitting_set_size(restricted, cap=l - 1) >= l


def check_counting_conditions(family: Family, core: Iterable[int], l: int, d: int) -> bool:
    """
    (1) at least l^(d-|C|) supersets of C, and
    (2) at most l^(d-|C'|) supersets of every C' ⊋ C.
    """
    core = frozenset(core)
    supersets = [frozenset(members) for members in family if core <= set(members)]
    if len(supersets) < l ** (d - len(core)):
        return False

    # Only cores C' inside some member can have a non-zero count
    counts: Counter[frozenset[int]] = Counter()
    for members in supersets:
        rest = sorted(members - core)
        for size in range(1, len(rest) + 1):
            for extra in combinations(rest, size):
                counts[core.union(extra)] += 1

    return all(count <= l ** (d - len(bigger)) for bigger, count in counts.items())


def _distinct_indices(family: Family) -> list[int]:
    seen: set[frozenset[int]] = set()
    indices = []
    for index, members in enumerate(family):
        key = frozenset(members)
        if key not in seen:
            seen.add(key)
            indices.append(index)
    return indices


def find_flower(family: Family, l: int, d: int) -> FlowerWitness:
    """
    Constructive flower lemma: while some element x lies in more than
    (l-1)^(d'-1) sets of the current restriction, descend into the sets
    containing x and add x to the core.
    """
    sets = [frozenset(members) for members in family]
    members = _distinct_indices(sets)
    if len(members) <= (l - 1) ** d:
        raise InfeasibleParametersError(
            f"family too small: {len(members)} distinct sets <= (l-1)^d = {(l - 1) ** d}"
        )

    core: set[int] = set()
    depth = d
    while depth >= 1:
        bound = (l - 1) ** (depth - 1)
        counts = Counter(x for i in members for x in sets[i] if x not in core)
        candidates = [x for x, count in counts.items() if count > bound]
        if not candidates:
            break
        x = min(candidates)
        core.add(x)
        members = [i for i in members if x in sets[i]]
        depth -= 1

    flower = [sets[i] for i in members]
    restricted = restriction(flower, core)
    if any(not petal for petal in restricted):
        raise InfeasibleParametersError(
            f"no flower: core {sorted(core)} is itself a member of the family"
        )

    witness = FlowerWitness(
        core=tuple(sorted(core)),
        member_indices=tuple(members),
        blocking_number=min_hitting_set_size(restricted, cap=len(restricted)),
    )
    logger.debug(
        "flower_found",
        core=witness.core,
        members=len(members),
        blocking_number=witness.blocking_number,
    )
    return witness


def is_sunflower(family: Family, core: Iterable[int], indices: Sequence[int]) -> bool:
    """Every petal F_i \\ C is non-empty and F_i ∩ F_j = C for all i != j."""
    core = frozenset(core)
    if len(set(indices)) != len(indices):
        return False
    chosen = [frozenset(family[i]) for i in indices]
    if any(not core < members for members in chosen):
        return False
    return all(a & b == core for a, b in combinations(chosen, 2))


def find_sunflower(family: Family, l: int, d: int) -> tuple[SetTuple, tuple[int, ...]]:
    """
    Constructive sunflower lemma on a d-uniform family: take a maximal disjoint
    subfamily; with fewer than l members some element x lies in at least
    |F| / (d(l-1)) sets, so recurse on the sets containing x.
    """
    sets = [frozenset(members) for members in family]
    if any(len(members) != d for members in sets):
        raise InfeasibleParametersError("sunflower search needs a d-uniform family")

    indices = _distinct_indices(sets)
    # Above d!(l-1)^d the search cannot fail; below it, it still often succeeds
    bound = factorial(d) * (l - 1) ** d
    small = len(indices) <= bound

    core: frozenset[int] = frozenset()
    while True:
        picked: list[int] = []
        used: set[int] = set()
        for i in indices:
            petal = sets[i] - core
            if not petal & used:
                picked.append(i)
                used |= petal
                if len(picked) == l:
                    return tuple(sorted(core)), tuple(picked)

        petal_size = d - len(core)
        counts = Counter(x for i in indices for x in sets[i] if x not in core)
        heavy = [
            x
            for x, count in counts.items()
            if count * petal_size * (l - 1) >= len(indices)
        ]
        if not heavy:
            if small:
                raise InfeasibleParametersError(
                    f"family too small: no sunflower found among {len(indices)} sets, "
                    f"d!(l-1)^d = {bound}"
                )
            raise InfeasibleParametersError("no heavy element; family is not a set family")
        x = min(heavy)
        core = core | {x}
        indices = [i for i in indices if x in sets[i]]
