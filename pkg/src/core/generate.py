import random
from math import comb

import networkx as nx
import structlog

from src.core.errors import InfeasibleParametersError
from src.core.model import GraphInstance, Instance, InstanceKind

# Initialize logger for this module
logger = structlog.get_logger(__name__)


def gen_random(
    kind: InstanceKind | str,
    *,
    d: int = 2,
    n: int,
    m: int,
    k: int,
    seed: int,
    dedup: bool = False,
) -> Instance | GraphInstance:
    """
    Seeded test-corpus generator; a pure function of its arguments.

    Families: set size uniform in 1..d, then elements drawn without replacement.
    Graphs: uniform G(n, m) with exactly m edges (d is ignored).
    """
    kind = InstanceKind(kind)
    log = logger.bind(kind=kind.value, d=d, n=n, m=m, k=k, seed=seed)

    if n < 1 or m < 0 or k < 0:
        raise InfeasibleParametersError("need n >= 1, m >= 0, k >= 0")

    if kind == InstanceKind.GRAPH:
        possible = comb(n, 2)
        if m > possible:
            raise InfeasibleParametersError(
                f"only {possible} possible edges on {n} vertices, requested {m}"
            )
        graph = nx.gnm_random_graph(n, m, seed=seed)
        edges = sorted((min(u, v) + 1, max(u, v) + 1) for u, v in graph.edges())
        log.debug("graph_generated")
        return GraphInstance(n=n, k=k, edges=edges)

    if not 1 <= d <= n:
        raise InfeasibleParametersError(f"need 1 <= d <= n, got d={d}, n={n}")

    if dedup:
        possible = sum(comb(n, size) for size in range(1, d + 1))
        if m > possible:
            raise InfeasibleParametersError(
                f"only {possible} distinct sets of size <= {d} over {n} elements"
            )

    rng = random.Random(seed)
    universe = range(1, n + 1)
    family: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    while len(family) < m:
        size = rng.randint(1, d)
        members = tuple(sorted(rng.sample(universe, size)))
        if dedup:
            if members in seen:
                continue
            seen.add(members)
        family.append(members)

    log.debug("family_generated")
    return Instance(kind=kind, d=d, n=n, k=k, family=family)
