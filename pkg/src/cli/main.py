"""
kernelforge command line.

    python -m src.cli kernelize --problem hs --mode logspace --input a.hs --output b.hs
    python -m src.cli verify --problem hs --input a.hs --kernel b.hs
    python -m src.cli gen --kind hs --d 2 --n 10 --m 20 --k 2 --seed 1

Exit codes: 0 ok, 1 usage, 2 input, 3 verification failure / budget / invariant.
"""

import argparse
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

import structlog

from src.core.config import KernelMode, ProblemType, settings as _settings
from src.core.errors import (
    InfeasibleParametersError,
    InstanceFormatError,
    KernelInvariantError,
    SpaceBudgetExceeded,
    UnsupportedModeError,
)
from src.core.generate import gen_random
from src.core.instance_io import InstanceStore
from src.core.kernel_factory import KernelFactory
from src.core.model import GraphInstance, Instance, InstanceKind, PatternSet
from src.core.oracles import (
    find_flower,
    find_sunflower,
    is_sunflower,
    max_packing_size,
    max_pattern_packing_size,
    min_eds_size,
    min_hitting_set_size,
    min_vertex_deletion_size,
)

# Initialize logger for this module
logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_FAILURE = 3

_GRAPH_PROBLEMS = (
    ProblemType.EDGE_DOMINATING_SET,
    ProblemType.H_FREE_DELETION,
    ProblemType.H_PACKING,
)
_MAXIMIZE = (ProblemType.SET_PACKING, ProblemType.H_PACKING)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; here 2 means bad input."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------
# Oracles
# ---------------------------------------------------------
def _guard(problem: ProblemType, inst: Instance | GraphInstance) -> None:
    limit = (
        _settings.ORACLE_MAX_VERTICES
        if problem in _GRAPH_PROBLEMS
        else _settings.ORACLE_MAX_ELEMENTS
    )
    if inst.n > limit:
        raise InfeasibleParametersError(
            f"instance too large for the exact oracle: n={inst.n} > {limit}"
        )


def _expected_kind(problem: ProblemType) -> InstanceKind:
    if problem in _GRAPH_PROBLEMS:
        return InstanceKind.GRAPH
    if problem == ProblemType.SET_PACKING:
        return InstanceKind.SET_PACKING
    return InstanceKind.HITTING_SET


def oracle_optimum(
    problem: ProblemType,
    inst: Instance | GraphInstance,
    cap: int,
    patterns: PatternSet | None = None,
) -> int:
    """Truncated exact optimum: min problems cap at cap+1, max problems at cap."""
    _guard(problem, inst)
    if inst.kind != _expected_kind(problem):
        raise InstanceFormatError(
            f"'{problem.value}' needs a '{_expected_kind(problem).value}' instance"
        )

    if problem == ProblemType.HITTING_SET:
        return min_hitting_set_size(inst.family, cap)
    if problem == ProblemType.SET_PACKING:
        return max_packing_size(inst.family, cap)
    if problem == ProblemType.EDGE_DOMINATING_SET:
        return min_eds_size(inst, cap)

    if patterns is None:
        raise UnsupportedModeError(f"{problem.value} needs --pattern")
    if problem == ProblemType.H_FREE_DELETION:
        return min_vertex_deletion_size(inst, patterns, cap)
    if len(patterns.patterns) != 1:
        raise UnsupportedModeError("hpack takes exactly one pattern")
    return max_pattern_packing_size(inst, patterns.patterns[0], cap)


def _is_yes(problem: ProblemType, optimum: int, k: int) -> bool:
    return optimum >= k if problem in _MAXIMIZE else optimum <= k


def _render(problem: ProblemType, optimum: int, k: int) -> str:
    if problem in _MAXIMIZE:
        return f"≥{k}" if optimum >= k else f"={optimum}"
    return f"≤{optimum}" if optimum <= k else f">{k}"


def verify_pair(
    problem: ProblemType,
    original: Instance | GraphInstance,
    kernel: Instance | GraphInstance,
    patterns: PatternSet | None = None,
) -> tuple[bool, str]:
    """
    Runs the oracle on both sides, each capped at its own k: a canonical
    no-instance carries its own parameter.
    """
    k, kernel_k = original.k, kernel.k
    in_opt = oracle_optimum(problem, original, k, patterns)
    kernel_opt = oracle_optimum(problem, kernel, kernel_k, patterns)
    agree = _is_yes(problem, in_opt, k) == _is_yes(problem, kernel_opt, kernel_k)
    line = (
        f"{problem.value}: in{_render(problem, in_opt, k)} "
        f"kernel{_render(problem, kernel_opt, kernel_k)}"
    )
    return agree, line


def _verify_file(
    path: str, problem: str, mode: str, pattern_spec: str | None
) -> tuple[str, int, str]:
    """Worker for `verify --corpus`: kernelize one file and compare answers."""
    store = InstanceStore()
    problem = ProblemType(problem)
    try:
        inst = store.load(path)
        patterns = store.load_patterns(pattern_spec) if pattern_spec else None
        if inst.kind != _expected_kind(problem):
            return path, EXIT_OK, "skipped (kind mismatch)"
        kernel = KernelFactory.get_kernel(problem, mode, patterns=patterns)
        result = kernel.kernelize(inst)
        agree, line = verify_pair(problem, inst, result.instance, patterns)
        return path, EXIT_OK if agree else EXIT_FAILURE, line
    except (InstanceFormatError, InfeasibleParametersError) as e:
        return path, EXIT_INPUT, str(e)


# ---------------------------------------------------------
# Commands
# ---------------------------------------------------------
def cmd_kernelize(args, store: InstanceStore) -> int:
    problem = ProblemType(args.problem)
    log = logger.bind(command="kernelize", problem=problem.value, mode=args.mode)

    patterns = store.load_patterns(args.pattern) if args.pattern else None
    kernel = KernelFactory.get_kernel(
        problem,
        args.mode,
        patterns=patterns,
        audit=args.audit,
        sort=not args.no_sort,
        layer=args.layer,
    )

    inst = store.load(args.input)
    result = kernel.kernelize(inst)
    store.save(result.instance, args.output)

    # Keep stdout clean when the kernel itself goes there
    out = sys.stderr if args.output == "-" else sys.stdout
    print(f"sets_in={inst.m} sets_out={result.instance.m} bound={result.bound}", file=out)
    if args.trace and result.report is not None:
        print(result.report.format(), file=out)
    if args.trace and result.linear_stats is not None:
        stats = result.linear_stats
        print(f"node_visits={stats.node_visits} sort_work={stats.sort_work}", file=out)

    log.info("kernelize_complete", sets_in=inst.m, sets_out=result.instance.m)
    return EXIT_OK


def cmd_solve(args, store: InstanceStore) -> int:
    problem = ProblemType(args.problem)
    inst = store.load(args.input)
    patterns = store.load_patterns(args.pattern) if args.pattern else None
    cap = args.cap if args.cap is not None else inst.k

    optimum = oracle_optimum(problem, inst, cap, patterns)
    if problem in _MAXIMIZE:
        print(f">={cap}" if optimum >= cap and cap > 0 else optimum)
    else:
        print(f">{cap}" if optimum > cap else optimum)

    logger.info("solve_complete", problem=problem.value, cap=cap, optimum=optimum)
    return EXIT_OK


def cmd_verify(args, store: InstanceStore) -> int:
    problem = ProblemType(args.problem)
    if args.corpus:
        return _verify_corpus(args, store)
    if not args.input or not args.kernel:
        raise UsageError("verify needs --input and --kernel (or --corpus)")

    patterns = store.load_patterns(args.pattern) if args.pattern else None
    original = store.load(args.input)
    kernel = store.load(args.kernel)

    agree, line = verify_pair(problem, original, kernel, patterns)
    print(line)
    if not agree:
        logger.error("verification_failed", problem=problem.value, detail=line)
        print("MISMATCH: kernel answer differs from input answer", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _verify_corpus(args, store: InstanceStore) -> int:
    files = [str(path) for path in store.corpus(args.corpus)]
    jobs = args.jobs or _settings.VERIFY_JOBS
    log = logger.bind(command="verify", corpus=args.corpus, files=len(files), jobs=jobs)
    log.info("corpus_verification_started")

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(
            pool.map(
                _verify_file,
                files,
                [args.problem] * len(files),
                [args.mode] * len(files),
                [args.pattern] * len(files),
            )
        )

    worst = EXIT_OK
    for path, code, line in outcomes:
        print(f"{Path(path).name}: {line}")
        if code == EXIT_FAILURE or (code == EXIT_INPUT and worst == EXIT_OK):
            worst = code

    failures = sum(1 for _, code, _ in outcomes if code == EXIT_FAILURE)
    log.info("corpus_verification_complete", failures=failures, exit_code=worst)
    return worst


def cmd_gen(args, store: InstanceStore) -> int:
    kind = "gr" if args.kind == "graph" else args.kind
    inst = gen_random(
        kind, d=args.d, n=args.n, m=args.m, k=args.k, seed=args.seed, dedup=args.dedup
    )
    store.save(inst, args.output)
    return EXIT_OK


def cmd_stats(args, store: InstanceStore) -> int:
    inst = store.load(args.input)
    if isinstance(inst, GraphInstance):
        degrees = Counter(v for edge in inst.edges for v in edge)
        histogram = Counter(degrees.get(v, 0) for v in range(1, inst.n + 1))
        print(f"kind=gr n={inst.n} m={inst.m} k={inst.k}")
        print("degree_histogram: " + " ".join(f"{g}:{c}" for g, c in sorted(histogram.items())))
        return EXIT_OK

    sizes = Counter(len(members) for members in inst.family)
    print(f"kind={inst.kind.value} n={inst.n} m={inst.m} d={inst.d} k={inst.k}")
    print("size_histogram: " + " ".join(f"{s}:{c}" for s, c in sorted(sizes.items())))
    return EXIT_OK


def cmd_flower(args, store: InstanceStore) -> int:
    inst = store.load(args.input)
    if isinstance(inst, GraphInstance):
        raise InstanceFormatError("flower needs a set family, not a graph")
    d = args.d if args.d is not None else inst.d
    distinct = len(set(inst.family))

    if args.sunflower:
        try:
            core, members = find_sunflower(inst.family, args.l, d)
        except InfeasibleParametersError as e:
            if not str(e).startswith("family too small"):
                raise
            print("none guaranteed")
            return EXIT_OK
        if not is_sunflower(inst.family, core, members):
            raise KernelInvariantError("sunflower witness failed its check")
        print("core: " + (" ".join(map(str, core)) or "(empty)"))
        print("members: " + " ".join(map(str, members)))
        return EXIT_OK

    if distinct <= (args.l - 1) ** d:
        print("none guaranteed")
        return EXIT_OK

    witness = find_flower(inst.family, args.l, d)
    print("core: " + (" ".join(map(str, witness.core)) or "(empty)"))
    print("members: " + " ".join(map(str, witness.member_indices)))
    print(f"blocking_number: {witness.blocking_number}")
    return EXIT_OK


# ---------------------------------------------------------
# Parser
# ---------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kernelforge", description="Kernelization toolkit")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    problems = [p.value for p in ProblemType]
    modes = [m.value for m in KernelMode]

    p = verbs.add_parser("kernelize", help="Shrink an instance to a kernel")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--mode", choices=modes, default=KernelMode.LOGSPACE.value)
    p.add_argument("--input", default="-", help="Instance file, '-' for stdin")
    p.add_argument("--output", default="-", help="Kernel file, '-' for stdout")
    p.add_argument("--pattern", help="k3, p3, comma list or @file.pat (hfree/hpack)")
    p.add_argument("--trace", action="store_true", help="Print the run report")
    p.add_argument("--audit", action="store_true", help="Linear mode: check every step")
    p.add_argument("--no-sort", action="store_true", help="Linear mode: keep input order")
    p.add_argument("--layer", type=int, default=0, help="Emit layer l instead of 0")
    p.set_defaults(handler=cmd_kernelize)

    p = verbs.add_parser("solve", help="Exact optimum by brute force, truncated at --cap")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--input", default="-")
    p.add_argument("--cap", type=int, default=None, help="Defaults to k")
    p.add_argument("--pattern")
    p.set_defaults(handler=cmd_solve)

    p = verbs.add_parser("verify", help="Compare oracle answers on input and kernel")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--input")
    p.add_argument("--kernel")
    p.add_argument("--pattern")
    p.add_argument("--corpus", help="Directory: kernelize and verify every instance")
    p.add_argument("--mode", choices=modes, default=KernelMode.LOGSPACE.value)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(handler=cmd_verify)

    p = verbs.add_parser("gen", help="Seeded random instance")
    p.add_argument("--kind", choices=["hs", "sp", "gr", "graph"], required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--output", default="-")
    p.set_defaults(handler=cmd_gen)

    p = verbs.add_parser("stats", help="Instance statistics")
    p.add_argument("--input", default="-")
    p.set_defaults(handler=cmd_stats)

    p = verbs.add_parser("flower", help="Find an l-flower (or sunflower) core")
    p.add_argument("--input", default="-")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--d", type=int, default=None, help="Defaults to the instance d")
    p.add_argument("--sunflower", action="store_true")
    p.set_defaults(handler=cmd_flower)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    store = InstanceStore()
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args, store)

    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedModeError as e:
        logger.error("unsupported_mode", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceFormatError, InfeasibleParametersError) as e:
        logger.error("input_rejected", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (SpaceBudgetExceeded, KernelInvariantError) as e:
        logger.error("run_failed", error=str(e), exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
