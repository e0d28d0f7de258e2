import functools
import time
from typing import Callable

import structlog

# Initialize logger
logger = structlog.get_logger(__name__)


def trace_run(func: Callable) -> Callable:
    """
    Decorator for metered kernel runs: logs space, reads and output size.
    The wrapped function must return (output, RunReport).
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        started = time.perf_counter()

        # 1. Execute the actual run
        result = func(*args, **kwargs)

        try:
            # 2. Extract the report and the kernel name
            _, report = result
            kernel = args[0] if args else kwargs.get("kernel")
            latency_ms = (time.perf_counter() - started) * 1000

            # 3. Fire the run event
            logger.info(
                "kernel_run",
                kernel=type(kernel).__name__,
                peak_bits=report.peak_bits,
                tape_reads=report.tape_reads,
                emitted=report.sets_emitted,
                latency_ms=round(latency_ms, 3),
            )

        except Exception as e:
            # Observability should never crash the run
            logger.warn("observability_failed", error=str(e))

        return result

    return wrapper
