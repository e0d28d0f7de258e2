class KernelforgeError(Exception):
    """Base class for every error raised by the toolkit."""


class InstanceFormatError(KernelforgeError, ValueError):
    """Malformed or invalid instance text. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InfeasibleParametersError(KernelforgeError, ValueError):
    """Generator or oracle preconditions cannot be met."""


class TapeIndexError(KernelforgeError, IndexError):
    pass


class SpaceBudgetExceeded(KernelforgeError):
    """An armed SpaceMeter saw more live bits than its budget."""

    def __init__(self, live_bits: int, budget: int, register: str):
        self.live_bits = live_bits
        self.budget = budget
        self.register = register
        super().__init__(
            f"space budget exceeded: {live_bits} > {budget} bits (at {register})"
        )


class KernelInvariantError(KernelforgeError):
    """A stored family broke its superset-count invariant during an audited run."""


class UnsupportedModeError(KernelforgeError):
    pass
