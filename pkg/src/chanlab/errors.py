"""Exception hierarchy shared by every chanlab module."""


class ChanlabError(Exception):
    """Base class for all chanlab errors."""


class InvalidParams(ChanlabError, ValueError):
    """Malformed generator parameters, specs or instance data."""


class InsufficientCapital(ChanlabError):
    """A transaction was applied from a side holding less than its value."""


class CapitalOverflow(ChanlabError, OverflowError):
    """A capital value left the unsigned 64-bit range."""


class InfeasibleDecision(ChanlabError):
    """A decision vector accepts a transaction that cannot be executed."""

    def __init__(self, index: int):
        super().__init__(f"accepted transaction {index} is infeasible")
        self.index = index


class IllegalAccept(ChanlabError):
    """An online strategy accepted an infeasible transaction."""

    def __init__(self, index: int, strategy: str = "?"):
        super().__init__(f"strategy {strategy!r} accepted infeasible transaction {index}")
        self.index = index
        self.strategy = strategy


class CapitalTooLarge(ChanlabError):
    """The DP table would exceed the configured capital cap."""


class InstanceTooLarge(ChanlabError):
    """Exhaustive search was requested on too many transactions."""


class AdviceExhausted(ChanlabError):
    """A strategy read past the end of its advice tape."""


class SearchBudgetExceeded(ChanlabError):
    """The adaptive adversary's game-tree search ran out of node budget."""
