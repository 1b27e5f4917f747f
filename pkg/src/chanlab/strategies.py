"""Online strategies for accepting or rejecting channel transactions.

A strategy sees the instance length and initial state upfront, then one
transaction at a time. It never sees future transactions. Strategy objects
are single-run: build a fresh one per run through a :class:`StrategyFactory`.

Registry names understood by :func:`resolve`::

    greedy
    reject-all
    reject-first
    transfer:X,F
    advice-optimal
    mixture:transfer-family:F
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional, Sequence

from .channel import (
    ChannelState,
    Decision,
    Instance,
    RunResult,
    Transaction,
    apply,
    decisions_to_bits,
    is_feasible,
)
from .errors import AdviceExhausted, IllegalAccept, InvalidParams
from .solver import DEFAULT_CAPITAL_CAP, solve_max


@dataclass
class StrategyContext:
    initial: ChannelState
    n: int
    current: ChannelState
    index: int = 0
    history: list[tuple[Transaction, Decision]] = field(default_factory=list)


@dataclass
class AdviceTape:
    bits: tuple[int, ...]
    cursor: int = 0

    def read(self) -> int:
        if self.cursor >= len(self.bits):
            raise AdviceExhausted(f"advice tape has only {len(self.bits)} bits")
        bit = self.bits[self.cursor]
        self.cursor += 1
        return bit

    @property
    def reads(self) -> int:
        return self.cursor

    def __str__(self) -> str:
        return decisions_to_bits(self.bits)


class Strategy:
    """Base class. Subclasses implement :meth:`decide`."""

    name = "strategy"
    randomized = False

    def __init__(self):
        self._started = False
        self.advice: Optional[AdviceTape] = None
        self.rng: Optional[random.Random] = None

    def begin(self, initial: ChannelState, n: int, advice=None, rng=None) -> None:
        if self._started:
            raise RuntimeError(f"strategy {self.name!r} already ran; build a fresh one")
        self._started = True
        self.advice = advice
        self.rng = rng

    def decide(self, ctx: StrategyContext, tx: Transaction) -> Decision:
        raise NotImplementedError

    def memo_key(self, ctx: StrategyContext) -> Optional[Hashable]:
        """Summary of everything besides ``ctx.current`` that future decisions
        depend on, or None when no such summary exists. Lets search code share
        work between histories that the strategy cannot tell apart."""
        return None


def _accept_if_feasible(ctx: StrategyContext, tx: Transaction) -> Decision:
    return Decision.ACCEPT if is_feasible(ctx.current, tx) else Decision.REJECT


class Greedy(Strategy):
    name = "greedy"

    def decide(self, ctx, tx):
        return _accept_if_feasible(ctx, tx)

    def memo_key(self, ctx):
        return ()


class RejectAll(Strategy):
    name = "reject-all"

    def decide(self, ctx, tx):
        return Decision.REJECT

    def memo_key(self, ctx):
        return ()


class RejectFirst(Strategy):
    """Rejects the first transaction, greedy afterwards."""

    name = "reject-first"

    def decide(self, ctx, tx):
        if ctx.index == 0:
            return Decision.REJECT
        return _accept_if_feasible(ctx, tx)

    def memo_key(self, ctx):
        return min(ctx.index, 1)


class Transfer(Strategy):
    """Moves exactly ``x`` to the right during the first ``f`` transactions.

    Transaction ``i < f`` is accepted iff bit ``i`` of ``x`` is set (and it is
    feasible). Every later transaction is accepted when feasible.
    """

    def __init__(self, x: int, f: int):
        super().__init__()
        if f < 1 or not 0 <= x < 2**f:
            raise InvalidParams(f"transfer needs f >= 1 and 0 <= x < 2^f, got x={x}, f={f}")
        self.x = x
        self.f = f
        self.name = f"transfer:{x},{f}"

    def decide(self, ctx, tx):
        if ctx.index < self.f and not (self.x >> ctx.index) & 1:
            return Decision.REJECT
        return _accept_if_feasible(ctx, tx)

    def memo_key(self, ctx):
        return min(ctx.index, self.f)


class AdviceOptimal(Strategy):
    """Follows advice for all but the last two transactions, then greedy.

    Greedy is already optimal on the final two: it only misses a pair when
    accepting the first blocks the second, and then no choice gets both.
    """

    name = "advice-optimal"

    def begin(self, initial, n, advice=None, rng=None):
        super().begin(initial, n, advice, rng)
        needed = max(n - 2, 0)
        if needed and (advice is None or len(advice.bits) - advice.cursor < needed):
            have = 0 if advice is None else len(advice.bits) - advice.cursor
            raise AdviceExhausted(f"advice-optimal needs {needed} advice bits, got {have}")

    def decide(self, ctx, tx):
        if ctx.index < ctx.n - 2:
            return Decision(self.advice.read())
        return _accept_if_feasible(ctx, tx)


class Mixture(Strategy):
    """Picks one member uniformly at random at the start of the run."""

    randomized = True

    def __init__(self, factories: Sequence["StrategyFactory"], name: str = "mixture"):
        super().__init__()
        if not factories:
            raise InvalidParams("a mixture needs at least one member")
        self.factories = list(factories)
        self.name = name
        self.delegate: Optional[Strategy] = None
        self.choice: Optional[int] = None

    def begin(self, initial, n, advice=None, rng=None):
        super().begin(initial, n, advice, rng)
        if rng is None:
            raise InvalidParams("a randomized strategy needs a seeded generator")
        self.choice = rng.randrange(len(self.factories))
        self.delegate = self.factories[self.choice]()
        self.delegate.begin(initial, n, advice, rng)

    def decide(self, ctx, tx):
        return self.delegate.decide(ctx, tx)

    def memo_key(self, ctx):
        inner = self.delegate.memo_key(ctx)
        return None if inner is None else (self.choice, inner)


@dataclass(frozen=True)
class StrategyFactory:
    """Named recipe producing fresh single-run strategy objects."""

    name: str
    build: Callable[[], Strategy] = field(compare=False)
    needs_advice: bool = False
    randomized: bool = False

    def __call__(self) -> Strategy:
        return self.build()


def greedy() -> StrategyFactory:
    return StrategyFactory("greedy", Greedy)


def reject_all() -> StrategyFactory:
    return StrategyFactory("reject-all", RejectAll)


def reject_first() -> StrategyFactory:
    return StrategyFactory("reject-first", RejectFirst)


def transfer_strategy(x: int, f: int) -> StrategyFactory:
    Transfer(x, f)  # validate eagerly
    return StrategyFactory(f"transfer:{x},{f}", lambda: Transfer(x, f))


def advice_optimal() -> StrategyFactory:
    return StrategyFactory("advice-optimal", AdviceOptimal, needs_advice=True)


def uniform_mixture(factories: Sequence[StrategyFactory], name: str = "mixture") -> StrategyFactory:
    factories = list(factories)
    if not factories:
        raise InvalidParams("a mixture needs at least one member")
    return StrategyFactory(name, lambda: Mixture(factories, name), randomized=True)


def transfer_family(f: int) -> list[StrategyFactory]:
    return [transfer_strategy(x, f) for x in range(2**f)]


def compute_advice(instance: Instance, capital_cap: int = DEFAULT_CAPITAL_CAP) -> AdviceTape:
    """Advice for :class:`AdviceOptimal`: the first n-2 decisions of the optimal witness."""
    witness = solve_max(instance, capital_cap).witness
    return AdviceTape(tuple(int(d) for d in witness[: max(len(witness) - 2, 0)]))


_TRANSFER_RE = re.compile(r"transfer:(\d+),(\d+)")
_MIXTURE_RE = re.compile(r"mixture:transfer-family:(\d+)")


def resolve(spec: str) -> StrategyFactory:
    """Turn a registry name into a factory. Raises InvalidParams if unknown."""
    spec = spec.strip()
    simple = {
        "greedy": greedy,
        "reject-all": reject_all,
        "reject-first": reject_first,
        "advice-optimal": advice_optimal,
    }
    if spec in simple:
        return simple[spec]()
    if m := _TRANSFER_RE.fullmatch(spec):
        return transfer_strategy(int(m[1]), int(m[2]))
    if m := _MIXTURE_RE.fullmatch(spec):
        f = int(m[1])
        if f < 1:
            raise InvalidParams("transfer family needs f >= 1")
        return uniform_mixture(transfer_family(f), name=spec)
    raise InvalidParams(f"unknown strategy {spec!r}")


def zero_advice_deterministic(max_f: int = 3) -> list[StrategyFactory]:
    """Every deterministic registry strategy that reads no advice, with
    transfer strategies enumerated for ``f <= max_f``."""
    out = [greedy(), reject_all(), reject_first()]
    for f in range(1, max_f + 1):
        out.extend(transfer_family(f))
    return out


@dataclass(frozen=True)
class Play:
    """Outcome of running one strategy online over one instance."""

    result: RunResult
    strategy: str
    advice_reads: int = 0

    @property
    def accepted(self) -> int:
        return self.result.accepted


def play(
    instance: Instance,
    factory: StrategyFactory | Strategy,
    advice: Optional[AdviceTape] = None,
    seed: int = 0,
    capital_cap: int = DEFAULT_CAPITAL_CAP,
) -> Play:
    """Run a strategy online over ``instance``.

    Advice-reading strategies get :func:`compute_advice` when no tape is given.
    Raises :class:`IllegalAccept` if the strategy accepts an infeasible
    transaction.
    """
    strategy = factory() if isinstance(factory, StrategyFactory) else factory
    if advice is None and isinstance(factory, StrategyFactory) and factory.needs_advice:
        advice = compute_advice(instance, capital_cap)
    n = len(instance.txs)
    strategy.begin(instance.initial, n, advice=advice, rng=random.Random(seed))
    ctx = StrategyContext(instance.initial, n, instance.initial)
    trace = []
    accepted = 0
    for i, tx in enumerate(instance.txs):
        ctx.index = i
        d = Decision(strategy.decide(ctx, tx))
        if d is Decision.ACCEPT:
            if not is_feasible(ctx.current, tx):
                raise IllegalAccept(i, strategy.name)
            ctx.current = apply(ctx.current, tx)
            accepted += 1
        ctx.history.append((tx, d))
        trace.append((d, ctx.current))
    result = RunResult(accepted, n - accepted, ctx.current, tuple(trace))
    return Play(result, strategy.name, advice.reads if advice is not None else 0)
