"""Adversarial instance families and a search-based adaptive adversary.

Family specs accepted by :func:`parse_family`::

    ix:F,N,X          one member of the transfer family
    ix-family:F,N     all 2^F members
    advice-pair       the two 3-transaction instances on <2;1>
    raug:C,EPS,N,V    resource-augmentation variant V (1 or 2)
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .channel import ChannelState, Decision, Direction, Instance, Transaction, apply, is_feasible
from .errors import IllegalAccept, InvalidParams, SearchBudgetExceeded
from .ratio import Ratio, max_accept_ratio, ratio_sort_key
from .solver import solve_max
from .strategies import StrategyContext, StrategyFactory

ADAPTIVE_MAX_N = 12
ADAPTIVE_MAX_VALUES = 6
ADAPTIVE_MAX_CAPITAL = 4096
DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class FamilyParams:
    f: int
    n: int
    x: int

    def __post_init__(self):
        if self.f < 1:
            raise InvalidParams(f"f must be >= 1, got {self.f}")
        if self.n < self.f + 2:
            raise InvalidParams(f"n must be >= f+2 = {self.f + 2}, got {self.n}")
        if not 0 <= self.x < 2**self.f:
            raise InvalidParams(f"x must lie in [0, 2^f), got {self.x}")


def gen_ix(params: FamilyParams) -> Instance:
    """Transfer-family member: only moving exactly ``x`` right during the
    power-of-two prefix lets the full-capital loop through.

    Layout from <2^f; 1>: (l,r,1), (l,r,2), ..., (l,r,2^(f-1)), then
    (r,l,x+1), then n-f-1 loop transactions of value 2^f+1 alternating
    left-to-right and right-to-left, starting left-to-right. An odd loop
    length ends on a half loop.
    """
    f, n, x = params.f, params.n, params.x
    top = 2**f
    prefix = [Transaction.lr(2**i) for i in range(f)]
    loop = [
        Transaction(Direction.LR if k % 2 == 0 else Direction.RL, top + 1) for k in range(n - f - 1)
    ]
    return Instance(ChannelState(top, 1), (*prefix, Transaction.rl(x + 1), *loop), f"ix:{f},{n},{x}")


def gen_ix_family(f: int, n: int) -> list[Instance]:
    return [gen_ix(FamilyParams(f, n, x)) for x in range(2**f)]


def gen_advice_pair() -> tuple[Instance, Instance]:
    start = ChannelState(2, 1)
    first = Instance(
        start, (Transaction.lr(2), Transaction.lr(1), Transaction.lr(1)), "advice-pair:0"
    )
    second = Instance(
        start, (Transaction.lr(2), Transaction.rl(3), Transaction.rl(3)), "advice-pair:1"
    )
    return first, second


def gen_resource_aug(C: int, eps: int, n: int, variant: int) -> Instance:
    """Baseline instance on <C;0>. The online side is run on <2C-eps;0>.

    Variant 1 follows the opening (l,r,C-eps/2) with n-1 unit right-to-left
    transactions; variant 2 follows it with a full-capital loop of value C.
    """
    if C < 1:
        raise InvalidParams(f"C must be >= 1, got {C}")
    if eps < 2 or eps % 2 or eps >= 2 * C:
        raise InvalidParams(f"eps must be even with 0 < eps < 2C, got {eps}")
    if n < 2:
        raise InvalidParams(f"n must be >= 2, got {n}")
    if variant not in (1, 2):
        raise InvalidParams(f"variant must be 1 or 2, got {variant}")
    opening = Transaction.lr(C - eps // 2)
    if variant == 1:
        rest = [Transaction.rl(1)] * (n - 1)
    else:
        rest = [Transaction(Direction.LR if k % 2 == 0 else Direction.RL, C) for k in range(n - 1)]
    return Instance(ChannelState(C, 0), (opening, *rest), f"raug:{C},{eps},{n},{variant}")


def augmentation_factor(C: int, eps: int) -> Fraction:
    return 2 - Fraction(eps, C)


def _ints(text: str, count: int, spec: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != count or not all(re.fullmatch(r"\d+", p.strip()) for p in parts):
        raise InvalidParams(f"malformed family spec {spec!r}")
    return [int(p) for p in parts]


def parse_family(spec: str) -> list[Instance]:
    spec = spec.strip()
    kind, _, args = spec.partition(":")
    if kind == "advice-pair" and not args:
        return list(gen_advice_pair())
    if kind == "ix":
        f, n, x = _ints(args, 3, spec)
        return [gen_ix(FamilyParams(f, n, x))]
    if kind == "ix-family":
        f, n = _ints(args, 2, spec)
        FamilyParams(f, n, 0)
        return gen_ix_family(f, n)
    if kind == "raug":
        C, eps, n, variant = _ints(args, 4, spec)
        return [gen_resource_aug(C, eps, n, variant)]
    raise InvalidParams(f"unknown family spec {spec!r}")


# -- adaptive adversary ------------------------------------------------------


@dataclass(frozen=True)
class AdaptiveOutcome:
    instance: Instance
    alg_accepted: int
    opt_accepted: int
    ratio: Ratio
    nodes: int = 0


def _dp_step(dp: tuple[int, ...], tx: Transaction) -> tuple[int, ...]:
    # dp[l] = most accepts reaching left balance l, -1 when unreachable
    width = len(dp)
    v = tx.value
    out = list(dp)
    if v < width:
        if tx.direction is Direction.LR:
            for l in range(width - v):
                if dp[l + v] >= 0 and dp[l + v] + 1 > out[l]:
                    out[l] = dp[l + v] + 1
        else:
            for l in range(v, width):
                if dp[l - v] >= 0 and dp[l - v] + 1 > out[l]:
                    out[l] = dp[l - v] + 1
    return tuple(out)


class _Search:
    def __init__(self, factory, initial, max_n, options, seed, budget):
        self.factory = factory
        self.initial = initial
        self.max_n = max_n
        self.options = options
        self.seed = seed
        self.budget = budget
        self.nodes = 0
        self.memo: dict = {}
        # best ratio seen anywhere so far; only grows, so memoised values
        # computed under an older floor stay sound
        self.floor = ratio_sort_key(Fraction(0))

    def probe(self, prefix: Sequence[tuple[Transaction, Decision]]):
        """Fresh strategy fast-forwarded through ``prefix``."""
        strategy = self.factory()
        strategy.begin(self.initial, self.max_n, rng=random.Random(self.seed))
        ctx = StrategyContext(self.initial, self.max_n, self.initial)
        for i, (tx, d) in enumerate(prefix):
            ctx.index = i
            got = Decision(strategy.decide(ctx, tx))
            if got is not d:
                raise RuntimeError(f"strategy {strategy.name!r} is not reproducible under a fixed seed")
            if d is Decision.ACCEPT:
                ctx.current = apply(ctx.current, tx)
            ctx.history.append((tx, d))
        ctx.index = len(prefix)
        return strategy, ctx

    def run(self, prefix, current, alg, dp):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"more than {self.budget} game-tree nodes")
        here = ratio_sort_key(max_accept_ratio(max(dp), alg))
        best = (here, ())
        if here > self.floor:
            self.floor = here
        remaining = self.max_n - len(prefix)
        if remaining == 0:
            return best
        # branch and bound: OPT gains at most one per step and ALG never drops
        if alg > 0 and ratio_sort_key(Fraction(max(dp) + remaining, alg)) <= self.floor:
            return best

        strategy, ctx = self.probe(prefix)
        skey = strategy.memo_key(ctx)
        key = None if skey is None else (skey, current, alg, dp, remaining)
        if key is not None and key in self.memo:
            return self.memo[key]

        for tx in self.options:
            strategy, ctx = self.probe(prefix)
            d = Decision(strategy.decide(ctx, tx))
            nxt, nalg = current, alg
            if d is Decision.ACCEPT:
                if not is_feasible(current, tx):
                    raise IllegalAccept(len(prefix), strategy.name)
                nxt, nalg = apply(current, tx), alg + 1
            sub_key, sub_path = self.run(prefix + ((tx, d),), nxt, nalg, _dp_step(dp, tx))
            if sub_key > best[0]:
                best = (sub_key, (tx, *sub_path))
        if key is not None:
            self.memo[key] = best
        return best


def adaptive_adversary(
    factory: StrategyFactory,
    max_n: int,
    value_set: Sequence[int],
    initial: ChannelState,
    seed: int = 0,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> AdaptiveOutcome:
    """Exhaustive minimax adversary that sees each decision before choosing
    the next transaction.

    Each move is one of (direction, value) for value in ``value_set``. The
    adversary may stop at any length up to ``max_n``; it maximises OPT/ALG on
    the realised sequence. The strategy is told ``n = max_n`` upfront.
    Randomized strategies are re-created per probe with the same ``seed``,
    so the adversary reacts to decisions without ever reading the seed.
    """
    if not 1 <= max_n <= ADAPTIVE_MAX_N:
        raise InvalidParams(f"max_n must lie in [1, {ADAPTIVE_MAX_N}], got {max_n}")
    values = sorted(set(value_set))
    if not values or len(values) > ADAPTIVE_MAX_VALUES:
        raise InvalidParams(f"value_set must hold 1..{ADAPTIVE_MAX_VALUES} distinct values")
    if any(v < 1 for v in values):
        raise InvalidParams("transaction values must be >= 1")
    if initial.total > ADAPTIVE_MAX_CAPITAL:
        raise InvalidParams(f"adaptive search is limited to total capital <= {ADAPTIVE_MAX_CAPITAL}")

    options = [Transaction(d, v) for v in values for d in (Direction.LR, Direction.RL)]
    search = _Search(factory, initial, max_n, options, seed, node_budget)
    dp0 = tuple(0 if l == initial.left else -1 for l in range(initial.total + 1))
    _, path = search.run((), initial, 0, dp0)

    label = f"adaptive:{factory.name}:{max_n}:{','.join(map(str, values))}"
    instance = Instance(initial, path, label)
    strategy, ctx = search.probe(())
    alg = 0
    state = initial
    for i, tx in enumerate(path):
        ctx.index = i
        d = Decision(strategy.decide(ctx, tx))
        if d is Decision.ACCEPT:
            state = apply(state, tx)
            ctx.current = state
            alg += 1
        ctx.history.append((tx, d))
    opt = solve_max(instance).opt_accepted
    return AdaptiveOutcome(instance, alg, opt, max_accept_ratio(opt, alg), search.nodes)
