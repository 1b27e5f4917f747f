"""Single bidirectional payment channel: states, transactions, replay.

Capital moves like beads on an abacus: a transaction of value ``v`` is
feasible iff the sending side holds at least ``v``, and applying it shifts
``v`` units to the other side. The channel total never changes.

All amounts are integers in the unsigned 64-bit range; anything outside it
is rejected at construction time.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import CapitalOverflow, InfeasibleDecision, InsufficientCapital, InvalidParams

U64_MAX = 2**64 - 1


def _check_u64(name: str, value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParams(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise InvalidParams(f"{name} must be non-negative, got {value}")
    if value > U64_MAX:
        raise CapitalOverflow(f"{name}={value} exceeds 2^64-1")


class Direction(enum.Enum):
    LR = "LR"
    RL = "RL"

    @property
    def arrow(self) -> str:
        return "l,r" if self is Direction.LR else "r,l"


class Decision(enum.IntEnum):
    REJECT = 0
    ACCEPT = 1


@dataclass(frozen=True)
class ChannelState:
    """Capital distribution <left; right> on the edge."""

    left: int
    right: int

    def __post_init__(self):
        _check_u64("left", self.left)
        _check_u64("right", self.right)
        if self.left + self.right > U64_MAX:
            raise CapitalOverflow(f"total capital {self.left + self.right} exceeds 2^64-1")

    @property
    def total(self) -> int:
        return self.left + self.right

    def __str__(self) -> str:
        return f"<{self.left};{self.right}>"


@dataclass(frozen=True)
class Transaction:
    direction: Direction
    value: int

    def __post_init__(self):
        if not isinstance(self.direction, Direction):
            raise InvalidParams(f"direction must be a Direction, got {self.direction!r}")
        _check_u64("value", self.value)
        if self.value < 1:
            raise InvalidParams("transaction value must be at least 1")

    @classmethod
    def lr(cls, value: int) -> "Transaction":
        return cls(Direction.LR, value)

    @classmethod
    def rl(cls, value: int) -> "Transaction":
        return cls(Direction.RL, value)

    def __str__(self) -> str:
        return f"({self.direction.arrow},{self.value})"


@dataclass(frozen=True)
class Instance:
    initial: ChannelState
    txs: tuple[Transaction, ...]
    label: str = ""

    def __post_init__(self):
        # accept any sequence, store a tuple so instances stay hashable
        object.__setattr__(self, "txs", tuple(self.txs))
        for tx in self.txs:
            if not isinstance(tx, Transaction):
                raise InvalidParams(f"not a Transaction: {tx!r}")

    def __len__(self) -> int:
        return len(self.txs)

    def with_initial(self, initial: ChannelState) -> "Instance":
        return Instance(initial, self.txs, self.label)

    def to_dict(self) -> dict:
        return {
            "initial": {"left": self.initial.left, "right": self.initial.right},
            "txs": [{"dir": tx.direction.value, "value": tx.value} for tx in self.txs],
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Any) -> "Instance":
        if not isinstance(data, dict) or set(data) != {"initial", "txs", "label"}:
            raise InvalidParams("instance must be an object with keys initial, txs, label")
        init = data["initial"]
        if not isinstance(init, dict) or set(init) != {"left", "right"}:
            raise InvalidParams("initial must be an object with keys left, right")
        if not isinstance(data["txs"], list):
            raise InvalidParams("txs must be a list")
        if not isinstance(data["label"], str):
            raise InvalidParams("label must be a string")
        txs = []
        for item in data["txs"]:
            if not isinstance(item, dict) or set(item) != {"dir", "value"}:
                raise InvalidParams(f"bad transaction object: {item!r}")
            try:
                direction = Direction(item["dir"])
            except ValueError:
                raise InvalidParams(f"bad direction {item['dir']!r}") from None
            txs.append(Transaction(direction, item["value"]))
        return cls(ChannelState(init["left"], init["right"]), tuple(txs), data["label"])

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


DecisionVector = tuple[Decision, ...]


def decisions_from_bits(bits: str | Iterable[int]) -> DecisionVector:
    """Parse ``"0110"`` or an iterable of 0/1 into a decision vector."""
    out = []
    for b in bits:
        if b in ("0", 0, False):
            out.append(Decision.REJECT)
        elif b in ("1", 1, True):
            out.append(Decision.ACCEPT)
        else:
            raise InvalidParams(f"bad decision bit {b!r}")
    return tuple(out)


def decisions_to_bits(decisions: Iterable[int]) -> str:
    return "".join("1" if d else "0" for d in decisions)


@dataclass(frozen=True)
class RunResult:
    accepted: int
    rejected: int
    final_state: ChannelState
    trace: tuple[tuple[Decision, ChannelState], ...] = field(repr=False)

    @property
    def decisions(self) -> DecisionVector:
        return tuple(d for d, _ in self.trace)


def is_feasible(state: ChannelState, tx: Transaction) -> bool:
    if tx.direction is Direction.LR:
        return state.left >= tx.value
    return state.right >= tx.value


def apply(state: ChannelState, tx: Transaction) -> ChannelState:
    if not is_feasible(state, tx):
        raise InsufficientCapital(f"{tx} is infeasible from {state}")
    if tx.direction is Direction.LR:
        return ChannelState(state.left - tx.value, state.right + tx.value)
    return ChannelState(state.left + tx.value, state.right - tx.value)


def execute(instance: Instance, decisions: Sequence[int]) -> RunResult:
    """Replay ``instance`` applying the accepted transactions in order.

    Raises :class:`InfeasibleDecision` at the first accepted transaction that
    the current state cannot pay for.
    """
    if len(decisions) != len(instance.txs):
        raise ValueError(
            f"decision vector has length {len(decisions)}, instance has {len(instance.txs)}"
        )
    state = instance.initial
    trace = []
    accepted = 0
    for i, (tx, d) in enumerate(zip(instance.txs, decisions)):
        d = Decision(int(d))
        if d is Decision.ACCEPT:
            if not is_feasible(state, tx):
                raise InfeasibleDecision(i)
            state = apply(state, tx)
            accepted += 1
        trace.append((d, state))
    return RunResult(accepted, len(decisions) - accepted, state, tuple(trace))


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return Instance.from_json(fh.read())


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance.to_json())
        fh.write("\n")
