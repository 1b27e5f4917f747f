"""Exact offline optimum for the single-channel acceptance problem.

Two independent routes:

* :func:`solve_max` -- dynamic program over (step, left balance), O(n*T)
  time where T is the channel total.
* :func:`brute_force` -- exhaustive enumeration of every decision vector,
  checked against the prefix-sum form of the capital constraint. Used as the
  oracle for the DP.

Both break ties the same way: among optimal decision vectors the
lexicographically smallest one wins, with reject ordered before accept.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channel import Decision, DecisionVector, Direction, Instance
from .errors import CapitalTooLarge, InstanceTooLarge

DEFAULT_CAPITAL_CAP = 10**6
BRUTE_FORCE_MAX_N = 22

_CHUNK_BITS = 16


class Method(enum.Enum):
    DP = "DP"
    BRUTE_FORCE = "BruteForce"


@dataclass(frozen=True)
class OptResult:
    opt_accepted: int
    witness: DecisionVector
    method: Method


def solve_max(instance: Instance, capital_cap: int = DEFAULT_CAPITAL_CAP) -> OptResult:
    """Maximum number of transactions that can be accepted offline."""
    total = instance.initial.total
    if total > capital_cap:
        raise CapitalTooLarge(f"total capital {total} exceeds the solver cap {capital_cap}")
    n = len(instance.txs)
    width = total + 1
    dtype = np.int16 if n < 2**15 - 1 else np.int32

    # best[i, l]: most accepts achievable on txs[i:] starting with left balance l
    best = np.zeros((n + 1, width), dtype=dtype)
    for i in range(n - 1, -1, -1):
        nxt = best[i + 1]
        row = nxt.copy()
        v = instance.txs[i].value
        if v <= total:
            if instance.txs[i].direction is Direction.LR:
                np.maximum(row[v:], nxt[: width - v] + 1, out=row[v:])
            else:
                np.maximum(row[: width - v], nxt[v:] + 1, out=row[: width - v])
        best[i] = row

    left = instance.initial.left
    witness = []
    for i, tx in enumerate(instance.txs):
        if best[i + 1, left] == best[i, left]:
            witness.append(Decision.REJECT)
            continue
        witness.append(Decision.ACCEPT)
        left = left - tx.value if tx.direction is Direction.LR else left + tx.value
    return OptResult(int(best[0, instance.initial.left]), tuple(witness), Method.DP)


def brute_force(instance: Instance) -> OptResult:
    """Exhaustive search over all 2**n decision vectors."""
    n = len(instance.txs)
    if n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLarge(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if n == 0:
        return OptResult(0, (), Method.BRUTE_FORCE)

    total = instance.initial.total
    left0 = instance.initial.left
    deltas = [-tx.value if tx.direction is Direction.LR else tx.value for tx in instance.txs]
    # int64 prefix sums are exact while every partial sum stays below 2**62
    exact64 = total + sum(abs(d) for d in deltas) < 2**62
    dtype = np.int64 if exact64 else object
    delta_arr = np.array(deltas, dtype=dtype)
    # index 0 is the most significant bit, so integer order == lexicographic order
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)

    best_count, best_code = -1, -1
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, start + chunk, dtype=np.int64)
        bits = (codes[:, None] >> shifts) & 1
        balance = left0 + np.cumsum(bits.astype(dtype) * delta_arr, axis=1)
        ok = np.all((balance >= 0) & (balance <= total), axis=1)
        if not ok.any():
            continue
        counts = np.where(ok, bits.sum(axis=1), -1)
        top = int(counts.max())
        if top > best_count:
            best_count = top
            # argmax returns the first (smallest) code attaining the max
            best_code = int(codes[int(np.argmax(counts == top))])

    witness = tuple(Decision((best_code >> (n - 1 - i)) & 1) for i in range(n))
    return OptResult(best_count, witness, Method.BRUTE_FORCE)


def solve_min_reject(instance: Instance, capital_cap: int = DEFAULT_CAPITAL_CAP) -> int:
    """Minimum number of rejected transactions (complement of :func:`solve_max`)."""
    return len(instance.txs) - solve_max(instance, capital_cap).opt_accepted
