import itertools

import pytest
from hypothesis import strategies as st

from chanlab.channel import ChannelState, Direction, Instance, Transaction, execute
from chanlab.errors import InfeasibleDecision


def enumerate_opt(instance: Instance) -> int:
    """Slow third opinion: replay every decision vector through execute()."""
    best = 0
    for bits in itertools.product((0, 1), repeat=len(instance.txs)):
        try:
            best = max(best, execute(instance, bits).accepted)
        except InfeasibleDecision:
            pass
    return best


@st.composite
def instances(draw, max_n=8, max_value=8, max_capital=16):
    total = draw(st.integers(0, max_capital))
    left = draw(st.integers(0, total))
    n = draw(st.integers(0, max_n))
    txs = [
        Transaction(draw(st.sampled_from(list(Direction))), draw(st.integers(1, max_value)))
        for _ in range(n)
    ]
    return Instance(ChannelState(left, total - left), tuple(txs), "hyp")


@pytest.fixture
def pair_instances():
    from chanlab.adversary import gen_advice_pair

    return gen_advice_pair()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
