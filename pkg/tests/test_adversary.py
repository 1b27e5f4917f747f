import itertools

import pytest

from chanlab.adversary import (
    FamilyParams,
    adaptive_adversary,
    augmentation_factor,
    gen_advice_pair,
    gen_ix,
    gen_ix_family,
    gen_resource_aug,
    parse_family,
)
from chanlab.channel import ChannelState, Direction, Instance, Transaction
from chanlab.errors import InvalidParams, SearchBudgetExceeded
from chanlab.ratio import Unbounded, max_accept_ratio, ratio_sort_key
from chanlab.solver import brute_force, solve_max
from chanlab.strategies import greedy, play, reject_all, resolve, transfer_family

LR, RL = Transaction.lr, Transaction.rl


def test_gen_ix_examples():
    inst = gen_ix(FamilyParams(2, 8, 1))
    assert inst.initial == ChannelState(4, 1)
    assert inst.txs == (LR(1), LR(2), RL(2), LR(5), RL(5), LR(5), RL(5), LR(5))
    assert inst.label == "ix:2,8,1"

    inst = gen_ix(FamilyParams(1, 3, 0))
    assert inst.initial == ChannelState(2, 1)
    assert inst.txs == (LR(1), RL(1), LR(3))


@pytest.mark.parametrize("f", [1, 2, 3])
def test_gen_ix_opt_formula(f):
    for n in range(f + 2, 13):
        for x in range(2**f):
            opt = brute_force(gen_ix(FamilyParams(f, n, x))).opt_accepted
            via_loop = n - f + bin(x).count("1")
            # short loops lose to taking the whole prefix plus the probe
            assert opt == max(via_loop, f + 1), (f, n, x)
            if n >= 2 * f + 1:
                assert opt == via_loop


def test_family_shares_prefix():
    for f, n in [(1, 4), (2, 9), (3, 12)]:
        prefixes = {inst.txs[:f] for inst in gen_ix_family(f, n)}
        assert len(prefixes) == 1


@pytest.mark.parametrize("f, n", [(1, 5), (2, 8), (3, 11)])
def test_transfer_x_is_unique_best_on_ix(f, n):
    for inst, x in zip(gen_ix_family(f, n), range(2**f)):
        scores = [play(inst, s).accepted for s in transfer_family(f)]
        best = max(scores)
        assert [y for y, s in enumerate(scores) if s == best] == [x]


@pytest.mark.parametrize("f, n, x", [(0, 3, 0), (2, 3, 0), (2, 8, 4), (2, 8, -1)])
def test_family_params_guard(f, n, x):
    with pytest.raises(InvalidParams):
        FamilyParams(f, n, x)


def test_advice_pair():
    first, second = gen_advice_pair()
    assert first.initial == second.initial == ChannelState(2, 1)
    assert first.txs == (LR(2), LR(1), LR(1))
    assert second.txs == (LR(2), RL(3), RL(3))
    assert first.txs[0] == second.txs[0]
    assert brute_force(first).witness[0] == 0
    assert brute_force(second).witness[0] == 1


def test_resource_aug_examples():
    inst = gen_resource_aug(100, 20, 5, 2)
    assert inst.initial == ChannelState(100, 0)
    assert inst.txs == (LR(90), LR(100), RL(100), LR(100), RL(100))
    assert brute_force(inst).opt_accepted == 4
    assert brute_force(inst).witness[0] == 0

    inst = gen_resource_aug(100, 20, 5, 1)
    assert inst.txs == (LR(90),) + (RL(1),) * 4
    assert brute_force(inst).opt_accepted == 5
    assert augmentation_factor(100, 20) == pytest.approx(1.8)
    assert str(augmentation_factor(100, 20)) == "9/5"


@pytest.mark.parametrize(
    "args", [(100, 19, 5, 1), (100, 0, 5, 1), (100, 200, 5, 1), (100, 20, 1, 1), (100, 20, 5, 3), (0, 2, 5, 1)]
)
def test_resource_aug_guard(args):
    with pytest.raises(InvalidParams):
        gen_resource_aug(*args)


@pytest.mark.parametrize(
    "spec, count",
    [("ix:2,8,1", 1), ("ix-family:3,10", 8), ("advice-pair", 2), ("raug:100,20,5,2", 1)],
)
def test_parse_family_and_round_trip(spec, count):
    insts = parse_family(spec)
    assert len(insts) == count
    for inst in insts:
        text = inst.to_json()
        assert Instance.from_json(text) == inst
        assert Instance.from_json(text).to_json() == text


@pytest.mark.parametrize("spec", ["ix:2,8", "ix:a,b,c", "foo:1", "advice-pair:1", "raug:1,2,3", ""])
def test_parse_family_rejects(spec):
    with pytest.raises(InvalidParams):
        parse_family(spec)


# -- adaptive adversary ------------------------------------------------------


def naive_adaptive(factory, max_n, values, initial):
    """Oblivious enumeration of every sequence. Against a deterministic
    strategy the adaptive adversary can do no better."""
    options = [Transaction(d, v) for v in sorted(values) for d in Direction]
    best = ratio_sort_key(max_accept_ratio(0, 0))
    for length in range(1, max_n + 1):
        for seq in itertools.product(options, repeat=length):
            inst = Instance(initial, seq)
            alg = play(inst, factory).accepted
            opt = brute_force(inst).opt_accepted
            best = max(best, ratio_sort_key(max_accept_ratio(opt, alg)))
    return best


@pytest.mark.parametrize("spec", ["greedy", "reject-first", "transfer:1,2", "transfer:3,2"])
@pytest.mark.parametrize("max_n", [1, 2, 3, 4])
def test_adaptive_matches_naive(spec, max_n):
    out = adaptive_adversary(resolve(spec), max_n, [1, 2], ChannelState(2, 1))
    assert ratio_sort_key(out.ratio) == naive_adaptive(resolve(spec), max_n, [1, 2], ChannelState(2, 1))


def test_adaptive_greedy_unit_values_is_finite():
    out = adaptive_adversary(greedy(), 4, [1], ChannelState(1, 0))
    assert out.ratio is not Unbounded
    assert out.alg_accepted >= 1 or out.opt_accepted == 0


def test_adaptive_reject_all_unbounded():
    out = adaptive_adversary(reject_all(), 3, [1, 2], ChannelState(4, 1))
    assert out.ratio is Unbounded
    assert out.alg_accepted == 0 < out.opt_accepted


@pytest.mark.parametrize("factory", [greedy()] + transfer_family(2), ids=lambda f: f.name)
def test_adaptive_ratio_grows(factory):
    keys = []
    for max_n in (4, 6, 8, 10):
        out = adaptive_adversary(factory, max_n, [1, 2, 4], ChannelState(4, 1))
        assert out.opt_accepted == solve_max(out.instance).opt_accepted
        assert out.ratio == max_accept_ratio(out.opt_accepted, out.alg_accepted)
        # replaying the realised sequence offline reproduces ALG
        assert play(out.instance, factory).accepted == out.alg_accepted
        keys.append(ratio_sort_key(out.ratio))
    assert keys == sorted(keys)
    assert keys[-1] > keys[0] or keys[0][0] == 1


def test_adaptive_randomized_fixed_seed():
    mix = resolve("mixture:transfer-family:2")
    a = adaptive_adversary(mix, 5, [1, 2, 4], ChannelState(4, 1), seed=7)
    b = adaptive_adversary(mix, 5, [1, 2, 4], ChannelState(4, 1), seed=7)
    assert a == b


def test_adaptive_guards():
    with pytest.raises(InvalidParams):
        adaptive_adversary(greedy(), 13, [1], ChannelState(1, 0))
    with pytest.raises(InvalidParams):
        adaptive_adversary(greedy(), 4, list(range(1, 8)), ChannelState(1, 0))
    with pytest.raises(InvalidParams):
        adaptive_adversary(greedy(), 4, [], ChannelState(1, 0))
    with pytest.raises(SearchBudgetExceeded):
        adaptive_adversary(greedy(), 8, [1, 2, 4], ChannelState(4, 1), node_budget=50)
