import json
import subprocess
import sys
from fractions import Fraction

import pytest

from chanlab import cli
from chanlab.adversary import FamilyParams, gen_advice_pair, gen_ix
from chanlab.channel import ChannelState, Instance, load_instance, save_instance
from chanlab.errors import InfeasibleDecision


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_single(capsys):
    code, out, _ = run(capsys, "gen", "ix:2,8,1")
    assert code == 0
    assert out.strip() == gen_ix(FamilyParams(2, 8, 1)).to_json()


def test_gen_advice_pair_files(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "advice-pair", "--out", str(tmp_path / "pair.json"))
    assert code == 0
    got = [load_instance(tmp_path / f"pair-{i}.json") for i in range(2)]
    assert tuple(got) == gen_advice_pair()


def test_gen_malformed(capsys):
    code, _, err = run(capsys, "gen", "ix:2,8")
    assert code == cli.EXIT_USAGE
    assert "malformed" in err


def test_solve(tmp_path, capsys):
    path = tmp_path / "a.json"
    save_instance(gen_advice_pair()[0], path)
    code, out, _ = run(capsys, "solve", str(path))
    assert code == 0
    assert json.loads(out) == {"opt": 2, "witness": "011"}

    save_instance(Instance(ChannelState(5, 5), ()), path)
    assert json.loads(run(capsys, "solve", str(path))[1]) == {"opt": 0, "witness": ""}

    code, _, _ = run(capsys, "--solver-cap", "50", "solve", "raug:100,20,5,1")
    assert code == cli.EXIT_CAP


def test_run(capsys):
    code, out, _ = run(capsys, "run", "ix:2,8,1", "-s", "greedy")
    assert code == 0
    rep = json.loads(out)
    assert rep["ratio"] == "7/3" and rep["alg"] == 3 and rep["opt"] == 7 and rep["seed"] == 0
    rep = json.loads(run(capsys, "run", "ix:2,8,1", "-s", "transfer:1,2", "--seed", "4")[1])
    assert rep["ratio"] == "1/1" and rep["seed"] == 4
    assert run(capsys, "run", "ix:2,8,1", "-s", "nope")[0] == cli.EXIT_USAGE
    assert run(capsys, "run", "ix:2,8,1", "-s", "greedy", "--objective", "avg")[0] == cli.EXIT_USAGE


def test_global_flags_either_side(capsys):
    before = json.loads(run(capsys, "--seed", "9", "run", "ix:3,12,5", "-s", "mixture:transfer-family:3")[1])
    after = json.loads(run(capsys, "run", "ix:3,12,5", "-s", "mixture:transfer-family:3", "--seed", "9")[1])
    assert before == after
    assert before["seed"] == 9


def test_yao(capsys):
    rep = json.loads(run(capsys, "yao", "6", "64")[1])
    assert Fraction(rep["closed_form_bound"]) == Fraction(58, 14)
    assert Fraction(rep["empirical_bound"]) >= Fraction(58, 14)
    rep = json.loads(run(capsys, "yao", "6", "64", "--objective", "min")[1])
    assert rep["objective"] == "min"
    assert Fraction(rep["empirical_bound"]) >= Fraction(rep["closed_form_bound"])


def test_augment(capsys):
    rep = json.loads(run(capsys, "augment", "greedy", "100", "20", "20")[1])
    assert rep["ratio"] == "19/1" and rep["h"] == "9/5"
    assert run(capsys, "augment", "greedy", "100", "21", "20")[0] == cli.EXIT_USAGE


def test_adaptive(capsys):
    rep = json.loads(run(capsys, "adaptive", "reject-all", "4", "1")[1])
    assert rep["ratio"] == "unbounded" and rep["alg"] == 0
    rep = json.loads(run(capsys, "adaptive", "greedy", "6", "1,2,4")[1])
    assert rep["ratio"] == "5/1"
    code = run(capsys, "adaptive", "greedy", "8", "1,2,4", "--node-budget", "10")[0]
    assert code == cli.EXIT_CAP


def test_sweep_to_file(tmp_path, capsys):
    out = tmp_path / "s.csv"
    argv = ["sweep", "ix-family:2,8", "-s", "greedy", "-s", "transfer:1,2", "--out", str(out)]
    assert run(capsys, *argv)[0] == 0
    first = out.read_bytes()
    assert len(first.decode().splitlines()) == 1 + 4 * 2
    assert run(capsys, *argv)[0] == 0
    assert out.read_bytes() == first


def test_infeasible_exit_code(monkeypatch, capsys):
    def boom(cfg):
        raise InfeasibleDecision(2)

    monkeypatch.setitem(cli.COMMANDS, "solve", boom)
    assert run(capsys, "solve", "advice-pair")[0] == cli.EXIT_INFEASIBLE


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == cli.EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chanlab", "run", "ix:2,8,1", "-s", "greedy"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["ratio"] == "7/3"
