"""Competitive-ratio experiments.

Everything here is exact: counts are ints, ratios and expectations are
:class:`fractions.Fraction`, and unbounded ratios are the :data:`Unbounded`
marker rather than a large number.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .adversary import FamilyParams, augmentation_factor, gen_ix_family, gen_resource_aug, parse_family
from .channel import ChannelState, Instance
from .errors import InvalidParams
from .ratio import Ratio, format_ratio, max_accept_ratio, min_reject_ratio, ratio_sort_key
from .solver import DEFAULT_CAPITAL_CAP, solve_max
from .strategies import StrategyFactory, play, resolve, transfer_family

YAO_MAX_F = 12

CSV_COLUMNS = ("instance_label", "strategy", "objective", "alg", "opt", "ratio", "h", "seed")


class Objective(enum.Enum):
    MAX_ACCEPT = "max"
    MIN_REJECT = "min"

    @classmethod
    def parse(cls, text: str) -> "Objective":
        aliases = {"max": cls.MAX_ACCEPT, "maxaccept": cls.MAX_ACCEPT, "max-accept": cls.MAX_ACCEPT,
                   "min": cls.MIN_REJECT, "minreject": cls.MIN_REJECT, "min-reject": cls.MIN_REJECT}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise InvalidParams(f"unknown objective {text!r}") from None


@dataclass(frozen=True)
class RatioReport:
    instance_label: str
    strategy_name: str
    alg_value: int
    opt_value: int
    ratio: Ratio
    objective: Objective
    h: Optional[Fraction] = None
    seed: int = 0

    def row(self) -> list[str]:
        return [
            self.instance_label,
            self.strategy_name,
            self.objective.value,
            str(self.alg_value),
            str(self.opt_value),
            format_ratio(self.ratio),
            "" if self.h is None else format_ratio(self.h),
            str(self.seed),
        ]

    def to_dict(self) -> dict:
        return {
            "instance_label": self.instance_label,
            "strategy": self.strategy_name,
            "objective": self.objective.value,
            "alg": self.alg_value,
            "opt": self.opt_value,
            "ratio": format_ratio(self.ratio),
            "h": None if self.h is None else format_ratio(self.h),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class YaoReport:
    f: int
    n: int
    objective: Objective
    expected_alg: tuple[Fraction, ...]
    expected_opt: Fraction
    expected_ratio: tuple[Fraction, ...]
    empirical_bound: Fraction
    closed_form_bound: Fraction

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "n": self.n,
            "objective": self.objective.value,
            "expected_alg": [format_ratio(v) for v in self.expected_alg],
            "expected_opt": format_ratio(self.expected_opt),
            "expected_ratio": [format_ratio(v) for v in self.expected_ratio],
            "empirical_bound": format_ratio(self.empirical_bound),
            "closed_form_bound": format_ratio(self.closed_form_bound),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _report(label, name, alg_acc, opt_acc, n, objective, h=None, seed=0) -> RatioReport:
    if objective is Objective.MAX_ACCEPT:
        return RatioReport(label, name, alg_acc, opt_acc, max_accept_ratio(opt_acc, alg_acc),
                           objective, h, seed)
    alg_rej, opt_rej = n - alg_acc, n - opt_acc
    return RatioReport(label, name, alg_rej, opt_rej, min_reject_ratio(alg_rej, opt_rej),
                       objective, h, seed)


def run_ratio(
    instance: Instance,
    strategy: StrategyFactory,
    objective: Objective = Objective.MAX_ACCEPT,
    seed: int = 0,
    capital_cap: int = DEFAULT_CAPITAL_CAP,
) -> RatioReport:
    alg = play(instance, strategy, seed=seed, capital_cap=capital_cap).accepted
    opt = solve_max(instance, capital_cap).opt_accepted
    return _report(instance.label, strategy.name, alg, opt, len(instance.txs), objective, seed=seed)


def _yao_table(f: int, n: int) -> tuple[list[list[int]], list[int]]:
    if not 1 <= f <= YAO_MAX_F:
        raise InvalidParams(f"f must lie in [1, {YAO_MAX_F}], got {f}")
    FamilyParams(f, n, 0)
    instances = gen_ix_family(f, n)
    opts = [solve_max(inst).opt_accepted for inst in instances]
    # accepted[i][j] = A_i on I_j
    accepted = [[play(inst, s).accepted for inst in instances] for s in transfer_family(f)]
    return accepted, opts


def yao_bound_max(f: int, n: int) -> YaoReport:
    """Lower bound on randomized competitiveness over the uniform I_x family,
    min_i 1 / E_j[A_i(I_j) / OPT(I_j)], next to the closed form
    (n-f) / (2 (f + n/2^f))."""
    accepted, opts = _yao_table(f, n)
    size = 2**f
    exp_alg = tuple(Fraction(sum(row), size) for row in accepted)
    exp_ratio = tuple(sum(Fraction(a, o) for a, o in zip(row, opts)) / size for row in accepted)
    empirical = 1 / max(exp_ratio)
    closed = Fraction(n - f) / (2 * (f + Fraction(n, size)))
    return YaoReport(f, n, Objective.MAX_ACCEPT, exp_alg, Fraction(sum(opts), size), exp_ratio,
                     empirical, closed)


def yao_bound_min(f: int, n: int) -> YaoReport:
    """Rejection-count version: min_i E_j[rejected by A_i] / E_j[rejected by OPT],
    next to the closed form (n/f - 1 - 1/f)(1 - 2^-f)."""
    accepted, opts = _yao_table(f, n)
    size = 2**f
    exp_opt = Fraction(sum(n - o for o in opts), size)
    exp_alg = tuple(Fraction(sum(n - a for a in row), size) for row in accepted)
    # each A_i is optimal on I_i, and I_(2^f-1) admits every transaction, so
    # exp_opt > 0 whenever f >= 1
    exp_ratio = tuple(e / exp_opt for e in exp_alg)
    empirical = min(exp_ratio)
    closed = (Fraction(n, f) - 1 - Fraction(1, f)) * (1 - Fraction(1, size))
    return YaoReport(f, n, Objective.MIN_REJECT, exp_alg, exp_opt, exp_ratio, empirical, closed)


def resource_aug_experiment(
    strategy: StrategyFactory, C: int, eps: int, n: int, seed: int = 0
) -> RatioReport:
    """Worse of the two augmentation variants for ``strategy``.

    OPT plays on <C;0>, the strategy on <2C-eps;0>.
    """
    h = augmentation_factor(C, eps)
    worst = None
    for variant in (1, 2):
        base = gen_resource_aug(C, eps, n, variant)
        online = base.with_initial(ChannelState(2 * C - eps, 0))
        alg = play(online, strategy, seed=seed).accepted
        opt = solve_max(base).opt_accepted
        rep = _report(base.label, strategy.name, alg, opt, n, Objective.MAX_ACCEPT, h, seed)
        if worst is None or ratio_sort_key(rep.ratio) > ratio_sort_key(worst.ratio):
            worst = rep
    return worst


def _sweep_one(args) -> RatioReport:
    instance, spec, objective, seed, cap = args
    return run_ratio(instance, resolve(spec), objective, seed, cap)


def sweep_reports(
    family_spec: str | Sequence[Instance],
    strategy_specs: Sequence[str],
    objective: Objective = Objective.MAX_ACCEPT,
    seed: int = 0,
    capital_cap: int = DEFAULT_CAPITAL_CAP,
    workers: int = 1,
) -> list[RatioReport]:
    instances = parse_family(family_spec) if isinstance(family_spec, str) else list(family_spec)
    for spec in strategy_specs:
        resolve(spec)
    jobs = [(inst, spec, objective, seed, capital_cap) for inst in instances for spec in strategy_specs]
    if workers > 1 and len(jobs) > 1:
        # map() keeps input order regardless of completion order
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_one, jobs))
    return [_sweep_one(job) for job in jobs]


def reports_to_csv(reports: Sequence[RatioReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        writer.writerow(rep.row())
    return buf.getvalue()


def sweep(
    family_spec: str | Sequence[Instance],
    strategy_specs: Sequence[str],
    objective: Objective,
    output_path,
    seed: int = 0,
    capital_cap: int = DEFAULT_CAPITAL_CAP,
    workers: int = 1,
) -> list[RatioReport]:
    """Cross product of instances and strategies, written as CSV to ``output_path``."""
    reports = sweep_reports(family_spec, strategy_specs, objective, seed, capital_cap, workers)
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(reports_to_csv(reports))
    return reports
