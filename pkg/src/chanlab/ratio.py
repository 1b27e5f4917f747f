"""Exact competitive ratios, with a distinct value for unbounded ones."""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Unbounded:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unbounded"

    def __str__(self) -> str:
        return "unbounded"

    def __reduce__(self):
        return (_Unbounded, ())


Unbounded = _Unbounded()

Ratio = Union[Fraction, _Unbounded]


def max_accept_ratio(opt: int, alg: int) -> Ratio:
    """OPT/ALG on accepted counts. Unbounded iff ALG = 0 < OPT; 0/0 is 1."""
    if alg == 0:
        return Unbounded if opt > 0 else Fraction(1)
    return Fraction(opt, alg)


def min_reject_ratio(alg_rejected: int, opt_rejected: int) -> Ratio:
    """ALG/OPT on rejected counts. Unbounded iff OPT = 0 < ALG; 0/0 is 1."""
    if opt_rejected == 0:
        return Unbounded if alg_rejected > 0 else Fraction(1)
    return Fraction(alg_rejected, opt_rejected)


def ratio_sort_key(r: Ratio) -> tuple[int, Fraction]:
    return (1, Fraction(0)) if r is Unbounded else (0, Fraction(r))


def format_ratio(r: Ratio) -> str:
    """``"p/q"`` for finite ratios (always with a denominator), ``"unbounded"`` otherwise."""
    if r is Unbounded:
        return "unbounded"
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def parse_ratio(text: str) -> Ratio:
    if text == "unbounded":
        return Unbounded
    return Fraction(text)


def at_least(r: Ratio, bound) -> bool:
    return r is Unbounded or Fraction(r) >= Fraction(bound)
