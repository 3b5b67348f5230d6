from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from probgkat.semantics.automaton import Automaton

from .refinement import Partition, refinement_levels


def pseudometric(aut: Automaton, x: int, y: int, levels: Optional[List[Partition]] = None) -> Fraction:
    """0 when x and y are bisimilar, else 2^-n for the last chain level n relating them."""
    aut.check_state(x)
    aut.check_state(y)
    levels = levels if levels is not None else refinement_levels(aut)
    for i, level in enumerate(levels):
        if not level.same(x, y):
            return Fraction(1, 2 ** (i - 1))
    return Fraction(0)


def vector_distance(aut: Automaton, xs: Sequence[int], ys: Sequence[int]) -> Fraction:
    if len(xs) != len(ys):
        raise ValueError("vectors differ in length")
    levels = refinement_levels(aut)
    return max((pseudometric(aut, x, y, levels) for x, y in zip(xs, ys)), default=Fraction(0))


def format_distance(d: Fraction) -> str:
    if d == 0:
        return "0"
    if d == 1:
        return "1"
    n = d.denominator.bit_length() - 1
    if d.numerator != 1 or d.denominator != 2 ** n:
        raise ValueError(f"{d} is not a power of 1/2")
    return f"1/2^{n}"
