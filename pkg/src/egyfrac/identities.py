"""Unit-fraction representations and the denominator-splitting identities.

A representation of a rational r is a finite set of distinct positive integers
whose reciprocals sum to r exactly. The splitting identity 1/n = 1/(n+1) +
1/(n(n+1)) and its m-fold telescoped form trade one denominator for several
larger ones without changing the sum.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import SplitAtOne, SplitCollision


@dataclass(frozen=True)
class Representation:
    """A target rational together with strictly increasing denominators.

    Construction checks shape only (positive, distinct, sorted); whether the
    reciprocals actually sum to the target is validate()'s job, so that broken
    candidates can be represented and diagnosed.
    """

    target: Fraction
    denominators: tuple[int, ...]

    def __init__(self, target, denominators: Iterable[int]):
        object.__setattr__(self, "target", Fraction(target))
        ds = tuple(sorted(int(d) for d in denominators))
        if any(d < 1 for d in ds):
            raise ValueError("denominators must be positive integers")
        if any(a == b for a, b in zip(ds, ds[1:])):
            raise ValueError("denominators must be distinct")
        object.__setattr__(self, "denominators", ds)

    def unit_sum(self) -> Fraction:
        return sum((Fraction(1, d) for d in self.denominators), Fraction(0))

    def max_denominator(self) -> int:
        return self.denominators[-1] if self.denominators else 0

    def spread(self) -> int:
        if not self.denominators:
            return 0
        return self.denominators[-1] - self.denominators[0]

    def to_json(self) -> str:
        return json.dumps(
            {
                "target": f"{self.target.numerator}/{self.target.denominator}",
                "denominators": list(self.denominators),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Representation":
        doc = json.loads(text)
        return cls(Fraction(doc["target"]), doc["denominators"])


def validate(rep: Representation) -> tuple[bool, str]:
    """Exact check that rep's reciprocals sum to its target.

    Returns (ok, diagnostic); the diagnostic names the defect when not ok.
    """
    if not rep.denominators:
        if rep.target == 0:
            return True, "empty representation of 0"
        return False, f"no denominators but target = {rep.target}"
    s = rep.unit_sum()
    if s != rep.target:
        return False, f"sum is {s}, target is {rep.target} (off by {s - rep.target})"
    return True, f"{len(rep.denominators)} terms, max {rep.max_denominator()}"


def split(n: int) -> tuple[int, int]:
    """1/n = 1/(n+1) + 1/(n(n+1)); returns (n+1, n(n+1))."""
    if n == 1:
        raise SplitAtOne("cannot split 1/1 into distinct unit fractions this way")
    if n < 1:
        raise ValueError(f"split: need n >= 1, got {n}")
    return n + 1, n * (n + 1)


def multi_split(n: int, m: int) -> set[int]:
    """Telescoped split: 1/n = 1/(n+m) + sum of 1/((n+i-1)(n+i)), i = 1..m.

    Returns the m+1 new denominators {n+m, n(n+1), ..., (n+m-1)(n+m)}.
    Raises SplitCollision when n+m coincides with one of the products (only
    possible once m reaches n^2 - n), since the set form of the identity then
    loses a term.
    """
    if n < 2:
        raise SplitAtOne(f"multi_split: need n >= 2, got {n}")
    if m < 1:
        raise ValueError(f"multi_split: need m >= 1, got {m}")
    prods = [(n + i - 1) * (n + i) for i in range(1, m + 1)]
    if n + m in prods:
        raise SplitCollision(f"n+m = {n + m} repeats a product for (n, m) = ({n}, {m})")
    return {n + m, *prods}


def split_extend(rep: Representation) -> Representation:
    """Split the largest denominator, giving a representation with one more term."""
    if not rep.denominators:
        raise ValueError("split_extend: empty representation")
    top = rep.max_denominator()
    if top == 1:
        raise SplitAtOne("only denominator is 1; no distinct split exists")
    a, b = split(top)
    rest = rep.denominators[:-1]
    # both new denominators exceed every remaining one, so distinctness holds
    return Representation(rep.target, rest + (a, b))
