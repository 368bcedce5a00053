"""Exhaustive, budget-bounded searches over unit-fraction representations.

Everything here is exact: a "member"/"no solution" answer is only reported
after the stated space has been fully covered, and every witness is validated
before it is returned. Budgets (nodes, seconds) turn into explicit statuses
or BudgetExceeded, never into silently weaker claims.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, TextIO

from ._backend import BUDGET_OUT, dfs_solutions
from .errors import BudgetExceeded, PreconditionViolated
from .identities import Representation, validate

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class SearchBounds:
    max_denominator: int = 1000
    max_terms: int = 64
    node_budget: int = 10**7
    time_budget: float = 60.0

    def __post_init__(self):
        if min(self.max_denominator, self.max_terms, self.node_budget) < 1 or self.time_budget <= 0:
            raise PreconditionViolated("SearchBounds fields must all be positive")


class Status(str, Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted-no-solution"
    BUDGET = "budget-exceeded"


class LjStatus(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non-member"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchOutcome:
    status: Status
    witness: Optional[Representation]
    nodes_explored: int
    # the extremal quantity itself: min largest denominator (m_t), min
    # spread (m_prime_t), max representable integer (max_int_rep)
    value: Optional[int] = None

    def __post_init__(self):
        if self.status is Status.FOUND:
            ok, why = validate(self.witness)
            assert ok, why


@dataclass(frozen=True)
class LjOutcome:
    status: LjStatus
    witness: Optional[Representation]
    nodes_explored: int


class _Meter:
    """Shared node/time ledger across the probes of one operation."""

    def __init__(self, bounds: SearchBounds):
        self.bounds = bounds
        self.nodes = 0
        self.t0 = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self.t0

    def out_of_time(self) -> bool:
        return self.elapsed() > self.bounds.time_budget

    def remaining_nodes(self) -> int:
        return self.bounds.node_budget - self.nodes

    def spend(self, nodes: int) -> None:
        self.nodes += nodes

    def exhausted(self) -> bool:
        return self.out_of_time() or self.remaining_nodes() <= 0

    def raise_budget(self, what: str) -> None:
        raise BudgetExceeded(what, nodes=self.nodes, seconds=self.elapsed())


def _emit(log: Optional[TextIO], **kv) -> None:
    if log is not None:
        log.write(json.dumps(kv, sort_keys=True) + "\n")


def enumerate_reps(
    r,
    t: Optional[int] = None,
    bounds: SearchBounds = SearchBounds(),
) -> Iterator[Representation]:
    """Every representation of r with denominators <= bounds.max_denominator
    (exactly t terms when t is given), in lexicographic order.

    Raises BudgetExceeded after yielding whatever was found before the node
    budget ran out, so truncation is never silent.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if t is not None and t < 1:
        raise PreconditionViolated("term count must be positive")
    status, nodes, sols = dfs_solutions(
        r.numerator,
        r.denominator,
        1,
        bounds.max_denominator,
        t if t is not None else 0,
        bounds.node_budget,
        0,
    )
    for s in sols:
        rep = Representation(r, s)
        ok, why = validate(rep)
        assert ok, why
        yield rep
    if status == BUDGET_OUT:
        raise BudgetExceeded("enumeration truncated", nodes=nodes)


def t_zero(r, bounds: SearchBounds = SearchBounds(), log: Optional[TextIO] = None) -> int:
    """Least term count t for which r has a t-term representation whose
    largest denominator is at least 2.

    The >= 2 requirement only bites at t = 1 (any two distinct positive
    denominators already reach 2), where it rules out the trivial {1}.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if r.numerator == 1 and r.denominator >= 2:
        return 1
    meter = _Meter(bounds)
    for t in range(2, bounds.max_terms + 1):
        if meter.exhausted():
            meter.raise_budget(f"t_zero stopped before t={t}")
        status, nodes, sols = dfs_solutions(
            r.numerator, r.denominator, 1, 0, t, meter.remaining_nodes(), 1
        )
        meter.spend(nodes)
        _emit(log, op="t_zero", probe_t=t, nodes=meter.nodes, hit=bool(sols))
        if sols:
            return t
        if status == BUDGET_OUT:
            meter.raise_budget(f"t_zero undecided at t={t}")
    meter.raise_budget(f"t_zero not reached within {bounds.max_terms} terms")


def m_t(
    r,
    t: int,
    bounds: SearchBounds = SearchBounds(),
    log: Optional[TextIO] = None,
) -> SearchOutcome:
    """Smallest possible largest denominator over all t-term representations
    of r, proved by probing candidates in increasing order.

    A probe at X asks for exactly t-1 terms below X summing to r - 1/X, so
    the first hit is the minimum. Infeasible term counts (t below t_zero)
    come back as exhausted-no-solution: the quantity is infinite there.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if t < 1:
        raise PreconditionViolated("term count must be positive")
    meter = _Meter(bounds)
    if t < t_zero(r, bounds):
        return SearchOutcome(Status.EXHAUSTED, None, meter.nodes)
    if t == 1:
        x = r.denominator
        if x <= bounds.max_denominator:
            return SearchOutcome(Status.FOUND, Representation(r, (x,)), 0, value=x)
        return SearchOutcome(Status.EXHAUSTED, None, 0)
    # largest denominator is at least t/r (t reciprocals each >= 1/X) and at
    # least t (distinctness)
    lo = max(t, -(-t * r.denominator // r.numerator))
    for x in range(lo, bounds.max_denominator + 1):
        if meter.exhausted():
            return SearchOutcome(Status.BUDGET, None, meter.nodes)
        rest = r - Fraction(1, x)
        if rest <= 0:
            continue
        status, nodes, sols = dfs_solutions(
            rest.numerator, rest.denominator, 1, x - 1, t - 1, meter.remaining_nodes(), 1
        )
        meter.spend(nodes)
        _emit(log, op="m_t", probe_x=x, nodes=meter.nodes, hit=bool(sols))
        if sols:
            rep = Representation(r, sols[0] + (x,))
            return SearchOutcome(Status.FOUND, rep, meter.nodes, value=x)
        if status == BUDGET_OUT:
            return SearchOutcome(Status.BUDGET, None, meter.nodes)
    return SearchOutcome(Status.EXHAUSTED, None, meter.nodes)


def m_prime_t(r, t: int, bounds: SearchBounds = SearchBounds()) -> SearchOutcome:
    """Minimal spread (largest minus smallest denominator) over all t-term
    representations of r.

    Term-exact search is finite on its own (each level's denominator is at
    most remaining_terms/remaining_value), so the whole space is enumerated
    and max_denominator is not applied here; only budgets can truncate.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if t < 1:
        raise PreconditionViolated("term count must be positive")
    if t < t_zero(r, bounds):
        return SearchOutcome(Status.EXHAUSTED, None, 0)
    status, nodes, sols = dfs_solutions(
        r.numerator, r.denominator, 1, 0, t, bounds.node_budget, 0
    )
    if status == BUDGET_OUT:
        return SearchOutcome(Status.BUDGET, None, nodes)
    if not sols:
        return SearchOutcome(Status.EXHAUSTED, None, nodes)
    best = min(sols, key=lambda s: (s[-1] - s[0], s))
    rep = Representation(r, best)
    return SearchOutcome(Status.FOUND, rep, nodes, value=best[-1] - best[0])


def _above_part_max(x: int, count: int) -> Fraction:
    # largest possible sum of `count` distinct reciprocals with denominators > x
    return sum((Fraction(1, x + i) for i in range(1, count + 1)), Fraction(0))


def lj_member(
    r,
    j: int,
    x: int,
    bounds: SearchBounds = SearchBounds(),
) -> LjOutcome:
    """Can x be the j-th largest denominator in some representation of r?

    Returns non-member with a validated witness when it can, member after
    exhausting the finite decision space when it cannot, unknown only when a
    budget ran out. Terms below x are searched as subsets of {ceil(1/r)..x-1}
    with exact window pruning; the j-1 terms above x are solved algebraically
    for j = 2 (the remainder must be one unit fraction with denominator > x)
    and by term-exact recursion for larger j.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if j < 1:
        raise PreconditionViolated("rank must be positive")
    if x * r <= 1:
        raise PreconditionViolated(f"{x} is never a denominator of {r}")
    meter = _Meter(bounds)
    need_total = r - Fraction(1, x)
    above_cap = _above_part_max(x, j - 1)
    lo_below = max(1, -(-r.denominator // r.numerator))

    # exact suffix sums of 1/d over the below-range, for pruning
    suffix = {x: Fraction(0)}
    for d in range(x - 1, lo_below - 1, -1):
        suffix[d] = suffix[d + 1] + Fraction(1, d)

    witness = None

    class _Hit(Exception):
        pass

    class _Out(Exception):
        pass

    def close(chosen, got):
        """Try to finish with the j-1 above-x terms; True on witness."""
        nonlocal witness
        need = need_total - got
        if j == 1:
            if need == 0:
                witness = Representation(r, tuple(chosen) + (x,))
                return True
            return False
        if not (0 < need <= above_cap):
            return False
        if j == 2:
            if need.numerator == 1 and need.denominator > x:
                witness = Representation(r, tuple(chosen) + (x, need.denominator))
                return True
            return False
        if meter.exhausted():
            raise _Out
        status, nodes, sols = dfs_solutions(
            need.numerator, need.denominator, x + 1, 0, j - 1, meter.remaining_nodes(), 1
        )
        meter.spend(nodes)
        if status == BUDGET_OUT:
            raise _Out
        if sols:
            witness = Representation(r, tuple(chosen) + (x,) + sols[0])
            return True
        return False

    # tightest the below-sum may be for the above part to still fit
    floor_need = need_total - above_cap
    chosen: list[int] = []

    def below(d: int, got: Fraction) -> None:
        meter.spend(1)
        if meter.remaining_nodes() <= 0 or (meter.nodes % 256 == 0 and meter.out_of_time()):
            raise _Out
        if close(chosen, got):
            raise _Hit
        for nd in range(d, x):
            if got + suffix[nd] < floor_need:
                return  # even taking everything left falls short
            add = got + Fraction(1, nd)
            if add > need_total or (j >= 2 and add == need_total):
                continue  # already past the window; larger nd only smaller
            chosen.append(nd)
            below(nd + 1, add)
            chosen.pop()

    try:
        below(lo_below, Fraction(0))
    except _Hit:
        ok, why = validate(witness)
        assert ok, why
        return LjOutcome(LjStatus.NON_MEMBER, witness, meter.nodes)
    except _Out:
        return LjOutcome(LjStatus.UNKNOWN, None, meter.nodes)
    return LjOutcome(LjStatus.MEMBER, None, meter.nodes)


def lj_slice(
    r,
    j: int,
    lo: int,
    hi: int,
    bounds: SearchBounds = SearchBounds(),
    check_nesting: bool = False,
    log: Optional[TextIO] = None,
) -> dict:
    """lj_member across x in [lo, hi], as a JSON-friendly summary.

    With check_nesting the slice at rank j+1 is computed too and the
    containment members(j+1) <= members(j) is asserted wherever both ranks
    were decided.
    """
    r = Fraction(r)
    if lo > hi:
        raise PreconditionViolated("empty range")
    if lo * r <= 1:
        raise PreconditionViolated(f"range must start above 1/{r}")

    def run(rank):
        out = []
        for x in range(lo, hi + 1):
            res = lj_member(r, rank, x, bounds)
            out.append(
                {
                    "x": x,
                    "status": res.status.value,
                    "witness": list(res.witness.denominators) if res.witness else None,
                }
            )
            _emit(log, op="lj_slice", j=rank, x=x, status=res.status.value)
        return out

    results = run(j)
    summary = {
        "r": str(r),
        "j": j,
        "range": [lo, hi],
        "results": results,
        "members": [e["x"] for e in results if e["status"] == "member"],
        "undecided": [e["x"] for e in results if e["status"] == "unknown"],
    }
    if check_nesting:
        deeper = run(j + 1)
        j_status = {e["x"]: e["status"] for e in results}
        for e in deeper:
            if e["status"] == "member" and j_status[e["x"]] == "non-member":
                raise AssertionError(
                    f"nesting violated at x={e['x']}: member at rank {j + 1} "
                    f"but not at rank {j}"
                )
        summary["nested"] = {
            "j": j + 1,
            "members": [e["x"] for e in deeper if e["status"] == "member"],
            "undecided": [e["x"] for e in deeper if e["status"] == "unknown"],
        }
    return summary


def max_int_rep(
    x: int,
    bounds: SearchBounds = SearchBounds(),
    log: Optional[TextIO] = None,
) -> tuple[SearchOutcome, float]:
    """Largest integer expressible with distinct denominators <= x, plus the
    asymptotic comparison value log x + gamma - 4.5 (log log x)^2 / log x.

    Probes k downward from the harmonic-sum ceiling; each probe is a full
    (budgeted) subset search, so the first hit is the maximum.
    """
    if x < 1:
        raise PreconditionViolated("need x >= 1")
    meter = _Meter(bounds)
    cap = int(sum(Fraction(1, n) for n in range(1, x + 1)))
    comparison = (
        math.log(x) + EULER_GAMMA - 4.5 * math.log(math.log(x)) ** 2 / math.log(x)
        if x > 1
        else math.nan
    )
    for k in range(cap, 0, -1):
        if meter.exhausted():
            return SearchOutcome(Status.BUDGET, None, meter.nodes), comparison
        status, nodes, sols = dfs_solutions(k, 1, 1, x, 0, meter.remaining_nodes(), 1)
        meter.spend(nodes)
        _emit(log, op="max_int_rep", probe_k=k, nodes=meter.nodes, hit=bool(sols))
        if sols:
            rep = Representation(Fraction(k), sols[0])
            return SearchOutcome(Status.FOUND, rep, meter.nodes, value=k), comparison
        if status == BUDGET_OUT:
            return SearchOutcome(Status.BUDGET, None, meter.nodes), comparison
    # k = 1 always succeeds via {1}, so only a budget can land here
    return SearchOutcome(Status.BUDGET, None, meter.nodes), comparison
