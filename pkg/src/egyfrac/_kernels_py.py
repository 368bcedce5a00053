"""Pure-Python implementations of the hot kernels.

Same call surface as the compiled module `_kernels`; arbitrary-precision ints,
so no size guards are needed here. `_backend` picks the lane at import.
"""
from __future__ import annotations

import math
import sys

import numpy as np

from .arith import primes_upto

NAME = "python"

# free-mode searches can go hundreds of terms deep
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def pstar_range(lo: int, hi: int) -> np.ndarray:
    """Array of P*(n) (largest prime-power divisor) for n in [lo, hi]."""
    if lo < 1 or hi < lo:
        raise ValueError("pstar_range: need 1 <= lo <= hi")
    res = np.ones(hi - lo + 1, dtype=np.int64)
    for p in primes_upto(hi):
        q = p
        while q <= hi:
            start = ((lo + q - 1) // q) * q
            if start <= hi:
                sl = res[start - lo :: q]
                np.maximum(sl, q, out=sl)
            q *= p
    return res


def pmax_range(lo: int, hi: int) -> np.ndarray:
    """Array of P(n) (largest prime divisor) for n in [lo, hi]."""
    if lo < 1 or hi < lo:
        raise ValueError("pmax_range: need 1 <= lo <= hi")
    res = np.ones(hi - lo + 1, dtype=np.int64)
    for p in primes_upto(hi):
        start = ((lo + p - 1) // p) * p
        if start <= hi:
            sl = res[start - lo :: p]
            np.maximum(sl, p, out=sl)
    return res


def subset_inverse_dp(invs, n: int, target: int):
    """Indices of a subset of invs summing to target mod n, or None.

    Reachability DP over residues with first-reachable predecessor links;
    items are taken in input order, so the result is deterministic. The empty
    subset answers target == 0.
    """
    target %= n
    if target == 0:
        return []
    prev_r = [-1] * n
    prev_i = [-1] * n
    reached = bytearray(n)
    reached[0] = 1
    for idx, v in enumerate(invs):
        v %= n
        snapshot = [r for r in range(n) if reached[r]]
        for r in snapshot:
            nr = r + v
            if nr >= n:
                nr -= n
            if not reached[nr]:
                reached[nr] = 1
                prev_r[nr] = r
                prev_i[nr] = idx
        if reached[target]:
            break
    if not reached[target]:
        return None
    out = []
    r = target
    while r != 0:
        out.append(prev_i[r])
        r = prev_r[r]
    out.sort()
    return out


# dfs_solutions status codes
DONE, LIMIT_HIT, BUDGET_OUT = 0, 1, 2


class _Stop(Exception):
    pass


def dfs_solutions(num, den, min_den, max_den, terms, node_budget, limit):
    """Depth-first search for representations of num/den as sums of distinct
    unit fractions with strictly increasing denominators.

    Denominators start at min_den; bounded above by max_den when max_den > 0.
    terms > 0 demands exactly that many terms, else any count (free mode needs
    max_den > 0 to terminate). Solutions come out in lexicographic order, at
    most `limit` of them (0 = no cap). Returns (status, nodes, solutions).
    """
    if num <= 0 or den <= 0:
        raise ValueError("dfs_solutions: target must be positive")
    if terms <= 0 and max_den <= 0:
        raise ValueError("dfs_solutions: free term count needs max_den")
    g = math.gcd(num, den)
    num, den = num // g, den // g
    sols = []
    state = {"nodes": 0, "status": DONE}

    if max_den > 0:
        L = math.lcm(math.lcm(*range(1, max_den + 1)), den)
        tail = [0] * (max_den + 2)
        for d in range(max_den, 0, -1):
            tail[d] = tail[d + 1] + L // d
    else:
        L = tail = None

    budget = node_budget if node_budget and node_budget > 0 else None
    path = []

    def rec(a, b, lo, k):
        state["nodes"] += 1
        if budget is not None and state["nodes"] > budget:
            state["status"] = BUDGET_OUT
            raise _Stop
        d0 = max(lo, -(-b // a))  # 1/d <= a/b
        if k > 0:
            ub = (k * b) // a
            if max_den > 0:
                ub = min(ub, max_den)
        else:
            ub = max_den
        if d0 > ub:
            return
        if max_den > 0:
            if k > 0:
                if k > max_den - d0 + 1:
                    return
                # k distinct terms <= max_den sum to at least the top-k tail
                if a * (L // b) < tail[max_den - k + 1]:
                    return
            elif a * max_den < b:
                return
        for d in range(d0, ub + 1):
            if max_den > 0:
                top = tail[d] if k <= 0 else tail[d] - tail[min(d + k, max_den + 1)]
                if a * (L // b) > top:
                    break
            nd = a * d - b
            if nd == 0:
                if k <= 1:
                    path.append(d)
                    sols.append(tuple(path))
                    path.pop()
                    if limit and len(sols) >= limit:
                        state["status"] = LIMIT_HIT
                        raise _Stop
                continue
            if k == 1:
                continue
            dd = b * d
            g2 = math.gcd(nd, dd)
            path.append(d)
            rec(nd // g2, dd // g2, d + 1, k - 1 if k > 0 else -1)
            path.pop()

    try:
        rec(num, den, max(min_den, 1), terms if terms > 0 else -1)
    except _Stop:
        pass
    return state["status"], state["nodes"], sols
