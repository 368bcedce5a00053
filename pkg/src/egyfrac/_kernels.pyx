# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels. Same call surface as _kernels_py; the dispatcher
in _backend only routes DFS jobs here whose intermediates provably fit in
64-bit (bounded denominator window, lcm cap), so no overflow checks appear
in the hot paths."""
import math

import numpy as np

from .arith import primes_upto

NAME = "cython"

DONE = 0
LIMIT_HIT = 1
BUDGET_OUT = 2


def pstar_range(lo, hi):
    """Array of P*(n) (largest prime-power divisor) for n in [lo, hi]."""
    if lo < 1 or hi < lo:
        raise ValueError("pstar_range: need 1 <= lo <= hi")
    cdef long long clo = lo, chi = hi, p, q, start, j, n
    res = np.ones(chi - clo + 1, dtype=np.int64)
    cdef long long[::1] v = res
    cdef long long m = v.shape[0]
    for p in primes_upto(hi):
        q = p
        while q <= chi:
            start = ((clo + q - 1) // q) * q
            j = start - clo
            while j < m:
                if v[j] < q:
                    v[j] = q
                j += q
            if q > chi // p:
                break
            q *= p
    return res


def pmax_range(lo, hi):
    """Array of P(n) (largest prime divisor) for n in [lo, hi]."""
    if lo < 1 or hi < lo:
        raise ValueError("pmax_range: need 1 <= lo <= hi")
    cdef long long clo = lo, chi = hi, p, start, j
    res = np.ones(chi - clo + 1, dtype=np.int64)
    cdef long long[::1] v = res
    cdef long long m = v.shape[0]
    for p in primes_upto(hi):
        start = ((clo + p - 1) // p) * p
        j = start - clo
        while j < m:
            if v[j] < p:
                v[j] = p
            j += p
    return res


def subset_inverse_dp(invs, n, target):
    """Indices of a subset of invs summing to target mod n, or None.

    First-reachable predecessor links over input order; identical output to
    the Python lane."""
    cdef long long cn = n
    cdef long long ctarget = target % cn
    if ctarget == 0:
        return []
    prev_r_arr = np.full(cn, -1, dtype=np.int64)
    prev_i_arr = np.full(cn, -1, dtype=np.int64)
    reached_arr = np.zeros(cn, dtype=np.uint8)
    snap_arr = np.empty(cn, dtype=np.int64)
    cdef long long[::1] prev_r = prev_r_arr
    cdef long long[::1] prev_i = prev_i_arr
    cdef unsigned char[::1] reached = reached_arr
    cdef long long[::1] snap = snap_arr
    reached[0] = 1
    cdef long long idx, v, r, nr, ns, si
    cdef Py_ssize_t k = len(invs)
    for idx in range(k):
        v = invs[idx] % cn
        ns = 0
        for r in range(cn):
            if reached[r]:
                snap[ns] = r
                ns += 1
        for si in range(ns):
            r = snap[si]
            nr = r + v
            if nr >= cn:
                nr -= cn
            if not reached[nr]:
                reached[nr] = 1
                prev_r[nr] = r
                prev_i[nr] = idx
        if reached[ctarget]:
            break
    if not reached[ctarget]:
        return None
    out = []
    r = ctarget
    while r != 0:
        out.append(int(prev_i[r]))
        r = prev_r[r]
    out.sort()
    return out


cdef class _Ctx:
    cdef long long L, budget, nodes
    cdef int status, limit, max_den
    cdef long long[::1] tail
    cdef list sols, path


# returns 1 to unwind (limit or budget), 0 to keep searching
cdef int _rec(_Ctx c, long long a, long long b, long long lo, int k):
    cdef long long d0, ub, d, nd, dd, g2, top, aL
    c.nodes += 1
    if c.budget > 0 and c.nodes > c.budget:
        c.status = BUDGET_OUT
        return 1
    d0 = lo
    if (b + a - 1) // a > d0:
        d0 = (b + a - 1) // a
    if k > 0:
        ub = (k * b) // a
        if ub > c.max_den:
            ub = c.max_den
    else:
        ub = c.max_den
    if d0 > ub:
        return 0
    aL = a * (c.L // b)
    if k > 0:
        if k > c.max_den - d0 + 1:
            return 0
        if aL < c.tail[c.max_den - k + 1]:
            return 0
    elif a * c.max_den < b:
        return 0
    for d in range(d0, ub + 1):
        if k <= 0:
            top = c.tail[d]
        else:
            top = c.tail[d] - c.tail[min(d + k, c.max_den + 1)]
        if aL > top:
            break
        nd = a * d - b
        if nd == 0:
            if k <= 1:
                c.path.append(d)
                c.sols.append(tuple(c.path))
                c.path.pop()
                if c.limit and len(c.sols) >= c.limit:
                    c.status = LIMIT_HIT
                    return 1
            continue
        if k == 1:
            continue
        dd = b * d
        g2 = _gcd(nd, dd)
        c.path.append(d)
        if _rec(c, nd // g2, dd // g2, d + 1, k - 1 if k > 0 else -1):
            return 1
        c.path.pop()
    return 0


cdef long long _gcd(long long a, long long b):
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def dfs_solutions(num, den, min_den, max_den, terms, node_budget, limit):
    """Bounded-window twin of _kernels_py.dfs_solutions; requires max_den > 0
    (the dispatcher never sends unbounded jobs here)."""
    if num <= 0 or den <= 0:
        raise ValueError("dfs_solutions: target must be positive")
    if max_den <= 0:
        raise ValueError("compiled lane requires a denominator bound")
    cdef long long g = math.gcd(num, den)
    cdef long long cnum = num // g, cden = den // g
    cdef _Ctx c = _Ctx()
    c.max_den = max_den
    c.L = math.lcm(math.lcm(*range(1, max_den + 1)), cden)
    tail_arr = np.zeros(max_den + 2, dtype=np.int64)
    cdef long long d
    for d in range(max_den, 0, -1):
        tail_arr[d] = tail_arr[d + 1] + c.L // d
    c.tail = tail_arr
    c.budget = node_budget if node_budget and node_budget > 0 else 0
    c.nodes = 0
    c.status = DONE
    c.limit = limit
    c.sols = []
    c.path = []
    _rec(c, cnum, cden, max(min_den, 1), terms if terms > 0 else -1)
    return c.status, int(c.nodes), c.sols
