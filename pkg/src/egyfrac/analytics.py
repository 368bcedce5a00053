"""Exact counting scans compared against asymptotic main terms, divisibility
certificates for representation impossibility arguments, the Dickman function,
and congruence pair counts.

Counts are exact integers (or exact rationals for reciprocal sums); the
asymptotic side of each report is informational, with errors echoed rather
than asserted, since the underlying O-constants are unspecified.
"""
from __future__ import annotations

import bisect
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq

from ._backend import BUDGET_OUT, dfs_solutions, pmax_range, pstar_range
from .arith import factor, p_star, prime_powers_upto, totient_ratio
from .errors import NotARepresentation, PreconditionViolated
from .identities import Representation, validate
from .reports import CountReport
from .search import LjOutcome, LjStatus, SearchBounds

__all__ = [
    "CountReport",
    "BestPossCertificate",
    "mertens_sum",
    "primesums_report",
    "smooth_count",
    "dickman_rho",
    "bestposs_check",
    "bestposs_bound",
    "bestposs_delta",
    "kloosterman_pairs",
    "find_k_witness",
    "l1_proxy_count",
    "l1_member_exact",
]


def _recip_sum(ns) -> Fraction:
    """Exact sum of 1/n by pairwise reduction (balanced denominators)."""
    vals = [mpq(1, int(n)) for n in ns]
    if not vals:
        return Fraction(0)
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return Fraction(int(vals[0].numerator), int(vals[0].denominator))


def _chunks(lo: int, hi: int, parts: int):
    span = hi - lo + 1
    parts = max(1, min(parts, span))
    step = -(-span // parts)
    return [(a, min(a + step - 1, hi)) for a in range(lo, hi + 1, step)]


def mertens_sum(y: float, x: float, prime_powers: bool = False) -> CountReport:
    """Exact sum of 1/p over primes (or 1/q over prime powers) in (y, x],
    against the main term log(log x / log y)."""
    if not 2 <= y < x:
        raise PreconditionViolated("need 2 <= y < x")
    qs = [
        pp.q
        for pp in prime_powers_upto(math.floor(x))
        if pp.q > y and (prime_powers or pp.nu == 1)
    ]
    exact = _recip_sum(qs)
    main = math.log(math.log(x) / math.log(y))
    return CountReport.make(exact, main, y=y, x=x, prime_powers=prime_powers, terms=len(qs))


def primesums_report(
    alpha: float,
    x: float,
    y: float,
    star: bool = False,
    threads: int = 1,
) -> tuple[CountReport, CountReport]:
    """Count and reciprocal sum of n in [alpha*x, x] whose largest prime
    (prime-power with star) factor exceeds y.

    Returns (count report, reciprocal-sum report) with main terms
    (1-alpha)*x*log(log x/log y) and log(1/alpha)*log(log x/log y). y below
    sqrt(x) breaks the unique n = mp factorization the estimate rests on.
    """
    if not 0 < alpha < 1:
        raise PreconditionViolated("need 0 < alpha < 1")
    if y * y < x or y > x:
        raise PreconditionViolated("need sqrt(x) <= y <= x")
    lo, hi = math.ceil(alpha * x), math.floor(x)

    def scan(a, b):
        arr = (pstar_range if star else pmax_range)(a, b)
        idx = np.nonzero(arr > y)[0]
        return int(idx.size), _recip_sum((int(i) + a for i in idx))

    chunks = _chunks(lo, hi, threads)
    if threads <= 1:
        parts = [scan(a, b) for a, b in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda ab: scan(*ab), chunks))
    count = sum(p[0] for p in parts)
    rsum = sum((p[1] for p in parts), Fraction(0))
    loglog = math.log(math.log(x) / math.log(y))
    r1 = CountReport.make(count, (1 - alpha) * x * loglog, alpha=alpha, x=x, y=y, star=star)
    r2 = CountReport.make(rsum, math.log(1 / alpha) * loglog, alpha=alpha, x=x, y=y, star=star)
    return r1, r2


def smooth_count(
    alpha: float,
    x: float,
    eps: float,
    star: bool = True,
    threads: int = 1,
) -> CountReport:
    """Count of n in [alpha*x/2, alpha*x] with largest prime-power (prime if
    star is off) factor at most x^eps, against alpha*rho(1/eps)*x/2."""
    if not (0 < alpha < 1 and 0 < eps <= 1):
        raise PreconditionViolated("need alpha in (0,1), eps in (0,1]")
    lo, hi = math.ceil(alpha * x / 2), math.floor(alpha * x)
    bound = x**eps

    def scan(a, b):
        arr = (pstar_range if star else pmax_range)(a, b)
        return int(np.count_nonzero(arr <= bound))

    chunks = _chunks(lo, hi, threads)
    if threads <= 1:
        count = sum(scan(a, b) for a, b in chunks)
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            count = sum(ex.map(lambda ab: scan(*ab), chunks))
    main = alpha * dickman_rho(1 / eps) * x / 2
    return CountReport.make(count, main, alpha=alpha, x=x, eps=eps, star=star)


@lru_cache(maxsize=4096)
def _rho_march(u: float, n: int) -> float:
    """Trapezoid march of the delay recurrence on the grid 1 + j/n, plus a
    fractional ladder so arbitrary u stays aligned with its own u-1, u-2, ...
    (each ladder rung is one partial trapezoid step off the grid)."""
    h = 1.0 / n
    top_j = int(math.floor((u - 1.0) * n + 1e-9))
    vals = [1.0] * (top_j + 1)
    prev_f = 1.0  # integrand rho(t-1)/t at t = 1
    for j in range(1, top_j + 1):
        t = 1.0 + j * h
        rm1 = vals[j - n] if j >= n else 1.0
        f = rm1 / t
        vals[j] = vals[j - 1] - 0.5 * h * (prev_f + f)
        prev_f = f

    rungs = []
    v = u
    while v > 1.0 + 1e-12:
        rungs.append(v)
        v -= 1.0
    rho_below = 1.0  # rho at rungs[-1] - 1, which sits at or below 1
    out = 1.0
    for v in reversed(rungs):
        j = int(math.floor((v - 1.0) * n + 1e-9))
        t = 1.0 + j * h
        delta = max(v - t, 0.0)
        f_t = (vals[j - n] if j >= n else 1.0) / t
        f_v = rho_below / v
        out = vals[j] - 0.5 * delta * (f_t + f_v)
        rho_below = out
    return out


def dickman_rho(u: float) -> float:
    """Dickman's function: 1 on [0, 1], then the delay recurrence integrated
    at steps 1/512 and 1/1024 with Richardson extrapolation."""
    if u < 0:
        raise PreconditionViolated("need u >= 0")
    if u <= 1:
        return 1.0
    if u > 128:
        return 0.0
    v1 = _rho_march(float(u), 512)
    v2 = _rho_march(float(u), 1024)
    return max((4.0 * v2 - v1) / 3.0, 0.0)


@dataclass(frozen=True)
class BestPossCertificate:
    p: int
    w: tuple  # the p-divisible denominators, each divided by p
    lam: int
    n_value: int
    verdict: bool
    log_p: float
    log_bound: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "w": list(self.w),
            "lambda": self.lam,
            "N": self.n_value,
            "verdict": self.verdict,
            "log_p": self.log_p,
            "log_bound": self.log_bound,
        }


@lru_cache(maxsize=8)
def _log_lcm_table(top: int) -> tuple[tuple, tuple]:
    """Prime powers q <= top paired with running sums of log p: the partial
    sums are log lcm(1..q)."""
    pps = prime_powers_upto(top)
    qvals = tuple(pp.q for pp in pps)
    cum = tuple(itertools.accumulate(math.log(pp.p) for pp in pps))
    return qvals, cum


def bestposs_check(denominators, x: float, r) -> list[BestPossCertificate]:
    """Divisibility certificates, one per prime dividing some denominator but
    not the denominator of r.

    For each such p, the p-divisible denominators x_i give w_i = x_i/p,
    lam = lcm(w_i), N = lam * sum(1/w_i); the certificate checks p | N and
    N >= p (both hold for any valid representation, so a false
    verdict means an arithmetic bug upstream). log p is reported against
    log L(x/p) + log(log(x/p) + 1) for the size comparison.
    """
    r = Fraction(r)
    ds = sorted(set(int(d) for d in denominators))
    if any(d > x for d in ds):
        raise PreconditionViolated("denominators must not exceed x")
    if sum(Fraction(1, d) for d in ds) != r:
        raise NotARepresentation(f"denominators do not sum to {r}")
    den_primes = {p for p, _ in factor(r.denominator)}
    primes = sorted({p for d in ds for p, _ in factor(d)} - den_primes)
    out = []
    qvals = cum = ()
    if primes:
        qvals, cum = _log_lcm_table(math.floor(x / primes[0]))
    for p in primes:
        w = tuple(d // p for d in ds if d % p == 0)
        lam = math.lcm(*w)
        n_value = sum(lam // wi for wi in w)
        assert n_value == lam * sum(Fraction(1, wi) for wi in w)
        y = x / p
        idx = bisect.bisect_right(qvals, math.floor(y))
        log_l = cum[idx - 1] if idx else 0.0
        log_bound = log_l + math.log(math.log(y) + 1) if y >= 1 else math.nan
        out.append(
            BestPossCertificate(
                p=p,
                w=w,
                lam=lam,
                n_value=n_value,
                verdict=(n_value % p == 0 and n_value >= p),
                log_p=math.log(p),
                log_bound=log_bound,
            )
        )
    return out


def bestposs_delta(r) -> float:
    r = Fraction(r)
    return (1 - math.exp(-r) * (1 + r)) / 2


def bestposs_bound(r, x: float) -> float:
    """Upper-bound value (1-e^-r) x - (1 - e^-r (1+r)) x log log x / log x
    for the size of a dense representation with denominators up to x."""
    if x < 3:
        raise PreconditionViolated("need x >= 3")
    r = float(Fraction(r))
    lead = (1 - math.exp(-r)) * x
    slack = (1 - math.exp(-r) * (1 + r)) * x * math.log(math.log(x)) / math.log(x)
    return lead - slack


def kloosterman_pairs(k: int, x: float) -> CountReport:
    """Exact count of ordered pairs 0 < m, n < x, coprime, with
    m n = -1 (mod k), against (6 x^2 / pi^2 k) * prod_{p | k} p/(p+1).

    With x <= k there is at most one candidate n per m, picked off directly
    from n = -1/m (mod k).
    """
    if not 2 <= x <= k:
        raise PreconditionViolated("need 2 <= x <= k")
    count = 0
    for m in range(1, math.ceil(x)):
        if math.gcd(m, k) != 1:
            continue
        n0 = (-pow(m, -1, k)) % k
        if 0 < n0 < x and math.gcd(m, n0) == 1:
            count += 1
    main = 6 * x * x / (math.pi**2 * k) * float(totient_ratio(k))
    return CountReport.make(count, main, k=k, x=x)


def _pstar_at_most(n: int, bound: float) -> bool:
    if n == 1:
        return True
    rest = n
    for pp in prime_powers_upto(math.floor(bound)):
        if pp.nu == 1:
            while rest % pp.p == 0:
                rest //= pp.p
    if rest != 1:
        return False  # some prime above bound remains
    return p_star(n).q <= bound


def find_k_witness(k: int, smooth_bound: float, ceiling: Optional[int] = None) -> Optional[int]:
    """Smallest K = -1 (mod k) whose largest prime-power divisor stays at or
    under smooth_bound, scanning the progression k-1, 2k-1, ... up to
    max(k^2, 10^6); None if the scan ceiling passes without a hit."""
    if k < 2 or smooth_bound < 1:
        raise PreconditionViolated("need k >= 2 and a positive bound")
    top = ceiling if ceiling is not None else max(k * k, 10**6)
    for K in range(k - 1, top + 1, k):
        if K >= 1 and _pstar_at_most(K, smooth_bound):
            return K
    return None


def l1_proxy_count(r, x: float, C: float = 1.0) -> CountReport:
    """Count of n <= x whose largest prime-power divisor exceeds C n / log n,
    the prime not dividing the denominator of r (the family feeding the
    density lower bound) against x log log x / log x."""
    r = Fraction(r)
    if x < 3 or C <= 0:
        raise PreconditionViolated("need x >= 3 and C > 0")
    hi = math.floor(x)
    ns = np.arange(2, hi + 1, dtype=np.float64)
    qs = pstar_range(2, hi)
    mask = qs.astype(np.float64) > C * ns / np.log(ns)
    for p, _ in factor(r.denominator):
        powers = []
        q = p
        while q <= hi:
            powers.append(q)
            q *= p
        mask &= ~np.isin(qs, np.array(powers, dtype=np.int64))
    count = int(np.count_nonzero(mask))
    main = x * math.log(math.log(x)) / math.log(x)
    return CountReport.make(count, main, r=str(r), x=x, C=C)


def l1_member_exact(r, x: int, bounds: SearchBounds = SearchBounds()) -> LjOutcome:
    """Decide whether x can be the largest denominator in a representation
    of r: non-member exactly when r - 1/x is representable with distinct
    denominators below x, by exhaustive bounded search."""
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    if x * r <= 1:
        raise PreconditionViolated(f"{x} is never a denominator of {r}")
    rest = r - Fraction(1, x)
    if x == 1:
        return LjOutcome(LjStatus.MEMBER, None, 0)
    status, nodes, sols = dfs_solutions(
        rest.numerator, rest.denominator, 1, x - 1, 0, bounds.node_budget, 1
    )
    if sols:
        rep = Representation(r, sols[0] + (x,))
        ok, why = validate(rep)
        assert ok, why
        return LjOutcome(LjStatus.NON_MEMBER, rep, nodes)
    if status == BUDGET_OUT:
        return LjOutcome(LjStatus.UNKNOWN, None, nodes)
    return LjOutcome(LjStatus.MEMBER, None, nodes)
