"""Prime-power clearing steps.

Each step subtracts a few unit fractions whose denominators have a prescribed
largest prime-power divisor q, chosen so the residual's own largest
prime-power divisor strictly decreases. Sizes of the new denominators are
controlled: roughly q² for the medium step, L(q) for the small step, and a
slice [ξx, x] for the large step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from . import _backend
from .arith import PrimePower, dist_to_nearest_int, factor, lcm_upto, mod_inverse, p_star, primes_upto
from .errors import (
    IntegerResidual,
    NoPairInWindow,
    NoSubsetFound,
    NotCoprime,
    PreconditionViolated,
)
from .reports import CountReport


def _as_prime_power(q) -> PrimePower:
    if isinstance(q, PrimePower):
        if q.p ** q.nu != q.q:
            raise PreconditionViolated(f"malformed prime power {q}")
        return q
    pp = p_star(int(q))
    if pp.q != q:
        raise PreconditionViolated(f"{q} is not a prime power")
    return pp


def inverse_pair(q, a: int, m2_max: Optional[int] = None) -> tuple[int, int]:
    """Lexicographically least pair (m1, m2) with (q-3)/2 <= m1 < m2 < q,
    p dividing neither, and inv(m1, p) + inv(m2, p) ≡ a (mod p).

    q must be a power of an odd prime, q >= 5. m2_max additionally caps m2
    (used by callers that need q*m2 under an element bound).
    """
    pp = _as_prime_power(q)
    if pp.p == 2 or pp.q < 5:
        raise PreconditionViolated(f"need an odd prime power >= 5, got {pp.q}")
    p, qv = pp.p, pp.q
    hi = qv if m2_max is None else min(qv, m2_max + 1)
    for m1 in range(max((qv - 3) // 2, 1), hi - 1):
        if m1 % p == 0:
            continue
        t = (a - mod_inverse(m1, p)) % p
        if t == 0:
            # inv(m2) would have to vanish mod p; no m2 pairs with this m1
            continue
        want = mod_inverse(t, p)
        m2 = m1 + 1 + ((want - m1 - 1) % p)
        if m2 < hi:
            return m1, m2
    raise NoPairInWindow(f"no admissible pair for q={qv}, a={a}, m2_max={m2_max}")


def clear_medium(q, cd: Fraction, max_element: Optional[int] = None) -> set[int]:
    """Denominators U (each with P* = q, inside [q²/5, q²]) such that
    cd - Σ_{n in U} 1/n has largest prime-power divisor < q.

    Odd q gives |U| = 2 via inverse_pair; even q gives {q(q-1)} when q divides
    the denominator and ∅ otherwise.
    """
    pp = _as_prime_power(q)
    if pp.q < 4:
        raise PreconditionViolated(f"need q >= 4, got {pp.q}")
    cd = Fraction(cd)
    d = cd.denominator
    if p_star(d).q > pp.q:
        raise PreconditionViolated(f"P*({d}) = {p_star(d).q} exceeds q = {pp.q}")
    p, qv = pp.p, pp.q
    if p == 2:
        if d % qv:
            return set()
        n = qv * (qv - 1)
        if max_element is not None and n > max_element:
            raise NoPairInWindow(f"even-q element {n} exceeds cap {max_element}")
        return {n}
    if d % qv == 0:
        a = cd.numerator * mod_inverse(d // qv, p) % p
    else:
        # nothing to cancel, but the pair itself must not introduce q:
        # inverse sum 0 mod p makes p divide m1+m2
        a = 0
    cap = None if max_element is None else max_element // qv
    m1, m2 = inverse_pair(pp, a, m2_max=cap)
    return {qv * m1, qv * m2}


def clear_small(cd: Fraction) -> int:
    """The single denominator n = L(q)/a of the small clearing step:
    q = P*(denominator), a ≡ c·(L(q)/q)·inv(d/q) (mod p) in [1, p-1];
    subtracting 1/n drops the residual's largest prime-power divisor below q.
    """
    cd = Fraction(cd)
    d = cd.denominator
    if d == 1:
        raise IntegerResidual(f"{cd} has no prime power to clear")
    pp = p_star(d)
    p, qv = pp.p, pp.q
    L = lcm_upto(qv)
    a = cd.numerator * (L // qv) * mod_inverse(d // qv, p) % p
    if a == 0:
        raise PreconditionViolated(f"congruence degenerated for {cd}")  # unreachable: c, L/q, d/q all coprime to p
    return L // a


def subset_inverse_sum(M: Iterable[int], n: int, a: int) -> Optional[set[int]]:
    """A subset K of M with Σ_{m in K} inv(m, n) ≡ a (mod n), or None.

    Exact reachability DP over residues; deterministic (first-reachable
    predecessor links over M in sorted order). Empty set answers a ≡ 0.
    """
    ms = sorted(set(int(m) for m in M))
    for m in ms:
        if math.gcd(m, n) != 1:
            raise NotCoprime(f"{m} shares a factor with modulus {n}")
    invs = [mod_inverse(m, n) for m in ms]
    idx = _backend.subset_inverse_dp(invs, n, a % n)
    if idx is None:
        return None
    return {ms[i] for i in idx}


def halfbig_verify(M: Iterable[int], n: int, h: int, B: float, C: float, k: int) -> CountReport:
    """Count elements of M whose scaled inverse h·inv(m,n)/n sits further than
    C(log log n)^k / (200·B·log^k n) from the nearest integer; the claim under
    test is that at least C/2 elements do.

    Hypotheses (each m < B, coprime to n, a product of k distinct primes not
    dividing n) are enforced; |M| > C is reported, not enforced; when it
    fails the report carries passed=None instead of a verdict.
    """
    ms = sorted(set(int(m) for m in M))
    if n < 3:
        raise PreconditionViolated(f"modulus {n} too small for the log log threshold")
    if not 0 < h < n:
        raise PreconditionViolated(f"need 0 < h < n, got h={h}")
    for m in ms:
        if math.gcd(m, n) != 1:
            raise PreconditionViolated(f"{m} is not coprime to {n}")
        if not m < B:
            raise PreconditionViolated(f"{m} is not below B = {B}")
        fac = factor(m)
        if len(fac) != k or any(e != 1 for _, e in fac):
            raise PreconditionViolated(f"{m} is not a product of {k} distinct primes")
        if any(n % p == 0 for p, _ in fac):
            raise PreconditionViolated(f"{m} has a prime factor dividing {n}")
    threshold = C * math.log(math.log(n)) ** k / (200 * B * math.log(n) ** k)
    count = 0
    for m in ms:
        if dist_to_nearest_int(Fraction(h * mod_inverse(m, n), n)) > threshold:
            count += 1
    hypotheses_met = len(ms) > C
    passed = (count >= C / 2) if hypotheses_met else None
    return CountReport.make(
        count,
        C / 2,
        n=n,
        h=h,
        B=B,
        C=C,
        k=k,
        size=len(ms),
        threshold=threshold,
        hypotheses_met=hypotheses_met,
        passed=passed,
    )


@dataclass(frozen=True)
class LargeStepParams:
    """Knobs for the large clearing step's candidate pool and subset solver.

    k: number of distinct primes per pool element (cofactor mode ignores it).
    pool_cap: pool elements are generated in increasing order and truncated here.
    subset_cap: reject subsets larger than this (None = no cap).
    pool_mode: "kprimes" builds products of k primes from the scaled interval;
        "cofactor" admits every cofactor that keeps P*(q·m) = q.
    """

    k: int = 2
    pool_cap: int = 4096
    subset_cap: Optional[int] = None
    pool_mode: str = "kprimes"


def _kprime_pool(qv: int, p: int, x: float, xi: float, k: int) -> list[int]:
    lo = (xi * x / qv) ** (1 / k)
    hi = (x / qv) ** (1 / k)
    # primes above q would push P*(q·m) past q
    ps = [r for r in primes_upto(min(int(hi), qv - 1)) if r > lo and r != p]
    pool = []
    for combo in combinations(ps, k):
        m = math.prod(combo)
        if xi * x / qv < m < x / qv:
            pool.append(m)
    pool.sort()
    return pool


def _cofactor_pool(qv: int, p: int, x: float, xi: float) -> list[int]:
    lo = int(xi * x / qv)
    hi = int(x / qv)
    pool = []
    for m in range(max(lo, 1), hi + 1):
        if not xi * x / qv < m <= x / qv:
            continue
        if m % p == 0:
            continue
        if p_star(m).q < qv:
            pool.append(m)
    return pool


def clear_large(
    q,
    cd: Fraction,
    x: float,
    xi: float,
    params: Optional[LargeStepParams] = None,
    allowed=None,
) -> set[int]:
    """Denominators U ⊆ [ξx, x], each with P*(n) = q, clearing q from the
    residual's denominator entirely: P*(den(cd − Σ_U 1/n)) < q.

    The pool of cofactors m (candidates for n = q·m) comes from params; the
    required inverse-sum subset is found by the exact residue DP. `allowed`,
    when given, restricts to n = q·m values contained in it (callers that must
    draw U out of an ambient set). Raises NoSubsetFound when the pool is empty
    or no subset meets the congruence.
    """
    pp = _as_prime_power(q)
    cd = Fraction(cd)
    if p_star(cd.denominator).q != pp.q:
        raise PreconditionViolated(
            f"P*({cd.denominator}) = {p_star(cd.denominator).q} is not q = {pp.q}"
        )
    if not 0 < xi < 1:
        raise PreconditionViolated(f"need xi in (0,1), got {xi}")
    params = params or LargeStepParams()
    qv = pp.q
    if params.pool_mode == "kprimes":
        pool = _kprime_pool(qv, pp.p, x, xi, params.k)
    elif params.pool_mode == "cofactor":
        pool = _cofactor_pool(qv, pp.p, x, xi)
    else:
        raise ValueError(f"unknown pool_mode {params.pool_mode!r}")
    if allowed is not None:
        pool = [m for m in pool if qv * m in allowed]
    pool = pool[: params.pool_cap]
    if not pool:
        raise NoSubsetFound(f"empty cofactor pool for q={qv}, x={x}, xi={xi}")
    a = cd.numerator * mod_inverse(cd.denominator // qv, qv) % qv
    K = subset_inverse_sum(pool, qv, a)
    if K is None:
        raise NoSubsetFound(f"no subset of {len(pool)} pool inverses sums to {a} mod {qv}")
    if params.subset_cap is not None and len(K) > params.subset_cap:
        raise NoSubsetFound(f"subset size {len(K)} exceeds cap {params.subset_cap}")
    U = {qv * m for m in K}
    after = cd - sum(Fraction(1, u) for u in U)
    assert p_star(after.denominator).q < qv, "clearing failed to drop P*"
    return U
