"""Exact integer and rational primitives: factorization, prime powers, inverses.

Conventions: the empty/unit cases use the sentinel prime power 1 = 1**0, so
p_star(1).q == 1 and p_max(1) == 1; all rationals are fractions.Fraction and
therefore always in lowest terms.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .errors import NotCoprime

DEFAULT_SIEVE_BOUND = 10**6


class PrimePower(NamedTuple):
    p: int
    nu: int
    q: int

    @classmethod
    def of(cls, p: int, nu: int) -> "PrimePower":
        return cls(p, nu, p**nu)


UNIT = PrimePower(1, 0, 1)

_primes: list[int] = []
_sieve_limit = 0


def _ensure_primes(limit: int) -> None:
    global _primes, _sieve_limit
    if limit <= _sieve_limit:
        return
    limit = max(limit, 1 << 10)
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(range(i * i, limit + 1, i))
    _primes = [i for i in range(limit + 1) if sieve[i]]
    _sieve_limit = limit


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit, ascending."""
    if limit < 2:
        return []
    _ensure_primes(limit)
    import bisect

    return _primes[: bisect.bisect_right(_primes, limit)]


def factor(n: int, bound: int = DEFAULT_SIEVE_BOUND) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as ordered (prime, exponent) pairs.

    Sieve-backed trial division; the sieve grows past `bound` only when the
    remaining cofactor demands it, so results are always exact.
    """
    if n < 1:
        raise ValueError(f"factor: n must be >= 1, got {n}")
    if n == 1:
        return []
    out = []
    rem = n
    trial_to = min(bound, math.isqrt(rem))
    _ensure_primes(max(trial_to, 2))
    i = 0
    while i < len(_primes):
        p = _primes[i]
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            out.append((p, e))
        i += 1
        if i == len(_primes) and p * p <= rem:
            _ensure_primes(min(math.isqrt(rem), 2 * _sieve_limit) + 1)
    if rem > 1:
        out.append((rem, 1))
    return out


def p_star(n: int, bound: int = DEFAULT_SIEVE_BOUND) -> PrimePower:
    """Largest prime power exactly dividing n; PrimePower(1, 0, 1) for n == 1."""
    fs = factor(n, bound)
    if not fs:
        return UNIT
    p, e = max(fs, key=lambda pe: pe[0] ** pe[1])
    return PrimePower.of(p, e)


def p_max(n: int, bound: int = DEFAULT_SIEVE_BOUND) -> int:
    """Largest prime factor of n; 1 for n == 1."""
    fs = factor(n, bound)
    return fs[-1][0] if fs else 1


def lcm_upto(x: float | int | Fraction) -> int:
    """lcm of 1..floor(x), computed as the product of p over prime powers p**v <= x."""
    m = math.floor(x)
    if m < 1:
        raise ValueError(f"lcm_upto: need x >= 1, got {x}")
    out = 1
    for p in primes_upto(m):
        q = p
        while q * p <= m:
            q *= p
        out *= q
    return out


def prime_powers_upto(y: float | int) -> list[PrimePower]:
    """Prime powers q = p**nu with 2 <= q <= y, ascending by q."""
    m = math.floor(y)
    if m < 2:
        return []
    out = []
    for p in primes_upto(m):
        q, nu = p, 1
        while q <= m:
            out.append(PrimePower(p, nu, q))
            q *= p
            nu += 1
    out.sort(key=lambda pp: pp.q)
    return out


def prime_power_count(y: float | int) -> int:
    """pi*(y): number of prime powers <= y."""
    return len(prime_powers_upto(y))


def mod_inverse(a: int, n: int) -> int:
    """Inverse of a modulo n in [0, n); raises NotCoprime when gcd(a, n) > 1."""
    if n < 1:
        raise ValueError(f"mod_inverse: modulus must be >= 1, got {n}")
    try:
        return pow(a % n, -1, n)
    except ValueError:
        raise NotCoprime(f"{a} is not invertible mod {n}") from None


def dist_to_nearest_int(x):
    """||x||: distance from x to the nearest integer. Exact for Fraction input."""
    if isinstance(x, Fraction):
        t = x.numerator % x.denominator
        return Fraction(min(t, x.denominator - t), x.denominator)
    if isinstance(x, int):
        return 0
    f = x - math.floor(x)
    return min(f, 1.0 - f)


def totient_ratio(k: int, bound: int = DEFAULT_SIEVE_BOUND) -> Fraction:
    """prod of p/(p+1) over the distinct primes p dividing k, as an exact Fraction."""
    if k < 1:
        raise ValueError(f"totient_ratio: need k >= 1, got {k}")
    out = Fraction(1)
    for p, _ in factor(k, bound):
        out *= Fraction(p, p + 1)
    return out
