import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from egyfrac import arith
from egyfrac.arith import PrimePower, UNIT
from egyfrac.errors import NotCoprime


def oracle_factor(n):
    # independent route: sympy's factorization
    return sorted(sympy.factorint(n).items())


def oracle_p_star(n):
    if n == 1:
        return 1
    return max(p**e for p, e in sympy.factorint(n).items())


class TestFactor:
    def test_frozen_values(self):
        assert arith.factor(12) == [(2, 2), (3, 1)]
        assert arith.factor(1) == []
        assert arith.factor(97) == [(97, 1)]
        assert arith.factor(360) == [(2, 3), (3, 2), (5, 1)]

    @given(st.integers(min_value=1, max_value=10**7))
    @settings(max_examples=300, deadline=None)
    def test_matches_oracle(self, n):
        assert arith.factor(n) == oracle_factor(n)

    def test_large_semiprime(self):
        n = 1000003 * 1000033
        assert arith.factor(n) == [(1000003, 1), (1000033, 1)]


class TestPStar:
    def test_unit_sentinel(self):
        assert arith.p_star(1) == UNIT
        assert UNIT.q == 1 and UNIT.p == 1 and UNIT.nu == 0

    def test_frozen_values(self):
        assert arith.p_star(12) == PrimePower(2, 2, 4)
        assert arith.p_star(100) == PrimePower(5, 2, 25)
        assert arith.p_star(97) == PrimePower(97, 1, 97)
        assert arith.p_star(2**10) == PrimePower(2, 10, 1024)

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=300, deadline=None)
    def test_matches_oracle(self, n):
        assert arith.p_star(n).q == oracle_p_star(n)

    @given(st.integers(min_value=2, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_is_max_prime_power_divisor(self, n):
        # defining property: the largest prime power dividing n
        q = arith.p_star(n).q
        assert n % q == 0
        pp = arith.p_star(q)
        assert pp.q == q  # q itself is a prime power
        # any larger divisor that is a prime power would contradict maximality
        for d in range(q + 1, min(n, 4 * q) + 1):
            if n % d == 0 and len(sympy.factorint(d)) == 1:
                pytest.fail(f"{d} | {n} is a larger prime power than {q}")


class TestPMax:
    def test_frozen_values(self):
        assert arith.p_max(1) == 1
        assert arith.p_max(12) == 3
        assert arith.p_max(2**20) == 2
        assert arith.p_max(9699690) == 19

    @given(st.integers(min_value=2, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_matches_oracle(self, n):
        assert arith.p_max(n) == max(sympy.factorint(n))


class TestLcmUpto:
    def test_frozen_values(self):
        assert arith.lcm_upto(1) == 1
        assert arith.lcm_upto(10) == 2520
        assert arith.lcm_upto(Fraction(21, 2)) == 2520  # floor applies
        assert arith.lcm_upto(20) == 232792560

    @given(st.integers(min_value=1, max_value=300))
    @settings(max_examples=60, deadline=None)
    def test_matches_direct_lcm(self, x):
        assert arith.lcm_upto(x) == math.lcm(*range(1, x + 1))

    @given(st.integers(min_value=1, max_value=200))
    @settings(max_examples=40, deadline=None)
    def test_exponential_bound(self, x):
        # L(x) <= e^{2x}
        assert math.log(arith.lcm_upto(x)) <= 2 * x


class TestPrimePowers:
    def test_list_upto_11(self):
        qs = [pp.q for pp in arith.prime_powers_upto(11)]
        assert qs == [2, 3, 4, 5, 7, 8, 9, 11]

    def test_counts(self):
        assert arith.prime_power_count(1) == 0
        assert arith.prime_power_count(2) == 1
        assert arith.prime_power_count(10) == 7
        assert arith.prime_power_count(30) == 16

    @given(st.integers(min_value=1, max_value=3000))
    @settings(max_examples=60, deadline=None)
    def test_count_matches_oracle(self, y):
        want = sum(1 for n in range(2, y + 1) if len(sympy.factorint(n)) == 1)
        assert arith.prime_power_count(y) == want

    def test_sorted_and_wellformed(self):
        pps = arith.prime_powers_upto(500)
        qs = [pp.q for pp in pps]
        assert qs == sorted(qs)
        for pp in pps:
            assert sympy.isprime(pp.p)
            assert pp.p**pp.nu == pp.q


class TestModInverse:
    def test_frozen(self):
        assert arith.mod_inverse(3, 7) == 5
        assert arith.mod_inverse(10, 7) == 5  # reduces first

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            arith.mod_inverse(6, 9)

    @given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_inverse_property(self, n, a):
        if math.gcd(a, n) != 1:
            with pytest.raises(NotCoprime):
                arith.mod_inverse(a, n)
        else:
            inv = arith.mod_inverse(a, n)
            assert 0 < inv < n or (n == 1 and inv == 0)
            assert (a * inv) % n == 1 % n


class TestDistToNearestInt:
    def test_exact_on_fractions(self):
        assert arith.dist_to_nearest_int(Fraction(13, 5)) == Fraction(2, 5)
        assert arith.dist_to_nearest_int(Fraction(7, 2)) == Fraction(1, 2)
        assert arith.dist_to_nearest_int(Fraction(-13, 5)) == Fraction(2, 5)
        assert arith.dist_to_nearest_int(5) == 0

    def test_float_path(self):
        assert abs(arith.dist_to_nearest_int(2.75) - 0.25) < 1e-12

    @given(st.fractions(min_value=-100, max_value=100, max_denominator=1000))
    @settings(max_examples=200, deadline=None)
    def test_matches_bruteforce(self, x):
        want = min(abs(x - k) for k in (math.floor(x), math.ceil(x)))
        assert arith.dist_to_nearest_int(x) == want


class TestTotientRatio:
    def test_frozen(self):
        assert arith.totient_ratio(12) == Fraction(1, 2)
        assert arith.totient_ratio(1) == 1
        assert arith.totient_ratio(7) == Fraction(7, 8)

    @given(st.integers(min_value=1, max_value=10**5))
    @settings(max_examples=100, deadline=None)
    def test_matches_oracle(self, k):
        want = Fraction(1)
        for p in sympy.factorint(k):
            want *= Fraction(p, p + 1)
        assert arith.totient_ratio(k) == want
