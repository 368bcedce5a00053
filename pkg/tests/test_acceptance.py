"""Acceptance suite: one test per shipped guarantee, in release order.

Each test is self-contained and states its own tolerances and budgets.
Derived constants are frozen from oracle runs; witnesses are always
re-validated with exact arithmetic rather than trusted.
"""
import io
import math
import random
import time
import warnings
from fractions import Fraction

import pytest

import conftest
from egyfrac import identities
from egyfrac.analytics import (
    dickman_rho,
    kloosterman_pairs,
    l1_member_exact,
    primesums_report,
    smooth_count,
)
from egyfrac.arith import lcm_upto, mod_inverse, p_star, prime_power_count, prime_powers_upto
from egyfrac.construct import dense_representation, represent_small
from egyfrac.errors import ResidualNonzero, SplitCollision
from egyfrac.identities import multi_split, split, validate
from egyfrac.lemmas import clear_medium, clear_small, inverse_pair, subset_inverse_sum
from egyfrac.search import LjStatus, SearchBounds, enumerate_reps, lj_slice, m_t, t_zero

DENSITY_LIMIT = 1 - math.exp(-1)

# (n, m) pairs where the telescoped split repeats a term; frozen from the
# exhaustive run below (the exact-sum check on every other pair is the oracle)
SPLIT_COLLISIONS = {
    (2, 4), (2, 10), (2, 18), (2, 28), (2, 40),
    (3, 9), (3, 17), (3, 27), (3, 39),
    (4, 16), (4, 26), (4, 38),
    (5, 25), (5, 37),
    (6, 36), (6, 50),
    (7, 49),
}


def test_c01_split_identities_exhaustive():
    """split and multi_split are exactly correct for all n <= 1000, m <= 50."""
    t0 = time.perf_counter()
    for n in range(2, 1001):
        a, b = split(n)
        assert a != b
        assert Fraction(1, a) + Fraction(1, b) == Fraction(1, n)
    collisions = set()
    for n in range(2, 1001):
        target = Fraction(1, n)
        for m in range(1, 51):
            try:
                parts = multi_split(n, m)
            except SplitCollision:
                collisions.add((n, m))
                continue
            assert len(parts) == m + 1
            assert len(parts) == len(set(parts))
            assert sum(Fraction(1, d) for d in parts) == target
    assert collisions == SPLIT_COLLISIONS
    assert time.perf_counter() - t0 < 10.0


def test_c02_inverse_pair_exhaustive():
    """Every odd prime power 5 <= q <= 5000, every residue a mod p: the pair
    sits in the window, avoids p, and hits the inverse-sum congruence."""
    t0 = time.perf_counter()
    calls = 0
    for pp in prime_powers_upto(5000):
        if pp.p == 2 or pp.q < 5:
            continue
        p, q = pp.p, pp.q
        for a in range(p):
            m1, m2 = inverse_pair(pp, a)
            assert (q - 3) // 2 <= m1
            assert m1 < m2 < q
            assert m1 % p != 0
            assert m2 % p != 0
            assert (mod_inverse(m1, p) + mod_inverse(m2, p)) % p == a
            calls += 1
    assert calls > 1_500_000
    assert time.perf_counter() - t0 < 60.0


def test_c03_clearing_steps_seeded():
    """50 seeded residuals per prime power 4 <= q <= 500: the pair step and
    the single-term step both strictly drop the residual's P*."""
    rng = random.Random(31415)
    pps = [pp for pp in prime_powers_upto(500) if pp.q >= 4]
    checked = 0
    for pp in pps:
        q, p = pp.q, pp.p
        other_primes = sorted({o.p for o in prime_powers_upto(q - 1)} - {p})
        for _ in range(50):
            # cofactor over distinct primes != p, each power < q, so the
            # denominator's largest exact prime-power divisor is exactly q
            s = 1
            for rp in rng.sample(other_primes, min(len(other_primes), rng.randrange(0, 4))):
                e = 1
                while rp ** (e + 1) < q and rng.random() < 0.4:
                    e += 1
                s *= rp ** e
            d = q * s
            c = rng.randrange(1, d)
            while c % p == 0:
                c = rng.randrange(1, d)
            cd = Fraction(c, d)
            assert p_star(cd.denominator).q == q

            U = clear_medium(pp, cd)
            after = cd - sum(Fraction(1, u) for u in U)
            assert p_star(after.denominator).q < q
            for u in U:
                assert p_star(u).q == q
                assert q * q / 5 <= u <= q * q

            n = clear_small(cd)
            assert p_star(n).q == q
            assert n <= lcm_upto(q)
            assert p_star((cd - Fraction(1, n)).denominator).q < q
            checked += 1
    assert checked == 50 * len(pps)
    # the even-q pair degenerates to the single element q(q-1)
    assert clear_medium(4, Fraction(1, 4)) == {12}
    assert p_star((Fraction(1, 4) - Fraction(1, 12)).denominator).q < 4


def test_c04_subset_inverse_sum_vs_exhaustive():
    """500 seeded instances, |M| <= 18, n <= 60: solvability agrees with an
    independent reachable-set accumulation, and returned subsets verify."""
    rng = random.Random(27182)
    solvable = 0
    for i in range(500):
        n = rng.randrange(2, 61)
        size = rng.randrange(1, 19)
        universe = [m for m in range(1, 400) if math.gcd(m, n) == 1]
        M = rng.sample(universe, min(size, len(universe)))
        a = rng.randrange(0, n)

        reach = {0}
        for m in M:
            inv = mod_inverse(m, n)
            reach |= {(r + inv) % n for r in reach}

        K = subset_inverse_sum(M, n, a)
        if K is None:
            assert a not in reach
        else:
            assert K <= set(M)
            assert sum(mod_inverse(m, n) for m in K) % n == a
            assert a in reach
            solvable += 1
        if len(M) <= 12:
            # third route: raw subset enumeration
            import itertools

            brute = any(
                sum(mod_inverse(m, n) for m in c) % n == a
                for k in range(len(M) + 1)
                for c in itertools.combinations(M, k)
            )
            assert brute == (K is not None)
    assert solvable > 100


def test_c05_minimal_largest_denominator_table():
    """t_zero(1) = 3; two terms never reach 1; the minimal largest
    denominator for t = 3..8 terms, proved by logged exhaustion."""
    t0 = time.perf_counter()
    assert t_zero(1) == 3
    assert list(enumerate_reps(1, t=2)) == []

    expected = {3: 6, 4: 12, 5: 15, 6: 15, 7: 18, 8: 20}  # 5..8 frozen from this run
    for t, want in expected.items():
        log = io.StringIO()
        out = m_t(1, t, SearchBounds(max_denominator=6 * t, node_budget=10**8), log=log)
        assert out.status.value == "found"
        assert out.value == want
        ok, why = validate(out.witness)
        assert ok, why
        assert out.witness.max_denominator() == want
        assert len(out.witness.denominators) == t
        # the log must show every smaller candidate probed and missed
        probes = [
            __import__("json").loads(line)
            for line in log.getvalue().splitlines()
            if '"m_t"' in line
        ]
        xs = [e["probe_x"] for e in probes]
        assert xs == list(range(xs[0], want + 1))
        assert [e["hit"] for e in probes] == [False] * (len(xs) - 1) + [True]
        assert 1.0 <= want / t <= 6.0
    assert time.perf_counter() - t0 < 300.0


def test_c06_second_rank_slice():
    """Rank-2 exclusions on [2,30]: every point decided, members exactly
    {2, 4}, 3 ruled out by the witness (2, 3, 6); rank-3 nests inside."""
    s = lj_slice(1, 2, 2, 30)
    assert s["undecided"] == []
    assert s["members"] == [2, 4]
    by_x = {e["x"]: e for e in s["results"]}
    assert by_x[3]["status"] == "non-member"
    assert by_x[3]["witness"] == [2, 3, 6]
    for e in s["results"]:
        if e["status"] == "non-member":
            w = e["witness"]
            assert sorted(w)[-2] == e["x"]
            assert sum(Fraction(1, d) for d in w) == 1

    nested = lj_slice(1, 2, 2, 20, check_nesting=True)
    assert nested["undecided"] == []
    assert nested["nested"]["undecided"] == []
    assert set(nested["nested"]["members"]) <= set(nested["members"])


# non-prime-powers in [6,32] the exhaustive decision leaves in: no
# representation of 1 has one of these as its largest denominator
L1_EXTRA_MEMBERS = {10, 14, 21, 22, 26}


def test_c07_largest_denominator_exclusions():
    """Prime powers in [2,32] can never be the largest denominator (hard);
    composite non-prime-powers in [6,32] split into recorded members and
    witnessed non-members."""
    bounds = SearchBounds(node_budget=10**8)
    members, nonmembers = set(), set()
    for x in range(2, 33):
        out = l1_member_exact(1, x, bounds)
        assert out.status != LjStatus.UNKNOWN, f"undecided at {x}"
        if out.status == LjStatus.MEMBER:
            members.add(x)
        else:
            nonmembers.add(x)
            w = out.witness
            ok, why = validate(w)
            assert ok, why
            assert w.max_denominator() == x

    prime_powers = {pp.q for pp in prime_powers_upto(32)}
    assert prime_powers <= members
    assert members - prime_powers == L1_EXTRA_MEMBERS
    assert nonmembers == set(range(2, 33)) - prime_powers - L1_EXTRA_MEMBERS


def test_c08_dense_builder_desk_scale():
    """dense_representation(1, x) succeeds and validates exactly at
    x in {300, 500, 1000}; the density bracket is advisory and reported."""
    reports = {}
    for x in (300, 500, 1000):
        rep, report = dense_representation(1, x)
        ok, why = validate(rep)
        assert ok, why
        assert rep.target == 1
        assert rep.max_denominator() <= x
        assert report["size"] == len(rep.denominators)
        assert report["density"] == report["size"] / x
        reports[x] = report

    dens = [reports[x]["density"] for x in (300, 500, 1000)]
    gap = reports[1000]["gap"]
    assert gap == pytest.approx(DENSITY_LIMIT - dens[2])
    soft = []
    if not dens[0] <= dens[1] <= dens[2]:
        soft.append(f"density not nondecreasing: {dens}")
    if not dens[2] > 0.45:
        soft.append(f"density at x=1000 is {dens[2]:.4f} <= 0.45")
    if soft:
        warnings.warn(
            "dense builder soft targets missed at desk scale: "
            + "; ".join(soft)
            + f"; gap to {DENSITY_LIMIT:.4f} is {gap:.4f}"
        )


def test_c09_kloosterman_pair_counts():
    """Exact pair count at (5,5) against 25/pi^2, and the relative error
    shrinks from k=101 to k=10007 at x=k."""
    t0 = time.perf_counter()
    r = kloosterman_pairs(5, 5)
    assert r.exact_count == 2
    assert r.main_term == pytest.approx(25 / math.pi**2, rel=1e-12)
    assert r.rel_error < 0.25
    small = kloosterman_pairs(101, 101)
    big = kloosterman_pairs(10007, 10007)
    assert big.rel_error < small.rel_error
    assert time.perf_counter() - t0 < 60.0


def test_c10_smooth_density_and_counts():
    """dickman_rho against its closed form on [1,2] and an independent
    quadrature; smooth_count within 20% of its estimate at x = 1e5."""
    for i in range(100):
        u = 1.0 + i / 99.0
        assert dickman_rho(u) == pytest.approx(1 - math.log(u), abs=1e-8)

    from test_analytics import oracle_rho

    for u in (2.5, 3.0, 4.0):
        assert dickman_rho(u) == pytest.approx(oracle_rho(u), abs=1e-5)

    rep = smooth_count(0.5, 1e5, 0.5)
    assert rep.rel_error < 0.2


def test_c11_prime_sums_trend_and_certificates():
    """Largest-factor sums track their main terms better at x = 1e6 than at
    x = 1e4 in both modes, and every representation produced so far passes
    the per-prime certificate sweep."""
    for star in (False, True):
        count_lo, sum_lo = primesums_report(0.5, 1e4, 1e3, star=star)
        count_hi, sum_hi = primesums_report(0.5, 1e6, 1e3, star=star)
        assert count_hi.rel_error < count_lo.rel_error
        assert sum_hi.rel_error < sum_lo.rel_error

    # the conftest hook records every construction; certify the run so far
    # (the autouse session fixture re-sweeps everything at teardown)
    assert identities.Representation.__init__ is conftest._recording_init
    snapshot = list(conftest.REPRESENTATION_REGISTRY)
    assert snapshot, "no representations recorded yet"
    assert conftest.sweep_certificates(snapshot) == []


def test_c12_small_scale_builder_corpus():
    """Seeded residual corpus at y in {30, 50, 80}: every success has
    exactly 2 pi*(y) elements, all at most 2 y^4, summing exactly; every
    failure carries a nonzero integer residual diagnostic."""
    rng = random.Random(16180)
    ok_count = fail_count = 0
    for y in (30, 50, 80):
        L = lcm_upto(y)
        need = 2 * prime_power_count(y)
        for _ in range(40):
            den = L // rng.choice([d for d in range(1, 30) if L % d == 0])
            num = rng.randrange(1, den)
            ab = Fraction(num, den)
            if not (0 < ab < 1 and float(ab) > 1 / math.log(y)):
                continue  # corpus keeps only inputs meeting the preconditions
            try:
                rep, trace = represent_small(ab, y)
            except ResidualNonzero as e:
                assert e.value != 0
                assert e.value == int(e.value)
                assert e.trace is not None
                fail_count += 1
                continue
            assert len(rep.denominators) == need
            assert rep.max_denominator() <= 2 * y**4
            ok, why = validate(rep)
            assert ok, why
            assert rep.target == ab
            trace.verify()
            ok_count += 1
    assert ok_count >= 1
    # frozen from this corpus run
    assert (ok_count, fail_count) == (59, 27)
