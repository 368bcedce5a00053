"""Lane parity: the compiled kernels must be bit-identical to the Python ones."""
import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest
import sympy

from egyfrac import _backend, _kernels_py

compiled = pytest.mark.skipif(not _backend.COMPILED, reason="compiled lane absent")

if _backend.COMPILED:
    from egyfrac import _kernels


class TestDispatch:
    def test_env_override_forces_python(self):
        out = subprocess.run(
            [sys.executable, "-c", "from egyfrac import _backend; print(_backend.NAME)"],
            capture_output=True,
            text=True,
            env={**os.environ, "EGYFRAC_PURE": "1"},
        )
        assert out.stdout.strip() == "python"

    @compiled
    def test_eligibility_boundaries(self):
        assert _backend._c_eligible(1, 1, 36, 3)
        assert not _backend._c_eligible(1, 1, 0, 3)  # unbounded window
        assert not _backend._c_eligible(1, 1, 41, 3)  # window too wide
        assert not _backend._c_eligible(1, 1, 36, 37)  # more terms than dens
        assert not _backend._c_eligible(9, 1, 36, 3)  # numerator too heavy
        assert not _backend._c_eligible(1, 1, 40, 3)  # lcm(1..40) breaks the cap

    @compiled
    def test_compiled_rejects_unbounded(self):
        with pytest.raises(ValueError):
            _kernels.dfs_solutions(1, 1, 1, 0, 3, 10**6, 1)


@compiled
class TestSieveParity:
    def test_pstar_matches(self):
        for lo, hi in [(1, 1), (1, 500), (367, 1000), (99990, 100100)]:
            a = _kernels.pstar_range(lo, hi)
            b = _kernels_py.pstar_range(lo, hi)
            assert np.array_equal(a, b)

    def test_pmax_matches(self):
        for lo, hi in [(1, 500), (367, 1000), (99990, 100100)]:
            assert np.array_equal(_kernels.pmax_range(lo, hi), _kernels_py.pmax_range(lo, hi))

    def test_pstar_against_sympy(self):
        arr = _kernels.pstar_range(2, 300)
        for i, n in enumerate(range(2, 301)):
            assert arr[i] == max(p**e for p, e in sympy.factorint(n).items())


@compiled
class TestSubsetParity:
    def test_seeded_battery(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randrange(2, 97)
            invs = [rng.randrange(0, n) for _ in range(rng.randrange(0, 14))]
            target = rng.randrange(0, n)
            assert _kernels.subset_inverse_dp(invs, n, target) == _kernels_py.subset_inverse_dp(
                invs, n, target
            )


@compiled
class TestDfsParity:
    CASES = [
        (1, 1, 2, 36, 0, 10**5, 0),  # free mode, budget-limited
        (1, 1, 2, 20, 0, 0, 0),  # free mode, exhaustive
        (1, 1, 2, 36, 3, 0, 0),  # exact terms, all solutions
        (4, 5, 2, 30, 4, 0, 5),  # solution limit
        (7, 12, 3, 36, 0, 10**4, 0),
        (1, 31, 32, 36, 2, 0, 0),  # empty result set
        (8, 1, 1, 36, 36, 10**5, 1),  # heaviest eligible numerator
    ]

    @pytest.mark.parametrize("case", CASES)
    def test_identical_triple(self, case):
        assert _kernels.dfs_solutions(*case) == _kernels_py.dfs_solutions(*case)

    def test_seeded_battery(self):
        rng = random.Random(11)
        for _ in range(60):
            den = rng.randrange(1, 40)
            num = rng.randrange(1, 4 * den + 1)
            max_den = rng.randrange(6, 38)
            if math.lcm(math.lcm(*range(1, max_den + 1)), den) > _backend._C_LCM_CAP:
                continue
            terms = rng.choice([0, 2, 3, 4])
            case = (num, den, rng.randrange(1, 5), max_den, terms, 20000, rng.choice([0, 3]))
            assert _kernels.dfs_solutions(*case) == _kernels_py.dfs_solutions(*case)

    def test_dispatcher_uses_compiled_for_eligible(self):
        # identical answers through the dispatcher regardless of lane
        triple = _backend.dfs_solutions(1, 1, 2, 36, 3, 0, 0)
        assert triple == _kernels_py.dfs_solutions(1, 1, 2, 36, 3, 0, 0)
