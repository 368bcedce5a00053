"""Backend selection: compiled kernels when importable, pure Python otherwise.

Set EGYFRAC_PURE=1 to force the Python lane. The compiled DFS works in int64,
so it only takes jobs whose exact intermediates provably fit; everything else
routes to the Python lane regardless of which backend is active.
"""
from __future__ import annotations

import math
import os

from . import _kernels_py

if os.environ.get("EGYFRAC_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
NAME = "cython" if COMPILED else "python"

# int64 safety line for the compiled DFS: lcm of denominators times a small
# numerator must stay well under 2**63
_C_MAX_DEN = 40
_C_LCM_CAP = 1 << 52

pstar_range = _impl.pstar_range
pmax_range = _impl.pmax_range
subset_inverse_dp = _impl.subset_inverse_dp

DONE = _kernels_py.DONE
LIMIT_HIT = _kernels_py.LIMIT_HIT
BUDGET_OUT = _kernels_py.BUDGET_OUT


def _c_eligible(num, den, max_den, terms):
    if not COMPILED:
        return False
    if max_den <= 0 or max_den > _C_MAX_DEN:
        return False
    if terms > max_den:
        return False
    L = math.lcm(math.lcm(*range(1, max_den + 1)), den)
    return L <= _C_LCM_CAP and num <= 8 * den


def dfs_solutions(num, den, min_den, max_den, terms, node_budget, limit):
    """Dispatching front for the unit-fraction DFS; see _kernels_py.dfs_solutions."""
    if _c_eligible(num, den, max_den, terms):
        return _impl.dfs_solutions(num, den, min_den, max_den, terms, node_budget, limit)
    return _kernels_py.dfs_solutions(num, den, min_den, max_den, terms, node_budget, limit)
