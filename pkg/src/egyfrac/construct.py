"""Recursive builders for dense unit-fraction representations.

Three layers: represent_small clears prime powers q <= y out of a residual
with medium pair steps and small exact steps; represent_big assembles the
bulk of a representation from an ambient smooth window plus a congruence
descent; dense_representation composes the two at a concrete scale x.

Every asymptotically-justified claim from the underlying argument is turned
into a runtime check here: the builders verify their conclusions exactly
(rational arithmetic) and fail loudly with diagnostics when a scale is too
small for the construction to go through.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from ._backend import pstar_range
from .arith import (
    PrimePower,
    lcm_upto,
    p_star,
    prime_power_count,
    prime_powers_upto,
)
from .errors import (
    InfeasibleAtScale,
    NoPairInWindow,
    NoSubsetFound,
    PreconditionViolated,
    ResidualNonzero,
)
from .identities import Representation, multi_split, validate
from .lemmas import LargeStepParams, clear_large, clear_medium, clear_small


@dataclass(frozen=True)
class TraceStep:
    index: int
    q: PrimePower
    used: tuple
    residual_after: Fraction
    fired: bool
    kind: str  # "medium" | "small" | "large"

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "q": self.q.q,
            "used": sorted(self.used),
            "residual_after": str(self.residual_after),
            "fired": self.fired,
            "kind": self.kind,
        }


@dataclass
class ConstructionTrace:
    initial: Fraction
    direction: str  # "shrink": residual loses sum(1/n); "grow": gains it
    steps: list = field(default_factory=list)
    final: Optional[Fraction] = None
    diagnostics: dict = field(default_factory=dict)

    def record(self, index, q, used, residual_after, fired, kind):
        self.steps.append(
            TraceStep(index, q, tuple(sorted(used)), residual_after, fired, kind)
        )

    def verify(self) -> tuple[bool, str]:
        """Exact telescoping, pairwise disjointness, and the per-step
        largest-prime-power stamp."""
        sign = -1 if self.direction == "shrink" else 1
        r = self.initial
        seen = set()
        for st in self.steps:
            r = r + sign * sum(Fraction(1, n) for n in st.used)
            if r != st.residual_after:
                return False, f"telescoping broken at step {st.index}"
            for n in st.used:
                if n in seen:
                    return False, f"{n} used twice"
                if p_star(n).q != st.q.q:
                    return False, f"{n} not stamped with q={st.q.q}"
            seen.update(st.used)
        if self.final is not None and self.steps and r != self.final:
            return False, "final residual mismatch"
        return True, ""

    def to_dict(self) -> dict:
        return {
            "initial": str(self.initial),
            "direction": self.direction,
            "final": None if self.final is None else str(self.final),
            "steps": [s.to_dict() for s in self.steps],
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class ConstructionParams:
    """Tuning knobs for the big-set builder and the composed pipeline.

    Defaults lean on the asymptotic argument (smoothness log-power 22,
    residual exponent 1/5, k-prime pools); DESK_PARAMS swaps in the values
    that make the construction land at concrete x in the hundreds, where
    the log-power form of every bound is useless.
    """

    alpha: Optional[float] = None  # None: e^{-r} at call time
    xi: float = 0.75
    eta: float = 0.2
    epsilon: float = 0.2  # descent floor and residual smoothness, as x^epsilon
    exp: int = 22  # ambient smoothness bound x * log^{-exp} x
    k: int = 2
    pool_mode: str = "kprimes"
    pool_cap: int = 4096
    collision_policy: str = "remove-from-ambient"  # or "fail"

    def effective_alpha(self, r) -> float:
        a = self.alpha if self.alpha is not None else math.exp(-float(r))
        eta = min(self.eta, a)
        if not 0 < eta <= a <= self.xi < 1:
            raise PreconditionViolated(
                f"need 0 < eta <= alpha <= xi < 1, got {eta}, {a}, {self.xi}"
            )
        return a


DESK_PARAMS = ConstructionParams(epsilon=0.5, exp=2, pool_mode="cofactor")


def _small_stage_boundary(y: float) -> int:
    # prime powers up to log y go through the exact small step; never fewer
    # than two, so 2 and 3 always sit below the boundary
    return max(prime_power_count(math.log(y)), 2)


def represent_small(ab, y: float, pad: bool = True) -> tuple[Representation, ConstructionTrace]:
    """Represent ab exactly with denominators stamped by the prime powers
    up to y: one descending pass of medium pair steps for q above the
    small-stage boundary, then exact clearing steps at the bottom.

    On success (final residual exactly 0) the set is padded by a multi-way
    split of its largest element to exactly 2 * prime_power_count(y)
    elements, all at most 2 y^4. A nonzero final residual raises
    ResidualNonzero with the trace attached: at concrete scales the
    telescoping slack genuinely can fail to absorb the target.
    """
    ab = Fraction(ab)
    if not 0 < ab < 1:
        raise PreconditionViolated("need 0 < target < 1")
    if y < 4:
        raise PreconditionViolated("need y >= 4")
    if float(ab) <= 1 / math.log(y):
        raise PreconditionViolated(f"target must exceed 1/log y = {1 / math.log(y):.4f}")
    if p_star(ab.denominator).q > y:
        raise PreconditionViolated("denominator has a prime power above y")

    qs = prime_powers_upto(math.floor(y))
    z = len(qs)
    zp = _small_stage_boundary(y)
    if z <= zp:
        raise PreconditionViolated(f"no medium stage at y={y}")

    trace = ConstructionTrace(initial=ab, direction="shrink")
    v = ab
    used: list[int] = []
    for i in range(z, zp, -1):
        q = qs[i - 1]
        u = clear_medium(q, v)
        v -= sum(Fraction(1, n) for n in u)
        used.extend(u)
        trace.record(i, q, u, v, True, "medium")
    for i in range(zp, 0, -1):
        q = qs[i - 1]
        if v.denominator % q.q == 0:
            n = clear_small(v)
            assert p_star(n).q == q.q
            v -= Fraction(1, n)
            used.append(n)
            trace.record(i, q, (n,), v, True, "small")
        else:
            trace.record(i, q, (), v, False, "small")
    trace.final = v
    small_qs = qs[:zp]
    trace.diagnostics["small_stage_capacity"] = str(
        sum(Fraction(p_star(q.q).p - 1, lcm_upto(q.q)) for q in small_qs)
    )
    trace.diagnostics["small_stage_capacity_identity"] = str(
        1 - Fraction(1, lcm_upto(small_qs[-1].q))
    )

    if v != 0:
        raise ResidualNonzero(v, trace=trace)

    assert len(used) == len(set(used))
    s_prime = sorted(used)
    if pad:
        m = 2 * z - len(s_prime)
        if m > 0:
            top = s_prime[-1]
            parts = multi_split(top, m)
            s_prime = sorted(set(s_prime[:-1]) | parts)
        assert len(s_prime) == 2 * z
        assert s_prime[-1] <= 2 * y**4
    rep = Representation(ab, tuple(s_prime))
    ok, why = validate(rep)
    assert ok, why
    return rep, trace


def _smooth_set(lo: int, hi: int, bound: float) -> list[int]:
    if lo > hi:
        return []
    arr = pstar_range(lo, hi)
    return [lo + int(i) for i in np.nonzero(arr <= bound)[0]]


@dataclass
class _BigCore:
    """Everything represent_big computes before the caller-facing padding."""

    ambient: list  # R' after the descent, ascending
    residual: Fraction  # r - sum over ambient
    trace: ConstructionTrace
    supply: list  # pad candidates, largest first
    alpha: float
    bound_a: float
    floor_q: float


def _big_core(r: Fraction, x: float, params: ConstructionParams, excluded=frozenset()) -> _BigCore:
    alpha = params.effective_alpha(r)
    bound_a = max(x * math.log(x) ** -params.exp, x**params.epsilon)
    floor_q = x**params.epsilon
    if p_star(r.denominator).q > bound_a:
        raise PreconditionViolated("target denominator too rough for this scale")

    ambient = [n for n in _smooth_set(math.ceil(alpha * x), math.floor(x), bound_a) if n not in excluded]
    if not ambient:
        raise InfeasibleAtScale("ambient", f"no smooth elements in [{alpha * x:.0f}, {x:.0f}]")
    rho = r - sum(Fraction(1, n) for n in ambient)
    trace = ConstructionTrace(initial=rho, direction="grow")

    current = set(ambient)
    bparams = LargeStepParams(k=params.k, pool_cap=params.pool_cap, pool_mode=params.pool_mode)
    descent = [q for q in prime_powers_upto(math.floor(bound_a)) if q.q > floor_q]
    for idx, q in enumerate(reversed(descent)):
        if rho.denominator % q.q:
            trace.record(len(descent) - idx, q, (), rho, False, "large")
            continue
        assert p_star(rho.denominator).q == q.q
        try:
            u = clear_large(q, -rho, x, params.xi, bparams, allowed=current)
        except (NoSubsetFound, NoPairInWindow) as exc:
            raise InfeasibleAtScale("descent", f"q={q.q}: {exc}") from exc
        current -= u
        rho += sum(Fraction(1, n) for n in u)
        trace.record(len(descent) - idx, q, u, rho, True, "large")
    trace.final = rho

    supply = [
        n
        for n in _smooth_set(math.ceil(alpha * x / 2), math.ceil(alpha * x) - 1, x**params.epsilon)
        if n not in excluded
    ][::-1]
    return _BigCore(sorted(current), rho, trace, supply, alpha, bound_a, floor_q)


def r_window(r, x: float, params: ConstructionParams = DESK_PARAMS) -> tuple[int, int, int]:
    """Admissible (lo, hi, pad_supply) for represent_big's R argument at
    this scale: lo is the post-descent ambient size, hi adds the padding
    allowance 4 alpha log(1/alpha) x log log x / log x."""
    core = _big_core(Fraction(r), x, params)
    alpha = core.alpha
    allowance = math.floor(
        4 * alpha * math.log(1 / alpha) * x * math.log(math.log(x)) / math.log(x)
    )
    return len(core.ambient), len(core.ambient) + allowance, len(core.supply)


def represent_big(
    r,
    x: float,
    R: int,
    params: ConstructionParams = DESK_PARAMS,
    excluded=frozenset(),
) -> tuple[frozenset, Fraction, ConstructionTrace]:
    """Build an R-element set inside [alpha x / 2, x] whose reciprocal sum
    leaves a small smooth residual: ambient smooth elements of [alpha x, x],
    a descending congruence-subset pass that clears every prime power of
    the residual denominator above x^epsilon (removing the used elements),
    then largest-first padding from the half-window below.

    The returned residual equals r - sum(1/n) exactly, lies in
    (1/log x, 1), and its denominator has no prime power above x^epsilon.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    core = _big_core(r, x, params, excluded)
    lo = len(core.ambient)
    hi = lo + math.floor(
        4 * core.alpha * math.log(1 / core.alpha) * x * math.log(math.log(x)) / math.log(x)
    )
    if not lo <= R <= hi:
        raise PreconditionViolated(f"R={R} outside admissible window [{lo}, {hi}]")
    need = R - lo
    if need > len(core.supply):
        raise InfeasibleAtScale("pad-supply", f"want {need} pad elements, have {len(core.supply)}")
    pad = core.supply[:need]
    r_set = frozenset(core.ambient) | frozenset(pad)
    residual = core.residual - sum(Fraction(1, n) for n in pad)
    if not (1 / math.log(x) < float(residual) < 1):
        raise InfeasibleAtScale(
            "residual-window", f"residual {float(residual):.4f} outside (1/log x, 1)"
        )
    if p_star(residual.denominator).q > x**params.epsilon:
        raise InfeasibleAtScale(
            "residual-smoothness",
            f"P* of residual denominator is {p_star(residual.denominator).q}",
        )
    return r_set, residual, core.trace


def dense_representation(
    r,
    x: float,
    params: Optional[ConstructionParams] = None,
) -> tuple[Representation, dict]:
    """Dense representation of r with all denominators at most x: the big
    builder supplies the bulk, the small builder converts the residual at
    y = max((x/2)^(1/4), x^epsilon), and collisions between the two are
    repaired by re-running with the colliding elements excluded.

    The report carries the achieved size, density, the gap to 1 - e^{-r},
    and the policy knobs that were live for the run.
    """
    r = Fraction(r)
    if r <= 0:
        raise PreconditionViolated("target must be positive")
    params = params if params is not None else DESK_PARAMS
    y_small = max((x / 2) ** 0.25, x**params.epsilon)
    pad_small = 2 * y_small**4 <= x
    alpha_base = params.effective_alpha(r)
    attempts = []
    excluded: set[int] = set()

    for mult in (1.0, 0.92, 0.84):
        p_i = replace(params, alpha=alpha_base * mult)
        for _ in range(10):  # collision fixpoint
            try:
                core = _big_core(r, x, p_i, frozenset(excluded))
            except InfeasibleAtScale as exc:
                attempts.append(f"alpha*{mult}: {exc}")
                break
            prefix = [Fraction(0)]
            for n in core.supply:
                prefix.append(prefix[-1] + Fraction(1, n))
            allowance = math.floor(
                4 * core.alpha * math.log(1 / core.alpha) * x
                * math.log(math.log(x)) / math.log(x)
            )
            hit = None
            # densest first: more pad elements means a bigger final set
            for k in range(min(len(core.supply), allowance), -1, -1):
                resid = core.residual - prefix[k]
                if float(resid) <= 1 / math.log(y_small) or resid >= 1:
                    continue
                try:
                    rep_s, trace_s = represent_small(resid, y_small, pad=pad_small)
                except ResidualNonzero as exc:
                    attempts.append(f"alpha*{mult} pad={k}: residual {exc.value}")
                    continue
                hit = (k, resid, rep_s, trace_s)
                break
            if hit is None:
                attempts.append(f"alpha*{mult}: no pad count lands the small stage")
                break
            k, resid, rep_s, trace_s = hit
            r_set = set(core.ambient) | set(core.supply[:k])
            collide = r_set & set(rep_s.denominators)
            if not collide:
                small_set = set(rep_s.denominators)
                e = sorted(r_set | small_set)
                rep = Representation(r, tuple(e))
                ok, why = validate(rep)
                assert ok, why
                assert e[-1] <= x
                density = len(e) / x
                lead = 1 - math.exp(-float(r))
                report = {
                    "size": len(e),
                    "density": density,
                    "lead_density": lead,
                    "gap": lead - density,
                    "x": x,
                    "r": str(r),
                    "alpha": core.alpha,
                    "alpha_multiplier": mult,
                    "y_small": y_small,
                    "small_pad": pad_small,
                    "R": len(r_set),
                    "ambient_size": len(core.ambient),
                    "pad_count": k,
                    "residual_into_small": str(resid),
                    "small_size": len(small_set),
                    "collisions_removed": sorted(excluded),
                    "attempts": attempts,
                    "big_trace": core.trace.to_dict(),
                    "small_trace": trace_s.to_dict(),
                }
                return rep, report
            if params.collision_policy == "fail":
                raise InfeasibleAtScale("collision", f"overlap at {sorted(collide)}")
            excluded |= collide
            attempts.append(f"alpha*{mult}: removing colliders {sorted(collide)}")
        else:
            raise InfeasibleAtScale("collision", "no fixpoint within 10 repairs")
    raise InfeasibleAtScale("pipeline", "; ".join(attempts[-6:]) or "no attempt viable")
