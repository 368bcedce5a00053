"""Session-wide certificate sweep.

Every Representation constructed anywhere in the run is recorded; at session
end, each distinct one that actually sums to its target gets the per-prime
optimality certificates checked. A violation fails the run.
"""
import pytest

from egyfrac import identities

REPRESENTATION_REGISTRY: list = []

_orig_init = identities.Representation.__init__


def _recording_init(self, target, denominators):
    _orig_init(self, target, denominators)
    REPRESENTATION_REGISTRY.append(self)


identities.Representation.__init__ = _recording_init


def sweep_certificates(reps) -> list:
    """Distinct genuine representations in reps, certified; returns violations."""
    from egyfrac.analytics import bestposs_check

    seen = set()
    failures = []
    for rep in reps:
        key = (rep.target, rep.denominators)
        if key in seen or not rep.denominators:
            continue
        seen.add(key)
        if rep.target <= 0 or rep.unit_sum() != rep.target:
            continue  # shape-only candidates are not representations
        x = rep.denominators[-1]
        for cert in bestposs_check(list(rep.denominators), x, rep.target):
            if not cert.verdict:
                failures.append((key, cert.p))
    return failures


@pytest.fixture(autouse=True, scope="session")
def certify_all_representations():
    yield
    failures = sweep_certificates(REPRESENTATION_REGISTRY)
    assert not failures, f"certificate violations: {failures[:5]}"
