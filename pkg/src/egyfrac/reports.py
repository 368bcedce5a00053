"""Exact-count versus main-term comparison records."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

CSV_COLUMNS = ["exact_count", "main_term", "abs_error", "rel_error", "params"]


@dataclass(frozen=True)
class CountReport:
    """An exact count (or exact rational) next to an asymptotic main term.

    rel_error is None when the main term is zero.
    """

    exact_count: Union[int, Fraction]
    main_term: float
    abs_error: float
    rel_error: float | None
    params: dict = field(default_factory=dict)

    @classmethod
    def make(cls, exact, main_term: float, **params) -> "CountReport":
        abs_err = abs(float(exact) - main_term)
        rel = abs_err / abs(main_term) if main_term != 0 else None
        return cls(exact, float(main_term), abs_err, rel, params)

    def _exact_repr(self):
        if isinstance(self.exact_count, Fraction):
            return f"{self.exact_count.numerator}/{self.exact_count.denominator}"
        return self.exact_count

    def to_dict(self) -> dict:
        return {
            "exact_count": self._exact_repr(),
            "main_term": self.main_term,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "params": self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def csv_header() -> str:
        return ",".join(CSV_COLUMNS)

    def to_csv_row(self) -> str:
        rel = "" if self.rel_error is None else repr(self.rel_error)
        params = json.dumps(self.params, sort_keys=True).replace('"', '""')
        return ",".join(
            [
                str(self._exact_repr()),
                repr(self.main_term),
                repr(self.abs_error),
                rel,
                f'"{params}"',
            ]
        )
