"""Three-valued verdicts with machine-checkable witness payloads.

Certified   : the property holds, witness shows why.
Refuted     : the property fails, witness exhibits the failure.
Inconclusive: resource bounds were hit before either could be established;
              witness records how far the search got.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping


CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (CERTIFIED, REFUTED, INCONCLUSIVE):
            raise ValueError(f"bad verdict status {self.status!r}")

    @property
    def is_certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def is_refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def is_inconclusive(self) -> bool:
        return self.status == INCONCLUSIVE

    def __bool__(self) -> bool:
        # truthiness is deliberately undefined: force explicit status checks
        raise TypeError("Verdict is not boolean; check .status explicitly")

    def to_json(self) -> dict:
        return {"status": self.status, "witness": _jsonable(self.witness)}


def certified(**witness) -> Verdict:
    return Verdict(CERTIFIED, witness)


def refuted(**witness) -> Verdict:
    return Verdict(REFUTED, witness)


def inconclusive(**witness) -> Verdict:
    return Verdict(INCONCLUSIVE, witness)


def _jsonable(x):
    """Recursively convert witness payloads into JSON-safe structures."""
    from fractions import Fraction

    if isinstance(x, Verdict):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)
