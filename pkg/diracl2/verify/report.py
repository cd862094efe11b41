# diracl2/verify/report.py
"""
Result records for the identity suites.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..algebra.multivector import Multivector


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Multivector):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class IdentityReport:
    identity: str
    n: int
    seed: Optional[int] = None
    trials: int = 0
    passes: int = 0
    counterexample: Optional[Dict[str, Any]] = None
    errata: List[Dict[str, Any]] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.trials == self.passes and self.counterexample is None

    def record(self, ok: bool, witness: Optional[Dict[str, Any]] = None) -> bool:
        """Count one trial; keep the first failing witness."""
        self.trials += 1
        if ok:
            self.passes += 1
        elif self.counterexample is None:
            self.counterexample = _jsonable(witness or {})
        return ok

    def merge(self, other: "IdentityReport") -> None:
        """Fold a chunk report in; chunks are merged in trial-index order."""
        self.trials += other.trials
        self.passes += other.passes
        if self.counterexample is None and other.counterexample is not None:
            self.counterexample = other.counterexample
        self.errata.extend(other.errata)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "identity": self.identity,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "passes": self.passes,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }
        if self.errata:
            out["errata"] = _jsonable(self.errata)
        if self.notes:
            out["notes"] = _jsonable(self.notes)
        return out


@dataclass(frozen=True)
class HessianStub:
    """Symmetric (n+1)x(n+1) exact-rational stand-in for the Hessian of phi at one point."""
    n: int
    entries: tuple

    def __post_init__(self) -> None:
        size = self.n + 1
        if len(self.entries) != size or any(len(row) != size for row in self.entries):
            raise ValueError(f"HessianStub needs a {size}x{size} table")
        for i in range(size):
            for j in range(size):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("HessianStub must be symmetric")

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence]) -> "HessianStub":
        return cls(n, tuple(tuple(Fraction(v) for v in row) for row in rows))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, bound: int = 9, admissible: bool = False) -> "HessianStub":
        """
        Random symmetric integer table. Admissible stubs have a zero spatial
        off-diagonal block and a nonpositive spatial diagonal; the x_0 row is free.
        """
        size = n + 1
        m = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                v = Fraction(int(rng.integers(-bound, bound + 1)))
                if admissible and i >= 1 and j >= 1:
                    if i != j:
                        v = Fraction(0)
                    else:
                        v = -abs(v)
                m[i][j] = v
                m[j][i] = v
        return cls(n, tuple(tuple(row) for row in m))

    def is_admissible(self) -> bool:
        for i in range(1, self.n + 1):
            if self.entries[i][i] > 0:
                return False
            for j in range(1, self.n + 1):
                if i != j and self.entries[i][j] != 0:
                    return False
        return True
