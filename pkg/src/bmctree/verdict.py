"""Verdicts and witnesses returned by the property checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


def fraction_str(p: Fraction) -> str:
    """Exact ``num/den`` literal, denominator always present."""
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class Witness:
    """A concrete configuration at which two conditionals disagree.

    ``lhs`` is the conditional given the larger event, ``rhs`` the one the
    property says it should equal.
    """

    check: str
    target: Mapping[int, int]
    given: Mapping[int, int]
    lhs: Fraction
    rhs: Fraction
    vertex: int | None = None
    root: int | None = None
    subtree: tuple[int, ...] | None = None
    reduced: tuple[int, ...] = ()
    note: str = ""

    def to_dict(self, labels=None) -> dict:
        name = (lambda v: labels[v]) if labels is not None else (lambda v: v)
        out = {"check": self.check}
        if self.root is not None:
            out["root"] = name(self.root)
        if self.vertex is not None:
            out["vertex"] = name(self.vertex)
        if self.subtree is not None:
            out["subtree"] = [name(v) for v in self.subtree]
        out["target"] = {name(v): s for v, s in sorted(self.target.items())}
        out["given"] = {name(v): s for v, s in sorted(self.given.items())}
        out["reduced"] = [name(v) for v in self.reduced]
        out["lhs"] = fraction_str(self.lhs)
        out["rhs"] = fraction_str(self.rhs)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None
    skipped_null_branches: int = 0
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a verdict holds exactly when it has no witness")

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def merge(cls, verdicts: Iterable["Verdict"]) -> "Verdict":
        """Combine sub-verdicts in order; the first witness wins."""
        witness = None
        skipped = 0
        notes: list[str] = []
        for v in verdicts:
            skipped += v.skipped_null_branches
            notes.extend(n for n in v.notes if n not in notes)
            if witness is None and v.witness is not None:
                witness = v.witness
        return cls(witness is None, witness, skipped, tuple(notes))

    def to_dict(self, labels=None) -> dict:
        out = {
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_dict(labels),
            "skipped_null_branches": self.skipped_null_branches,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


HOLDS = Verdict(True)
