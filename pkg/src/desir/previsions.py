"""Lower/upper prevision functionals over either backing.

A lower prevision is the supremum acceptable buying price of a gamble.
It can be backed by a desirable set (any representation) or directly by
a credal set; the credal backing behaves exactly like the strict set it
induces.  Conditional natural extension is the credal-only updating rule
that goes vacuous on zero lower probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .cones import DesirSet
from .credal import CredalSet
from .errors import InputError
from .lp import Rat
from .spaces import EventSet, Gamble

Backing = Union[DesirSet, CredalSet]


def _as_set(backing: Backing) -> DesirSet:
    if isinstance(backing, DesirSet):
        return backing
    if isinstance(backing, CredalSet):
        return DesirSet.strict(backing)
    raise InputError(f"cannot back a prevision with {type(backing).__name__}")


def lower_prevision(backing: Backing, f: Gamble) -> Rat:
    return _as_set(backing).lower_prevision(f)


def upper_prevision(backing: Backing, f: Gamble) -> Rat:
    return _as_set(backing).upper_prevision(f)


def conditional_lower_prevision(backing: Backing, f: Gamble, event: EventSet) -> Rat:
    return _as_set(backing).conditional_lower_prevision(f, event)


def conditional_upper_prevision(backing: Backing, f: Gamble, event: EventSet) -> Rat:
    return -conditional_lower_prevision(backing, -f, event)


def conditional_natural_extension(credal: CredalSet, f: Gamble, event: EventSet) -> Rat:
    return credal.conditional_natural_extension(f, event)


def credal_of(backing: Backing) -> CredalSet:
    if isinstance(backing, CredalSet):
        return backing
    return _as_set(backing).credal_projection()


def represents_complete(backing: Backing, scope: str) -> bool:
    """Single-vertex tests for completeness of preferences/beliefs/values."""
    credal = credal_of(backing)
    if scope == "preferences":
        return credal.is_linear()
    if scope == "beliefs":
        return credal.marginal_omega().is_linear()
    if scope == "values":
        return credal.marginal_prizes().is_linear()
    raise InputError(f"unknown completeness scope {scope!r}")


def is_linear(backing: Backing) -> bool:
    return represents_complete(backing, "preferences")


@dataclass(frozen=True)
class LowerPrevision:
    """Callable wrapper pairing a backing with the prevision surface."""

    backing: Backing

    def __call__(self, f: Gamble) -> Rat:
        return lower_prevision(self.backing, f)

    def upper(self, f: Gamble) -> Rat:
        return upper_prevision(self.backing, f)

    def conditional(self, f: Gamble, event: EventSet) -> Rat:
        return conditional_lower_prevision(self.backing, f, event)

    def is_linear(self) -> bool:
        return is_linear(self.backing)
