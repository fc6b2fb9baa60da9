"""Incomplete preference relations over horse lotteries.

A relation is a finite list of asserted strict preferences between acts.
All queries go through its cone of scaled act differences: with a worst
outcome the cone projects to a coherent set of desirable gambles and
back, which is the equivalence this package is built around.  Bare
relations (no worst outcome yet) keep their cone inside the zero-row-sum
space and support the minimal extension that adjoins one.

The Archimedean ladder for worst-outcome relations collapses to two
exact tests: weak continuity is strict desirability of the projected
set, and the traditional/strong forms additionally need every cell
indicator to carry positive lower prevision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .cones import DesirSet, avoids_partial_loss
from .credal import CredalSet
from .errors import InputError, InternalError, ModelError
from .lp import EQ, OPTIMAL, LpProblem, Rat, solve
from .spaces import Gamble, HorseLottery, Space, project_pi

NOT_WEAK = "not-weak"
WEAK_ONLY = "weak-only"
TRADITIONAL = "traditional"


def dominates(p: HorseLottery, q: HorseLottery) -> bool:
    """Objective preference: the projection of p weakly beats that of q
    everywhere and beats it somewhere."""
    if p.space != q.space or not (p.includes_worst and q.includes_worst):
        raise InputError("dominance compares two acts over the same z-space")
    diff = project_pi(p.space, p) - project_pi(q.space, q)
    return diff.is_positive()


@dataclass(frozen=True)
class PreferenceRelation:
    """Finitely many asserted strict preferences plus the derived cone."""

    space: Space
    pairs: tuple[tuple[HorseLottery, HorseLottery], ...]
    bare: bool

    @staticmethod
    def of(
        space: Space,
        pairs: Sequence[tuple[HorseLottery, HorseLottery]],
        bare: Optional[bool] = None,
    ) -> "PreferenceRelation":
        pairs = tuple(pairs)
        flavors = {p.includes_worst for pair in pairs for p in pair}
        if len(flavors) > 1:
            raise InputError("cannot mix bare lotteries and z-lotteries")
        if flavors:
            inferred = flavors == {False}
            if bare is not None and bare != inferred:
                raise InputError("bare flag contradicts the lotteries given")
            bare = inferred
        elif bare is None:
            bare = space.worst is None
        for p, q in pairs:
            if p.space != space or q.space != space:
                raise InputError("lottery on the wrong space")
            if p == q:
                raise ModelError("a strict preference cannot relate an act to itself")
        return PreferenceRelation(space, pairs, bare)

    @cached_property
    def _generators(self) -> tuple[Gamble, ...]:
        gens = []
        for p, q in self.pairs:
            if self.bare:
                gens.append(Gamble(self.space, p.difference(q)))
            else:
                gens.append(project_pi(self.space, p.difference(q)))
        return tuple(gens)

    def cone_generators(self) -> tuple[Gamble, ...]:
        """One gamble per asserted pair: the (projected) act difference."""
        return self._generators

    # -- consistency -----------------------------------------------------

    @cached_property
    def _consistent(self) -> bool:
        gens = self.cone_generators()
        if not gens:
            return True
        if not self.bare:
            return avoids_partial_loss(self.space, gens)[0]
        # bare case: the cone of differences must miss the origin exactly
        flats = [g.flat() for g in gens]
        k = len(gens)
        cons = [
            ([fl[c] for fl in flats], EQ, Fraction(0)) for c in range(len(flats[0]))
        ]
        cons.append(([Fraction(1)] * k, EQ, Fraction(1)))
        out = solve(LpProblem.build([Fraction(0)] * k, "max", cons))
        return out.status != OPTIMAL

    def is_consistent(self) -> bool:
        return self._consistent

    def _require_consistent(self):
        if not self.is_consistent():
            raise ModelError("the asserted preferences are inconsistent")

    # -- queries -----------------------------------------------------------

    def holds(self, p: HorseLottery, q: HorseLottery) -> bool:
        """Whether p > q follows from the assertions (cone membership)."""
        self._require_consistent()
        if self.bare:
            if p.includes_worst or q.includes_worst:
                raise InputError("bare relations compare bare lotteries")
            diff = Gamble(self.space, p.difference(q))
            return self._bare_cone_member(diff)
        return self.to_desirset().contains(
            project_pi(self.space, p.difference(q))
        )

    def _bare_cone_member(self, diff: Gamble) -> bool:
        if diff.is_zero():
            return False
        gens = self.cone_generators()
        if not gens:
            return False
        flats = [g.flat() for g in gens]
        target = diff.flat()
        cons = [
            ([fl[c] for fl in flats], EQ, target[c]) for c in range(len(target))
        ]
        k = len(gens)
        out = solve(LpProblem.build([Fraction(0)] * k, "max", cons))
        return out.status == OPTIMAL

    # -- the equivalence ---------------------------------------------------

    @cached_property
    def _projected_set(self) -> DesirSet:
        return DesirSet.from_generators(self.space, self.cone_generators())

    def to_desirset(self) -> DesirSet:
        """The projected cone as a finitely generated coherent set."""
        if self.bare:
            raise InputError("only worst-outcome relations project to gambles")
        self._require_consistent()
        return self._projected_set

    def archimedean_class(self) -> str:
        """weak continuity = strict desirability; the traditional and
        strong forms add positive lower prevision on every cell."""
        return archimedean_class_of_set(self.to_desirset())


@dataclass(frozen=True)
class RelationOracle:
    """The preference relation carried by a coherent set of gambles."""

    dset: DesirSet

    @property
    def space(self) -> Space:
        return self.dset.space

    def holds(self, p: HorseLottery, q: HorseLottery) -> bool:
        if p.space != self.space or q.space != self.space:
            raise InputError("lottery on the wrong space")
        return self.dset.contains(project_pi(self.space, p.difference(q)))


def from_desirset(dset: DesirSet) -> RelationOracle:
    dset.space.require_worst()
    return RelationOracle(dset)


def extend_to_worst_outcome(rel: PreferenceRelation) -> DesirSet:
    """Minimal extension of a bare relation to one with a worst outcome.

    The result is the natural extension of the bare cone, which keeps
    lower prevision zero on every asserted difference: the minimal
    extension is never weakly Archimedean unless the relation is empty.
    """
    if not rel.bare:
        raise InputError("the relation already has a worst outcome")
    rel.space.require_worst()
    rel._require_consistent()
    return DesirSet.from_generators(rel.space, rel.cone_generators())


def archimedean_class(rel: PreferenceRelation) -> str:
    return rel.archimedean_class()


def archimedean_class_of_set(dset: DesirSet) -> str:
    """Classify the relation a coherent set of gambles induces."""
    if not dset.is_strictly_desirable():
        return NOT_WEAK
    for cell in dset.space.cells():
        if dset.lower_prevision(Gamble.unit(dset.space, cell)) <= 0:
            return WEAK_ONLY
    return TRADITIONAL


@dataclass(frozen=True)
class Interpolation:
    """A strictly smaller Archimedean superset squeezed above a minimal
    extension: previsions of the pivot separate all three sets."""

    strict_set: DesirSet
    pivot: Gamble
    lower_base: Rat
    lower_mid: Rat
    lower_top: Rat


def interpolate_strict_superset(
    base: DesirSet, top: DesirSet, pivot_index: int = 0
) -> Interpolation:
    """Between a minimal worst-outcome extension and any strictly
    desirable superset there is always another one; halve the prevision
    of one cone generator by mixing in a boundary prevision of the base.
    """
    if base.kind != "fg" or not base.generators:
        raise ModelError("interpolation needs a finitely generated nonempty cone")
    if top.kind != "strict":
        raise ModelError("the superset must be strictly desirable")
    if top.space != base.space:
        raise InputError("sets live on different spaces")
    for g in base.generators:
        if not g.is_positive() and top.credal.lower(g) <= 0:
            raise ModelError("the superset does not strictly contain the base cone")
    pivot = base.generators[pivot_index]
    top_value = top.credal.lower(pivot)
    p1 = min(top.credal.vertices, key=lambda v: (v(pivot), v.mass))
    base_credal = base.credal_projection()
    base_value = base_credal.lower(pivot)
    if base_value != 0:
        raise ModelError(
            "interpolation starts from a boundary generator (lower prevision 0)"
        )
    p0 = min(base_credal.vertices, key=lambda v: (v(pivot), v.mass))
    mid_mass = tuple(
        Fraction(1, 2) * a + Fraction(1, 2) * b for a, b in zip(p1.mass, p0.mass)
    )
    hull = CredalSet.from_vertices(
        base.space, [v.mass for v in top.credal.vertices] + [mid_mass]
    )
    result = DesirSet.strict(hull)
    mid_value = hull.lower(pivot)
    if mid_value != top_value / 2:
        raise InternalError("interpolated prevision is not the exact half")
    if not (base_value < mid_value < top_value):
        raise InternalError("interpolation failed to separate the three sets")
    return Interpolation(result, pivot, base_value, mid_value, top_value)
