"""Coherent sets of desirable gambles in three finite representations.

``DesirSet`` carries one of:

* ``fg``        -- the natural extension posi(generators + positive gambles);
* ``strict``    -- the open set {f positive, or lower expectation of f > 0}
                   induced by a credal set;
* ``augmented`` -- posi(strict + finitely many border rays), the shape of
                   non-Archimedean models such as the second believer in
                   the fair-coin story: same previsions, different border.

Membership, (conditional) lower previsions, conditioning and
marginalisation views, strictness, the conditional-strictness property on
supports, and open-superset search are all decided by exact linear
programs.  Positive membership verdicts carry a positive-combination or
positive-expectation certificate; negative verdicts carry a separating
linear prevision.  Certificates replay exactly.

The central computation is ``sup { mu : B(f - mu) in D }`` for an
arbitrary nonempty cell event B.  For an augmented set the member set
splits three ways -- the open part (every credal vertex strictly
positive after subtracting border multiples), the positive-residual part,
and the pure border ray -- and each part has a down-closed mu-set whose
supremum is an LP value, so the overall supremum is their maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .credal import CredalSet, LinearPrevision
from .errors import InputError, InternalError, ModelError, ResourceLimitError
from .lp import EQ, GE, LE, OPTIMAL, UNBOUNDED, LpProblem, Rat, rat, solve
from .spaces import (
    EventSet,
    Gamble,
    Space,
    cylinder_from_omega,
    cylinder_from_prizes,
    omega_factor_space,
    prizes_factor_space,
)

FG = "fg"
STRICT = "strict"
AUGMENTED = "augmented"


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositiveCombination:
    """f = sum(lambda_i g_i) + sum(mu_j b_j) + residual with residual >= 0."""

    lambdas: tuple[Rat, ...]
    border_lambdas: tuple[Rat, ...]
    residual: Gamble

    def replays(self, dset: "DesirSet", f: Gamble) -> bool:
        if any(l < 0 for l in self.lambdas + self.border_lambdas):
            return False
        if not (self.residual.is_zero() or self.residual.is_positive()):
            return False
        acc = self.residual
        for l, g in zip(self.lambdas, dset.generators):
            acc = acc + g.scale(l)
        for m, b in zip(self.border_lambdas, dset.borders):
            acc = acc + b.scale(m)
        if acc != f or f.is_zero():
            return False
        used = any(self.lambdas) or any(self.border_lambdas)
        return used or self.residual.is_positive()


@dataclass(frozen=True)
class PositiveExpectation:
    """After peeling border multiples, every credal vertex pays out.

    value = min over vertices of (f - sum mu_j b_j), strictly positive.
    """

    border_lambdas: tuple[Rat, ...]
    value: Rat

    def replays(self, dset: "DesirSet", f: Gamble) -> bool:
        if dset.credal is None or any(m < 0 for m in self.border_lambdas):
            return False
        peeled = f
        for m, b in zip(self.border_lambdas, dset.borders):
            peeled = peeled - b.scale(m)
        return dset.credal.lower(peeled) == self.value and self.value > 0


@dataclass(frozen=True)
class SeparatingPrevision:
    """P(f) <= 0 while P is nonnegative on everything the set asserts."""

    prevision: LinearPrevision

    def replays(self, dset: "DesirSet", f: Gamble) -> bool:
        p = self.prevision
        if p(f) > 0:
            return False
        if any(p(g) < 0 for g in dset.generators):
            return False
        if any(p(b) < 0 for b in dset.borders):
            return False
        if dset.credal is not None and not dset.credal.contains(p):
            return False
        return True


Certificate = Union[PositiveCombination, PositiveExpectation, SeparatingPrevision]


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    certificate: Certificate


# ---------------------------------------------------------------------------
# Consistency of raw assessments
# ---------------------------------------------------------------------------


def avoids_partial_loss(
    space: Space, gambles: Sequence[Gamble]
) -> tuple[bool, Optional[tuple[Rat, ...]]]:
    """True iff no convex combination of the gambles is <= 0.

    On failure returns the violating convex weights.
    """
    gambles = list(gambles)
    if not gambles:
        return True, None
    k = len(gambles)
    flats = [g.flat() for g in gambles]
    cons = [([fl[c] for fl in flats], LE, Fraction(0)) for c in range(len(flats[0]))]
    cons.append(([Fraction(1)] * k, EQ, Fraction(1)))
    out = solve(LpProblem.build([Fraction(0)] * k, "max", cons))
    if out.status == OPTIMAL:
        return False, out.witness
    return True, None


# ---------------------------------------------------------------------------
# The three-representation desirable set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DesirSet:
    """A coherent cone of desirable gambles; construct via the factories."""

    space: Space
    kind: str
    generators: tuple[Gamble, ...] = ()
    credal: Optional[CredalSet] = None
    borders: tuple[Gamble, ...] = ()

    # -- factories ------------------------------------------------------

    @staticmethod
    def from_generators(space: Space, generators: Iterable[Gamble]) -> "DesirSet":
        gens = tuple(generators)
        for g in gens:
            if g.space != space:
                raise InputError("generator on the wrong space")
            if g.is_zero():
                raise ModelError("the zero gamble cannot be desirable")
        ok, witness = avoids_partial_loss(space, gens)
        if not ok:
            raise ModelError(
                f"assessments incur partial loss (convex weights {witness})"
            )
        return DesirSet(space, FG, generators=gens)

    @staticmethod
    def vacuous(space: Space) -> "DesirSet":
        return DesirSet(space, FG)

    @staticmethod
    def strict(credal: CredalSet) -> "DesirSet":
        return DesirSet(credal.space, STRICT, credal=credal)

    @staticmethod
    def augmented(credal: CredalSet, borders: Iterable[Gamble]) -> "DesirSet":
        bs = tuple(borders)
        space = credal.space
        for b in bs:
            if b.space != space:
                raise InputError("border gamble on the wrong space")
            if b.is_zero() or b.is_positive():
                raise ModelError("border rays must be nonzero and not positive")
            if credal.lower(b) != 0:
                raise ModelError(
                    "border rays must sit exactly on the boundary (lower "
                    "expectation zero)"
                )
        if bs:
            _check_border_coherence(space, bs)
        if not bs:
            return DesirSet(space, STRICT, credal=credal)
        return DesirSet(space, AUGMENTED, credal=credal, borders=bs)

    # -- membership -------------------------------------------------------

    def contains(self, f: Gamble) -> bool:
        """Fast boolean membership (no certificate construction)."""
        self._check_space(f)
        if f.is_zero():
            return False
        if f.is_positive():
            return True
        if f.is_nonpositive():
            return False
        if self.kind == FG:
            return self._fg_feasible(f) is not None
        if self.kind == STRICT:
            return self.credal.lower(f) > 0
        return self._augmented_contains(f)

    def member(self, f: Gamble) -> MembershipVerdict:
        """Membership with a replay-checked certificate."""
        self._check_space(f)
        verdict = self._member_uncached(f)
        if not verdict.certificate.replays(self, f):
            raise InternalError("membership certificate failed to replay")
        return verdict

    def _member_uncached(self, f: Gamble) -> MembershipVerdict:
        if not f.is_zero() and f.is_positive():
            cert = PositiveCombination(
                tuple(Fraction(0) for _ in self.generators),
                tuple(Fraction(0) for _ in self.borders),
                f,
            )
            return MembershipVerdict(True, cert)
        if self.contains(f):
            if self.kind == FG:
                lambdas = self._fg_feasible(f)
                residual = f
                for l, g in zip(lambdas, self.generators):
                    residual = residual - g.scale(l)
                return MembershipVerdict(
                    True, PositiveCombination(lambdas, (), residual)
                )
            if self.kind == STRICT:
                return MembershipVerdict(
                    True, PositiveExpectation((), self.credal.lower(f))
                )
            return MembershipVerdict(True, self._augmented_certificate(f))
        return MembershipVerdict(False, SeparatingPrevision(self._separating(f)))

    def _fg_feasible(self, f: Gamble) -> Optional[tuple[Rat, ...]]:
        """Weights with f - sum(lambda g) >= 0, or None."""
        k = len(self.generators)
        if k == 0:
            return () if f.is_positive() else None
        flats = [g.flat() for g in self.generators]
        fflat = f.flat()
        cons = [
            ([fl[c] for fl in flats], LE, fflat[c]) for c in range(len(fflat))
        ]
        out = solve(LpProblem.build([Fraction(0)] * k, "max", cons))
        return out.witness if out.status == OPTIMAL else None

    def _augmented_contains(self, f: Gamble) -> bool:
        return self._augmented_certificate(f) is not None

    def _augmented_certificate(self, f: Gamble) -> Optional[Certificate]:
        """The three-way case split for posi(strict + border rays)."""
        borders = self.borders
        nb = len(borders)
        bflats = [b.flat() for b in borders]
        fflat = f.flat()
        vertices = self.credal.vertices
        # (1) open part: some nonnegative border combination leaves every
        # vertex expectation strictly positive.
        cons = []
        for v in vertices:
            vb = [v(b) for b in borders]
            vf = v(f)
            cons.append((vb + [Fraction(1)], LE, vf))
        cons.append(([Fraction(0)] * nb + [Fraction(1)], LE, Fraction(1)))
        bounds = [(Fraction(0), None)] * nb + [(None, None)]
        out = solve(
            LpProblem.build([Fraction(0)] * nb + [Fraction(1)], "max", cons, bounds)
        )
        if out.status == OPTIMAL and out.optimum > 0:
            mu = out.witness[:nb]
            peeled = f
            for m, b in zip(mu, borders):
                peeled = peeled - b.scale(m)
            return PositiveExpectation(tuple(mu), self.credal.lower(peeled))
        # (2) positive residual: f - sum(mu b) >= 0 with nonzero residual,
        # decided by maximising the total residual mass.
        n = len(fflat)
        cons = [([bf[c] for bf in bflats], LE, fflat[c]) for c in range(n)]
        obj = [-sum(bf[c] for c in range(n)) for bf in bflats]
        out = solve(LpProblem.build(obj, "max", cons))
        if out.status == OPTIMAL:
            total = sum(fflat, Fraction(0)) + out.optimum
            if total > 0:
                mu = out.witness
                residual = f
                for m, b in zip(mu, borders):
                    residual = residual - b.scale(m)
                return PositiveCombination((), tuple(mu), residual)
        elif out.status == UNBOUNDED:
            raise InternalError("border cone contains a negative direction")
        # (3) pure border ray: f = sum(mu b) with mu not all zero.
        cons = [([bf[c] for bf in bflats], EQ, fflat[c]) for c in range(n)]
        out = solve(LpProblem.build([Fraction(1)] * nb, "max", cons))
        if out.status == UNBOUNDED:
            raise InternalError("border cone has a recession ray through zero")
        if out.status == OPTIMAL and out.optimum > 0:
            return PositiveCombination((), out.witness, Gamble.zero(self.space))
        return None

    def _separating(self, f: Gamble) -> LinearPrevision:
        """A prevision with P(f) <= 0 that respects all assertions."""
        if self.kind == FG:
            n = self.space.n_cells
            cons = [(list(g.flat()), GE, Fraction(0)) for g in self.generators]
            cons.append((list(f.flat()), LE, Fraction(0)))
            cons.append(([Fraction(1)] * n, EQ, Fraction(1)))
            out = solve(LpProblem.build([Fraction(0)] * n, "max", cons))
            if out.status != OPTIMAL:
                raise InternalError("no separating prevision for a non-member")
            return LinearPrevision(self.space, out.witness)
        best = min(self.credal.vertices, key=lambda v: (v(f), v.mass))
        if best(f) > 0:
            raise InternalError("non-member with positive lower expectation")
        return best

    # -- previsions ------------------------------------------------------

    def lower_prevision(self, f: Gamble) -> Rat:
        """sup { mu : f - mu in D }; the lower envelope for credal kinds."""
        self._check_space(f)
        if self.kind == FG:
            value = self._fg_conditional(f, EventSet.all_cells(self.space))
            if value is None:
                raise InternalError("lower prevision unbounded; set incoherent")
            return value
        return self.credal.lower(f)

    def upper_prevision(self, f: Gamble) -> Rat:
        return -self.lower_prevision(-f)

    def conditional_lower_prevision(self, f: Gamble, event: EventSet) -> Rat:
        """sup { mu : B(f - mu) in D } for a nonempty cell event B."""
        self._check_space(f)
        if event.space != self.space:
            raise InputError("event on the wrong space")
        if event.is_empty():
            raise InputError("conditioning event is empty")
        if self.kind == FG:
            value = self._fg_conditional(f, event)
            if value is None:
                raise InternalError("conditional prevision unbounded; set incoherent")
            return value
        sups = [s for s in self._credal_conditional_sups(f, event) if s is not None]
        if not sups:
            raise InternalError("conditional prevision with no feasible branch")
        return max(sups)

    def conditional_upper_prevision(self, f: Gamble, event: EventSet) -> Rat:
        return -self.conditional_lower_prevision(-f, event)

    def _fg_conditional(self, f: Gamble, event: EventSet) -> Optional[Rat]:
        k = len(self.generators)
        flats = [g.flat() for g in self.generators]
        fflat = f.flat()
        incell = [False] * len(fflat)
        m = self.space.n_prizes
        for i, j in event.cells:
            incell[i * m + j] = True
        cons = []
        for c in range(len(fflat)):
            row = [fl[c] for fl in flats] + [Fraction(1) if incell[c] else Fraction(0)]
            rhs = fflat[c] if incell[c] else Fraction(0)
            cons.append((row, LE, rhs))
        bounds = [(Fraction(0), None)] * k + [(None, None)]
        out = solve(
            LpProblem.build([Fraction(0)] * k + [Fraction(1)], "max", cons, bounds)
        )
        if out.status == UNBOUNDED:
            return None
        if out.status != OPTIMAL:
            raise InternalError("conditional prevision LP infeasible")
        return out.optimum

    def _credal_conditional_sups(self, f: Gamble, event: EventSet):
        """The three branch suprema for strict/augmented conditioning."""
        borders = self.borders
        nb = len(borders)
        vertices = self.credal.vertices
        indicator = event.indicator()
        bf = f.restricted_to(event)
        # Branch 1 (open part).  Gate: can every vertex be made strictly
        # positive at all?  If yes the branch supremum equals the closed
        # LP optimum; if no the branch is empty.
        vb = [[v(b) for b in borders] for v in vertices]
        vbf = [v(bf) for v in vertices]
        vib = [v(indicator) for v in vertices]
        gate_cons = []
        for kv in range(len(vertices)):
            row = [vib[kv]] + vb[kv] + [Fraction(1)]
            gate_cons.append((row, LE, vbf[kv]))
        gate_cons.append(
            ([Fraction(0)] * (1 + nb) + [Fraction(1)], LE, Fraction(1))
        )
        gate_bounds = [(None, None)] + [(Fraction(0), None)] * nb + [(None, None)]
        gate = solve(
            LpProblem.build(
                [Fraction(0)] * (1 + nb) + [Fraction(1)],
                "max",
                gate_cons,
                gate_bounds,
            )
        )
        sup1: Optional[Rat] = None
        if gate.status == OPTIMAL and gate.optimum > 0:
            cons = []
            for kv in range(len(vertices)):
                cons.append(([vib[kv]] + vb[kv], LE, vbf[kv]))
            bounds = [(None, None)] + [(Fraction(0), None)] * nb
            out = solve(
                LpProblem.build(
                    [Fraction(1)] + [Fraction(0)] * nb, "max", cons, bounds
                )
            )
            if out.status == UNBOUNDED:
                raise InternalError("open-branch supremum unbounded")
            if out.status == OPTIMAL:
                sup1 = out.optimum
        # Branch 2 (positive residual): B(f - mu) - sum(nu b) >= 0.
        fflat = f.flat()
        iflat = indicator.flat()
        bflats = [b.flat() for b in borders]
        cons = []
        for c in range(len(fflat)):
            row = [iflat[c]] + [bf2[c] for bf2 in bflats]
            cons.append((row, LE, fflat[c] * iflat[c]))
        bounds = [(None, None)] + [(Fraction(0), None)] * nb
        out = solve(
            LpProblem.build([Fraction(1)] + [Fraction(0)] * nb, "max", cons, bounds)
        )
        if out.status == UNBOUNDED:
            raise InternalError("residual-branch supremum unbounded")
        sup2 = out.optimum if out.status == OPTIMAL else None
        # Branch 3 (pure border ray): B(f - mu) = sum(nu b), nu not all 0.
        sup3: Optional[Rat] = None
        if nb:
            cons = []
            for c in range(len(fflat)):
                row = [iflat[c]] + [bf2[c] for bf2 in bflats]
                cons.append((row, EQ, fflat[c] * iflat[c]))
            out = solve(
                LpProblem.build(
                    [Fraction(1)] + [Fraction(0)] * nb, "max", cons, bounds
                )
            )
            if out.status == UNBOUNDED:
                raise InternalError("border-branch supremum unbounded")
            if out.status == OPTIMAL:
                mu3 = out.optimum
                if any(n != 0 for n in out.witness[1:]):
                    sup3 = mu3
                else:
                    # only the zero ray reaches mu3; any lower point of the
                    # branch still pushes the supremum to mu3
                    low = solve(
                        LpProblem.build(
                            [Fraction(1)] + [Fraction(0)] * nb,
                            "min",
                            cons,
                            bounds,
                        )
                    )
                    if low.status == OPTIMAL and low.optimum < mu3:
                        sup3 = mu3
        return sup1, sup2, sup3

    # -- structure queries ------------------------------------------------

    def is_strictly_desirable(self) -> bool:
        """Openness: members outside L+ stay members after a small uniform
        discount."""
        if self.kind == STRICT:
            return True
        if self.kind == AUGMENTED:
            return not self.borders
        return all(
            g.is_positive() or self.lower_prevision(g) > 0 for g in self.generators
        )

    def is_fully_archimedean(self) -> bool:
        """Conditional strictness on supports, decided generator-wise.

        A strict set passes outright: each member f equals its own
        support restriction, so discounting inside the support keeps the
        lower expectation positive.  For the other kinds each generator
        or border ray b must survive sup { eps : S(b)(b - eps) in D } > 0,
        which is the conditional lower prevision on its support; the
        natural extension then inherits the property cell-event by
        cell-event.
        """
        if self.kind == STRICT:
            return True
        rays = self.generators if self.kind == FG else self.borders
        return all(
            self.conditional_lower_prevision(b, b.support()) > 0 for b in rays
        )

    def has_open_superset(self) -> tuple[bool, Optional[LinearPrevision]]:
        """Search for one prevision strictly positive on every asserted ray."""
        if self.kind == STRICT:
            k = len(self.credal.vertices)
            avg = tuple(
                sum((v.mass[c] for v in self.credal.vertices), Fraction(0)) / k
                for c in range(self.space.n_cells)
            )
            return True, LinearPrevision(self.space, avg)
        if self.kind == FG:
            return open_superset_witness(self.space, self.generators)
        # augmented: a hull point strictly positive on every border ray
        verts = self.credal.vertices
        k = len(verts)
        cons = [
            ([v(b) for v in verts] + [Fraction(-1)], GE, Fraction(0))
            for b in self.borders
        ]
        cons.append(([Fraction(1)] * k + [Fraction(0)], EQ, Fraction(1)))
        cons.append(([Fraction(0)] * k + [Fraction(1)], LE, Fraction(1)))
        out = solve(LpProblem.build([Fraction(0)] * k + [Fraction(1)], "max", cons))
        if out.status == OPTIMAL and out.optimum > 0:
            alpha = out.witness[:k]
            mass = tuple(
                sum((al * v.mass[c] for al, v in zip(alpha, verts)), Fraction(0))
                for c in range(self.space.n_cells)
            )
            return True, LinearPrevision(self.space, mass)
        return False, None

    def credal_projection(self) -> CredalSet:
        """The credal set of the induced lower prevision."""
        if self.kind == FG:
            return CredalSet.from_constraints(self.space, self.generators)
        return self.credal

    # -- views -----------------------------------------------------------

    def condition(self, event: EventSet) -> "ConditionalView":
        if event.is_empty():
            raise InputError("conditioning event is empty")
        if event.space != self.space:
            raise InputError("event on the wrong space")
        return ConditionalView(self, event)

    def marginalize(self, keep: str) -> "MarginalView":
        if keep not in ("omega", "prizes"):
            raise InputError("keep must be 'omega' or 'prizes'")
        return MarginalView(self, keep)

    # -- plumbing ----------------------------------------------------------

    def _check_space(self, f: Gamble):
        if f.space != self.space:
            raise InputError("gamble on the wrong space")


def open_superset_witness(
    space: Space, generators: Sequence[Gamble]
) -> tuple[bool, Optional[LinearPrevision]]:
    """A prevision strictly positive on every generator, if one exists.

    Works on raw generator lists too; for cones of zero-row-sum gambles
    this is one horn of the Gordan dichotomy, avoiding partial loss the
    other.
    """
    n = space.n_cells
    cons = [(list(g.flat()) + [Fraction(-1)], GE, Fraction(0)) for g in generators]
    cons.append(([Fraction(1)] * n + [Fraction(0)], EQ, Fraction(1)))
    cons.append(([Fraction(0)] * n + [Fraction(1)], LE, Fraction(1)))
    out = solve(LpProblem.build([Fraction(0)] * n + [Fraction(1)], "max", cons))
    if out.status == OPTIMAL and out.optimum > 0:
        return True, LinearPrevision(space, out.witness[:n])
    return False, None


def _check_border_coherence(space: Space, borders: Sequence[Gamble]):
    """Reject border lists whose cone meets -L+ or the origin."""
    flats = [b.flat() for b in borders]
    k = len(borders)
    n = len(flats[0])
    cons = [([fl[c] for fl in flats], EQ, Fraction(0)) for c in range(n)]
    cons.append(([Fraction(1)] * k, EQ, Fraction(1)))
    if solve(LpProblem.build([Fraction(0)] * k, "max", cons)).status == OPTIMAL:
        raise ModelError("border rays positively combine to zero")
    cons = [([fl[c] for fl in flats], LE, Fraction(0)) for c in range(n)]
    total = [sum(fl[c] for c in range(n)) for fl in flats]
    cons.append((total, LE, Fraction(-1)))
    if solve(LpProblem.build([Fraction(0)] * k, "max", cons)).status == OPTIMAL:
        raise ModelError("border rays positively combine to a negative gamble")


# ---------------------------------------------------------------------------
# Views
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalView:
    """Membership oracle of { f in D : f = Bf }."""

    base: DesirSet
    event: EventSet

    def contains(self, f: Gamble) -> bool:
        if f != f.restricted_to(self.event):
            return False
        return self.base.contains(f)

    def materialized_generators(self) -> tuple[Gamble, ...]:
        """The restricted generators that survive; exact for display, the
        oracle stays the source of truth."""
        if self.base.kind != FG:
            return ()
        out = []
        for g in self.base.generators:
            bg = g.restricted_to(self.event)
            if not bg.is_zero() and self.base.contains(bg):
                out.append(bg)
        return tuple(out)


@dataclass(frozen=True)
class MarginalView:
    """Membership oracle over one-factor gambles via cylindrical extension."""

    base: DesirSet
    keep: str

    @property
    def factor_space(self) -> Space:
        if self.keep == "omega":
            return omega_factor_space(self.base.space)
        return prizes_factor_space(self.base.space)

    def extend(self, g: Gamble) -> Gamble:
        if self.keep == "omega":
            return cylinder_from_omega(self.base.space, g)
        return cylinder_from_prizes(self.base.space, g)

    def contains(self, g: Gamble) -> bool:
        return self.base.contains(self.extend(g))

    def as_strict(self) -> Optional[DesirSet]:
        """For a strict base the marginal is strict over the projected
        credal set; other kinds stay oracles."""
        if self.base.kind != STRICT:
            return None
        credal = (
            self.base.credal.marginal_omega()
            if self.keep == "omega"
            else self.base.credal.marginal_prizes()
        )
        return DesirSet.strict(credal)


# ---------------------------------------------------------------------------
# Sets assessed through a family of conditional previsions
# ---------------------------------------------------------------------------

MAX_FAMILY_BLOCKS = 6


@dataclass(frozen=True)
class ConditionalAssessment:
    """A credal set of conditional mass functions carried by one event."""

    event: EventSet
    vertices: tuple[tuple[Rat, ...], ...]  # masses over event.cells order

    def __post_init__(self):
        if self.event.is_empty():
            raise InputError("assessment event is empty")
        if not self.vertices:
            raise ModelError("assessment carries an empty credal set")
        for v in self.vertices:
            if len(v) != len(self.event.cells):
                raise InputError("conditional mass does not match the event")
            if any(x < 0 for x in v) or sum(v, Fraction(0)) != 1:
                raise InputError("conditional masses must be probability vectors")

    @staticmethod
    def of(event: EventSet, vertices: Sequence[Sequence]) -> "ConditionalAssessment":
        return ConditionalAssessment(
            event, tuple(tuple(rat(x) for x in v) for v in vertices)
        )

    def lower(self, f: Gamble) -> Rat:
        vals = []
        for v in self.vertices:
            vals.append(
                sum(
                    (x * f.values[i][j] for x, (i, j) in zip(v, self.event.cells)),
                    Fraction(0),
                )
            )
        return min(vals)


@dataclass(frozen=True)
class ConditionalFamilySet:
    """Natural extension of conditional-prevision assessments.

    Membership enumerates which blocks contribute, then solves one LP per
    block subset over (per-block gamble, attained conditional bound,
    strictness slack); a member needs some subset with positive slack or
    a bare positive residual.
    """

    space: Space
    assessments: tuple[ConditionalAssessment, ...]

    def contains(self, f: Gamble) -> bool:
        if f.space != self.space:
            raise InputError("gamble on the wrong space")
        if f.is_zero():
            return False
        if f.is_positive():
            return True
        k = len(self.assessments)
        for mask in range(1, 1 << k):
            used = [i for i in range(k) if mask & (1 << i)]
            if self._subset_feasible(f, used):
                return True
        return False

    def _subset_feasible(self, f: Gamble, used: list[int]) -> bool:
        # variables: per used block: g over its cells, bound m, slack eps;
        # then one residual per space cell, then the common slack delta.
        space = self.space
        n = space.n_cells
        m_prizes = space.n_prizes
        offsets = []
        width = 0
        for i in used:
            offsets.append(width)
            width += len(self.assessments[i].event.cells) + 2
        h0 = width
        width += n
        dcol = width
        width += 1

        def empty_row():
            return [Fraction(0)] * width

        cons = []
        bounds: list[tuple[Optional[Rat], Optional[Rat]]] = []
        for pos, i in enumerate(used):
            cells = self.assessments[i].event.cells
            base = offsets[pos]
            bounds.extend([(None, None)] * len(cells))
            bounds.append((None, None))  # m_i
            bounds.append((Fraction(0), None))  # eps_i
            for v in self.assessments[i].vertices:
                row = empty_row()
                for x, k2 in zip(v, range(len(cells))):
                    row[base + k2] = x
                row[base + len(cells)] = Fraction(-1)
                cons.append((row, GE, Fraction(0)))
            row = empty_row()
            row[base + len(cells) + 1] = Fraction(1)
            row[dcol] = Fraction(-1)
            cons.append((row, GE, Fraction(0)))
        bounds.extend([(Fraction(0), None)] * n)  # residual h
        bounds.append((Fraction(0), Fraction(1)))  # delta
        for c in range(n):
            i_state, j_prize = divmod(c, m_prizes)
            row = empty_row()
            row[h0 + c] = Fraction(1)
            for pos, i in enumerate(used):
                cells = self.assessments[i].event.cells
                base = offsets[pos]
                if (i_state, j_prize) in cells:
                    k2 = cells.index((i_state, j_prize))
                    row[base + k2] = Fraction(1)
                    row[base + len(cells)] = Fraction(-1)
                    row[base + len(cells) + 1] = Fraction(1)
            cons.append((row, EQ, f.values[i_state][j_prize]))
        obj = empty_row()
        obj[dcol] = Fraction(1)
        out = solve(LpProblem.build(obj, "max", cons, bounds))
        return out.status == OPTIMAL and out.optimum > 0


def build_from_conditional_family(
    space: Space,
    family: Sequence[ConditionalAssessment],
    probes: Sequence[dict] = (),
) -> ConditionalFamilySet:
    """Assemble the family-backed desirable set after probing consistency.

    Each probe maps block indices to gambles; the avoiding-partial-loss
    shape requires sup over the union of the probed events of the summed
    called-off net gains to be nonnegative.  Quantifying over all gambles
    is out of reach, so violations are only ever found, never excluded;
    a found violation rejects the family.
    """
    if len(family) > MAX_FAMILY_BLOCKS:
        raise ResourceLimitError(
            f"conditional families beyond {MAX_FAMILY_BLOCKS} blocks exceed "
            "the desk-scale subset enumeration"
        )
    for a in family:
        if a.event.space != space:
            raise InputError("assessment event on the wrong space")
    for probe in probes:
        acc = Gamble.zero(space)
        union_cells: set = set()
        for idx, f in probe.items():
            a = family[idx]
            union_cells.update(a.event.cells)
            bound = a.lower(f)
            acc = acc + (f - Gamble.constant(space, bound)).restricted_to(a.event)
        sup = max(acc.values[i][j] for i, j in sorted(union_cells))
        if sup < 0:
            raise ModelError(
                f"conditional family incurs partial loss on probe {probe!r}"
            )
    return ConditionalFamilySet(space, tuple(family))
