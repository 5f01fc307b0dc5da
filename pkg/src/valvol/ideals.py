"""Valuation ideal sequences on the plane, lattice-point colengths and the
Rees-family identities for multi-indexed filtrations by monomial ideals.

Monomial ideals are stored as staircases (sets of minimal generators), so
every quotient dimension below is a finite lattice count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import Scalar
from .errors import BoxTooSmall, ValvolError
from .valuation import MonomialValuation, Weight

Point = tuple[int, ...]


def _weights2(v: MonomialValuation) -> tuple[Fraction, Fraction]:
    if len(v.weight) != 2:
        raise ValvolError("lattice counts are implemented for valuations on the plane")
    return v.weight[0], v.weight[1]


def colength(v: MonomialValuation, lam: Scalar) -> int:
    """``#{m in N^2 : <w, m> < lam}``, the length of ``O / a_lam(v)``."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValvolError("lambda must be nonnegative")
    mu, nu = _weights2(v)
    if mu < nu:
        mu, nu = nu, mu
    # sweep the heavier coordinate, count the lighter one in closed form
    total = 0
    k = 0
    while mu * k < lam:
        total += math.ceil((lam - mu * k) / nu)
        k += 1
    return total


def volume(v: MonomialValuation) -> Fraction:
    """Closed-form volume ``1 / (mu * nu)`` of a monomial valuation on the plane."""
    mu, nu = _weights2(v)
    return 1 / (mu * nu)


def volume_estimate(v: MonomialValuation, lam: Scalar) -> Fraction:
    """Finite-level estimate ``2 * colength(lam) / lam^2`` of the volume."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValvolError("lambda must be positive")
    return 2 * colength(v, lam) / lam**2


def volume_error_bound(v: MonomialValuation, lam: Scalar) -> Fraction:
    """Perimeter bound ``2 (1/mu + 1/nu) / lam`` on ``|estimate - volume|``."""
    mu, nu = _weights2(v)
    return 2 * (1 / mu + 1 / nu) / Fraction(lam)


def ideal_value(v: MonomialValuation, lam: Scalar) -> Fraction:
    """``v(a_lam(v))``: the least value ``>= lam`` attained by a monomial."""
    lam = Fraction(lam)
    mu, nu = _weights2(v)
    best = None
    k = 0
    while True:
        rest = lam - nu * k
        j = max(0, math.ceil(rest / mu))
        val = mu * j + nu * k
        best = val if best is None else min(best, val)
        if rest <= 0:
            return best
        k += 1


@dataclass(frozen=True)
class IdealSeqView:
    """Graded pieces ``a_lam / a_>lam`` of a monomial valuation, up to a cutoff."""

    valuation: MonomialValuation
    cutoff: Fraction
    jumps: tuple[Fraction, ...]
    dims: Mapping[Fraction, int]

    def dim(self, lam: Scalar) -> int:
        return self.dims.get(Fraction(lam), 0)

    def colength(self, lam: Scalar) -> int:
        lam = Fraction(lam)
        if lam > self.cutoff:
            raise ValvolError(f"lambda {lam} beyond the cutoff {self.cutoff}")
        return sum(d for j, d in self.dims.items() if j < lam)


def graded_dims(v: MonomialValuation, cutoff: Scalar) -> IdealSeqView:
    cutoff = Fraction(cutoff)
    if cutoff < 0:
        raise ValvolError("cutoff must be nonnegative")
    mu, nu = _weights2(v)
    counts: dict[Fraction, int] = {}
    j = 0
    while mu * j <= cutoff:
        k = 0
        while mu * j + nu * k <= cutoff:
            val = mu * j + nu * k
            counts[val] = counts.get(val, 0) + 1
            k += 1
        j += 1
    jumps = tuple(sorted(counts))
    return IdealSeqView(v, cutoff, jumps, {lam: counts[lam] for lam in jumps})


# -- monomial ideals ------------------------------------------------------------


def _minimize(points: Iterable[Point]) -> frozenset[Point]:
    pts = sorted(set(points))
    keep: list[Point] = []
    for p in pts:
        if not any(all(a <= b for a, b in zip(q, p)) for q in keep):
            keep.append(p)
    # sorting guarantees no later point divides an earlier one except equal
    return frozenset(keep)


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators (a staircase)."""

    gens: frozenset[Point]
    nvars: int = 2

    def __post_init__(self):
        object.__setattr__(self, "gens", _minimize(tuple(g) for g in self.gens))
        if any(len(g) != self.nvars for g in self.gens):
            raise ValvolError("generator length does not match the number of variables")

    @classmethod
    def of(cls, *gens: Point, nvars: int = 2) -> MonomialIdeal:
        return cls(frozenset(gens), nvars)

    @classmethod
    def unit(cls, nvars: int = 2) -> MonomialIdeal:
        return cls(frozenset({(0,) * nvars}), nvars)

    @classmethod
    def zero(cls, nvars: int = 2) -> MonomialIdeal:
        return cls(frozenset(), nvars)

    @classmethod
    def valuation_ideal(cls, v: MonomialValuation, lam: Scalar) -> MonomialIdeal:
        """``a_lam(v)`` for a monomial valuation on the plane."""
        lam = Fraction(lam)
        mu, nu = _weights2(v)
        gens = []
        k = 0
        while True:
            rest = lam - nu * k
            gens.append((max(0, math.ceil(rest / mu)), k))
            if rest <= 0:
                break
            k += 1
        return cls(frozenset(gens), 2)

    def __contains__(self, p: Sequence[int]) -> bool:
        return any(all(a <= b for a, b in zip(g, p)) for g in self.gens)

    def __and__(self, other: MonomialIdeal) -> MonomialIdeal:
        lcms = (tuple(max(a, b) for a, b in zip(g, h)) for g in self.gens for h in other.gens)
        return MonomialIdeal(frozenset(lcms), self.nvars)

    def __add__(self, other: MonomialIdeal) -> MonomialIdeal:
        return MonomialIdeal(self.gens | other.gens, self.nvars)

    def __le__(self, other: MonomialIdeal) -> bool:
        return all(g in other for g in self.gens)

    def max_exponent(self) -> int:
        return max((max(g) for g in self.gens), default=0)

    def __str__(self) -> str:
        if not self.gens:
            return "<0>"
        names = "xyzw"[: self.nvars] if self.nvars <= 4 else None

        def mono(g):
            if names is None:
                return str(g)
            s = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, g) if e)
            return s or "1"

        return "<" + ", ".join(mono(g) for g in sorted(self.gens)) + ">"


def sum_ideals(ideals: Iterable[MonomialIdeal], nvars: int = 2) -> MonomialIdeal:
    gens: set[Point] = set()
    for I in ideals:
        gens |= I.gens
    return MonomialIdeal(frozenset(gens), nvars)


def count_difference(big: MonomialIdeal, small: MonomialIdeal, bound: int) -> int:
    """Lattice points of ``big`` outside ``small`` with all coordinates ``< bound``."""
    return sum(
        1 for p in product(range(bound), repeat=big.nvars) if p in big and p not in small
    )


# -- Rees families ------------------------------------------------------------------


@dataclass(frozen=True)
class ReesFamilyTrunc:
    """Antitone family ``m -> I_m`` of monomial ideals for ``m`` in the box
    ``[0, box_1] x ... x [0, box_r]``, with ``I_0`` the unit ideal."""

    box: tuple[int, ...]
    ideals: Mapping[Point, MonomialIdeal] = field(repr=False)

    def __post_init__(self):
        box = tuple(int(b) for b in self.box)
        object.__setattr__(self, "box", box)
        if not box or any(b < 0 for b in box):
            raise ValvolError("box must be a nonempty tuple of nonnegative bounds")
        for m in self.indices():
            if m not in self.ideals:
                raise ValvolError(f"missing ideal for index {m}")
        if not MonomialIdeal.unit(self.nvars) <= self.ideals[(0,) * self.rank]:
            raise ValvolError("I_0 must be the unit ideal")
        for m in self.indices():
            for i in range(self.rank):
                if m[i] < box[i]:
                    up = m[:i] + (m[i] + 1,) + m[i + 1 :]
                    if not self.ideals[up] <= self.ideals[m]:
                        raise ValvolError(f"family is not antitone: I_{up} not in I_{m}")

    @property
    def rank(self) -> int:
        return len(self.box)

    @property
    def nvars(self) -> int:
        return next(iter(self.ideals.values())).nvars

    def indices(self) -> Iterable[Point]:
        return product(*(range(b + 1) for b in self.box))

    def __getitem__(self, m: Point) -> MonomialIdeal:
        return self.ideals[tuple(m)]

    @classmethod
    def from_function(
        cls, box: Sequence[int], fn: Callable[[Point], MonomialIdeal]
    ) -> ReesFamilyTrunc:
        box = tuple(box)
        return cls(box, {m: fn(m) for m in product(*(range(b + 1) for b in box))})

    @classmethod
    def toric(cls, box: Sequence[int]) -> ReesFamilyTrunc:
        """``I_m = (x^m1 y^m2)``: the filtration by the two coordinate axes."""
        if len(box) != 2:
            raise ValvolError("toric family has rank 2")
        return cls.from_function(box, lambda m: MonomialIdeal.of(tuple(m)))

    @classmethod
    def valuation_chain(
        cls, v: MonomialValuation, step: Scalar, length: int
    ) -> ReesFamilyTrunc:
        """Rank-one family ``I_k = a_(k * step)(v)``."""
        step = Fraction(step)
        return cls.from_function(
            (length,), lambda m: MonomialIdeal.valuation_ideal(v, m[0] * step)
        )

    @classmethod
    def valuation_levels(
        cls, v: MonomialValuation, levels: Sequence[Scalar], box: Sequence[int]
    ) -> ReesFamilyTrunc:
        """``I_m = a_<levels, m>(v)``, one level per index direction."""
        levels = [Fraction(c) for c in levels]
        return cls.from_function(
            box,
            lambda m: MonomialIdeal.valuation_ideal(v, sum(c * k for c, k in zip(levels, m))),
        )


@dataclass(frozen=True)
class FlatReesResult:
    ok: bool
    kind: str | None = None  # "intersection" or "graded"
    witness: tuple | None = None
    lhs: int | None = None
    rhs: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def required_box(xi: Weight, cutoff: Scalar) -> tuple[int, ...]:
    top = Fraction(cutoff) + max(xi)
    return tuple(math.floor(top / w) for w in xi)


def flat_rees_check(
    fam: ReesFamilyTrunc, xi: Weight | Sequence[Scalar], cutoff: Scalar, bound: int | None = None
) -> FlatReesResult:
    """Check the two identities implied by flatness of the Rees module.

    (i) ``I_k & I_l == I_max(k, l)`` for all indices in the box;
    (ii) for every level ``lam <= cutoff``,
    ``dim sum_{<xi,m> >= lam} I_m / sum_{<xi,m> > lam} I_m`` equals
    ``sum_{<xi,m> = lam} dim I_m / I_>m``, counting lattice points with
    coordinates below ``bound``.
    """
    if not isinstance(xi, Weight):
        xi = Weight(tuple(xi))
    if len(xi) != fam.rank:
        raise ValvolError(f"xi has {len(xi)} entries for a rank-{fam.rank} family")
    cutoff = Fraction(cutoff)
    indices = list(fam.indices())
    for k, l in combinations(indices, 2):
        top = tuple(max(a, b) for a, b in zip(k, l))
        if (fam[k] & fam[l]).gens != fam[top].gens:
            return FlatReesResult(False, "intersection", (max(k, l), min(k, l)))

    need = required_box(xi, cutoff)
    if any(b < r for b, r in zip(fam.box, need)):
        raise BoxTooSmall("box too small for the graded check", tuple(max(b, r) for b, r in zip(fam.box, need)))
    if bound is None:
        bound = max(I.max_exponent() for I in fam.ideals.values()) + 2
    nv = fam.nvars
    levels = sorted({xi.pairing(m) for m in indices if xi.pairing(m) <= cutoff})
    for lam in levels:
        geq = sum_ideals((fam[m] for m in indices if xi.pairing(m) >= lam), nv)
        gt = sum_ideals((fam[m] for m in indices if xi.pairing(m) > lam), nv)
        lhs = count_difference(geq, gt, bound)
        rhs = 0
        for m in indices:
            if xi.pairing(m) != lam:
                continue
            above = [m[:i] + (m[i] + 1,) + m[i + 1 :] for i in range(fam.rank)]
            rhs += count_difference(fam[m], sum_ideals((fam[u] for u in above), nv), bound)
        if lhs != rhs:
            return FlatReesResult(False, "graded", (lam,), lhs, rhs)
    return FlatReesResult(True)
