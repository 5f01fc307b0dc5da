"""Weighted initial forms, one-parameter Rees families and the K-semistable
central fibre of ``(A^2, lam C)`` for a unibranch curve ``C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, Scalar, primitive_integer_vector
from .branch import XY, BranchParam, PuiseuxChar, implicitize, puiseux_characteristic
from .errors import CrossCheckFailed, NotLogFano, ValvolError
from .invariants import CONE, TORIC, PairA2, local_volume_closed, nvol_of_pair
from .valuation import MonomialValuation, Weight, eval_valuation


def _as_weight(xi) -> Weight:
    return xi if isinstance(xi, Weight) else Weight(tuple(xi))


def initial_form(f: Poly, xi: Weight | Sequence[Scalar]) -> Poly:
    """Sum of the terms of ``f`` of least ``xi``-weight."""
    xi = _as_weight(xi)
    if f.is_zero():
        raise ValvolError("the zero polynomial has no initial form")
    low = eval_valuation(MonomialValuation(f.vars, xi), f)
    return Poly(f.vars, {m: c for m, c in f.terms.items() if xi.pairing(m) == low})


def rees_family(f: Poly, xi: Weight | Sequence[Scalar], param: str = "s") -> Poly:
    """``F = s^(-v(f)) f(s^xi_1 x_1, ..., s^xi_n x_n)`` as a polynomial in the
    variables of ``f`` and ``param``; ``F(s=1) = f`` and ``F(s=0)`` is the
    initial form."""
    xi = _as_weight(xi)
    if not xi.is_integral():
        raise ValvolError("Rees family needs integer weights; clear denominators first")
    if param in f.vars:
        raise ValvolError(f"parameter name {param!r} clashes with a variable")
    low = eval_valuation(MonomialValuation(f.vars, xi), f)
    terms = {}
    for m, c in f.terms.items():
        terms[m + (int(xi.pairing(m) - low),)] = c
    return Poly(f.vars + (param,), terms)


@dataclass(frozen=True)
class P1ConePair:
    """``(P^1, (1 - 1/a0)[0] + (1 - 1/b0)[inf] + sum c_p [p])``."""

    orders: tuple[int, int]
    marked: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        a0, b0 = (int(o) for o in self.orders)
        object.__setattr__(self, "orders", (a0, b0))
        object.__setattr__(self, "marked", tuple((str(p), Fraction(c)) for p, c in self.marked))
        if a0 < 1 or b0 < a0 or math.gcd(a0, b0) != 1:
            raise ValvolError(f"orbifold orders must be coprime with 1 <= a0 <= b0, got {self.orders}")
        for p, c in self.marked:
            if not 0 <= c < 1:
                raise ValvolError(f"coefficient of {p} must lie in [0, 1)")
        if sum(c for _, c in self.coefficients()) >= 2:
            raise NotLogFano("sum of coefficients is at least 2; the pair is not log Fano")

    def coefficients(self) -> list[tuple[str, Fraction]]:
        a0, b0 = self.orders
        return [("0", 1 - Fraction(1, a0)), ("inf", 1 - Fraction(1, b0)), *self.marked]

    def beta(self) -> dict[str, Fraction]:
        """``A(p) - S(p)`` for every marked point and a generic point."""
        S = (2 - sum(c for _, c in self.coefficients())) / 2
        out = {p: 1 - c - S for p, c in self.coefficients()}
        out["generic"] = 1 - S
        return out


def kss_test(pair: P1ConePair) -> bool:
    """Valuative K-semistability of a log Fano pair on ``P^1``.

    Each point ``p`` has log discrepancy ``1 - c_p`` and expected vanishing
    order ``deg(-K - D) / 2``; the pair is K-semistable iff no point has
    negative beta.
    """
    return all(b >= 0 for b in pair.beta().values())


def toric_kss_check(lam_a: Scalar) -> tuple[tuple[int, int], bool]:
    """Minimize ``(w_x + w_y - lam_a w_y)^2 / (w_x w_y)`` over toric valuations of
    ``(A^2, lam_a * {y = 0})``.

    By AM-GM the minimum ``4 (1 - lam_a)`` is reached exactly on the ray
    ``w_x : w_y = (1 - lam_a) : 1``.
    """
    k = Fraction(lam_a)
    if not 0 <= k < 1:
        raise ValvolError("need 0 <= lam * a < 1")
    mu = 1 - k
    value = (mu + 1 - k) ** 2 / mu
    return primitive_integer_vector((mu, Fraction(1))), value == 4 * (1 - k)


@dataclass(frozen=True)
class DegenerationResult:
    branch: BranchParam
    lam: Fraction
    char: PuiseuxChar
    xi: tuple[int, int]
    polarization: tuple[Fraction, Fraction]
    equation: Poly
    initial_form: Poly
    central_boundary: tuple[tuple[Poly, Fraction], ...]
    case: str
    kss: bool
    nvol: Fraction
    rees: Poly
    value_group_rank: int = 1

    def descriptor(self) -> tuple:
        """Isomorphism type of the central fibre: case, orders, multiplicity and coefficient."""
        char = self.char
        if self.case == CONE:
            return (self.case, char.a0, char.b0, char.d, self.lam * char.d, self.xi)
        return (self.case, 1, 0, char.a, self.lam * char.a, self.xi)


def kss_degeneration(br: BranchParam, lam: Scalar) -> DegenerationResult:
    """Degenerate ``(A^2, lam C)`` along the normalized-volume minimizer.

    Smooth branches are first sheared by ``y -> y + phi(x)`` so that ``C`` is
    the line ``y = 0``.  The central fibre is checked against the closed-form
    local volume before it is returned.
    """
    lam = Fraction(lam)
    char = puiseux_characteristic(br)
    profile = local_volume_closed(char, lam)
    xi = profile.ray
    y = Poly.var(XY, "y")
    f = y if char.is_smooth else implicitize(br)
    f0 = initial_form(f, xi)
    if profile.case == CONE:
        component = y ** char.a0 - Poly.var(XY, "x") ** char.b0
        coeff = lam * char.d
        expected = component ** char.d
        kss = kss_test(P1ConePair((char.a0, char.b0), (("1", coeff),)))
        lct_central = Fraction(1, char.a0) + Fraction(1, char.b0)
    else:
        component = y
        coeff = lam * char.a
        expected = y ** char.a
        ray, ok = toric_kss_check(coeff)
        kss = ok and ray == xi
        lct_central = Fraction(1)
    if f0 != expected:
        raise CrossCheckFailed(f"initial form {f0} differs from expected {expected}")
    if not coeff < lct_central:
        raise CrossCheckFailed("central boundary coefficient is not below the central lct")
    central = PairA2.of((component, coeff)) if coeff else PairA2()
    nv_central = nvol_of_pair(central, xi)
    nv_original = nvol_of_pair(PairA2.of((f, lam)), xi)
    if not nv_central == nv_original == profile.value:
        raise CrossCheckFailed(
            f"normalized volumes disagree: central {nv_central}, original {nv_original}, closed {profile.value}"
        )
    return DegenerationResult(
        branch=br,
        lam=lam,
        char=char,
        xi=xi,
        polarization=profile.polarization,
        equation=f,
        initial_form=f0,
        central_boundary=central.boundary,
        case=profile.case,
        kss=kss,
        nvol=profile.value,
        rees=rees_family(f, xi),
    )


__all__ = [
    "CONE",
    "TORIC",
    "DegenerationResult",
    "P1ConePair",
    "initial_form",
    "kss_degeneration",
    "kss_test",
    "rees_family",
    "toric_kss_check",
]
