"""Monomial valuations and their behaviour under degeneration of the ambient."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .algebra import Poly, Scalar, primitive_integer_vector
from .branch import PuiseuxChar
from .errors import ValvolError, VariableError

INF = math.inf
Value = Union[Fraction, float]  # float only for +inf


@dataclass(frozen=True)
class Weight:
    """A vector of strictly positive rationals."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValvolError("empty weight")
        if any(e <= 0 for e in entries):
            raise ValvolError(f"weights must be strictly positive, got {entries}")

    @classmethod
    def of(cls, *entries: Scalar) -> Weight:
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def scaled(self, c: Scalar) -> Weight:
        return Weight(tuple(e * Fraction(c) for e in self.entries))

    def pairing(self, exp: Sequence[int]) -> Fraction:
        return sum((w * e for w, e in zip(self.entries, exp)), Fraction(0))

    def primitive(self) -> tuple[int, ...]:
        """Coprime positive integers on the same ray."""
        return primitive_integer_vector(self.entries)

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)


@dataclass(frozen=True)
class MonomialValuation:
    vars: tuple[str, ...]
    weight: Weight

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(self.vars) != len(self.weight):
            raise VariableError(f"{len(self.weight)} weights for variables {self.vars}")

    @classmethod
    def on_plane(cls, mu: Scalar, nu: Scalar) -> MonomialValuation:
        return cls(("x", "y"), Weight.of(mu, nu))

    def __call__(self, f: Poly) -> Value:
        return eval_valuation(self, f)


def eval_valuation(v: MonomialValuation, f: Poly) -> Value:
    """``min <w, m>`` over the monomials of ``f``; ``+inf`` for ``f = 0``."""
    if f.vars != v.vars:
        raise VariableError(f"polynomial over {f.vars}, valuation over {v.vars}")
    if f.is_zero():
        return INF
    return min(v.weight.pairing(m) for m in f.terms)


def eval_on_branch(char: PuiseuxChar, weight: Weight | Sequence[Scalar]) -> Fraction:
    """Value of the implicit equation of a singular branch at weight ``(mu, nu)``.

    The initial form on the ray ``a*nu = b*mu`` is ``(y^a0 - x^b0)^d``, which
    does not vanish, so the value is ``min(a*nu, b*mu)`` for every weight.
    """
    if char.is_smooth:
        raise ValvolError("smooth branch: use the sheared line y = 0 instead")
    mu, nu = (Fraction(w) for w in weight)
    return min(char.a * nu, char.b * mu)


def restrict_central(f: Poly, f_vars: Sequence[str]) -> Poly:
    """Set every variable in ``f_vars`` to zero and drop it."""
    f_vars = [v for v in f_vars if v in f.vars]
    if not f_vars:
        return f
    return f.subs({v: 0 for v in f_vars}).drop_vars(f_vars)


def _weighted_min(f: Poly, weights: Sequence[Fraction]) -> Value:
    if f.is_zero():
        return INF
    return min(sum((w * e for w, e in zip(weights, m)), Fraction(0)) for m in f.terms)


def degeneration_chain(
    alpha: Sequence[Scalar], beta: Sequence[Scalar], f: Poly
) -> tuple[Value, Value, Value]:
    """Evaluate ``v_alpha(f) <= v_(alpha,beta)(f) <= vbar_alpha(fbar)``.

    ``f`` lives over ``r + s`` variables: the first ``r = len(alpha)`` carry
    the boundary weights ``alpha``, the last ``s = len(beta)`` are the
    coordinates cut out by the degeneration and carry ``beta >= 0``.
    """
    r, s = len(alpha), len(beta)
    if r == 0 or s == 0:
        raise ValvolError("degeneration_chain needs nonempty E- and F-variable groups")
    if r + s != len(f.vars):
        raise VariableError(f"{r}+{s} weights for variables {f.vars}")
    if f.is_zero():
        raise ValvolError("degeneration_chain needs f != 0")
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
        raise ValvolError("weights must be nonnegative")
    low = _weighted_min(f, alpha + [Fraction(0)] * s)
    mid = _weighted_min(f, alpha + beta)
    fbar = restrict_central(f, f.vars[r:])
    high = _weighted_min(fbar, alpha)
    return low, mid, high


def stabilization_bound(alpha: Sequence[Scalar], f: Poly) -> Fraction:
    """Once every ``beta_j`` exceeds this bound, ``v_(alpha,beta)(f) = vbar_alpha(fbar)``
    (provided ``fbar != 0``)."""
    return f.degree() * max(Fraction(a) for a in alpha)
