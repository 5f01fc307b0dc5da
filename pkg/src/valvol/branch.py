"""Parametrized curve branches ``x = t^a, y = phi(t)`` and their Puiseux data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import Poly, Scalar, determinant, format_rational, parse_rational, rational_root
from .errors import (
    BranchError,
    BudgetExceeded,
    ExtensionRequired,
    NonPrimitiveBranch,
    NotUnibranch,
    ParseError,
    UnsupportedFrame,
)

XY = ("x", "y")
Term = tuple[int, Fraction]


@dataclass(frozen=True)
class BranchParam:
    """A primitive polynomial parametrization in normal form.

    For singular branches (``a > 1``) the lowest exponent ``b`` of ``phi``
    satisfies ``b > a``, ``a`` does not divide ``b`` and the coefficient of
    ``t^b`` is 1.  For ``a == 1`` (smooth branch) ``phi`` is arbitrary.
    """

    a: int
    phi: tuple[Term, ...]

    def __post_init__(self):
        phi = tuple((int(e), Fraction(c)) for e, c in self.phi)
        object.__setattr__(self, "phi", phi)
        if self.a < 1:
            raise BranchError(f"a must be positive, got {self.a}")
        exps = [e for e, _ in phi]
        if any(e < 1 for e in exps):
            raise BranchError("phi exponents must be positive")
        if exps != sorted(set(exps)):
            raise BranchError("phi exponents must be distinct and ascending")
        if any(c == 0 for _, c in phi):
            raise BranchError("phi coefficients must be nonzero")
        if self.a > 1:
            if not phi:
                raise BranchError("a singular branch needs a nonzero phi")
            if math.gcd(self.a, *exps) != 1:
                raise NonPrimitiveBranch(f"gcd(a, exponents) = {math.gcd(self.a, *exps)} > 1")
            b, lead = phi[0]
            if b <= self.a or b % self.a == 0:
                raise UnsupportedFrame(f"leading exponent {b} is not in normal form for a = {self.a}")
            if lead != 1:
                raise BranchError("leading coefficient of phi must be 1")

    @property
    def is_smooth(self) -> bool:
        return self.a == 1

    @property
    def b(self) -> int | None:
        return self.phi[0][0] if self.a > 1 else None

    def phi_at(self, s: Scalar) -> Fraction:
        s = Fraction(s)
        return sum((c * s**e for e, c in self.phi), Fraction(0))

    def point(self, s: Scalar) -> tuple[Fraction, Fraction]:
        s = Fraction(s)
        return s**self.a, self.phi_at(s)

    def to_json(self) -> dict:
        return {"a": self.a, "phi": [[e, format_rational(c)] for e, c in self.phi]}

    @classmethod
    def from_json(cls, obj: dict) -> BranchParam:
        try:
            a = int(obj["a"])
            raw = [(int(e), parse_rational(c)) for e, c in obj["phi"]]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed branch description: {obj!r}") from exc
        return normalize_branch(a, raw)

    def __str__(self) -> str:
        phi = Poly(("t",), {(e,): c for e, c in self.phi})
        x = "t" if self.a == 1 else f"t^{self.a}"
        return f"x = {x}, y = {phi}"


@dataclass(frozen=True)
class PuiseuxChar:
    """Characteristic exponents ``(a; beta_1, ..., beta_g)``."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps or exps[0] < 1:
            raise BranchError("characteristic needs a positive first entry")
        d = exps[0]
        for k, beta in enumerate(exps[1:]):
            if k and beta <= exps[k]:
                raise BranchError("characteristic exponents must increase")
            if beta % d == 0:
                raise BranchError(f"{beta} is divisible by the current gcd {d}")
            d = math.gcd(d, beta)
        if d != 1:
            raise BranchError("gcd chain does not reach 1")
        if len(exps) > 1 and exps[1] <= exps[0]:
            raise BranchError("beta_1 must exceed a")

    @property
    def a(self) -> int:
        return self.exponents[0]

    @property
    def b(self) -> int | None:
        return self.exponents[1] if len(self.exponents) > 1 else None

    @property
    def is_smooth(self) -> bool:
        return len(self.exponents) == 1

    @property
    def d(self) -> int:
        return math.gcd(self.a, self.b) if self.b else 1

    @property
    def a0(self) -> int:
        return self.a // self.d

    @property
    def b0(self) -> int | None:
        return self.b // self.d if self.b else None

    def gcd_chain(self) -> tuple[int, ...]:
        chain = [self.a]
        for beta in self.exponents[1:]:
            chain.append(math.gcd(chain[-1], beta))
        return tuple(chain)

    def __str__(self) -> str:
        head, tail = self.exponents[0], self.exponents[1:]
        return f"({head}; {', '.join(map(str, tail))})" if tail else f"({head})"


def normalize_branch(a: int, phi: Iterable[tuple[int, Scalar]]) -> BranchParam:
    """Bring a raw parametrization to normal form.

    Duplicate exponents are merged and zero terms dropped.  For ``a > 1`` the
    leading coefficient is made 1 by the rescaling ``y -> y / c``, which keeps
    everything rational.
    """
    if a < 1:
        raise BranchError(f"a must be positive, got {a}")
    merged: dict[int, Fraction] = {}
    for e, c in phi:
        if int(e) < 1:
            raise BranchError(f"phi exponent {e} must be positive")
        merged[int(e)] = merged.get(int(e), Fraction(0)) + Fraction(c)
    terms = sorted((e, c) for e, c in merged.items() if c)
    if a == 1:
        return BranchParam(1, tuple(terms))
    if not terms:
        raise BranchError("phi vanishes identically; the branch is the line y = 0 with a > 1")
    g = math.gcd(a, *(e for e, _ in terms))
    if g > 1:
        raise NonPrimitiveBranch(f"parametrization factors through t -> t^{g}")
    b, lead = terms[0]
    if b <= a or b % a == 0:
        raise UnsupportedFrame(
            f"leading exponent {b} with a = {a} is not in normal form (need b > a, a not dividing b)"
        )
    return BranchParam(a, tuple((e, c / lead) for e, c in terms))


def puiseux_characteristic(br: BranchParam) -> PuiseuxChar:
    if br.is_smooth:
        return PuiseuxChar((1,))
    exps = [br.a]
    d = br.a
    for e, _ in br.phi:
        if d == 1:
            break
        if e % d:
            exps.append(e)
            d = math.gcd(d, e)
    # a primitive branch always reaches gcd 1
    assert d == 1, f"gcd chain of {br} stalled at {d}"
    return PuiseuxChar(tuple(exps))


def equisingular(b1: BranchParam, b2: BranchParam) -> bool:
    return puiseux_characteristic(b1) == puiseux_characteristic(b2)


def implicitize(br: BranchParam) -> Poly:
    """Implicit equation of the branch in ``k[x, y]``.

    Computed as the norm of ``y - phi(t)`` from ``k[x, y][t]/(t^a - x)``,
    i.e. the determinant of multiplication by ``y - phi(t)`` on the basis
    ``1, t, ..., t^(a-1)``.  This equals the sign-normalized resultant
    ``Res_t(x - t^a, y - phi(t))`` and is monic of degree ``a`` in ``y``.
    """
    a = br.a
    zero = Poly.zero(XY)
    y = Poly.var(XY, "y")
    matrix = [[zero] * a for _ in range(a)]
    for col in range(a):
        matrix[col][col] = matrix[col][col] + y
        for e, c in br.phi:
            k = e + col
            matrix[k % a][col] = matrix[k % a][col] - Poly.monomial(XY, (k // a, 0), c)
    return determinant(matrix).sign_normalized()


def newton_puiseux(f: Poly, max_terms: int = 10) -> BranchParam:
    """Recover a rational parametrization of the branch ``f = 0`` at the origin.

    ``a`` is read off as the order of ``f(0, y)``; then a root ``y = phi(t)``
    of ``f(t^a, y)`` is built term by term from the Newton polygon.  The
    expansion stops when it is exact (finite) or once exponents exceed
    ``max_terms * max(a, b)``, which fixes ``f`` modulo ``(x, y)^max_terms``.
    The result is returned in normal form (leading coefficient rescaled to 1).
    """
    if len(f.vars) != 2:
        raise BranchError("newton_puiseux expects a polynomial in two variables")
    if f.is_zero():
        raise BranchError("zero polynomial")
    if f.constant_term():
        raise BranchError("curve does not pass through the origin")
    axis = [j for (i, j) in f.terms if i == 0]
    if not axis:
        raise NotUnibranch("x divides f; the line x = 0 is a component")
    a = min(axis)
    tv = ("t", "y")
    g = Poly(tv, {(a * i, j): c for (i, j), c in f.terms.items()})
    steps = max(64, 8 * max_terms * a)
    terms = _expand(g, a, a, 0, [], max_terms, steps)
    if math.gcd(a, *(e for e, _ in terms)) != 1:
        raise NotUnibranch("the expansion closes up before reaching gcd 1")
    return normalize_branch(a, terms)


def _expand(
    g: Poly, a: int, m: int, prev: int, terms: list[Term], max_terms: int, steps: int
) -> list[Term]:
    if steps <= 0:
        raise BudgetExceeded("Newton-Puiseux iteration budget exhausted")
    base = [(i, c) for (i, j), c in g.terms.items() if j == 0]
    if not base:
        return terms
    i0 = min(i for i, _ in base)
    pts = {(i, j): c for (i, j), c in g.terms.items() if 0 < j <= m}
    if not pts:
        raise NotUnibranch("no Newton polygon edge for the tracked roots")
    slope = max(Fraction(i0 - i, j) for i, j in pts)
    if slope.denominator != 1 or slope <= prev:
        raise NotUnibranch(f"Newton polygon slope {slope} is incompatible with x = t^{a}")
    e = int(slope)
    if terms:
        first = terms[0][0]
        bound = max_terms * max(a, first)
        if e > bound:
            if math.gcd(a, *(t for t, _ in terms)) == 1:
                return terms
            raise BudgetExceeded(f"characteristic not resolved below exponent {bound}")
    edge = {j: c for (i, j), c in pts.items() if i + e * j == i0}
    edge[0] = g.coeff((i0, 0))
    if max(edge) != m:
        raise NotUnibranch("tracked roots split into several Newton polygon edges")
    q = 0
    for j in edge:
        q = math.gcd(q, j)
    n = m // q
    # edge polynomial must be lead * (u - kappa)^n with u = c^q
    lead = edge[m]
    kappa = -edge.get((n - 1) * q, Fraction(0)) / (n * lead)
    for k in range(n + 1):
        expected = lead * math.comb(n, k) * (-kappa) ** (n - k)
        if edge.get(k * q, Fraction(0)) != expected:
            raise NotUnibranch("edge polynomial has several distinct root orbits")
    r = rational_root(kappa, q)
    if r is None:
        raise ExtensionRequired(f"leading coefficient is a {q}-th root of {kappa}")
    candidates = [r] if q % 2 else [abs(r), -abs(r)]
    failure: ExtensionRequired | None = None
    for c in candidates:
        shifted = g.compose({"y": Poly.var(g.vars, "y") + Poly.monomial(g.vars, (e, 0), c)})
        try:
            return _expand(shifted, a, n, e, terms + [(e, c)], max_terms, steps - 1)
        except ExtensionRequired as exc:
            failure = exc
    assert failure is not None
    raise failure


def parse_phi_spec(text: str) -> list[tuple[int, Fraction]]:
    """Parse the CLI form ``"e1:c1,e2:c2"``."""
    out = []
    if not text.strip():
        return out
    for chunk in text.split(","):
        try:
            e, c = chunk.split(":")
            out.append((int(e), parse_rational(c)))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad phi term {chunk!r}; expected exponent:coefficient") from exc
    return out

