"""Independent reference computations used by the tests.

None of these call into the routines they check; they use cofactor
expansion, sympy, closed product formulas or brute-force enumeration.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy

from valvol.algebra import Poly
from valvol.branch import PuiseuxChar


def char_for(a: int, b: int) -> PuiseuxChar:
    """A characteristic with first exponents ``(a, b)``; ``(a; b, b+1)`` when not coprime."""
    if math.gcd(a, b) == 1:
        return PuiseuxChar((a, b))
    return PuiseuxChar((a, b, b + 1))


def cofactor_det(matrix):
    """Laplace expansion along the first row."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else Poly.zero(matrix[0][0].vars)


def to_sympy(p: Poly):
    syms = sympy.symbols(p.vars)
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            mono *= s**e
        expr += mono
    return expr


def from_sympy(expr, vars) -> Poly:
    syms = sympy.symbols(vars)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Poly(vars, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def sympy_resultant(p: Poly, q: Poly, var: str) -> Poly:
    rest = tuple(v for v in p.vars if v != var)
    res = sympy.resultant(to_sympy(p), to_sympy(q), sympy.Symbol(var))
    return from_sympy(res, rest)


def product_formula_a2(phi) -> Poly:
    """``(y - E(x))^2 - x O(x)^2`` for ``phi(t) = E(t^2) + t O(t^2)``."""
    xy = ("x", "y")
    even = Poly(xy, {(e // 2, 0): c for e, c in phi if e % 2 == 0})
    odd = Poly(xy, {(e // 2, 0): c for e, c in phi if e % 2 == 1})
    y = Poly.var(xy, "y")
    x = Poly.var(xy, "x")
    return (y - even) ** 2 - x * odd * odd


def lattice_colength(mu: Fraction, nu: Fraction, lam: Fraction) -> int:
    """``#{(i, j) : mu i + nu j < lam}`` as a sum of ceilings."""
    total = 0
    i = 0
    while mu * i < lam:
        total += math.ceil((lam - mu * i) / nu)
        i += 1
    return total


def lattice_graded(mu, nu, cutoff) -> dict:
    out: dict = {}
    for i in range(int(cutoff / mu) + 1):
        for j in range(int(cutoff / nu) + 1):
            v = mu * i + nu * j
            if v <= cutoff:
                out[v] = out.get(v, 0) + 1
    return out


def grid_nvol_min(a: int, b: int | None, lam: Fraction, top: int = 40):
    """Brute minimum of the normalized volume over integer rays ``(mu, nu)`` in a box."""
    best = None
    for mu in range(1, top + 1):
        for nu in range(1, top + 1):
            if math.gcd(mu, nu) != 1:
                continue
            v = nu if b is None else min(a * nu, b * mu)
            A = mu + nu - lam * v
            if A <= 0:
                continue
            val = Fraction(A * A) / (mu * nu)
            if best is None or val < best[1]:
                best = ((mu, nu), val)
    return best
