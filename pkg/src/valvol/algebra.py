"""Exact rational arithmetic and sparse multivariate polynomials.

Coefficients are :class:`fractions.Fraction` throughout.  A :class:`Poly`
lives over an explicit, ordered tuple of variable names and stores a map
from exponent vectors to nonzero coefficients.  Variables are never
inferred from the terms.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import ParseError, ValvolError, VariableError

Rat = Fraction
Scalar = Union[int, Fraction]
Exponent = tuple[int, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a reduced Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Scalar) -> str:
    """Canonical text of a rational: ``"p/q"`` in lowest terms, ``"p"`` if integral."""
    return str(Fraction(q))


def _order_key(exp: Exponent) -> Exponent:
    # lex with the last declared variable most significant ("y before x")
    return exp[::-1]


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, Scalar] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise VariableError(f"duplicate variable names in {vars}")
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(vars):
                raise VariableError(f"exponent {exp} does not match variables {vars}")
            if any(e < 0 for e in exp):
                raise ValvolError(f"negative exponent {exp}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._vars = vars
        self._terms = clean
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> Poly:
        return cls(vars)

    @classmethod
    def const(cls, vars: Sequence[str], c: Scalar) -> Poly:
        return cls(vars, {(0,) * len(tuple(vars)): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> Poly:
        vars = tuple(vars)
        if name not in vars:
            raise VariableError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exp: 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exp: Exponent, c: Scalar = 1) -> Poly:
        return cls(vars, {tuple(exp): c})

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> Poly:
        return poly_parse(text, vars)

    # -- accessors ---------------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending order (last variable most significant)."""
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def coeff(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * len(self._vars))

    def index(self, name: str) -> int:
        try:
            return self._vars.index(name)
        except ValueError:
            raise VariableError(f"variable {name!r} not in {self._vars}") from None

    def degree(self, name: str | None = None) -> int:
        """Degree in ``name``, or total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self.index(name)
        return max(e[i] for e in self._terms)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValvolError("zero polynomial has no leading term")
        exp = max(self._terms, key=_order_key)
        return exp, self._terms[exp]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other._vars != self._vars:
                raise VariableError(f"variable lists differ: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self._vars, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self._vars, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return Poly(self._vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self._vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> Poly:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self._vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self._vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def divexact(self, other: Poly) -> Poly:
        """Exact quotient ``self / other``; raises if the division leaves a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lexp, lc = other.leading_term()
        rem = dict(self._terms)
        quot: dict[Exponent, Fraction] = {}
        while rem:
            exp = max(rem, key=_order_key)
            shift = tuple(a - b for a, b in zip(exp, lexp))
            if any(s < 0 for s in shift):
                raise ValvolError("polynomial division is not exact")
            c = rem[exp] / lc
            quot[shift] = c
            for e, d in other._terms.items():
                t = tuple(a + b for a, b in zip(e, shift))
                v = rem.get(t, 0) - c * d
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly(self._vars, quot)

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point: Mapping[str, Scalar] | Sequence[Scalar]) -> Fraction:
        if isinstance(point, Mapping):
            values = [Fraction(point[v]) for v in self._vars]
        else:
            values = [Fraction(p) for p in point]
            if len(values) != len(self._vars):
                raise VariableError("point dimension does not match variables")
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for x, e in zip(values, exp):
                if e:
                    term *= x**e
            total += term
        return total

    def subs(self, values: Mapping[str, Scalar]) -> Poly:
        """Substitute constants for some variables, keeping the variable list."""
        idx = {self.index(v): Fraction(c) for v, c in values.items()}
        out: dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            e = list(exp)
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return Poly(self._vars, out)

    def compose(self, images: Mapping[str, Poly], vars: Sequence[str] | None = None) -> Poly:
        """Substitute polynomials (all over ``vars``) for the variables of ``self``.

        Variables missing from ``images`` must also appear in ``vars`` and are
        mapped to themselves.
        """
        target = tuple(vars) if vars is not None else self._vars
        gens = []
        for v in self._vars:
            if v in images:
                g = images[v]
                if g.vars != target:
                    raise VariableError(f"image of {v} is over {g.vars}, expected {target}")
            else:
                g = Poly.var(target, v)
            gens.append(g)
        powers: list[dict[int, Poly]] = [{} for _ in gens]

        def power(i: int, e: int) -> Poly:
            if e not in powers[i]:
                powers[i][e] = gens[i] ** e
            return powers[i][e]

        result = Poly.zero(target)
        for exp, c in self._terms.items():
            term = Poly.const(target, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def with_vars(self, vars: Sequence[str]) -> Poly:
        """Re-express over another variable list (reordering, adding, or dropping
        variables that do not occur)."""
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(vars)}
        out: dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            new = [0] * len(vars)
            for v, e in zip(self._vars, exp):
                if e:
                    if v not in pos:
                        raise VariableError(f"variable {v!r} occurs in the polynomial")
                    new[pos[v]] = e
            out[tuple(new)] = c
        return Poly(vars, out)

    def drop_vars(self, names: Iterable[str]) -> Poly:
        names = set(names)
        return self.with_vars([v for v in self._vars if v not in names])

    def coefficients_in(self, name: str) -> list[Poly]:
        """Coefficients of ``self`` as a polynomial in ``name`` (ascending), over
        the remaining variables."""
        i = self.index(name)
        rest = self._vars[:i] + self._vars[i + 1 :]
        buckets: dict[int, dict[Exponent, Fraction]] = {}
        for exp, c in self._terms.items():
            buckets.setdefault(exp[i], {})[exp[:i] + exp[i + 1 :]] = c
        deg = max(buckets, default=-1)
        return [Poly(rest, buckets.get(k, {})) for k in range(deg + 1)]

    def sign_normalized(self) -> Poly:
        """Multiply by -1 if needed so the leading term is positive."""
        if self.is_zero():
            return self
        _, c = self.leading_term()
        return -self if c < 0 else self

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self._vars, exp) if e
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={list(self._vars)!r})"


# -- parsing ---------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.pos = 0
        self.vars = tuple(vars)
        # longest names first so "x1" wins over "x" when both are declared
        self._names = sorted(self.vars, key=len, reverse=True)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an unsigned integer", start)
        return int(self.text[start : self.pos])

    def identifier(self) -> list[str]:
        """Read an identifier and split it into declared variable names."""
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        word = self.text[start : self.pos]
        names: list[str] = []
        rest = word
        while rest:
            for name in self._names:
                if rest.startswith(name):
                    names.append(name)
                    rest = rest[len(name) :]
                    break
            else:
                raise ParseError(f"unknown variable {word!r}", start)
        return names


def poly_parse(text: str, vars: Sequence[str]) -> Poly:
    """Parse a signed sum of monomials with rational coefficients.

    Grammar (whitespace insignificant)::

        expr  := ['+'|'-'] term (('+'|'-') term)*
        term  := coeff? ('*'? var ('^' uint)?)*
        coeff := int ('/' uint)?
    """
    vars = tuple(vars)
    sc = _Scanner(text, vars)
    if not sc.peek():
        raise ParseError("empty polynomial expression", 0)
    result: dict[Exponent, Fraction] = {}
    sign = 1
    if sc.peek() in "+-":
        sign = -1 if sc.take() == "-" else 1
    while True:
        coeff, exp = _parse_term(sc)
        result[exp] = result.get(exp, 0) + sign * coeff
        ch = sc.peek()
        if not ch:
            break
        if ch not in "+-":
            raise ParseError(f"unexpected character {ch!r}", sc.pos)
        sign = -1 if sc.take() == "-" else 1
    return Poly(vars, result)


def _parse_term(sc: _Scanner) -> tuple[Fraction, Exponent]:
    start = sc.pos
    coeff = Fraction(1)
    exp = [0] * len(sc.vars)
    seen = False
    if sc.peek().isdigit():
        num = sc.uint()
        den = 1
        if sc.peek() == "/":
            sc.take()
            slash = sc.pos
            den = sc.uint()
            if den == 0:
                raise ParseError("zero denominator", slash)
        coeff = Fraction(num, den)
        seen = True
    while True:
        ch = sc.peek()
        if ch == "*":
            sc.take()
            ch = sc.peek()
            if not (ch.isalpha() or ch == "_"):
                raise ParseError("expected a variable after '*'", sc.pos)
        elif not (ch.isalpha() or ch == "_"):
            break
        names = sc.identifier()
        power = 1
        if sc.peek() == "^":
            sc.take()
            power = sc.uint()
        for k, name in enumerate(names):
            # only the last name of a juxtaposed run carries the power
            exp[sc.vars.index(name)] += power if k == len(names) - 1 else 1
        seen = True
    if not seen:
        raise ParseError("expected a term", start)
    return coeff, tuple(exp)


# -- determinants and resultants -------------------------------------------


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Fraction-free (Bareiss) determinant of a square matrix of polynomials."""
    n = len(matrix)
    if n == 0:
        raise ValvolError("empty matrix")
    if any(len(row) != n for row in matrix):
        raise ValvolError("matrix is not square")
    m = [list(row) for row in matrix]
    vars = m[0][0].vars
    sign = 1
    prev = Poly.const(vars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(vars)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = Poly.zero(vars)
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_matrix(p: Poly, q: Poly, var: str) -> list[list[Poly]]:
    pc = p.coefficients_in(var)[::-1]
    qc = q.coefficients_in(var)[::-1]
    m, n = len(pc) - 1, len(qc) - 1
    rest = pc[0].vars
    zero = Poly.zero(rest)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def resultant_in(p: Poly, q: Poly, var: str) -> Poly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``.

    The result is a polynomial in the remaining variables, returned without
    any sign normalization.
    """
    if p.vars != q.vars:
        raise VariableError(f"variable lists differ: {p.vars} vs {q.vars}")
    if var not in p.vars:
        raise VariableError(f"{var!r} is not a variable of the inputs")
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise VariableError(f"both polynomials must have positive degree in {var!r}")
    return determinant(sylvester_matrix(p, q, var))


# -- univariate helpers ------------------------------------------------------


def _strip(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def univariate_gcd(p: Sequence[Scalar], q: Sequence[Scalar]) -> list[Fraction]:
    """Monic gcd of two dense ascending coefficient lists over Q."""
    a = _strip([Fraction(c) for c in p])
    b = _strip([Fraction(c) for c in q])
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[shift + i] -= f * c
            r.pop()
            _strip(r)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def is_squarefree(coeffs: Sequence[Scalar]) -> bool:
    deriv = [i * Fraction(c) for i, c in enumerate(coeffs)][1:]
    return len(univariate_gcd(coeffs, deriv)) <= 1


def rational_root(q: Fraction, n: int) -> Fraction | None:
    """The real ``n``-th root of ``q`` if it is rational (nonnegative for even ``n``)."""
    if n < 1:
        raise ValueError("root degree must be positive")
    if q < 0:
        if n % 2 == 0:
            return None
        r = rational_root(-q, n)
        return None if r is None else -r
    num = _int_root(q.numerator, n)
    den = _int_root(q.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(k: int, n: int) -> int | None:
    if k < 2:
        return k
    # integer Newton iteration from an upper bound
    r = 1 << (k.bit_length() // n + 1)
    while True:
        nxt = ((n - 1) * r + k // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**n == k:
            return cand
    return None


def primitive_integer_vector(values: Sequence[Scalar]) -> tuple[int, ...]:
    """Scale a positive rational vector to coprime positive integers."""
    fr = [Fraction(v) for v in values]
    lcm = 1
    for v in fr:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        raise ValvolError("zero vector has no primitive representative")
    return tuple(v // g for v in ints)


def dense_grid(bounds: Sequence[int]) -> Iterable[Exponent]:
    """All exponent vectors in the box ``[0, b_1] x ... x [0, b_r]``."""
    return product(*(range(b + 1) for b in bounds))
