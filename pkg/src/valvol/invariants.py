"""Log discrepancies, log canonical thresholds and normalized volumes of
pairs ``(A^2, lam * C)`` with ``C`` a unibranch curve through the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from scipy.optimize import minimize_scalar

from .algebra import Poly, Scalar, is_squarefree, primitive_integer_vector
from .branch import BranchParam, PuiseuxChar
from .errors import CrossCheckFailed, KltRangeError, ValvolError
from .valuation import INF, MonomialValuation, Value, Weight, eval_on_branch, eval_valuation

CONE, TORIC, SMOOTH = "cone", "toric", "smooth"


@dataclass(frozen=True)
class PairA2:
    """The pair ``(A^2, sum lam_i C_i)`` with curves given by equations in x, y."""

    boundary: tuple[tuple[Poly, Fraction], ...] = ()
    branches: tuple[BranchParam | None, ...] = field(default=(), compare=False)

    def __post_init__(self):
        clean = []
        for f, lam in self.boundary:
            lam = Fraction(lam)
            if lam < 0:
                raise ValvolError("boundary coefficients must be nonnegative")
            if f.vars != ("x", "y"):
                raise ValvolError("boundary curves must be polynomials in (x, y)")
            if f.constant_term():
                raise ValvolError(f"curve {f} does not pass through the origin")
            clean.append((f, lam))
        object.__setattr__(self, "boundary", tuple(clean))

    @classmethod
    def of(cls, *components: tuple[Poly, Scalar]) -> PairA2:
        return cls(tuple((f, Fraction(c)) for f, c in components))


def log_discrepancy(pair: PairA2, w: Weight | Sequence[Scalar]) -> Fraction:
    """``A(v_w) = mu + nu - sum lam_i v_w(f_i)`` on the smooth plane."""
    if not isinstance(w, Weight):
        w = Weight(tuple(w))
    v = MonomialValuation(("x", "y"), w)
    return w[0] + w[1] - sum((lam * eval_valuation(v, f) for f, lam in pair.boundary), Fraction(0))


def nvol_of_pair(pair: PairA2, w: Weight | Sequence[Scalar]) -> Value:
    """``A(v_w)^2 * vol(v_w)``, or ``+inf`` when the log discrepancy is not positive."""
    if not isinstance(w, Weight):
        w = Weight(tuple(w))
    A = log_discrepancy(pair, w)
    if A <= 0:
        return INF
    return A * A / (w[0] * w[1])


def lct_unibranch(char: PuiseuxChar) -> Fraction:
    """``1/a + 1/b`` from the first two characteristic exponents; 1 for a smooth branch."""
    if char.is_smooth:
        return Fraction(1)
    return Fraction(1, char.a) + Fraction(1, char.b)


class LctBound(NamedTuple):
    value: Fraction
    bound_only: bool


def newton_edges(f: Poly) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Compact edges of the Newton polygon of ``f`` in (x, y), top-left to bottom-right."""
    pts = set(f.terms)
    start = min(pts, key=lambda p: (p[0], p[1]))
    end = min(pts, key=lambda p: (p[1], p[0]))
    edges = []
    cur = start
    while cur != end:
        below = [p for p in pts if p[1] < cur[1] and p[0] > cur[0]]
        # steepest descent; farthest point on ties
        nxt = max(below, key=lambda p: (Fraction(cur[1] - p[1], p[0] - cur[0]), p[0]))
        edges.append((cur, nxt))
        cur = nxt
    return edges


def lct_newton_bound(f: Poly) -> LctBound:
    """Newton-polygon upper bound ``min_w (w_x + w_y) / v_w(f)`` for the lct at 0.

    The minimum runs over primitive normals of compact edges and the limits
    along the coordinate axes.  ``bound_only`` is set when the polygon gives
    no exactness guarantee: the bound exceeds 1, or some edge is degenerate
    (its edge polynomial has a repeated root), or there is no compact edge.
    """
    if f.is_zero() or f.constant_term():
        raise ValvolError("need a nonzero polynomial vanishing at the origin")
    if f.vars != ("x", "y"):
        raise ValvolError("expected a polynomial in (x, y)")
    candidates: list[Fraction] = []
    min_i = min(i for i, _ in f.terms)
    min_j = min(j for _, j in f.terms)
    if min_i:
        candidates.append(Fraction(1, min_i))
    if min_j:
        candidates.append(Fraction(1, min_j))
    edges = newton_edges(f)
    degenerate = not edges
    for (i1, j1), (i2, j2) in edges:
        g = math.gcd(j1 - j2, i2 - i1)
        wx, wy = (j1 - j2) // g, (i2 - i1) // g
        candidates.append(Fraction(wx + wy, wx * i1 + wy * j1))
        di, dj = (i2 - i1) // g, (j1 - j2) // g
        edge_poly = [f.coeff((i1 + k * di, j1 - k * dj)) for k in range(g + 1)]
        if not is_squarefree(edge_poly):
            degenerate = True
    value = min(candidates)
    return LctBound(value, degenerate or value > 1)


def _check_range(char: PuiseuxChar, lam: Fraction) -> None:
    top = lct_unibranch(char)
    if not 0 <= lam < top:
        raise KltRangeError(f"lambda outside klt range [0, {top})")


def _order(char: PuiseuxChar, mu: Fraction, nu: Fraction) -> Fraction:
    # value of the curve equation (the sheared line y = 0 when smooth)
    return nu if char.is_smooth else eval_on_branch(char, (mu, nu))


def nvol_at(char: PuiseuxChar, lam: Scalar, w: Weight | Sequence[Scalar]) -> Value:
    """Normalized volume ``(mu + nu - lam * v_w(f))^2 / (mu * nu)`` of ``v_w``."""
    lam = Fraction(lam)
    _check_range(char, lam)
    mu, nu = (Fraction(x) for x in w)
    if mu <= 0 or nu <= 0:
        raise ValvolError("weights must be strictly positive")
    A = mu + nu - lam * _order(char, mu, nu)
    if A <= 0:
        return INF
    return A * A / (mu * nu)


@dataclass(frozen=True)
class NVolProfile:
    char: PuiseuxChar
    lam: Fraction
    value: Fraction
    polarization: tuple[Fraction, Fraction]
    case: str

    @property
    def ray(self) -> tuple[int, int]:
        return primitive_integer_vector(self.polarization)

    @property
    def a(self) -> int:
        return self.char.a

    @property
    def b(self) -> int | None:
        return self.char.b

    def at(self, w: Weight | Sequence[Scalar]) -> Value:
        return nvol_at(self.char, self.lam, w)

    def log_discrepancy(self, w: Sequence[Scalar]) -> Fraction:
        mu, nu = (Fraction(x) for x in w)
        return mu + nu - self.lam * _order(self.char, mu, nu)

    def normalized_polarization(self) -> tuple[Fraction, Fraction]:
        """The minimizing weight rescaled so that its log discrepancy is 1."""
        A = self.log_discrepancy(self.polarization)
        return tuple(x / A for x in self.polarization)


def local_volume_closed(char: PuiseuxChar, lam: Scalar) -> NVolProfile:
    """Local volume of ``0 in (A^2, lam C)`` and its minimizing monomial valuation."""
    lam = Fraction(lam)
    _check_range(char, lam)
    a = char.a
    if char.is_smooth:
        return NVolProfile(char, lam, 4 * (1 - lam), (1 - lam, Fraction(1)), SMOOTH)
    b = char.b
    if lam >= Fraction(1, a) - Fraction(1, b):
        value = a * b * (Fraction(1, a) + Fraction(1, b) - lam) ** 2
        return NVolProfile(char, lam, value, (Fraction(char.a0), Fraction(char.b0)), CONE)
    return NVolProfile(char, lam, 4 * (1 - lam * a), (1 - lam * a, Fraction(1)), TORIC)


def _exact_minimum(char: PuiseuxChar, lam: Fraction) -> tuple[Fraction, Fraction]:
    """Exact minimizer ``rho = nu/mu`` and value over weights ``(1, rho)``.

    ``A(1, rho)`` is affine on each side of the breakpoint ``rho = b/a``, so the
    volume ``A^2 / rho`` is minimized at a critical point of one of the two
    pieces ``(p + q rho)^2 / rho`` (namely ``rho = p/q``) or at the breakpoint.
    """

    def g(rho: Fraction) -> Fraction:
        A = 1 + rho - lam * _order(char, Fraction(1), rho)
        return A * A / rho

    if char.is_smooth:
        k = 1 - lam
        return 1 / k, g(1 / k)
    a, b = char.a, char.b
    brk = Fraction(b, a)
    cands = [brk]
    k = 1 - lam * a  # slope of A below the breakpoint, intercept 1
    if k > 0 and 1 / k < brk:
        cands.append(1 / k)
    c = 1 - lam * b  # intercept of A above the breakpoint, slope 1
    if c > 0 and c > brk:
        cands.append(c)
    # breakpoint first: ties resolve to the cone case
    best = min(cands, key=g)
    return best, g(best)


def _numeric_minimum(char: PuiseuxChar, lam: Fraction) -> float:
    lam_f = float(lam)
    a = char.a
    b = None if char.is_smooth else char.b

    def h(t: float) -> float:
        rho = math.exp(t)
        v = rho if b is None else min(a * rho, b)
        A = 1 + rho - lam_f * v
        return A * A / rho if A > 0 else math.inf

    grid = [-30.0 + 0.1 * k for k in range(601)]
    vals = [h(t) for t in grid]
    i = min(range(len(grid)), key=vals.__getitem__)
    i = min(max(i, 1), len(grid) - 2)
    res = minimize_scalar(h, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", tol=1e-12)
    return float(res.fun)


def minimize_nvol(
    char: PuiseuxChar, lam: Scalar, numeric_guard: bool = True
) -> tuple[tuple[int, int], Fraction]:
    """Minimize the normalized volume over monomial valuations ``v_(mu, nu)``.

    Returns the primitive integer minimizing ray and the exact minimum.  The
    exact piecewise computation is cross-checked by a golden-section scan
    over ``log(nu/mu)``.
    """
    lam = Fraction(lam)
    _check_range(char, lam)
    rho, value = _exact_minimum(char, lam)
    if numeric_guard:
        approx = _numeric_minimum(char, lam)
        if abs(approx - float(value)) > 1e-9:
            raise CrossCheckFailed(
                f"numeric minimum {approx!r} disagrees with exact {value} for {char}, lambda={lam}"
            )
    return primitive_integer_vector((Fraction(1), rho)), value
