"""Seeded random generators for branches, polynomials and families."""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction

from .algebra import Poly
from .branch import BranchParam, normalize_branch
from .families import FamilySpec


def seed_from_env(default: int = 0) -> int:
    raw = os.environ.get("VALVOL_SEED", "")
    try:
        return int(raw) if raw.strip() else default
    except ValueError:
        return default


def random_rational(rng: random.Random, num: int = 5, den: int = 4, nonzero: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if q or not nonzero:
            return q


def random_branch(
    rng: random.Random,
    a: int | None = None,
    b: int | None = None,
    max_a: int = 5,
    max_b: int = 15,
    extra: int = 4,
    max_exp: int = 15,
) -> BranchParam:
    """A primitive singular branch in normal form with prescribed or random ``(a, b)``."""
    while True:
        aa = a if a is not None else rng.randint(2, max_a)
        if b is not None:
            bb = b
        else:
            choices = [e for e in range(aa + 1, max_b + 1) if e % aa]
            if not choices:
                continue
            bb = rng.choice(choices)
        top = max(max_exp, bb + 1)
        pool = list(range(bb + 1, top + 1))
        exps = rng.sample(pool, min(len(pool), rng.randint(0, extra)))
        if math.gcd(aa, bb, *exps) != 1:
            # close the gcd chain with one extra exponent
            d = math.gcd(aa, bb, *exps)
            exps.append(next(e for e in range(bb + 1, bb + 1 + aa * bb) if math.gcd(d, e) == 1))
        terms = [(bb, Fraction(1))] + [(e, random_rational(rng)) for e in exps]
        return normalize_branch(aa, terms)


def random_smooth_branch(rng: random.Random, extra: int = 3, max_exp: int = 8) -> BranchParam:
    exps = rng.sample(range(1, max_exp + 1), rng.randint(0, extra))
    return normalize_branch(1, [(e, random_rational(rng)) for e in exps])


def random_poly(
    rng: random.Random, vars: tuple[str, ...], terms: int = 5, max_deg: int = 4, constant: bool = True
) -> Poly:
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, max_deg) for _ in vars)
        if not constant and not any(m):
            continue
        out[m] = random_rational(rng)
    return Poly(vars, out)


def random_weight(rng: random.Random, n: int, top: int = 6, integral: bool = True) -> tuple[Fraction, ...]:
    if integral:
        return tuple(Fraction(rng.randint(1, top)) for _ in range(n))
    return tuple(Fraction(rng.randint(1, top), rng.randint(1, 3)) for _ in range(n))


def equisingular_family(
    rng: random.Random, br: BranchParam, lam: Fraction = Fraction(0), samples: int = 4, param: str = "s"
) -> FamilySpec:
    """Perturb ``br`` by ``s * t^e`` terms whose exponents do not lower the characteristic.

    The added exponents exceed the last characteristic exponent, so every
    sample has the characteristic of ``br``.
    """
    p = Poly.var((param,), param)
    last = max(e for e, _ in br.phi) if br.phi else 1
    phi = {e: Poly.const((param,), c) for e, c in br.phi}
    for e in rng.sample(range(last + 1, last + 6), 2):
        phi[e] = p * random_rational(rng)
    pts: set[Fraction] = set()
    while len(pts) < samples:
        pts.add(random_rational(rng, nonzero=False))
    return FamilySpec(param, tuple(sorted(pts)), br.a, tuple(sorted(phi.items())), lam)
