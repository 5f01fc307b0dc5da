"""One-parameter families of branches sampled at rational points, and the
constancy of their singularity invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .algebra import Poly, Scalar, parse_rational
from .branch import BranchParam, PuiseuxChar, normalize_branch, puiseux_characteristic
from .degeneration import kss_degeneration
from .errors import FamilyError, KltRangeError, ParseError, ValvolError
from .ideals import graded_dims
from .invariants import lct_unibranch
from .valuation import MonomialValuation

INVARIANTS = ("char", "lct", "nvol", "ray", "case", "kss", "graded_dims")


@dataclass(frozen=True)
class FamilySpec:
    """Branch template ``x = t^a, y = sum c_i(s) t^i`` sampled at finitely many ``s``."""

    param: str
    samples: tuple[Fraction, ...]
    a: int
    phi: tuple[tuple[int, Poly], ...]
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(Fraction(s) for s in self.samples))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if not self.samples:
            raise FamilyError("a family needs at least one sample")
        if len(set(self.samples)) != len(self.samples):
            raise FamilyError("duplicate sample values")
        if self.a < 1:
            raise FamilyError(f"a must be positive, got {self.a}")
        for e, c in self.phi:
            if c.vars != (self.param,):
                raise FamilyError(f"coefficient of t^{e} is not a polynomial in {self.param}")

    def instantiate(self, s: Scalar) -> BranchParam:
        s = Fraction(s)
        return normalize_branch(self.a, [(e, c.evaluate({self.param: s})) for e, c in self.phi])

    def fibers(self) -> tuple[list[tuple[Fraction, BranchParam]], list[tuple[Fraction, str]]]:
        """Valid fibers, and flagged samples with the reason they fail."""
        good, flagged = [], []
        for s in self.samples:
            try:
                good.append((s, self.instantiate(s)))
            except ValvolError as exc:
                flagged.append((s, f"{exc.code}: {exc}"))
        return good, flagged


def family_from_dict(obj: Mapping) -> FamilySpec:
    try:
        param = str(obj["param"])
        samples = [parse_rational(str(s)) for s in obj["samples"]]
        a = int(obj["a"])
        phi = [(int(e), Poly.parse(str(c), (param,))) for e, c in obj["phi"]]
        lam = parse_rational(str(obj["lambda"]))
    except KeyError as exc:
        raise FamilyError(f"family description lacks field {exc.args[0]!r}") from exc
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise FamilyError(f"malformed family description: {exc}") from exc
    return FamilySpec(param, tuple(samples), a, tuple(phi), lam)


def load_family(path: str | Path) -> FamilySpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FamilyError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    return family_from_dict(obj)


@dataclass(frozen=True)
class FiberRecord:
    sample: Fraction
    branch: BranchParam
    char: PuiseuxChar
    lct: Fraction
    nvol: Fraction
    ray: tuple[int, int]
    case: str
    kss: bool
    descriptor: tuple
    dims: Mapping[Fraction, int] = field(compare=False)

    def column(self, name: str):
        return self.dims if name == "graded_dims" else getattr(self, name)


def fiber_record(s: Fraction, br: BranchParam, lam: Fraction, cutoff: Fraction) -> FiberRecord:
    char = puiseux_characteristic(br)
    try:
        deg = kss_degeneration(br, lam)
    except KltRangeError as exc:
        raise KltRangeError(f"fiber s = {s}: {exc}") from exc
    view = graded_dims(MonomialValuation.on_plane(*deg.xi), cutoff)
    return FiberRecord(
        sample=s,
        branch=br,
        char=char,
        lct=lct_unibranch(char),
        nvol=deg.nvol,
        ray=deg.xi,
        case=deg.case,
        kss=deg.kss,
        descriptor=deg.descriptor(),
        dims=dict(view.dims),
    )


@dataclass(frozen=True)
class FlatFamilyResult:
    ok: bool
    witness: tuple[Fraction, tuple[Fraction, Fraction]] | None = None
    dims: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _first_dim_mismatch(records: Sequence[FiberRecord]) -> FlatFamilyResult:
    jumps = sorted({j for r in records for j in r.dims})
    for lam in jumps:
        ref = records[0]
        for other in records[1:]:
            d0, d1 = ref.dims.get(lam, 0), other.dims.get(lam, 0)
            if d0 != d1:
                return FlatFamilyResult(False, (lam, (ref.sample, other.sample)), (d0, d1))
    return FlatFamilyResult(True)


@dataclass(frozen=True)
class FamilyReport:
    spec: FamilySpec
    cutoff: Fraction
    records: tuple[FiberRecord, ...]
    flagged: tuple[tuple[Fraction, str], ...]
    constant: Mapping[str, bool]
    jumps: tuple[Fraction, ...]
    flatness: FlatFamilyResult
    common_degeneration: tuple | None

    @property
    def equisingular(self) -> bool:
        return self.constant["char"]

    def table(self) -> list[tuple[Fraction, tuple[int, ...]]]:
        """Rows ``(jump, dims per valid sample)``."""
        return [(j, tuple(r.dims.get(j, 0) for r in self.records)) for j in self.jumps]


def family_report(spec: FamilySpec, cutoff: Scalar) -> FamilyReport:
    """Per-fiber invariants, constancy verdicts and the shared central fibre.

    Flagged samples (where the template leaves normal form) are listed but do
    not take part in any verdict.
    """
    cutoff = Fraction(cutoff)
    if cutoff < 0:
        raise ValvolError("cutoff must be nonnegative")
    good, flagged = spec.fibers()
    if not good:
        raise FamilyError("every sample is flagged; nothing to compare")
    records = tuple(fiber_record(s, br, spec.lam, cutoff) for s, br in good)
    constant = {
        name: all(r.column(name) == records[0].column(name) for r in records) for name in INVARIANTS
    }
    flat = _first_dim_mismatch(records)
    common = None
    if all(constant.values()) and len({r.descriptor for r in records}) == 1:
        common = records[0].descriptor
    jumps = tuple(sorted({j for r in records for j in r.dims}))
    return FamilyReport(spec, cutoff, records, tuple(flagged), constant, jumps, flat, common)


def flat_ideal_family_check(spec: FamilySpec, cutoff: Scalar) -> FlatFamilyResult:
    """Fiberwise graded dimensions of the minimizer's ideal sequence agree up to
    ``cutoff``; otherwise the first jump and sample pair where they differ."""
    return family_report(spec, cutoff).flatness
