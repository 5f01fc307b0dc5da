"""Exact valuative invariants of unibranch plane curve singularities."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import Poly, format_rational, parse_rational, poly_parse, resultant_in
from .branch import (
    BranchParam,
    PuiseuxChar,
    equisingular,
    implicitize,
    newton_puiseux,
    normalize_branch,
    puiseux_characteristic,
)
from .degeneration import (
    DegenerationResult,
    P1ConePair,
    initial_form,
    kss_degeneration,
    kss_test,
    rees_family,
    toric_kss_check,
)
from .errors import ValvolError
from .families import FamilySpec, family_report, flat_ideal_family_check, load_family
from .ideals import (
    MonomialIdeal,
    ReesFamilyTrunc,
    colength,
    flat_rees_check,
    graded_dims,
    volume,
    volume_estimate,
)
from .invariants import (
    PairA2,
    lct_newton_bound,
    lct_unibranch,
    local_volume_closed,
    log_discrepancy,
    minimize_nvol,
    nvol_at,
)
from .valuation import MonomialValuation, Weight, degeneration_chain, eval_valuation

__all__ = [name for name in dir() if not name.startswith("_")]
