from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import lattice_colength, lattice_graded
from valvol.errors import BoxTooSmall, ValvolError
from valvol.ideals import (
    MonomialIdeal,
    ReesFamilyTrunc,
    colength,
    flat_rees_check,
    graded_dims,
    ideal_value,
    required_box,
    volume,
    volume_error_bound,
    volume_estimate,
)
from valvol.valuation import MonomialValuation, Weight

V = MonomialValuation.on_plane


class TestColength:
    def test_examples(self):
        assert colength(V(1, 1), 2) == 3
        assert colength(V(1, 1), 1) == 1
        assert colength(V(2, 3), 6) == 5
        assert colength(V(2, 3), 0) == 0

    def test_negative(self):
        with pytest.raises(ValvolError):
            colength(V(1, 1), -1)

    @given(
        st.fractions(Fraction(1, 4), 6, max_denominator=5),
        st.fractions(Fraction(1, 4), 6, max_denominator=5),
        st.fractions(0, 30, max_denominator=7),
    )
    def test_matches_lattice_count(self, mu, nu, lam):
        assert colength(V(mu, nu), lam) == lattice_colength(mu, nu, lam)

    def test_monotone(self):
        v = V(Fraction(3, 2), 2)
        values = [colength(v, Fraction(k, 3)) for k in range(60)]
        assert values == sorted(values)
        assert values[-1] > values[10]


class TestVolume:
    @pytest.mark.parametrize("w, expected", [((1, 1), 1), ((2, 3), Fraction(1, 6)), ((1, 2), Fraction(1, 2))])
    def test_closed_form(self, w, expected):
        assert volume(V(*w)) == expected
        assert abs(volume_estimate(V(*w), 1000) - expected) <= Fraction(1, 100) * expected

    @pytest.mark.parametrize("w", [(1, 1), (2, 3), (3, 7), (5, 2)])
    @pytest.mark.parametrize("lam", [100, 1000, 10000])
    def test_perimeter_bound(self, w, lam):
        v = V(*w)
        assert abs(volume_estimate(v, lam) - volume(v)) <= volume_error_bound(v, lam)


class TestGraded:
    def test_examples(self):
        assert dict(graded_dims(V(1, 1), 2).dims) == {0: 1, 1: 2, 2: 3}
        assert dict(graded_dims(V(2, 3), 6).dims) == {0: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 2}
        assert dict(graded_dims(V(1, 1), 0).dims) == {0: 1}

    def test_consistency_with_colength(self):
        rng = random.Random(53)
        for _ in range(20):
            mu, nu = Fraction(rng.randint(1, 7), rng.randint(1, 3)), Fraction(rng.randint(1, 7), rng.randint(1, 3))
            cutoff = Fraction(rng.randint(5, 40), rng.randint(1, 2))
            view = graded_dims(V(mu, nu), cutoff)
            assert view.jumps[0] == 0 and view.dim(0) == 1
            assert list(view.jumps) == sorted(set(view.jumps))
            assert dict(view.dims) == lattice_graded(mu, nu, cutoff)
            for _ in range(5):
                lam = Fraction(rng.randint(0, int(cutoff * 4)), 4)
                assert view.colength(lam) == colength(V(mu, nu), lam)

    def test_saturation_value_one(self):
        # v(a_lam(v)) >= lam with equality at every jump, so inf v(a_lam)/lam = 1
        v = V(2, 3)
        view = graded_dims(v, 30)
        ratios = [ideal_value(v, j) / j for j in view.jumps if j]
        assert min(ratios) == 1
        assert all(ideal_value(v, Fraction(k, 2)) >= Fraction(k, 2) for k in range(1, 60))


class TestMonomialIdeal:
    def test_staircase(self):
        I = MonomialIdeal.of((2, 0), (1, 1), (2, 3))
        assert I.gens == frozenset({(2, 0), (1, 1)})
        assert (3, 5) in I and (0, 4) not in I

    def test_intersection_and_sum(self):
        x, y = MonomialIdeal.of((1, 0)), MonomialIdeal.of((0, 1))
        assert (x & y).gens == frozenset({(1, 1)})
        assert (x + y).gens == frozenset({(1, 0), (0, 1)})
        assert x & y <= x

    def test_valuation_ideal(self):
        I = MonomialIdeal.valuation_ideal(V(2, 3), 6)
        assert I.gens == frozenset({(3, 0), (2, 1), (0, 2)})
        for i in range(8):
            for j in range(8):
                assert ((i, j) in I) == (2 * i + 3 * j >= 6)


class TestFlatRees:
    def test_toric_family(self):
        fam = ReesFamilyTrunc.toric((8, 8))
        assert flat_rees_check(fam, Weight.of(2, 3), 10)

    def test_rank_one_chain(self):
        fam = ReesFamilyTrunc.valuation_chain(V(2, 3), 1, 12)
        assert flat_rees_check(fam, Weight.of(1), 10)

    def test_intersection_violation(self):
        unit = MonomialIdeal.unit()
        ideals = {
            (0, 0): unit,
            (1, 0): MonomialIdeal.of((1, 0)),
            (0, 1): MonomialIdeal.of((0, 1)),
            (1, 1): MonomialIdeal.of((2, 1), (1, 2)),
        }
        fam = ReesFamilyTrunc((1, 1), ideals)
        res = flat_rees_check(fam, Weight.of(1, 1), 1)
        assert not res
        assert res.kind == "intersection"
        assert res.witness == ((1, 0), (0, 1))

    def test_valuation_levels_fail_intersection(self):
        fam = ReesFamilyTrunc.valuation_levels(V(2, 3), (2, 3), (3, 3))
        res = flat_rees_check(fam, Weight.of(1, 1), 4)
        assert not res and res.kind == "intersection"

    def test_non_antitone_rejected(self):
        ideals = {
            (0, 0): MonomialIdeal.unit(),
            (1, 0): MonomialIdeal.of((1, 0)),
            (0, 1): MonomialIdeal.of((0, 1)),
            (1, 1): MonomialIdeal.of((2, 0), (0, 2)),
        }
        with pytest.raises(ValvolError):
            ReesFamilyTrunc((1, 1), ideals)

    def test_box_too_small(self):
        fam = ReesFamilyTrunc.toric((2, 2))
        with pytest.raises(BoxTooSmall) as info:
            flat_rees_check(fam, Weight.of(1, 1), 10)
        assert info.value.required == required_box(Weight.of(1, 1), 10)
