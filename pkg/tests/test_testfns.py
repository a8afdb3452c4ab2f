"""
Tests for type-1 and type-2 test functions and the enumeration of H(eta).
"""

import pytest
from fractions import Fraction as F


class TestTypeOne:
    """Ramps on an F1 block."""

    def test_interval_profile(self):
        from src.algebra import interval_algebra
        from src.spectrum import Interior, Theta, validate_profile
        from src.testfns import eig_at, make_type1
        P = interval_algebra()
        h = make_type1(P, 4, 0, [0], [2])

        assert eig_at(P, h, Theta(0)).values == (1,)
        assert eig_at(P, h, Theta(1)).values == (0,)
        assert eig_at(P, h, Interior(0, F(1, 8))).values == (F(1, 2),)
        assert eig_at(P, h, Interior(0, F(1, 2))).values == (0,)
        assert validate_profile(P, h.to_profile(P)).ok

    def test_dimension_drop_ranks(self):
        """alpha row (1, 1) gives one left ramp branch; beta row (2, 0) gives two right ramps."""
        from src.algebra import dimension_drop_example
        from src.spectrum import Interior, validate_profile
        from src.testfns import eig_at, make_type1
        P = dimension_drop_example()
        h = make_type1(P, 4, 0, [0], [2])

        assert eig_at(P, h, Interior(0, 0)).values == (0, 1)
        assert eig_at(P, h, Interior(0, 1)).values == (1, 1)
        assert eig_at(P, h, Interior(0, F(3, 8))).values == (F(1, 2), F(1, 2))
        assert validate_profile(P, h.to_profile(P)).ok

    @pytest.mark.parametrize("a,b,m", [(1, 2, 4), (-1, 2, 4), (0, 5, 4), (3, 5, 4)])
    def test_constraints(self, a, b, m):
        from src.algebra import interval_algebra
        from src.errors import ConstraintError
        from src.testfns import make_type1
        with pytest.raises(ConstraintError):
            make_type1(interval_algebra(), m, 0, [a], [b])

    def test_block_out_of_range(self):
        from src.algebra import interval_algebra
        from src.errors import ConstraintError
        from src.testfns import make_type1
        with pytest.raises(ConstraintError):
            make_type1(interval_algebra(), 4, 2, [0], [2])


class TestTypeTwo:
    """Tents around a grid set on an F2 block."""

    def test_tent_values(self):
        from src.algebra import interval_algebra
        from src.spectrum import Interior, Theta
        from src.testfns import eig_at, make_type2
        P = interval_algebra()
        h = make_type2(P, 4, 0, [(F(1, 2), F(1, 2))])

        assert eig_at(P, h, Interior(0, F(1, 2))).values == (1,)
        assert eig_at(P, h, Interior(0, F(3, 8))).values == (F(1, 2),)
        assert eig_at(P, h, Interior(0, F(1, 8))).values == (0,)
        assert eig_at(P, h, Theta(0)).values == (0,)

    def test_interval_set(self):
        from src.algebra import interval_algebra
        from src.spectrum import PLMap
        from src.testfns import make_type2
        h = make_type2(interval_algebra(), 4, 0, [(F(1, 4), F(1, 2))])
        assert h.tent() == PLMap([(0, 0), (F(1, 4), 1), (F(1, 2), 1), (F(3, 4), 0), (1, 0)])

    @pytest.mark.parametrize("X", [[], [(F(1, 3), F(1, 3))], [(0, F(1, 4))], [(F(1, 2), 1)]])
    def test_constraints(self, X):
        from src.algebra import interval_algebra
        from src.errors import ConstraintError
        from src.testfns import make_type2
        with pytest.raises(ConstraintError):
            make_type2(interval_algebra(), 4, 0, X)

    def test_small_grid_rejected(self):
        from src.algebra import interval_algebra
        from src.errors import ConstraintError
        from src.testfns import make_type2
        with pytest.raises(ConstraintError):
            make_type2(interval_algebra(), 1, 0, [(F(1, 2), F(1, 2))])

    def test_key_and_dict(self):
        from src.algebra import interval_algebra
        from src.testfns import make_type2
        h = make_type2(interval_algebra(), 4, 0, [(F(1, 2), F(3, 4))])
        assert h.key() == "type2(i=0,X={[1/2,3/4]},m=4)"
        assert h.to_dict()['X'] == [{'lo': F(1, 2), 'hi': F(3, 4)}]


class TestLifts:
    def test_lift_counts(self):
        from src.algebra import dimension_drop_example
        from src.testfns import kappa, lift_to_Htilde, make_type1, make_type2
        P = dimension_drop_example()
        h2 = make_type2(P, 4, 0, [(F(1, 2), F(1, 2))])
        h1 = make_type1(P, 4, 1, [0], [2])

        lifts = lift_to_Htilde(P, h2)
        assert len(lifts) == 4
        assert {h.lift for h in lifts} == {(0, 0), (0, 1), (1, 0), (1, 1)}
        assert all(kappa(h) == h2 for h in lifts)
        assert len(lift_to_Htilde(P, h1)) == 1

    def test_tagged_has_no_eigenvalues(self):
        from src.algebra import dimension_drop_example
        from src.errors import TaggedInputError
        from src.spectrum import Theta
        from src.testfns import eig_at, lift_to_Htilde, make_type2
        P = dimension_drop_example()
        tagged = lift_to_Htilde(P, make_type2(P, 4, 0, [(F(1, 2), F(1, 2))]))[1]
        with pytest.raises(TaggedInputError):
            eig_at(P, tagged, Theta(0))
        with pytest.raises(TaggedInputError):
            tagged.to_profile(P)
        with pytest.raises(TaggedInputError):
            lift_to_Htilde(P, tagged)
        assert tagged.key().endswith("@(0, 1)")


class TestEnumeration:
    """Deterministic, budgeted enumeration of H(1/m)."""

    def test_type1_pairs(self):
        from src.testfns import type1_pairs
        assert type1_pairs(4) == [(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4)]
        assert type1_pairs(1) == []

    def test_grid_sets(self):
        from src.testfns import grid_sets
        assert len(list(grid_sets(3))) == 4
        sets = list(grid_sets(4))
        assert len(sets) == 12
        assert len(set(sets)) == 12
        assert len(list(grid_sets(4, max_components=1))) == 6

    def test_full_enumeration(self):
        from src.algebra import interval_algebra
        from src.testfns import TYPE1, TYPE2, enumerate_H
        family = enumerate_H(interval_algebra(), 4, budget=100)
        items = list(family)
        assert len(items) == 24
        assert [h.kind for h in items[:12]] == [TYPE1] * 12
        assert [h.kind for h in items[12:]] == [TYPE2] * 12
        assert not family.truncated

    def test_budget_truncates(self):
        from src.algebra import interval_algebra
        from src.testfns import enumerate_H
        family = enumerate_H(interval_algebra(), 4, budget=5)
        assert len(list(family)) == 5
        assert family.truncated
        assert family.yielded == 5

    def test_enumeration_is_deterministic(self):
        from src.algebra import dimension_drop_example
        from src.testfns import enumerate_H
        P = dimension_drop_example()
        first = [h.key() for h in enumerate_H(P, 5, budget=50)]
        second = [h.key() for h in enumerate_H(P, 5, budget=50)]
        assert first == second

    def test_every_member_is_valid(self):
        from src.algebra import dimension_drop_example
        from src.spectrum import validate_profile
        from src.testfns import enumerate_H
        P = dimension_drop_example()
        for h in enumerate_H(P, 4, budget=200):
            assert validate_profile(P, h.to_profile(P)).ok, h.key()

    def test_profile_samples(self):
        from src.algebra import interval_algebra
        from src.testfns import make_type2, profile_samples
        P = interval_algebra()
        samples = profile_samples(P, make_type2(P, 4, 0, [(F(1, 2), F(1, 2))]), 0)
        assert samples == [(0, (0,)), (F(1, 4), (0,)), (F(1, 2), (1,)), (F(3, 4), (0,)), (1, (0,))]
