"""
Tests for spectrum points, PL maps, closed subsets, index sets and profiles.
"""

import pytest
from fractions import Fraction as F
from hypothesis import given, settings, strategies as st


thirds = st.integers(0, 12).map(lambda n: F(n, 12))


class TestPLMap:
    """Exact piecewise-linear maps."""

    def test_collinear_points_dropped(self):
        from src.spectrum import PLMap
        g = PLMap([(0, 0), (F(1, 2), F(1, 2)), (1, 1)])
        assert g == PLMap.identity()
        assert g.breakpoints == (0, 1)

    def test_evaluation(self):
        from src.spectrum import PLMap
        g = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
        assert g(F(1, 4)) == F(1, 2)
        assert g(F(3, 4)) == F(1, 2)
        assert g.max_abs_slope() == 2
        assert not g.is_nondecreasing()
        with pytest.raises(ValueError):
            g(F(3, 2))

    def test_floats_rejected(self):
        from src.spectrum import PLMap
        with pytest.raises(TypeError):
            PLMap([(0, 0.5), (1, 1)])

    def test_inconsistent_definition(self):
        from src.spectrum import PLMap
        with pytest.raises(ValueError):
            PLMap([(0, 0), (0, 1)])

    def test_preimages(self):
        from src.spectrum import PLMap
        g = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
        assert g.preimages(F(1, 2)) == [F(1, 4), F(3, 4)]
        assert g.first_preimage(2) is None
        flat = PLMap([(0, 0), (F(1, 3), 1), (F(2, 3), 1), (1, 0)])
        assert flat.preimages(1) == [F(1, 3), F(2, 3)]

    def test_compose(self):
        from src.spectrum import PLMap
        half = PLMap([(0, 0), (1, F(1, 2))])
        tent = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
        assert tent.compose(half) == PLMap([(0, 0), (1, 1)])
        with pytest.raises(ValueError):
            half.compose(PLMap([(0, 0), (1, 2)]))

    def test_restrict_and_reparametrize(self):
        from src.spectrum import PLMap
        tent = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
        left = tent.restrict(0, F(1, 2))
        assert left == PLMap([(0, 0), (F(1, 2), 1)])
        assert left.reparametrize(0, 1) == PLMap.identity()
        assert tent.restrict(F(1, 4), F(1, 4)).is_degenerate

    def test_crossing_points(self):
        from src.spectrum.piecewise import PLMap, crossing_points
        up, down = PLMap.identity(), PLMap([(0, 1), (1, 0)])
        assert crossing_points([up, down], F(0), F(1)) == [0, F(1, 2), 1]

    @given(st.lists(st.tuples(thirds, thirds), min_size=1, max_size=5, unique_by=lambda p: p[0]),
           thirds)
    @settings(max_examples=100, deadline=None)
    def test_equality_is_functional(self, points, x):
        """Removing collinear points never changes values."""
        from src.spectrum import PLMap
        g = PLMap(points)
        if g.lo <= x <= g.hi:
            exact = PLMap([(p, g(p)) for p in sorted({g.lo, x, g.hi})] + list(g.points))
            assert exact == g


class TestPoints:
    def test_dist(self):
        import math
        from src.spectrum import Interior, Theta, dist
        assert dist(Interior(0, F(1, 3)), Interior(0, F(1, 2))) == F(1, 6)
        assert dist(Interior(0, F(1, 3)), Interior(1, F(1, 3))) == math.inf
        assert dist(Theta(1), Theta(1)) == 0
        assert dist(Theta(0), Interior(0, 0)) == math.inf

    def test_interior_range(self):
        from src.spectrum import Interior
        with pytest.raises(ValueError):
            Interior(0, F(3, 2))
        assert Interior(0, 1).is_endpoint

    def test_as_fraction(self):
        from src.spectrum import as_fraction
        assert as_fraction(" 3/4 ") == F(3, 4)
        with pytest.raises(TypeError):
            as_fraction(True)
        with pytest.raises(TypeError):
            as_fraction(0.25)


class TestClosedSets:
    """Closure in the glued topology and the set operations."""

    def test_closure_pulls_in_supports(self):
        from src.algebra import dimension_drop_example
        from src.spectrum import ClosedSubset, closure, is_closed
        P = dimension_drop_example()
        raw = ClosedSubset.build([], [[(F(1, 3), 1)]])
        closed = closure(P, raw)
        assert closed.thetas == frozenset({0})
        assert not is_closed(P, raw)
        assert is_closed(P, closed)

    def test_glued_endpoint_points_become_thetas(self):
        from src.algebra import interval_algebra
        from src.spectrum import ClosedSubset, closure
        P = interval_algebra()
        closed = closure(P, ClosedSubset.build([], [[(0, 0), (1, 1), (F(1, 2), F(1, 2))]]))
        assert closed.thetas == frozenset({0, 1})
        assert [(p.lo, p.hi) for p in closed.block(0)] == [(F(1, 2), F(1, 2))]

    def test_pieces_merge(self):
        from src.spectrum import ClosedSubset
        S = ClosedSubset.build([], [[(0, F(1, 3)), (F(1, 3), F(1, 2)), {'lo': F(3, 4), 'hi': 1}]])
        assert [(p.lo, p.hi) for p in S.block(0)] == [(0, F(1, 2)), (F(3, 4), 1)]
        assert S.block_length(0) == F(3, 4)

    def test_full_and_empty(self):
        from src.algebra import dimension_drop_example
        from src.spectrum import empty_set, full_spectrum, is_closed
        P = dimension_drop_example()
        assert is_closed(P, full_spectrum(P))
        assert empty_set(P).is_empty()
        assert str(empty_set(P)) == "{}"
        assert str(full_spectrum(P)) == "theta0 u theta1 u [0,1]_0"

    def test_contains(self):
        from src.algebra import interval_algebra
        from src.spectrum import ClosedSubset, Interior, Theta, closure, contains
        P = interval_algebra()
        S = closure(P, ClosedSubset.build([], [[(0, F(1, 4))]]))
        assert contains(P, S, Theta(0))
        assert not contains(P, S, Theta(1))
        assert contains(P, S, Interior(0, F(1, 5)))
        assert not contains(P, S, Interior(0, F(1, 2)))

    def test_union_intersection_subset(self):
        from src.algebra import interval_algebra
        from src.spectrum import ClosedSubset, closure, intersection, is_subset, union
        P = interval_algebra()
        A = closure(P, ClosedSubset.build([], [[(0, F(1, 2))]]))
        B = closure(P, ClosedSubset.build([], [[(F(1, 4), 1)]]))
        U = union(P, A, B)
        I = intersection(P, A, B)
        assert [(p.lo, p.hi) for p in U.block(0)] == [(0, 1)]
        assert U.thetas == frozenset({0, 1})
        assert [(p.lo, p.hi) for p in I.block(0)] == [(F(1, 4), F(1, 2))]
        assert I.thetas == frozenset()
        assert is_subset(I, A) and is_subset(I, B)
        assert is_subset(A, U)
        assert not is_subset(A, B)

    def test_complement_gaps(self):
        from src.spectrum import ClosedSubset, complement_gaps
        S = ClosedSubset.build([], [[(0, F(1, 4)), (F(1, 2), F(1, 2))]])
        assert complement_gaps(S, 0) == [
            (F(1, 4), F(1, 2), False, False),
            (F(1, 2), 1, False, True),
        ]
        assert complement_gaps(ClosedSubset.build([], [[]]), 0) == [(0, 1, True, True)]

    def test_piece_validation(self):
        from src.spectrum import Piece
        with pytest.raises(ValueError):
            Piece(F(1, 2), F(1, 4))
        with pytest.raises(ValueError):
            Piece(0, 2)

    @given(st.lists(st.tuples(thirds, thirds).map(sorted), max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_closure_is_idempotent(self, raw):
        from src.algebra import dimension_drop_example
        from src.spectrum import ClosedSubset, closure, is_closed
        P = dimension_drop_example()
        S = ClosedSubset.build([], [raw])
        closed = closure(P, S)
        assert closure(P, closed) == closed
        assert is_closed(P, closed)
        # glued endpoint points leave the block and survive as thetas
        for p in S.block(0):
            kept = any(q.lo <= p.lo and p.hi <= q.hi for q in closed.block(0))
            assert kept or (p.is_point and p.lo in (0, 1))


class TestIndexSets:
    def test_classification(self):
        from src.algebra import Presentation
        from src.spectrum import ClosedSubset, closure, index_sets
        P = Presentation(k=(1, 1), dims=(1, 1, 1), alpha=((1, 0),) * 3, beta=((0, 1),) * 3)
        Y = closure(P, ClosedSubset.build([], [[], [(0, 1)], [(0, F(1, 4)), (F(3, 4), 1)]]))
        sets = index_sets(P, Y)
        assert sets.L0 == {0}
        assert sets.L1 == {1}
        assert sets.La == {2}
        assert sets.Ll == {2} and sets.Lr == {2}
        assert sets.s == {2: F(1, 4)}
        assert sets.t == {2: F(3, 4)}
        assert sets.to_dict()['J'] == [0, 1]

    def test_not_closed(self):
        from src.algebra import interval_algebra
        from src.errors import NotClosedError
        from src.spectrum import ClosedSubset, index_sets, normalized_index_sets
        P = interval_algebra()
        raw = ClosedSubset.build([], [[(0, F(1, 2))]])
        with pytest.raises(NotClosedError):
            index_sets(P, raw)
        sets, changed = normalized_index_sets(P, raw)
        assert changed
        assert sets.J == {0}


class TestProfiles:
    """Eigenvalue lists and profile elements."""

    def test_eiglist_distance(self):
        from src.spectrum import EigList
        a = EigList.of([F(1, 2), 0])
        b = EigList.from_multiplicities([(F(1, 4), 2)])
        assert a.values == (0, F(1, 2))
        assert a.distance(b) == F(1, 4)
        assert (a + b).total == 4
        assert b.multiplicities() == [(F(1, 4), 2)]

    def test_eiglist_size_mismatch(self):
        from src.errors import SizeMismatchError
        from src.spectrum import EigList
        with pytest.raises(SizeMismatchError):
            EigList.of([0]).distance(EigList.of([0, 1]))

    def test_dimension_drop_profile(self):
        """f(0) = diag(a, b), f(1) = diag(a, a) with a = 1, b = 0."""
        from src.algebra import dimension_drop_example
        from src.spectrum import Interior, PLMap, ProfileElement, Theta, validate_profile
        P = dimension_drop_example()
        f = ProfileElement(
            theta_eigs=((1,), (0,)),
            branches=((PLMap.constant(0, 1, 1), PLMap.identity()),),
        )
        assert validate_profile(P, f).ok
        assert f.eig_at(Theta(1)).values == (0,)
        assert f.eig_at(Interior(0, F(1, 2))).values == (F(1, 2), 1)
        assert f.max_slope() == 1

    def test_endpoint_mismatch(self):
        from src.algebra import dimension_drop_example
        from src.spectrum import PLMap, ProfileElement, validate_profile
        P = dimension_drop_example()
        f = ProfileElement(theta_eigs=((1,), (0,)), branches=((PLMap.constant(0, 1, 0),) * 2,))
        invariants = {v.invariant for v in validate_profile(P, f).violations}
        assert invariants == {'endpoint_alpha', 'endpoint_beta'}

    def test_non_unital_rows_pad_with_zero(self):
        from src.algebra import Presentation
        from src.spectrum import alpha_expansion
        P = Presentation(k=(1,), dims=(3,), alpha=((2,),), beta=((1,),), unital=False)
        assert alpha_expansion(P, 0, [(F(1, 2),)]) == [0, F(1, 2), F(1, 2)]

    def test_scalar_and_zero(self):
        from src.algebra import interval_algebra
        from src.spectrum import PLMap, ProfileElement, validate_profile
        P = interval_algebra()
        assert validate_profile(P, ProfileElement.zero(P)).ok
        f = ProfileElement.scalar(P, [0, 1], [PLMap.identity()])
        assert validate_profile(P, f).ok
        assert f.block_breakpoints(0) == [0, 1]
