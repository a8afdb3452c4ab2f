"""
Tests for presentations, minimal decomposition and K-theory.
"""

import pytest
from hypothesis import given, settings, strategies as st


@st.composite
def presentations(draw, max_p=4, max_l=4):
    """Valid non-unital presentations with small entries."""
    from src.algebra.presentation import Presentation

    p = draw(st.integers(1, max_p))
    l = draw(st.integers(0, max_l))
    k = tuple(draw(st.integers(1, 3)) for _ in range(p))
    alpha = [[draw(st.integers(0, 3)) for _ in range(p)] for _ in range(l)]
    beta = [[draw(st.integers(0, 3)) for _ in range(p)] for _ in range(l)]
    dims = []
    for i in range(l):
        weight = max(sum(a * kj for a, kj in zip(alpha[i], k)), sum(b * kj for b, kj in zip(beta[i], k)))
        dims.append(max(weight, 1))
    return Presentation(k, tuple(dims), alpha, beta, unital=False)


class TestValidation:
    """Structural invariants of presentations."""

    def test_catalog_entries_are_valid(self):
        from src.algebra import CATALOG, validate_presentation, matrix_algebra
        for factory in CATALOG.values():
            assert validate_presentation(factory()).ok
        assert validate_presentation(matrix_algebra(3)).ok

    def test_unital_row_sum(self):
        from src.algebra import Presentation, validate_presentation
        P = Presentation(k=(1, 1), dims=(3,), alpha=((1, 1),), beta=((2, 0),))
        report = validate_presentation(P)
        assert not report.ok
        assert {v.invariant for v in report.violations} == {'unital_row'}
        assert report.violations[0].index == (0,)

    def test_non_unital_row_bound(self):
        from src.algebra import Presentation, validate_presentation
        ok = Presentation(k=(1, 1), dims=(3,), alpha=((1, 1),), beta=((2, 0),), unital=False)
        too_big = Presentation(k=(2,), dims=(3,), alpha=((2,),), beta=((1,),), unital=False)
        assert validate_presentation(ok).ok
        assert [v.invariant for v in validate_presentation(too_big).violations] == ['row_bound']

    def test_shape_and_sign(self):
        from src.algebra import Presentation, validate_presentation
        P = Presentation(k=(1, 0), dims=(1,), alpha=((1,),), beta=((0, -1),))
        invariants = {v.invariant for v in validate_presentation(P).violations}
        assert 'positive_k' in invariants
        assert 'shape' in invariants
        assert 'nonnegative' in invariants

    def test_require_valid_raises(self):
        from src.algebra import Presentation, require_valid
        from src.errors import InvalidPresentationError
        with pytest.raises(InvalidPresentationError) as exc:
            require_valid(Presentation(k=(1,), dims=(2,), alpha=((1,),), beta=((1,),)))
        assert exc.value.violations
        assert exc.value.exit_code == 1


class TestDecomposition:
    """Minimal summands and direct sums."""

    def test_sum_of_two_is_split_back(self):
        from src.algebra import decompose_minimal, direct_sum, dimension_drop_example, interval_algebra
        P = direct_sum(interval_algebra(), dimension_drop_example())
        parts = decompose_minimal(P)

        assert [part for part, _ in parts] == [interval_algebra(), dimension_drop_example()]
        assert parts[1][1].f1 == (2, 3)
        assert parts[1][1].f2 == (1,)

    def test_indecomposable(self):
        from src.algebra import decompose_minimal, dimension_drop_example
        parts = decompose_minimal(dimension_drop_example())
        assert len(parts) == 1
        assert parts[0][1].to_dict() == {'f1': [0, 1], 'f2': [0]}

    def test_isolated_vertices_are_summands(self):
        from src.algebra import Presentation, decompose_minimal
        P = Presentation(k=(2, 1, 1), dims=(1,), alpha=((0, 1, 0),), beta=((0, 0, 1),))
        parts = decompose_minimal(P)
        assert [m.f1 for _, m in parts] == [(0,), (1, 2)]
        assert parts[0][0].k == (2,)
        assert parts[0][0].l == 0

    def test_unital_mismatch(self):
        from src.algebra import Presentation, direct_sum, interval_algebra
        from src.errors import UnitalMismatchError
        other = Presentation(k=(1,), dims=(), alpha=(), beta=(), unital=False)
        with pytest.raises(UnitalMismatchError):
            direct_sum(interval_algebra(), other)

    @given(presentations(max_p=3, max_l=3), presentations(max_p=3, max_l=3))
    @settings(max_examples=50, deadline=None)
    def test_decomposition_reassembles(self, P, Q):
        """The summands of P + Q add up to P + Q after reordering blocks."""
        from src.algebra import decompose_minimal, direct_sum, direct_sum_all, equivalent_up_to_permutation
        total = direct_sum(P, Q)
        parts = decompose_minimal(total)
        rebuilt = direct_sum_all([part for part, _ in parts], unital=False)
        assert equivalent_up_to_permutation(rebuilt, total) is not None

    def test_permutation_search(self):
        from src.algebra import Presentation, equivalent_up_to_permutation, permute
        P = Presentation(k=(1, 2), dims=(3, 2), alpha=((1, 1), (0, 1)), beta=((3, 0), (2, 0)))
        Q = permute(P, (1, 0), (1, 0))
        orders = equivalent_up_to_permutation(P, Q)
        assert orders is not None
        assert permute(P, *orders) == Q
        assert equivalent_up_to_permutation(P, permute(P, (0, 1), (0,))) is None


class TestKTheory:
    """K0 and K1 from the Smith normal form."""

    def test_dimension_drop_example(self):
        from src.algebra import dimension_drop_example, k_theory
        result = k_theory(dimension_drop_example())
        assert result.k0_rank == 1
        assert result.k0_basis == ((1, 1),)
        assert result.k1_invariant_factors == ()
        assert result.unit_factors == 1
        assert result.to_dict() == {'k0_rank': 1, 'k0_basis': [[1, 1]], 'k1': []}

    def test_interval(self):
        from src.algebra import interval_algebra, k_theory
        result = k_theory(interval_algebra())
        assert result.k0_rank == 1
        assert result.k0_basis == ((1, 1),)
        assert result.k1_invariant_factors == ()

    def test_torsion_and_free_k1(self):
        from src.algebra import Presentation, k_theory
        # alpha - beta = [[2, -2], [0, 0]]: K0 = Z, K1 = Z/2 + Z
        P = Presentation(k=(1, 1), dims=(2, 1), alpha=((2, 0), (1, 0)), beta=((0, 2), (1, 0)), unital=False)
        result = k_theory(P)
        assert result.k0_rank == 1
        assert sorted(result.k1_invariant_factors) == [0, 2]
        assert result.k1_torsion == (2,)
        assert result.k1_free_rank == 1
        assert result.unit_factors == 0

    def test_no_interval_blocks(self):
        from src.algebra import k_theory, matrix_algebra
        result = k_theory(matrix_algebra(2))
        assert result.k0_rank == 1
        assert result.k0_basis == ((1,),)
        assert result.k1_invariant_factors == ()

    @given(presentations())
    @settings(max_examples=100, deadline=None)
    def test_agrees_with_minor_oracle(self, P):
        """Invariant factors match the gcd-of-minors computation; the basis spans the kernel."""
        from src.algebra import k_theory
        from src.selftest.oracles import check_ktheory
        result = k_theory(P)
        assert check_ktheory(P, result, radius=3) == []
        assert len(result.k1_invariant_factors) + result.unit_factors == P.l

    def test_smith_form_reconstructs(self):
        import numpy as np
        from src.algebra.smith import smith_form, to_object_matrix
        A = to_object_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3, 3)
        form = smith_form(A)
        assert np.array_equal(form.S.dot(form.D).dot(form.T), A)
        assert np.array_equal(form.S.dot(form.Sinv), np.identity(3, dtype=object))

    def test_invariant_factors_order(self):
        from src.algebra.smith import invariant_factors
        assert invariant_factors([6, 0, 4]) == [2, 12, 0]


class TestOracle:
    """The brute-force helpers used by the self-test."""

    def test_determinant(self):
        from src.selftest.oracles import determinant
        assert determinant([[2, 0], [0, 3]]) == 6
        assert determinant([[0, 1], [1, 0]]) == -1
        assert determinant([[1, 2], [2, 4]]) == 0
        assert determinant([]) == 1

    def test_determinantal_divisors(self):
        from src.selftest.oracles import determinantal_divisors
        assert determinantal_divisors([[2, 4], [6, 8]]) == [2, 8]
