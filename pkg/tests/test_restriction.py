"""
Tests for restricting a presentation to a closed subset of its spectrum.
"""

import pytest
from fractions import Fraction as F


@pytest.fixture
def dimension_drop():
    from src.algebra import dimension_drop_example
    return dimension_drop_example()


@pytest.fixture
def interval():
    from src.algebra import interval_algebra
    return interval_algebra()


class TestRestrictAlgebra:
    def test_right_piece_of_dimension_drop(self, dimension_drop):
        """theta0 with [1/3, 1]: the free end at 1/3 becomes a stub of size 2."""
        from src.algebra import validate_presentation
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset
        result = restrict_algebra(dimension_drop, ClosedSubset.build([0], [[(F(1, 3), 1)]]))
        B = result.B

        assert B.k == (1, 2)
        assert B.dims == (2,)
        assert B.alpha == ((0, 1),)
        assert B.beta == ((2, 0),)
        assert validate_presentation(B).ok
        assert [info.kind for info in result.e1] == ['theta', 'right_stub']
        assert [info.kind for info in result.e2] == ['right']

    def test_full_spectrum_gives_same_algebra(self, dimension_drop):
        from src.restriction import restrict_algebra
        from src.spectrum import full_spectrum
        result = restrict_algebra(dimension_drop, full_spectrum(dimension_drop))
        assert result.B == dimension_drop
        assert [info.kind for info in result.e2] == ['full']

    def test_interior_interval_is_interval_algebra(self, interval):
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset
        result = restrict_algebra(interval, ClosedSubset.build([], [[(F(1, 4), F(1, 2))]]))
        assert result.B == interval
        assert [info.kind for info in result.e1] == ['interval_start', 'interval_end']

    def test_two_interior_intervals(self, interval):
        from src.algebra import decompose_minimal
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset, Interior
        Z = ClosedSubset.build([], [[(F(1, 5), F(2, 5)), (F(3, 5), F(4, 5))]])
        result = restrict_algebra(interval, Z)

        assert result.B.p == 4
        assert result.B.l == 2
        assert [part for part, _ in decompose_minimal(result.B)] == [interval, interval]
        assert result.from_ambient(Interior(0, F(7, 10))) == Interior(1, F(1, 2))

    def test_isolated_point_is_matrix_block(self, interval):
        from src.algebra import matrix_algebra
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset
        result = restrict_algebra(interval, ClosedSubset.build([], [[(F(1, 2), F(1, 2))]]))
        assert result.B == matrix_algebra(1)
        assert [info.kind for info in result.e1] == ['point']

    def test_empty_set(self, interval):
        from src.errors import EmptySetError
        from src.restriction import restrict_algebra
        from src.spectrum import empty_set
        with pytest.raises(EmptySetError):
            restrict_algebra(interval, empty_set(interval))

    def test_not_closed(self, interval):
        from src.errors import NotClosedError
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset
        with pytest.raises(NotClosedError):
            restrict_algebra(interval, ClosedSubset.build([], [[(0, F(1, 2))]]))


class TestCorrespondence:
    """Point maps between Sp(B) and Z."""

    @pytest.fixture
    def result(self, dimension_drop):
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset
        return restrict_algebra(dimension_drop, ClosedSubset.build([0], [[(F(1, 3), 1)]]))

    def test_to_ambient(self, result):
        from src.spectrum import Interior, Theta
        assert result.to_ambient(Theta(0)) == Theta(0)
        assert result.to_ambient(Theta(1)) == Interior(0, F(1, 3))
        assert result.to_ambient(Interior(0, F(1, 2))) == Interior(0, F(2, 3))

    def test_from_ambient(self, result):
        from src.spectrum import Interior, Theta
        assert result.from_ambient(Theta(0)) == Theta(0)
        assert result.from_ambient(Interior(0, F(1, 3))) == Theta(1)
        assert result.from_ambient(Interior(0, F(2, 3))) == Interior(0, F(1, 2))

    def test_outside_z(self, result):
        from src.errors import DomainError
        from src.spectrum import Interior, Theta
        with pytest.raises(DomainError):
            result.from_ambient(Theta(1))
        with pytest.raises(DomainError):
            result.from_ambient(Interior(0, F(1, 4)))
        with pytest.raises(DomainError):
            result.to_ambient(Interior(0, 0))

    def test_dimension_at(self, result, dimension_drop):
        from src.restriction import dimension_at
        from src.spectrum import Interior, Theta
        assert dimension_at(dimension_drop, result.Z, result, Theta(0)) == (1, 1)
        assert dimension_at(dimension_drop, result.Z, result, Interior(0, F(1, 3))) == (2, 2)

    def test_correspondence_document(self, result):
        payload = result.correspondence()
        assert payload['schema'] == 'correspondence/v1'
        assert payload['e1'] == [
            {'kind': 'theta', 'ambient_block': 0},
            {'kind': 'right_stub', 'ambient_block': 0, 'lo': F(1, 3), 'hi': F(1, 3)},
        ]
        assert payload['e2'] == [{'kind': 'right', 'ambient_block': 0, 'lo': F(1, 3), 'hi': 1}]

    def test_quotient_and_section_names(self, result):
        assert result.quotient.name == "pi"
        assert result.section.name == "sigma"
        assert result.section.domain == result.Z


class TestAudit:
    def test_examples_pass(self, dimension_drop, interval):
        from src.restriction import audit_restriction, restrict_algebra
        from src.spectrum import ClosedSubset
        cases = [
            (dimension_drop, ClosedSubset.build([0], [[(F(1, 3), 1)]])),
            (interval, ClosedSubset.build([], [[(F(1, 5), F(2, 5)), (F(3, 5), F(4, 5))]])),
            (interval, ClosedSubset.build([0], [[(0, F(1, 4)), (F(1, 2), F(1, 2))]])),
        ]
        for P, Z in cases:
            report = audit_restriction(restrict_algebra(P, Z), samples=4)
            assert report.ok, [v.message for v in report.violations]

    def test_random_sets_pass(self, dimension_drop):
        import numpy as np
        from src.restriction import audit_restriction, restrict_algebra
        from src.selftest.generators import random_closed_set
        rng = np.random.default_rng(11)
        for _ in range(10):
            Z = random_closed_set(rng, dimension_drop)
            if Z.is_empty():
                continue
            assert audit_restriction(restrict_algebra(dimension_drop, Z), samples=3).ok, str(Z)

    def test_extra_point_outside_z(self, interval):
        from src.restriction import audit_restriction, restrict_algebra
        from src.spectrum import ClosedSubset, Interior
        result = restrict_algebra(interval, ClosedSubset.build([], [[(F(1, 4), F(1, 2))]]))
        report = audit_restriction(result, samples=2, extra_points=[Interior(0, F(3, 4))])
        assert [v.invariant for v in report.violations] == ['correspondence']
