"""
Tests for pattern homomorphisms: validation, composition, image, injectivity,
distance, push-forward and pairing of spectra.
"""

import pytest
from fractions import Fraction as F


@pytest.fixture
def interval():
    from src.algebra import interval_algebra
    return interval_algebra()


@pytest.fixture
def half():
    """f -> f(z/2) on C[0,1]."""
    from src.selftest.generators import interval_pullback
    from src.spectrum import PLMap
    return interval_pullback(PLMap([(0, 0), (1, F(1, 2))]), name="half")


@pytest.fixture
def identity_element(interval):
    from src.selftest.generators import identity_element
    return identity_element(interval)


class TestFiniteSpectrum:
    def test_boundary_rewrite(self):
        from src.algebra import dimension_drop_example
        from src.patterns import FiniteSpectrum, boundary_rewrite
        from src.spectrum import Interior
        P = dimension_drop_example()
        S = FiniteSpectrum((0, 0), (Interior(0, 0), Interior(0, 1), Interior(0, F(1, 3))))
        rewritten = boundary_rewrite(P, S)
        assert rewritten.theta_mult == (3, 1)
        assert rewritten.interior == (Interior(0, F(1, 3)),)
        assert rewritten.size(P) == S.size(P) == 6

    def test_non_unital_rewrite_pads(self):
        from src.algebra import Presentation
        from src.patterns import FiniteSpectrum, boundary_rewrite
        from src.spectrum import Interior
        P = Presentation(k=(1,), dims=(3,), alpha=((2,),), beta=((1,),), unital=False)
        rewritten = boundary_rewrite(P, FiniteSpectrum((0,), (Interior(0, 1),)))
        assert rewritten.theta_mult == (1,)
        assert rewritten.zero_pad == 2

    def test_spectrum_eigs(self, identity_element, interval):
        from src.patterns import FiniteSpectrum, spectrum_eigs
        from src.spectrum import Interior
        S = FiniteSpectrum((0, 1), (Interior(0, F(1, 4)),), zero_pad=1)
        assert spectrum_eigs(interval, identity_element, S).values == (0, F(1, 4), 1)
        assert str(S) == "{theta1^1, (1/4,0), 0^1}"


class TestEvalElement:
    """eval_element on profile elements and test functions."""

    @pytest.mark.parametrize("t", [F(1, 4), F(5, 8), F(7, 8)])
    def test_identity_matches_eig_at(self, interval, t):
        from src.patterns import eval_element, identity_pattern
        from src.spectrum import Interior
        from src.testfns import eig_at, make_type2
        h = make_type2(interval, 4, 0, [(F(1, 2), F(3, 4))])
        z = Interior(0, t)
        assert eval_element(identity_pattern(interval), h, z) == eig_at(interval, h, z)

    def test_pullback_evaluates_at_image(self, half, interval):
        from src.patterns import eval_element
        from src.spectrum import Interior
        from src.testfns import eig_at, make_type2
        h = make_type2(interval, 4, 0, [(F(1, 4), F(1, 2))])
        assert eval_element(half, h, Interior(0, F(3, 4))) == eig_at(interval, h, Interior(0, F(3, 8)))

    def test_zero_pad(self, interval, identity_element):
        from src.patterns import eval_element, zero_pattern
        from src.spectrum import Interior
        assert eval_element(zero_pattern(interval, interval), identity_element, Interior(0, F(1, 3))).values == (0,)


class TestValidation:
    def test_identity_and_zero(self, interval):
        from src.algebra import dimension_drop_example
        from src.patterns import identity_pattern, validate_pattern, zero_pattern
        P = dimension_drop_example()
        assert validate_pattern(identity_pattern(P)).ok
        assert validate_pattern(zero_pattern(P, interval)).ok

    def test_pullback_is_valid(self, half):
        from src.patterns import validate_pattern
        assert validate_pattern(half).ok

    def test_size_violation(self, interval):
        from src.patterns import IntervalTrack, PatternHom, Segment, identity_pattern, validate_pattern
        from src.spectrum import PLMap
        base = identity_pattern(interval)
        bad = PatternHom(interval, interval, base.domain, base.vertex_spec,
                         ((Segment(0, 1, (IntervalTrack(0, PLMap.identity()),), pad=1),),))
        assert 'size' in {v.invariant for v in validate_pattern(bad).violations}

    def test_gluing_violation(self, interval):
        from src.patterns import IntervalTrack, PatternHom, Segment, identity_pattern, validate_pattern
        from src.spectrum import PLMap
        base = identity_pattern(interval)
        bad = PatternHom(interval, interval, base.domain, base.vertex_spec,
                         ((Segment(0, 1, (IntervalTrack(0, PLMap([(0, F(1, 4)), (1, 1)])),)),),))
        assert [v.invariant for v in validate_pattern(bad).violations] == ['vertex_alpha']

    def test_tiling_violation(self, interval):
        from src.patterns import IntervalTrack, PatternHom, Segment, identity_pattern, validate_pattern
        from src.spectrum import PLMap
        base = identity_pattern(interval)
        gap = PatternHom(interval, interval, base.domain, base.vertex_spec,
                         ((Segment(0, F(1, 2), (IntervalTrack(0, PLMap.identity(0, F(1, 2))),)),),))
        assert 'tiling' in {v.invariant for v in validate_pattern(gap).violations}


class TestComposition:
    def test_half_after_half_is_quarter(self, half):
        from src.patterns import compose, validate_pattern
        from src.selftest.generators import interval_pullback
        from src.spectrum import PLMap
        quarter = compose(half, half)
        assert quarter == interval_pullback(PLMap([(0, 0), (1, F(1, 4))]))
        assert quarter.name == "half.half"
        assert validate_pattern(quarter).ok

    def test_identity_is_neutral(self, half, interval):
        from src.patterns import compose, identity_pattern
        assert compose(identity_pattern(interval), half) == half
        assert compose(half, identity_pattern(interval)) == half

    def test_compose_all(self, half):
        from src.patterns import compose, compose_all
        assert compose_all([half, half, half]) == compose(compose(half, half), half)

    def test_chain_mismatch(self, interval):
        from src.algebra import dimension_drop_example
        from src.errors import DomainError
        from src.patterns import compose, identity_pattern
        with pytest.raises(DomainError):
            compose(identity_pattern(interval), identity_pattern(dimension_drop_example()))

    def test_theta_tracks_pull_vertex_spectra(self, half, interval):
        """A constant theta track composes into the vertex spectrum of the first map."""
        from src.patterns import FiniteSpectrum, PatternHom, Segment, ThetaTrack, compose, eval_spectrum
        from src.spectrum import Interior, full_spectrum
        S1 = FiniteSpectrum((0, 1))
        constant = PatternHom(interval, interval, full_spectrum(interval), {0: S1, 1: S1},
                              ((Segment(0, 1, (ThetaTrack(1),)),),))
        composite = compose(half, constant)
        assert eval_spectrum(composite, Interior(0, F(1, 3))).interior == (Interior(0, F(1, 2)),)


class TestImageAndInjectivity:
    def test_identity_is_injective(self, interval):
        from src.patterns import identity_pattern, is_injective
        witness = is_injective(identity_pattern(interval))
        assert witness
        assert witness.to_dict() == {'injective': True, 'missing_thetas': [], 'gaps': []}

    def test_half_misses_upper_half(self, half):
        from src.patterns import is_injective, sp_image
        image = sp_image(half)
        assert image.thetas == frozenset({0})
        assert [(p.lo, p.hi) for p in image.block(0)] == [(0, F(1, 2))]

        witness = is_injective(half)
        assert not witness
        assert witness.missing_thetas == (1,)
        assert witness.gaps == ((0, F(1, 2), F(1), False, True),)

    def test_zero_pattern(self, interval):
        from src.patterns import is_injective, support, zero_pattern
        zero = zero_pattern(interval, interval)
        assert support(zero).is_empty()
        assert is_injective(zero).missing_thetas == (0, 1)


class TestDistanceAndPush:
    def test_spec_distance(self, half, interval, identity_element):
        from src.patterns import identity_pattern, spec_distance
        assert spec_distance(identity_pattern(interval), half, identity_element) == F(1, 2)
        assert spec_distance(half, half, identity_element) == 0

    def test_distance_needs_same_domain(self, half, interval, identity_element):
        from src.errors import SizeMismatchError
        from src.patterns import restrict_domain, spec_distance
        from src.spectrum import ClosedSubset, closure
        Y = closure(interval, ClosedSubset.build([], [[(0, F(1, 2))]]))
        with pytest.raises(SizeMismatchError):
            spec_distance(half, restrict_domain(half, Y), identity_element)

    def test_sample_plan_contains_breakpoints(self, half, identity_element):
        from src.patterns import sample_plan
        plan = sample_plan([half], identity_element)
        assert plan.thetas == [0, 1]
        assert {0, F(1, 2), 1} <= set(plan.points[0])
        assert plan.size() == 2 + len(plan.points[0])

    def test_push_element(self, half, identity_element):
        from src.patterns import push_element
        from src.spectrum import PLMap
        pushed = push_element(half, identity_element)
        assert pushed.theta_eigs == ((0,), (F(1, 2),))
        assert pushed.branches == ((PLMap([(0, 0), (1, F(1, 2))]),),)
        assert pushed.name == "half(id)"

    def test_push_needs_global_pattern(self, half, interval, identity_element):
        from src.errors import DomainError
        from src.patterns import push_element, restrict_domain
        from src.spectrum import ClosedSubset, closure
        Y = closure(interval, ClosedSubset.build([], [[(0, F(1, 2))]]))
        with pytest.raises(DomainError):
            push_element(restrict_domain(half, Y), identity_element)

    def test_restrict_domain(self, half, interval):
        from src.errors import DomainError
        from src.patterns import eval_spectrum, restrict_domain, validate_pattern
        from src.spectrum import ClosedSubset, Theta, closure
        Y = closure(interval, ClosedSubset.build([], [[(0, F(1, 2)), (F(3, 4), F(3, 4))]]))
        restricted = restrict_domain(half, Y)
        assert validate_pattern(restricted).ok
        assert [(s.lo, s.hi) for s in restricted.segments[0]] == [(0, F(1, 2)), (F(3, 4), F(3, 4))]
        with pytest.raises(DomainError):
            eval_spectrum(restricted, Theta(1))
        with pytest.raises(DomainError):
            restrict_domain(restricted, closure(interval, ClosedSubset.build([], [[(0, 1)]])))


class TestPairing:
    """Monotone matching of interior coordinates."""

    def _spectrum(self, *ts):
        from src.patterns import FiniteSpectrum
        from src.spectrum import Interior
        return FiniteSpectrum((0, 0), tuple(Interior(0, t) for t in ts))

    def test_close_spectra_pair(self, interval):
        from src.patterns import pair_spectra
        result = pair_spectra(interval, self._spectrum(F(1, 4), F(1, 2)),
                              self._spectrum(F(9, 32), F(1, 2)), F(1, 100), 8)
        assert result.ok
        assert result.max_gap == F(1, 32)
        assert result.block(0).partner_of_x(F(1, 4)) == F(9, 32)
        assert result.eps == F(1, 100)

    def test_collar_points_may_stay_single(self, interval):
        from src.patterns import pair_spectra
        result = pair_spectra(interval, self._spectrum(F(1, 16), F(1, 2)),
                              self._spectrum(F(1, 2), F(15, 16)), None, 8)
        block = result.block(0)
        assert result.max_gap == 0
        assert block.unmatched_x == (F(1, 16),)
        assert block.unmatched_y == (F(15, 16),)
        assert block.to_dict()['pairs'] == [[F(1, 2), F(1, 2)]]

    def test_far_core_points_are_not_ok(self, interval):
        from src.patterns import pair_spectra
        result = pair_spectra(interval, self._spectrum(F(1, 2)), self._spectrum(F(7, 8)), None, 8)
        assert not result.ok
        assert result.max_gap == F(3, 8)

    def test_bottleneck_is_minimal(self):
        from src.patterns import pair_block
        block = pair_block(0, [F(1, 4), F(1, 2)], [F(3, 8), F(5, 8)], F(1, 8))
        assert block.max_gap == F(1, 8)

    def test_unmatchable_core_point(self, interval):
        from src.errors import PairingError
        from src.patterns import FiniteSpectrum, pair_spectra
        with pytest.raises(PairingError):
            pair_spectra(interval, self._spectrum(F(1, 2)), FiniteSpectrum((0, 1)), None, 8)

    def test_size_mismatch(self, interval):
        from src.errors import SizeMismatchError
        from src.patterns import pair_spectra
        with pytest.raises(SizeMismatchError):
            pair_spectra(interval, self._spectrum(F(1, 2)), self._spectrum(F(1, 2), F(1, 3)), None, 8)


class TestBlockEnds:
    """Block ends outside every segment resolve through the glued thetas."""

    def test_section_at_glued_end(self, interval):
        from src.errors import DomainError
        from src.patterns import FiniteSpectrum, endpoint_spectrum, eval_spectrum
        from src.restriction import restrict_algebra
        from src.spectrum import ClosedSubset, Interior
        section = restrict_algebra(interval, ClosedSubset.build([0], [[]])).section

        assert eval_spectrum(section, Interior(0, 0)) == FiniteSpectrum((1,))
        assert endpoint_spectrum(section, 0, F(0)) == FiniteSpectrum((1,))
        with pytest.raises(DomainError):
            eval_spectrum(section, Interior(0, 1))

    def test_compose_through_point_evaluation(self, interval):
        from src.patterns import compose, eval_element, validate_pattern
        from src.restriction import restrict_algebra
        from src.selftest.generators import interval_pullback
        from src.spectrum import ClosedSubset, Interior, PLMap, ProfileElement
        at_zero = interval_pullback(PLMap([(0, 0), (1, 0)]), name="at0")
        section = restrict_algebra(interval, ClosedSubset.build([0], [[]])).section

        lifted = compose(section, at_zero)
        assert validate_pattern(lifted).ok
        assert lifted.source.l == 0
        three = ProfileElement.scalar(lifted.source, [3], [])
        assert eval_element(lifted, three, Interior(0, F(1, 2))).values == (3,)
