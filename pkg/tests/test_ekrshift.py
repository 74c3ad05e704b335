import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonnegsets.ekrshift import (
    BoundedFamily,
    CrossBoundError,
    NotAnUpsetError,
    has_property,
    is_upset,
    max_family_oracle,
    push_up,
    theorem1_via_ekr,
    to_upset,
    upset_is_intersecting,
)
from nonnegsets.nonneg import NumberSequence, extremal_construction
from nonnegsets.setcore import SetFamily, Subset, bound_main, masks_by_size

from oracles import (
    brute_max_family,
    naive_cross_bounded,
    naive_intersecting,
    naive_is_upset,
)


def family_of(n: int, k: int, masks) -> BoundedFamily:
    return BoundedFamily(SetFamily.from_masks(n, masks), k)


def bounded_families(n: int, max_members: int = 6):
    """Strategy for arbitrary bounded families over [n]."""
    return st.integers(1, n).flatmap(
        lambda k: st.sets(
            st.sampled_from(masks_by_size(n, 1, k)), max_size=max_members
        ).map(lambda masks: family_of(n, k, masks))
    )


class TestBoundedFamily:
    def test_guards(self):
        with pytest.raises(ValueError):
            family_of(3, 2, {0b000})  # empty member
        with pytest.raises(ValueError):
            family_of(3, 1, {0b011})  # above the cap
        with pytest.raises(ValueError):
            family_of(3, 4, {0b001})
        assert len(family_of(3, 2, {0b001, 0b011})) == 2


class TestHasProperty:
    def test_examples(self):
        verdict = has_property(family_of(3, 1, {0b001, 0b010}))
        assert not verdict.holds
        assert verdict.witness == (Subset.of([1], 3), Subset.of([2], 3))
        assert has_property(family_of(3, 2, {0b001, 0b010})).holds
        assert not has_property(family_of(4, 3, {0b0011, 0b1100})).holds
        assert has_property(family_of(4, 4, {0b0011, 0b1100})).holds

    @settings(max_examples=150, deadline=None)
    @given(bounded_families(4))
    def test_matches_naive(self, f):
        assert has_property(f).holds == naive_cross_bounded(f.family.masks(), f.k)


class TestPushUp:
    def test_blocked_by_size_cap(self):
        f = family_of(2, 1, {0b10})
        assert push_up(f, 1).family.masks() == (0b10,)

    def test_grows_when_allowed(self):
        f = family_of(2, 2, {0b10})
        assert push_up(f, 1).family.masks() == (0b11,)

    def test_blocked_when_image_present(self):
        f = family_of(2, 2, {0b01, 0b11})
        assert push_up(f, 2).family.masks() == (0b01, 0b11)

    def test_element_guard(self):
        with pytest.raises(ValueError):
            push_up(family_of(2, 1, {0b01}), 3)
        with pytest.raises(ValueError):
            push_up(family_of(2, 1, {0b01}), 0)

    def test_preserves_size_and_property_exhaustively(self):
        # every family over [3] with k = 2, every element
        masks = masks_by_size(3, 1, 2)
        for size in range(len(masks) + 1):
            for combo in itertools.combinations(masks, size):
                f = family_of(3, 2, combo)
                before = has_property(f).holds
                for i in (1, 2, 3):
                    g = push_up(f, i)
                    assert len(g) == len(f)
                    if before:
                        assert has_property(g).holds

    @settings(max_examples=150, deadline=None)
    @given(bounded_families(5), st.integers(1, 5))
    def test_preserves_size_and_property(self, f, i):
        g = push_up(f, i)
        assert len(g) == len(f)
        if has_property(f).holds:
            assert has_property(g).holds


class TestIsUpset:
    def test_examples(self):
        assert is_upset(family_of(3, 2, {0b001, 0b011, 0b101}))
        assert not is_upset(family_of(3, 2, {0b001}))
        # members already at the cap need no successors
        assert is_upset(family_of(4, 2, {0b0011, 0b1100}))
        assert is_upset(family_of(3, 2, set()))

    @settings(max_examples=150, deadline=None)
    @given(bounded_families(4))
    def test_matches_naive(self, f):
        assert is_upset(f) == naive_is_upset(f.family.masks(), 4, f.k)


class TestToUpset:
    def test_example_run(self):
        result = to_upset(family_of(3, 2, {0b001, 0b010, 0b100}))
        assert result.family.family.masks() == (0b001, 0b011, 0b101)
        assert result.log == ((1, 2),)

    def test_upset_unchanged(self):
        f = family_of(3, 2, {0b001, 0b011, 0b101})
        result = to_upset(f)
        assert result.family == f
        assert result.log == ()

    def test_member_at_cap_unchanged(self):
        f = family_of(4, 2, {0b0011})
        result = to_upset(f)
        assert result.family == f
        assert result.log == ()

    def test_fixpoint_properties_exhaustive(self):
        masks = masks_by_size(3, 1, 2)
        for size in range(len(masks) + 1):
            for combo in itertools.combinations(masks, size):
                f = family_of(3, 2, combo)
                result = to_upset(f)
                assert is_upset(result.family)
                assert len(result.family) == len(f)
                if has_property(f).holds:
                    assert has_property(result.family).holds

    @settings(max_examples=100, deadline=None)
    @given(bounded_families(5, max_members=10))
    def test_fixpoint_properties(self, f):
        result = to_upset(f)
        assert is_upset(result.family)
        assert len(result.family) == len(f)
        if has_property(f).holds:
            assert has_property(result.family).holds


class TestUpsetIntersecting:
    def test_star_upset(self):
        assert upset_is_intersecting(family_of(3, 2, {0b001, 0b011, 0b101}))

    def test_k_eq_n_rejected(self):
        # {1}, {2}, {1,2} with k = n = 2: cross-bounded upset, not intersecting
        f = family_of(2, 2, {0b01, 0b10, 0b11})
        assert is_upset(f) and has_property(f).holds
        assert not naive_intersecting(f.family.masks())
        with pytest.raises(ValueError, match="k <= n-1"):
            upset_is_intersecting(f)

    def test_precondition_errors_distinct(self):
        with pytest.raises(NotAnUpsetError):
            upset_is_intersecting(family_of(3, 2, {0b010}))
        with pytest.raises(CrossBoundError):
            upset_is_intersecting(family_of(4, 2, {0b0011, 0b1100}))

    def test_true_on_all_small_valid_inputs(self):
        # the claim itself: cross-bounded upsets with k <= n-1 intersect
        for n in (3, 4):
            for k in range(1, n):
                masks = masks_by_size(n, 1, k)
                for size in range(len(masks) + 1):
                    for combo in itertools.combinations(masks, size):
                        f = family_of(n, k, combo)
                        if not is_upset(f) or not has_property(f).holds:
                            continue
                        assert upset_is_intersecting(f)
                        assert naive_intersecting(combo)


class TestOracle:
    def test_frozen_values(self):
        assert max_family_oracle(3, 2).size == 3
        assert max_family_oracle(4, 2).size == 4
        assert max_family_oracle(5, 2).size == 5

    def test_k_eq_1_and_k_eq_n_minus_1(self):
        for n in range(2, 7):
            assert max_family_oracle(n, 1).size == 1
            assert max_family_oracle(n, n - 1).size == (1 << (n - 1)) - 1

    def test_matches_exhaustive_search(self):
        for n in range(2, 5):
            for k in range(1, n):
                assert max_family_oracle(n, k).size == brute_max_family(n, k)

    def test_witness_is_cross_bounded_and_sized(self):
        result = max_family_oracle(5, 3)
        assert len(result.witness) == result.size
        assert naive_cross_bounded(result.witness.masks(), 3)

    def test_guards(self):
        with pytest.raises(ValueError):
            max_family_oracle(7, 2)
        with pytest.raises(ValueError):
            max_family_oracle(5, 5)
        with pytest.raises(ValueError):
            max_family_oracle(5, 0)


class TestTheorem1ViaEkr:
    def test_extremal_sequence_meets_cap(self):
        verdict = theorem1_via_ekr(extremal_construction(5, 3, 1))
        assert verdict.passed
        assert verdict.property_holds
        assert verdict.family_size == verdict.cap == 11

    def test_random_constrained_sequences_pass(self):
        rng = random.Random(8)
        cases = 0
        while cases < 40:
            n = rng.randint(2, 9)
            k = rng.randint(1, n - 1)
            s = NumberSequence.of([rng.randint(-3 * n, 3 * n) for _ in range(n)], k)
            if not s.constraint_ok:
                continue
            cases += 1
            verdict = theorem1_via_ekr(s)
            assert verdict.property_holds
            assert verdict.passed
            assert verdict.cap == bound_main(n, k) - 1

    def test_constraint_violation_rejected(self):
        with pytest.raises(ValueError):
            theorem1_via_ekr(NumberSequence.of([1, 1, -1], 1))

    def test_k_eq_n_breaks_the_route(self):
        # with k = n nothing constrains the values; the cross-bound still
        # holds vacuously here but the cap is exceeded, and the verdict says so
        verdict = theorem1_via_ekr(NumberSequence.of([1, 1], 2))
        assert verdict.property_holds
        assert verdict.family_size == 3 > verdict.cap == 2
        assert not verdict.passed
