"""Closed-manifold spectrum generators against brute-force enumeration."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steklovwarp import (
    CompletenessError,
    DomainError,
    circle_spectrum,
    explicit_spectrum,
    flat_torus_spectrum,
    point_spectrum,
    truncate_below,
)
from steklovwarp.spectra import extend, iter_entries

TWO_PI = 2.0 * math.pi


def brute_force_torus(l1, l2, count):
    """Independent lattice enumeration used as the oracle for the generator."""
    bound = 10.0 * (count + 1) * ((2 * math.pi / l1) ** 2 + (2 * math.pi / l2) ** 2)
    amax = int(l1 * math.sqrt(bound) / (2 * math.pi)) + 2
    bmax = int(l2 * math.sqrt(bound) / (2 * math.pi)) + 2
    values = {}
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            v = (2 * math.pi * a / l1) ** 2 + (2 * math.pi * b / l2) ** 2
            if v <= bound:
                key = round(v, 9)
                values[key] = values.get(key, 0) + 1
    return sorted(values.items())[:count]


class TestCircle:
    def test_unit_circle_first_three(self):
        spec = circle_spectrum(TWO_PI, 3)
        assert spec.entries == ((0.0, 1), (1.0, 2), (4.0, 2))

    def test_single_entry(self):
        assert circle_spectrum(TWO_PI, 1).entries == ((0.0, 1),)

    def test_length_pi(self):
        spec = circle_spectrum(math.pi, 2)
        assert spec.entries[0] == (0.0, 1)
        assert spec.entries[1] == pytest.approx((4.0, 2))

    def test_nonpositive_length_rejected(self):
        with pytest.raises(DomainError):
            circle_spectrum(0.0, 3)
        with pytest.raises(DomainError):
            circle_spectrum(-1.0, 3)

    @given(
        length=st.floats(0.3, 30.0),
        count=st.integers(2, 40),
    )
    @settings(max_examples=60, deadline=None)
    def test_counting_formula(self, length, count):
        # eigenvalues <= bound, with multiplicity: 1 + 2*floor(length*sqrt(bound)/(2 pi))
        spec = circle_spectrum(length, count)
        bound = spec.entries[-1][0]
        got = spec.count_with_multiplicity(bound)
        expected = 1 + 2 * math.floor(length * math.sqrt(bound) / (2 * math.pi) + 1e-9)
        assert got == expected

    @given(length=st.floats(0.3, 30.0), count=st.integers(1, 50))
    @settings(max_examples=60, deadline=None)
    def test_ascending_with_positive_multiplicity(self, length, count):
        spec = circle_spectrum(length, count)
        values = [v for v, _ in spec.entries]
        assert values == sorted(values)
        assert len(set(values)) == len(values)
        assert all(m >= 1 for _, m in spec.entries)


class TestFlatTorus:
    def test_square_torus(self):
        spec = flat_torus_spectrum(TWO_PI, TWO_PI, 3)
        assert spec.entries == ((0.0, 1), (1.0, 4), (2.0, 4))

    def test_single_entry(self):
        assert flat_torus_spectrum(TWO_PI, TWO_PI, 1).entries == ((0.0, 1),)

    def test_rectangular(self):
        spec = flat_torus_spectrum(TWO_PI, 2 * TWO_PI, 2)
        assert spec.entries[1] == pytest.approx((0.25, 2))

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            flat_torus_spectrum(0.0, 1.0, 2)

    @pytest.mark.parametrize(
        "l1,l2,count",
        [(TWO_PI, TWO_PI, 8), (1.0, 2.0, 10), (math.pi, 1.5, 6), (3.0, 3.0, 12)],
    )
    def test_against_brute_force(self, l1, l2, count):
        spec = flat_torus_spectrum(l1, l2, count)
        expected = brute_force_torus(l1, l2, count)
        assert len(spec.entries) == count
        for (v, m), (ev, em) in zip(spec.entries, expected):
            assert v == pytest.approx(ev, abs=1e-8)
            assert m == em

    @given(l=st.floats(0.5, 10.0), count=st.integers(2, 15))
    @settings(max_examples=40, deadline=None)
    def test_square_swap_symmetry_and_even_multiplicity(self, l, count):
        spec = flat_torus_spectrum(l, l, count)
        swapped = flat_torus_spectrum(l, l, count)
        assert spec.entries == swapped.entries
        for v, m in spec.entries[1:]:
            assert m % 2 == 0

    def test_axis_swap(self):
        a = flat_torus_spectrum(1.0, 2.5, 9)
        b = flat_torus_spectrum(2.5, 1.0, 9)
        for (va, ma), (vb, mb) in zip(a.entries, b.entries):
            assert va == pytest.approx(vb)
            assert ma == mb


class TestTruncateAndIterate:
    def test_truncate_circle(self):
        spec = circle_spectrum(TWO_PI, 3)
        cut = truncate_below(spec, 2.0)
        assert cut.entries == ((0.0, 1), (1.0, 2))

    def test_truncate_to_zero(self):
        assert truncate_below(circle_spectrum(TWO_PI, 5), 0.0).entries == ((0.0, 1),)

    def test_truncate_beyond_cache_fails(self):
        spec = circle_spectrum(TWO_PI, 3)
        with pytest.raises(CompletenessError):
            truncate_below(spec, 100.0)

    def test_truncate_negative_bound(self):
        with pytest.raises(DomainError):
            truncate_below(circle_spectrum(TWO_PI, 3), -1.0)

    def test_point_truncates_anywhere(self):
        assert truncate_below(point_spectrum(), 100.0).entries == ((0.0, 1),)

    def test_extend_regenerates(self):
        spec = circle_spectrum(TWO_PI, 2)
        bigger = extend(spec, 6)
        assert len(bigger.entries) == 6
        assert bigger.entries[:2] == spec.entries

    def test_extend_explicit_fails(self):
        with pytest.raises(CompletenessError):
            extend(explicit_spectrum([(0.0, 1), (2.0, 3)]), 5)

    def test_iter_circle_unbounded(self):
        it = iter_entries(circle_spectrum(TWO_PI, 2))
        got = [next(it) for _ in range(7)]
        assert [v for v, _ in got] == [0.0, 1.0, 4.0, 9.0, 16.0, 25.0, 36.0]

    def test_iter_point_completes(self):
        assert list(iter_entries(point_spectrum())) == [(0.0, 1)]

    def test_iter_explicit_raises_on_exhaustion(self):
        it = iter_entries(explicit_spectrum([(0.0, 1), (3.0, 2)]))
        assert next(it) == (0.0, 1)
        assert next(it) == (3.0, 2)
        with pytest.raises(CompletenessError):
            next(it)


class TestExplicit:
    def test_first_entry_must_be_zero(self):
        with pytest.raises(DomainError):
            explicit_spectrum([(1.0, 1)])

    def test_strictly_increasing_required(self):
        with pytest.raises(DomainError):
            explicit_spectrum([(0.0, 1), (2.0, 1), (2.0, 1)])

    def test_positive_multiplicity_required(self):
        with pytest.raises(DomainError):
            explicit_spectrum([(0.0, 1), (1.0, 0)])
