"""Plateau profiles: exact plateau values, smooth monotone transitions, powers."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steklovwarp import (
    BaseGeometry,
    DomainError,
    HypothesisViolationError,
    UnsupportedModeError,
    WarpedMetricSpec,
    build_profile,
    circle_spectrum,
    point_spectrum,
    profile_from_record,
    volume_element_ratio,
)

profile_params = st.tuples(
    st.floats(0.01, 0.15),   # epsilon
    st.floats(0.05, 0.95),   # delta
    st.booleans(),
)


def make(eps, delta, symmetric, ell=1.0):
    return build_profile(eps, delta, ell, symmetric)


class TestConstruction:
    def test_reference_plateau_values(self):
        p = make(0.1, 0.75, False)
        assert p.eval(0.0) == 1.0
        assert p.eval(0.15) == pytest.approx(0.1**0.75, rel=1e-12)
        assert p.eval(0.5) == pytest.approx(100.0, rel=1e-12)

    def test_epsilon_hypothesis(self):
        with pytest.raises(HypothesisViolationError):
            build_profile(0.2, 0.75, 1.0, False)  # 0.2 >= 1/6
        with pytest.raises(HypothesisViolationError):
            build_profile(1.0 / 6.0, 0.75, 1.0, False)

    def test_delta_domain(self):
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(DomainError):
                build_profile(0.1, bad, 1.0, False)

    def test_eval_outside_domain(self):
        p = make(0.1, 0.75, False)
        with pytest.raises(DomainError):
            p.eval(-0.01)
        with pytest.raises(DomainError):
            p.eval(1.01)

    def test_record_round_trip(self):
        p = make(0.07, 0.6, True)
        rec = p.to_record()
        assert rec == {
            "epsilon": 0.07,
            "delta": 0.6,
            "collar_length": 1.0,
            "symmetric": True,
        }
        assert profile_from_record(rec) == p

    def test_record_rejects_unknown_and_missing(self):
        with pytest.raises(DomainError):
            profile_from_record({"epsilon": 0.1, "delta": 0.5, "collar_length": 1.0,
                                 "symmetric": False, "extra": 1})
        with pytest.raises(DomainError):
            profile_from_record({"epsilon": 0.1})


class TestPlateaus:
    @given(params=profile_params, x=st.floats(0.0, 1.0))
    @settings(max_examples=200, deadline=None)
    def test_plateau_exactness(self, params, x):
        eps, delta, symmetric = params
        p = make(eps, delta, symmetric)
        s = x * eps / 2.0
        assert p.eval(s) == 1.0
        mid = eps + x * eps
        assert p.eval(mid) == p.mid_value
        far_hi = (1.0 - 3.0 * eps) if symmetric else 1.0
        far = 3.0 * eps + x * (far_hi - 3.0 * eps)
        assert p.eval(far) == p.far_value

    @given(params=profile_params)
    @settings(max_examples=100, deadline=None)
    def test_global_lower_bound(self, params):
        eps, delta, symmetric = params
        p = make(eps, delta, symmetric)
        floor = min(p.mid_value, 1.0)
        for i in range(257):
            t = i / 256.0
            assert p.eval(t) >= floor * (1.0 - 1e-13)

    @given(params=profile_params)
    @settings(max_examples=100, deadline=None)
    def test_transitions_monotone_in_log(self, params):
        eps, delta, symmetric = params
        p = make(eps, delta, symmetric)
        for a, b in ((eps / 2.0, eps), (2.0 * eps, 3.0 * eps)):
            logs = [p.log_eval(a + (b - a) * i / 64.0) for i in range(65)]
            diffs = [y - x for x, y in zip(logs, logs[1:])]
            assert all(d <= 1e-12 for d in diffs) or all(d >= -1e-12 for d in diffs)

    def test_symmetric_mirror(self):
        p = make(0.05, 0.7, True)
        for i in range(101):
            t = i / 100.0
            assert p.eval(t) == pytest.approx(p.eval(1.0 - t), rel=1e-14, abs=0)

    def test_continuity_at_junctions(self):
        p = make(0.1, 0.75, False)
        for junction in (0.05, 0.1, 0.2, 0.3):
            left = p.eval(junction - 1e-9)
            right = p.eval(junction + 1e-9)
            assert left == pytest.approx(right, rel=1e-6)


class TestPowers:
    def test_power_arithmetic(self):
        p = make(0.1, 0.75, False)
        # 2k/n with n = 3, k = 1 applied on the mid plateau
        assert p.eval_power(0.15, 2.0 / 3.0) == pytest.approx(0.1**0.5, rel=1e-12)
        assert p.eval_power(0.02, 5.0) == 1.0
        assert p.eval_power(0.5, -2.0) == pytest.approx(1e-4, rel=1e-12)

    @given(params=profile_params, t=st.floats(0.0, 1.0), power=st.floats(-4.0, 4.0))
    @settings(max_examples=200, deadline=None)
    def test_power_inverse_identity(self, params, t, power):
        eps, delta, symmetric = params
        p = make(eps, delta, symmetric)
        assert p.eval_power(t, power) * p.eval_power(t, -power) == pytest.approx(
            1.0, rel=1e-12
        )


class TestVolumeElement:
    def _spec(self, mode):
        return WarpedMetricSpec(
            base_dim=2,
            fiber_dim=1,
            warp=make(0.1, 0.75, True),
            base=BaseGeometry(circle_spectrum(2 * math.pi, 4), 1.0, "both"),
            fiber=circle_spectrum(2 * math.pi, 4),
            mode=mode,
        )

    def test_ratio_is_one(self):
        spec = self._spec("volume_preserving")
        for i in range(101):
            assert volume_element_ratio(spec, i / 100.0) == pytest.approx(1.0, abs=1e-12)

    def test_near_plateau_exact(self):
        spec = self._spec("volume_preserving")
        assert volume_element_ratio(spec, 0.01) == 1.0

    def test_plain_warp_rejected(self):
        with pytest.raises(UnsupportedModeError):
            volume_element_ratio(self._spec("plain_warp"), 0.5)


class TestMetricSpec:
    def test_dimension_validation(self):
        with pytest.raises(DomainError):
            WarpedMetricSpec(0, 1, lambda t: 1.0,
                             BaseGeometry(point_spectrum(), 1.0, "both"),
                             circle_spectrum(2 * math.pi, 4), "plain_warp")

    def test_mode_validation(self):
        with pytest.raises(DomainError):
            WarpedMetricSpec(1, 1, lambda t: 1.0,
                             BaseGeometry(point_spectrum(), 1.0, "both"),
                             circle_spectrum(2 * math.pi, 4), "conformal")
