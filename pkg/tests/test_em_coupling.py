"""Field propagator, pairwise couplings and collective decay channels."""

import numpy as np
import pytest

from collemit import (
    TransitionDipole,
    collective_channels,
    coupling_tensors,
    pair_coupling,
    propagator_tensor,
)
from collemit.system_model import RB87_TRANSITIONS

Z = np.array([0.0, 0.0, 1.0])

# reference collective rates (1e6 rad/s) for the rubidium diamond geometry
CHANNEL_TABLE = {
    60.0: {(0, 1): (59.7, 12.6), (1, 2): (1.04, 0.234), (3, 2): (4.71, 0.998), (0, 3): (28.1, 6.23)},
    120.0: {(0, 1): (58.1, 14.2), (1, 2): (0.991, 0.290), (3, 2): (4.58, 1.13), (0, 3): (26.6, 7.68)},
    180.0: {(0, 1): (55.6, 16.7), (1, 2): (0.907, 0.376), (3, 2): (4.37, 1.34), (0, 3): (24.4, 9.87)},
    240.0: {(0, 1): (52.4, 19.9), (1, 2): (0.805, 0.477), (3, 2): (4.11, 1.60), (0, 3): (21.8, 12.5)},
}


def rb_tensors(r12):
    positions = np.array([[0.0, 0.0, 0.0], [r12, 0.0, 0.0]])
    return coupling_tensors(RB87_TRANSITIONS, positions)


class TestPropagatorTensor:
    def test_unit_distance_along_z(self):
        f = propagator_tensor(1.0, Z)
        assert abs(f[0, 0] - 1j) < 1e-14
        assert abs(f[1, 1] - 1j) < 1e-14
        assert abs(f[2, 2] - 2.0 * (1.0 - 1j)) < 1e-14
        off = f - np.diag(np.diag(f))
        assert np.abs(off).max() < 1e-14

    def test_far_field_transverse_asymptote(self):
        xi = 1e6
        f = propagator_tensor(xi, Z)
        assert abs(f[0, 0] - 1.0 / xi) < 1e-5 / xi

    def test_even_in_direction(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            xi = rng.uniform(0.1, 20.0)
            vec = rng.normal(size=3)
            r_hat = vec / np.linalg.norm(vec)
            np.testing.assert_allclose(
                propagator_tensor(xi, r_hat), propagator_tensor(xi, -r_hat), atol=1e-14
            )

    def test_rejects_nonpositive_xi(self):
        with pytest.raises(ValueError):
            propagator_tensor(0.0, Z)
        with pytest.raises(ValueError):
            propagator_tensor(-1.0, Z)

    def test_rejects_non_unit_direction(self):
        with pytest.raises(ValueError):
            propagator_tensor(1.0, np.array([0.0, 0.0, 2.0]))


class TestTransitionDipole:
    def test_orientation_must_be_unit(self):
        with pytest.raises(ValueError):
            TransitionDipole(0, 1, rate=1.0, wavelength=780.0, orientation=(1.0, 1.0, 0.0))

    def test_positive_rate_and_wavelength(self):
        with pytest.raises(ValueError):
            TransitionDipole(0, 1, rate=-1.0, wavelength=780.0)
        with pytest.raises(ValueError):
            TransitionDipole(0, 1, rate=1.0, wavelength=0.0)

    def test_derived_quantities_consistent(self):
        dip = TransitionDipole(0, 1, rate=36.2, wavelength=780.0)
        assert abs(dip.wavenumber - 2 * np.pi / 780.0) < 1e-15
        # optical frequency in 1e6 rad/s is kappa * c
        assert abs(dip.angular_frequency / dip.wavenumber - 2.99792458e11) < 1e-3


class TestPairCoupling:
    def test_overlapping_emitters_rejected(self):
        dip = RB87_TRANSITIONS[0]
        with pytest.raises(ValueError):
            pair_coupling(dip, dip, np.zeros(3))

    def test_secular_filter_suppresses_distant_transitions(self):
        a = TransitionDipole(0, 1, rate=36.2, wavelength=780.0, orientation=(1, 0, 0))
        b = TransitionDipole(1, 2, rate=0.641, wavelength=776.0, orientation=(1, 0, 0))
        threshold = 10.0 * 36.2
        omega, gamma = pair_coupling(a, b, np.array([120.0, 0.0, 0.0]), threshold)
        assert omega == 0.0 and gamma == 0.0
        # without the filter the same pair couples
        omega, gamma = pair_coupling(a, b, np.array([120.0, 0.0, 0.0]), None)
        assert omega != 0.0

    def test_far_separation_damping_is_small(self):
        # kappa * r ~ 120 at 15 um for the 780 nm transition
        dip = RB87_TRANSITIONS[0]
        _, gamma = pair_coupling(dip, dip, np.array([15000.0, 0.0, 0.0]))
        assert abs(gamma) < 0.02 * dip.rate

    def test_reference_value_at_60nm(self):
        dip = RB87_TRANSITIONS[0]
        _, gamma = pair_coupling(dip, dip, np.array([60.0, 0.0, 0.0]))
        expected = 59.7 - 36.2  # superradiant excess of the reference geometry
        assert abs(gamma - expected) < 0.01 * expected

    def test_self_term_convention(self):
        tens = rb_tensors(120.0)
        for dip in RB87_TRANSITIONS:
            assert tens.omega_at(0, 0, dip.pair) == 0.0
            assert tens.gamma_at(1, 1, dip.pair) == dip.rate


class TestCollectiveChannels:
    @pytest.mark.parametrize("r12", sorted(CHANNEL_TABLE))
    def test_reference_rates_to_three_figures(self, r12):
        tens = rb_tensors(r12)
        for dip in RB87_TRANSITIONS:
            ch = collective_channels(tens, dip, 4)
            ref_plus, ref_minus = CHANNEL_TABLE[r12][dip.pair]
            assert abs(ch.gamma_plus - ref_plus) <= 0.01 * ref_plus
            assert abs(ch.gamma_minus - ref_minus) <= 0.01 * ref_minus

    def test_sum_rule_over_distances(self):
        for r12 in np.geomspace(40.0, 10_000.0, 25):
            tens = rb_tensors(r12)
            for dip in RB87_TRANSITIONS:
                ch = collective_channels(tens, dip, 4)
                total = ch.gamma_plus + ch.gamma_minus
                assert abs(total - 2.0 * dip.rate) < 1e-10 * 2.0 * dip.rate

    def test_cross_damping_bounded_by_self_rate(self):
        for r12 in np.geomspace(40.0, 10_000.0, 40):
            tens = rb_tensors(r12)
            for dip in RB87_TRANSITIONS:
                g12 = tens.gamma_at(0, 1, dip.pair)
                assert abs(g12) <= dip.rate + 1e-12

    def test_short_distance_transverse_limit(self):
        # perpendicular orientation class: cross damping approaches 2/3 of the
        # single-emitter rate as kappa*r -> 0 under the calibrated scale
        dip = TransitionDipole(0, 3, rate=17.2, wavelength=795.0, orientation=(0, 1, 0))
        for r12 in (2.0, 4.0, 6.0):  # kappa*r < 0.05
            _, gamma = pair_coupling(dip, dip, np.array([r12, 0.0, 0.0]))
            assert abs(gamma - (2.0 / 3.0) * dip.rate) < 0.05 * dip.rate

    def test_jump_operators_orthonormal(self):
        tens = rb_tensors(120.0)
        ch = collective_channels(tens, RB87_TRANSITIONS[0], 4)
        plus, minus = ch.jump_plus, ch.jump_minus
        norm_p = np.trace(plus.conj().T @ plus)
        norm_m = np.trace(minus.conj().T @ minus)
        cross = np.trace(plus.conj().T @ minus)
        assert abs(norm_p - norm_m) < 1e-12
        assert abs(cross) < 1e-12

    def test_two_emitters_required(self):
        positions = np.zeros((1, 3))
        tens = coupling_tensors(RB87_TRANSITIONS, positions)
        with pytest.raises(ValueError):
            collective_channels(tens, RB87_TRANSITIONS[0], 4)


class TestCouplingTensors:
    def test_damping_tensor_symmetric(self):
        tens = rb_tensors(97.0)
        for (alpha, beta, pa, pb), value in tens.gamma.items():
            assert tens.gamma_at(beta, alpha, pb, pa) == pytest.approx(value, abs=1e-14)

    def test_cross_couplings_toggle(self):
        positions = np.array([[0.0, 0.0, 0.0], [120.0, 0.0, 0.0]])
        tens = coupling_tensors(RB87_TRANSITIONS, positions, cross_couplings=False)
        assert all(alpha == beta for (alpha, beta, _, _) in tens.gamma)

    def test_per_transition_toggle(self):
        positions = np.array([[0.0, 0.0, 0.0], [120.0, 0.0, 0.0]])
        toggle = {(0, 1): False}
        tens = coupling_tensors(RB87_TRANSITIONS, positions, transition_toggle=toggle)
        assert tens.gamma_at(0, 1, (0, 1)) == 0.0
        assert tens.gamma_at(0, 1, (1, 2)) != 0.0
