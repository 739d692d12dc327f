"""Rotating-frame Hamiltonian assembly, frame validation and the preset."""

import numpy as np
import pytest

from collemit import (
    Drive,
    EmitterArray,
    FrameError,
    LevelScheme,
    RotatingFrame,
    TransitionDipole,
    build_h_sys,
    rabi_from_power,
    rb87_diamond,
    single_emitter_hamiltonian,
    swap_operator,
)
from collemit.em_coupling import C_LIGHT
from collemit.system_model import RB87_TRANSITIONS, RABI_MATRIX_FACTOR, diamond_drives


def diamond_frame_and_drives(delta1=-70.0, delta2=0.0):
    return RotatingFrame.for_diamond(delta1, delta2), diamond_drives(delta1, delta2)


class TestSingleEmitter:
    def test_frame_diagonal_matches_reference(self):
        frame, drives = diamond_frame_and_drives()
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        h = single_emitter_hamiltonian(scheme, drives, frame)
        np.testing.assert_allclose(
            np.diag(h).real,
            [70.0 / 3.0, -140.0 / 3.0, 70.0 / 3.0, 0.0],
            atol=1e-12,
        )
        assert h[3, 3] == 0.0

    def test_drive_elements_carry_matrix_factor(self):
        # couplings enter as RABI_MATRIX_FACTOR * rabi, pinned by the dressed
        # closed form zeta = sqrt(d1^2 + 16 L01^2 + 16 L12^2)
        frame, drives = diamond_frame_and_drives()
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        h = single_emitter_hamiltonian(scheme, drives, frame)
        assert h[0, 1] == pytest.approx(RABI_MATRIX_FACTOR * 7.5)
        assert h[1, 2] == pytest.approx(RABI_MATRIX_FACTOR * 6.3)
        assert h[0, 2] == 0.0 and h[2, 3] == 0.0

    def test_general_dressed_energies_vary_with_delta2(self):
        frame, drives = diamond_frame_and_drives(delta2=4.0)
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        h = single_emitter_hamiltonian(scheme, drives, frame)
        assert abs(h[0, 0].real - (70.0 - 4.0) / 3.0) < 1e-12

    def test_zero_drives_leave_diagonal(self):
        frame = RotatingFrame.for_diamond(-70.0, 0.0)
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        h = single_emitter_hamiltonian(scheme, (), frame)
        assert np.abs(h - np.diag(np.diag(h))).max() == 0.0

    def test_frame_error_names_transition(self):
        frame = RotatingFrame.for_diamond(-70.0, 0.0)
        bad = (Drive(0, 1, rabi=7.5, detuning=12.34),)
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        with pytest.raises(FrameError, match=r"\(0, 1\)"):
            single_emitter_hamiltonian(scheme, bad, frame)

    def test_complex_rabi_keeps_hermiticity(self):
        frame, _ = diamond_frame_and_drives()
        drives = (
            Drive(0, 1, rabi=7.5 * np.exp(0.7j), detuning=70.0),
            Drive(1, 2, rabi=6.3 * np.exp(-1.1j), detuning=-70.0),
        )
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        h = single_emitter_hamiltonian(scheme, drives, frame)
        assert np.abs(h - h.conj().T).max() < 1e-12


class TestJointHamiltonian:
    def test_hermitian_and_exchange_symmetric(self):
        system = rb87_diamond(r12=95.0)
        h = system.hamiltonian()
        assert np.abs(h - h.conj().T).max() < 1e-12 * np.abs(h).max()
        s = swap_operator(4)
        assert np.abs(h @ s - s @ h).max() < 1e-10 * np.abs(h).max()

    def test_drive_phase_translation(self):
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        frame, drives = diamond_frame_and_drives()
        k01 = drives[0].wave_vector[2]
        base = single_emitter_hamiltonian(scheme, drives, frame, np.zeros(3))
        in_plane = single_emitter_hamiltonian(scheme, drives, frame, np.array([37.0, -4.0, 0.0]))
        np.testing.assert_array_equal(base, in_plane)
        shifted = single_emitter_hamiltonian(scheme, drives, frame, np.array([0.0, 0.0, 55.0]))
        expected = base[0, 1] * np.exp(1j * k01 * 55.0)
        assert shifted[0, 1] == pytest.approx(expected)

    def test_couplings_off_is_sum_of_singles(self):
        system = rb87_diamond(r12=120.0, couplings_on=False)
        h = system.hamiltonian()
        h1 = system.single_hamiltonian()
        eye = np.eye(4)
        expected = np.kron(h1, eye) + np.kron(eye, h1)
        np.testing.assert_allclose(h, expected, atol=1e-12)


class TestSwapOperator:
    def test_involution_and_trace(self):
        s = swap_operator(4)
        np.testing.assert_allclose(s @ s, np.eye(16), atol=1e-15)
        assert np.trace(s) == pytest.approx(4.0)

    def test_exchanges_bare_states(self):
        s = swap_operator(4)
        # |0> on emitter 1 (slow factor), |2> on emitter 0 (fast factor)
        ket = np.zeros(16)
        ket[0 * 4 + 2] = 1.0
        swapped = s @ ket
        expected = np.zeros(16)
        expected[2 * 4 + 0] = 1.0
        np.testing.assert_array_equal(swapped, expected)

    def test_two_emitters_only(self):
        with pytest.raises(ValueError):
            swap_operator(4, n_a=3)


class TestLevelScheme:
    def test_energy_wavelength_consistency_enforced(self):
        good_energy = RB87_TRANSITIONS[0].wavenumber * C_LIGHT
        LevelScheme(
            n_levels=2,
            transitions=(TransitionDipole(0, 1, rate=36.2, wavelength=780.0),),
            energies=(0.0, good_energy),
        )
        with pytest.raises(ValueError):
            LevelScheme(
                n_levels=2,
                transitions=(TransitionDipole(0, 1, rate=36.2, wavelength=780.0),),
                energies=(0.0, 1.05 * good_energy),
            )

    def test_transition_lookup(self):
        scheme = LevelScheme(n_levels=4, transitions=RB87_TRANSITIONS)
        assert scheme.transition((3, 2)).wavelength == 762.0
        with pytest.raises(KeyError):
            scheme.transition((0, 2))


class TestPreset:
    def test_geometry_perpendicular_to_beams(self):
        system = rb87_diamond(r12=150.0)
        positions = system.array.positions
        for drive in system.drives:
            k = np.asarray(drive.wave_vector)
            assert np.abs(positions @ k).max() == 0.0

    def test_orientation_classes(self):
        scheme = rb87_diamond().array.scheme
        p01 = scheme.transition((0, 1)).unit_orientation()
        p12 = scheme.transition((1, 2)).unit_orientation()
        p32 = scheme.transition((3, 2)).unit_orientation()
        p03 = scheme.transition((0, 3)).unit_orientation()
        np.testing.assert_array_equal(p01, p32)
        np.testing.assert_array_equal(p12, p03)
        assert abs(np.vdot(p01, p12)) == 0.0

    def test_rabi_from_power_reference(self):
        # 0.1 mW over a 1.1 mm spot on a 5.956 e*a0 dipole
        value = rabi_from_power(0.1, 1.1, 5.956)
        assert value == pytest.approx(134.8, abs=0.5)
