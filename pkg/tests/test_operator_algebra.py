"""Hermitian basis construction, orthogonality and expansion round trips."""

import numpy as np
import pytest

from collemit import (
    build_collective_basis,
    build_single_basis,
    expand_operator,
    reconstruct_operator,
    site_operator,
)
from collemit.operator_algebra import BasisSizeError


class TestSingleBasis:
    def test_two_levels_gives_pauli_like_set(self):
        q = build_single_basis(2)
        np.testing.assert_array_equal(q[0], np.diag([1.0 + 0j, 0.0]))
        np.testing.assert_array_equal(q[1], np.diag([0.0, 1.0 + 0j]))
        np.testing.assert_array_equal(q[2], np.array([[0, 1], [1, 0]], dtype=complex))
        np.testing.assert_array_equal(q[3], np.array([[0, 1j], [-1j, 0]]))

    def test_four_level_counts(self):
        q = build_single_basis(4)
        assert len(q) == 16
        projectors = [m for m in q if np.count_nonzero(m) == 1]
        symmetric = [m for m in q if np.count_nonzero(m) == 2 and np.isreal(m).all()]
        antisymmetric = [m for m in q if np.count_nonzero(m) == 2 and not np.isreal(m).all()]
        assert len(projectors) == 4
        assert len(symmetric) == 6
        assert len(antisymmetric) == 6

    def test_pairwise_trace_orthogonal(self):
        q = build_single_basis(4)
        for i in range(16):
            for j in range(16):
                inner = np.trace(q[i].conj().T @ q[j])
                if i != j:
                    assert abs(inner) < 1e-15
                else:
                    assert inner.real > 0

    def test_hermitian(self):
        for m in build_single_basis(5):
            np.testing.assert_allclose(m, m.conj().T, atol=1e-15)

    def test_needs_two_levels(self):
        with pytest.raises(ValueError):
            build_single_basis(1)


@pytest.fixture(scope="module")
def basis():
    return build_collective_basis(4, 2)


class TestCollectiveBasis:
    def test_dimensions(self, basis):
        assert basis.size == 256
        assert basis.dim == 16
        assert basis.elements.shape == (256, 16, 16)

    def test_all_hermitian(self, basis):
        defect = np.abs(basis.elements - basis.elements.conj().transpose(0, 2, 1)).max()
        assert defect < 1e-12

    def test_pairwise_orthogonality(self, basis):
        gram = np.einsum("iab,jab->ij", basis.elements.conj(), basis.elements)
        off = gram - np.diag(np.diag(gram))
        assert np.abs(off).max() < 1e-12

    def test_norm_table(self, basis):
        # Tr[Q^dag Q] = 2^(number of non-projector factors)
        for k in (0, 5, 17, 115, 255):
            digits = basis.index_to_digits(k)
            expected = 2.0 ** sum(1 for d in digits if d >= basis.n_l)
            assert basis.norms[k] == pytest.approx(expected, rel=1e-12)

    def test_index_round_trip(self, basis):
        assert basis.digits_to_index((3, 7)) == 3 + 7 * 16
        assert basis.index_to_digits(115) == (3, 7)
        rng = np.random.default_rng(3)
        for k in rng.integers(0, 256, size=20):
            assert basis.digits_to_index(basis.index_to_digits(int(k))) == int(k)

    def test_size_guard(self):
        with pytest.raises(BasisSizeError):
            build_collective_basis(5, 3)  # 5^6 elements exceed the default guard

    def test_kron_structure_matches_site_embedding(self, basis):
        # element with digits (k0, 0) is q_{k0} on site 0 times projector 0 on site 1
        single = build_single_basis(4)
        k = basis.digits_to_index((5, 0))
        expected = np.kron(single[0], single[5])
        np.testing.assert_allclose(basis.elements[k], expected, atol=1e-15)

    def test_site_operator_places_factor(self):
        op = np.array([[0, 1], [0, 0]], dtype=complex)
        joint0 = site_operator(op, 0, 2, 2)
        joint1 = site_operator(op, 1, 2, 2)
        eye = np.eye(2)
        np.testing.assert_array_equal(joint0, np.kron(eye, op))
        np.testing.assert_array_equal(joint1, np.kron(op, eye))


class TestExpansion:
    def test_basis_element_maps_to_unit_vector(self, basis):
        coeffs = expand_operator(basis.elements[5], basis)
        expected = np.zeros(256)
        expected[5] = 1.0
        np.testing.assert_allclose(coeffs, expected, atol=1e-13)

    def test_identity_decomposition(self, basis):
        coeffs = expand_operator(np.eye(16, dtype=complex), basis)
        for k in range(256):
            digits = basis.index_to_digits(k)
            expected = 1.0 if all(d < basis.n_l for d in digits) else 0.0
            assert coeffs[k] == pytest.approx(expected, abs=1e-13)

    def test_round_trip_hermitian(self, basis):
        rng = np.random.default_rng(42)
        raw = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        a = raw + raw.conj().T
        coeffs = expand_operator(a, basis)
        assert np.abs(coeffs.imag).max() < 1e-12
        back = reconstruct_operator(coeffs, basis)
        assert np.abs(back - a).max() < 1e-12 * np.abs(a).max()

    def test_round_trip_general(self, basis):
        rng = np.random.default_rng(43)
        a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        back = reconstruct_operator(expand_operator(a, basis), basis)
        assert np.abs(back - a).max() < 1e-12 * np.abs(a).max()

    def test_dimension_mismatch(self, basis):
        with pytest.raises(ValueError):
            expand_operator(np.eye(8), basis)
