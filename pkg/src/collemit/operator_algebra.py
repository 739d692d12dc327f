"""Hermitian operator basis for the joint emitter Hilbert space.

A single emitter with n_l levels carries n_l^2 Hermitian matrices: the level
projectors, then symmetric and antisymmetric-imaginary pair matrices (the
generalized Pauli x/y set).  Joint-space elements are Kronecker products of
single-emitter elements, indexed mixed-radix with base n_l^2 per emitter,
emitter 0 being the fastest (rightmost) factor.  All elements are pairwise
trace-orthogonal, which makes expansion coefficients a trace projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SIZE_GUARD = 10_000


class BasisSizeError(ValueError):
    """Requested collective basis exceeds the configured size guard."""


def build_single_basis(n_l: int) -> list:
    """Return the n_l^2 Hermitian single-emitter basis matrices.

    Order: n_l diagonal projectors, then the n_l(n_l-1)/2 symmetric pair
    matrices, then the antisymmetric-imaginary ones, pairs in lexicographic
    (j, l) order with j < l.
    """
    if n_l < 2:
        raise ValueError(f"need at least two levels, got n_l={n_l}")
    mats = []
    for k in range(n_l):
        q = np.zeros((n_l, n_l), dtype=complex)
        q[k, k] = 1.0
        mats.append(q)
    pairs = [(j, l) for j in range(n_l) for l in range(j + 1, n_l)]
    for j, l in pairs:
        q = np.zeros((n_l, n_l), dtype=complex)
        q[j, l] = 1.0
        q[l, j] = 1.0
        mats.append(q)
    for j, l in pairs:
        q = np.zeros((n_l, n_l), dtype=complex)
        q[j, l] = 1j
        q[l, j] = -1j
        mats.append(q)
    return mats


@dataclass(frozen=True)
class OperatorBasis:
    """Complete trace-orthogonal Hermitian basis of the joint space."""

    n_l: int
    n_a: int
    elements: np.ndarray  # (N, n_t, n_t) complex
    norms: np.ndarray     # (N,) real, Tr[Q_k^dag Q_k]

    @property
    def size(self) -> int:
        return self.elements.shape[0]

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def index_to_digits(self, k: int) -> tuple:
        """Mixed-radix digits of a joint index, emitter 0 first."""
        base = self.n_l**2
        digits = []
        for _ in range(self.n_a):
            digits.append(k % base)
            k //= base
        return tuple(digits)

    def digits_to_index(self, digits) -> int:
        base = self.n_l**2
        k = 0
        for pos, d in enumerate(digits):
            if not 0 <= d < base:
                raise ValueError(f"digit {d} out of range for base {base}")
            k += d * base**pos
        return k


def build_collective_basis(n_l: int, n_a: int, size_guard: int = DEFAULT_SIZE_GUARD) -> OperatorBasis:
    """Kronecker-product basis spanning all operators of n_a emitters."""
    if n_a < 1:
        raise ValueError(f"need at least one emitter, got n_a={n_a}")
    n_total = n_l ** (2 * n_a)
    if n_total > size_guard:
        raise BasisSizeError(
            f"collective basis needs {n_total} elements, exceeding the guard of {size_guard}"
        )
    single = build_single_basis(n_l)
    base = n_l**2
    n_t = n_l**n_a
    elements = np.empty((n_total, n_t, n_t), dtype=complex)
    for k in range(n_total):
        digits = []
        kk = k
        for _ in range(n_a):
            digits.append(kk % base)
            kk //= base
        # emitter 0 is digits[0] and sits in the rightmost factor
        mat = single[digits[-1]]
        for d in reversed(digits[:-1]):
            mat = np.kron(mat, single[d])
        elements[k] = mat
    norms = np.einsum("kab,kab->k", elements.conj(), elements).real
    return OperatorBasis(n_l=n_l, n_a=n_a, elements=elements, norms=norms)


def site_operator(op: np.ndarray, site: int, n_l: int, n_a: int) -> np.ndarray:
    """Embed a single-emitter operator on the joint space.

    Site 0 is the rightmost Kronecker factor, matching the basis ordering.
    """
    if not 0 <= site < n_a:
        raise ValueError(f"site {site} out of range for {n_a} emitters")
    mat = np.array([[1.0 + 0j]])
    for pos in reversed(range(n_a)):
        factor = op if pos == site else np.eye(n_l, dtype=complex)
        mat = np.kron(mat, factor)
    return mat


def transition_operator(lower: int, upper: int, site: int, n_l: int, n_a: int) -> np.ndarray:
    """Joint-space lowering operator |lower><upper| acting on one emitter."""
    sig = np.zeros((n_l, n_l), dtype=complex)
    sig[lower, upper] = 1.0
    return site_operator(sig, site, n_l, n_a)


def expand_operator(a: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Coefficients c with a = sum_k c_k Q_k, via trace projection."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {a.shape} does not match basis dimension {basis.dim}")
    return np.einsum("kab,ab->k", basis.elements.conj(), a) / basis.norms


def reconstruct_operator(coeffs: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Inverse of expand_operator."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (basis.size,):
        raise ValueError(f"coefficient length {coeffs.shape} does not match basis size {basis.size}")
    return np.einsum("k,kab->ab", coeffs, basis.elements)
