"""Photon-pair observables of the two-emitter cascade.

The zero-delay coincidence signal of the cascade photons splits into a
population part and an inter-emitter photon-exchange part carrying geometric
phases; both come from steady-state expectation values.  A dressed-basis
decomposition exposes which collective states feed each operator group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import StateVector, expectation
from .dressed_spectra import DressedSpectrum
from .operator_algebra import OperatorBasis, transition_operator

REALITY_TOL = 1e-10


@dataclass
class CoincidenceResult:
    """Zero-delay coincidence value and its population/exchange split."""

    g2: float
    gpp: float
    gpe: float
    parameters: dict = field(default_factory=dict)
    stale: bool = False


def _pair_ops(basis: OperatorBasis):
    n_l, n_a = basis.n_l, basis.n_a
    if n_a != 2:
        raise ValueError("coincidence observables are defined for two emitters")

    def sigma(alpha, lower, upper):
        return transition_operator(lower, upper, alpha, n_l, n_a)

    return sigma


def g2_split(w_ss: StateVector, basis: OperatorBasis, kappa23: float, kappa30: float,
             r12: float) -> tuple:
    """Population and photon-exchange parts of the coincidence signal.

    kappa23/kappa30 are the cascade transition wavenumbers (1/nm) and r12 the
    emitter separation (nm); the two-photon phase uses kappa20 = kappa23 +
    kappa30.
    """
    sigma = _pair_ops(basis)
    proj = lambda alpha, m: sigma(alpha, m, m)

    def ev(op):
        value = expectation(op, w_ss, basis)
        if isinstance(value, complex):
            raise ValueError(f"expected a real expectation, got residue {value.imag:g}")
        return value

    gpp = (
        ev(proj(0, 2))
        + ev(proj(0, 2) @ proj(1, 3))
        + ev(proj(0, 3) @ proj(1, 2))
        + ev(proj(1, 2))
    )
    kappa20 = kappa23 + kappa30
    phase23 = np.exp(1j * kappa23 * r12)
    phase20 = np.exp(1j * kappa20 * r12)
    coh23 = expectation(sigma(0, 2, 3) @ sigma(1, 3, 2), w_ss, basis)
    coh20 = expectation(sigma(0, 2, 0) @ sigma(1, 0, 2), w_ss, basis)
    gpe_c = 2.0 * (coh23 * phase23 + np.conj(coh23 * phase23)) \
        + coh20 * phase20 + np.conj(coh20 * phase20)
    if abs(np.imag(gpe_c)) > REALITY_TOL * max(1.0, abs(np.real(gpe_c))):
        raise ValueError(f"photon-exchange part has imaginary residue {np.imag(gpe_c):g}")
    return float(gpp), float(np.real(gpe_c))


def g2_coincidence(w_ss: StateVector, basis: OperatorBasis, kappa23: float, kappa30: float,
                   r12: float, residual: float | None = None,
                   residual_threshold: float = 1e-6) -> CoincidenceResult:
    """Zero-delay cascade coincidence signal from a steady expectation vector.

    The detector prefactor is not applied; values are dimensionless operator
    expectations.  A residual above the threshold marks the result stale
    instead of raising.
    """
    gpp, gpe = g2_split(w_ss, basis, kappa23, kappa30, r12)
    stale = residual is not None and residual > residual_threshold
    return CoincidenceResult(
        g2=gpp + gpe, gpp=gpp, gpe=gpe,
        parameters={"kappa23": kappa23, "kappa30": kappa30, "r12": r12},
        stale=stale,
    )


# ---------------------------------------------------------------------------
# Dressed-basis decomposition
# ---------------------------------------------------------------------------

OPERATOR_TAGS = ("2222", "2233", "2332", "2002")


def _tagged_operator(tag: str, basis: OperatorBasis) -> np.ndarray:
    """Exchange-symmetrized operator group named by its level indices."""
    sigma = _pair_ops(basis)
    if tag == "2222":
        return sigma(0, 2, 2) + sigma(1, 2, 2)
    if tag == "2233":
        return sigma(0, 2, 2) @ sigma(1, 3, 3) + sigma(0, 3, 3) @ sigma(1, 2, 2)
    if tag == "2332":
        return sigma(0, 2, 3) @ sigma(1, 3, 2) + sigma(0, 3, 2) @ sigma(1, 2, 3)
    if tag == "2002":
        return sigma(0, 2, 0) @ sigma(1, 0, 2) + sigma(0, 0, 2) @ sigma(1, 2, 0)
    raise ValueError(f"unknown operator tag {tag!r}; expected one of {OPERATOR_TAGS}")


@dataclass
class DressedContribution:
    """Diagonal dressed-basis weights of one operator group."""

    tag: str
    weights: dict  # label -> float


def dressed_decomposition(tag: str, spectrum: DressedSpectrum, basis: OperatorBasis,
                          include_offdiagonal: bool = False):
    """Per-dressed-state diagonal matrix elements of a tagged operator group.

    Requires a labeled spectrum.  With ``include_offdiagonal`` the full matrix
    in the dressed basis is returned alongside for debugging.
    """
    if spectrum.labels is None or any(lbl is None for lbl in spectrum.labels):
        raise ValueError("dressed decomposition needs a fully labeled spectrum")
    op = _tagged_operator(tag, basis)
    matrix = spectrum.states.conj().T @ op @ spectrum.states
    weights = {}
    for k, label in enumerate(spectrum.labels):
        value = matrix[k, k]
        if abs(value.imag) > REALITY_TOL * max(1.0, abs(value.real)):
            raise ValueError(f"non-real dressed weight for {label}: {value}")
        weights[label] = float(value.real)
    contribution = DressedContribution(tag=tag, weights=weights)
    if include_offdiagonal:
        return contribution, matrix
    return contribution


def zeta_rows(spectrum: DressedSpectrum, basis: OperatorBasis, delta2: float,
              tags=OPERATOR_TAGS) -> list:
    """Tabular dressed-weight rows: (tag, label, symmetry, zeta, delta2)."""
    rows = []
    for tag in tags:
        contribution = dressed_decomposition(tag, spectrum, basis)
        for k, label in enumerate(spectrum.labels):
            rows.append((tag, label, spectrum.symmetry[k],
                         contribution.weights[label], delta2))
    return rows


# ---------------------------------------------------------------------------
# Far-field intensity
# ---------------------------------------------------------------------------


def far_field_intensity(w: StateVector, basis: OperatorBasis, direction,
                        transitions, positions) -> float:
    """Dimensionless first-order intensity toward a far-field detector.

    Sums phase-weighted cross expectations <sigma_a^dag sigma_b> over emitter
    pairs for the selected transitions, with the transverse dipole projection
    p - rhat (rhat . p).  Radiated-power prefactors are left out.
    """
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (3,) or abs(np.linalg.norm(direction) - 1.0) > 1e-10:
        raise ValueError("detector direction must be a real unit 3-vector")
    positions = np.asarray(positions, dtype=float)
    n_a = positions.shape[0]
    total = 0.0 + 0.0j
    for dip in transitions:
        pol = dip.unit_orientation()
        projected = pol - direction * (direction @ pol)
        weight = float(np.real(np.vdot(projected, projected)))
        kappa = dip.wavenumber
        for alpha in range(n_a):
            for beta in range(n_a):
                sig_a = transition_operator(*dip.pair, alpha, basis.n_l, n_a)
                sig_b = transition_operator(*dip.pair, beta, basis.n_l, n_a)
                phase = np.exp(1j * kappa * (direction @ (positions[beta] - positions[alpha])))
                total += weight * phase * complex(expectation(sig_a.conj().T @ sig_b, w, basis))
    if abs(total.imag) > REALITY_TOL * max(1.0, abs(total.real)):
        raise ValueError(f"intensity has imaginary residue {total.imag:g}")
    return float(total.real)
