"""Dressed-state spectra, exchange-symmetry labels and adiabatic tracking.

Collective dressed states of two identical emitters separate into exchange
symmetric/antisymmetric sectors.  Along a distance sweep each state keeps the
label of the product state it connects to at large separation; continuation
follows maximum eigenvector overlap inside each symmetry sector, so true
crossings between sectors pass through while in-sector anticrossings are
followed adiabatically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system_model import DiamondSystem, rb87_diamond, swap_operator

SINGLE_STATE_NAMES = ("a", "b", "c", "d")


@dataclass
class DressedSpectrum:
    """Eigen-decomposition of one system Hamiltonian with symmetry metadata."""

    energies: np.ndarray          # ascending
    states: np.ndarray            # orthonormal columns
    symmetry: list                # per state: "symmetric" | "antisymmetric" | "mixed"
    labels: list | None = None    # per state asymptotic tag such as "bc+"
    flagged: list | None = None   # per state ambiguity marker from tracking

    @property
    def size(self) -> int:
        return self.energies.shape[0]

    def by_label(self, label: str) -> tuple:
        if self.labels is None:
            raise ValueError("spectrum carries no asymptotic labels")
        k = self.labels.index(label)
        return self.energies[k], self.states[:, k]


def _fix_gauge(states: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real-positive."""
    out = states.copy()
    for k in range(out.shape[1]):
        idx = np.argmax(np.abs(out[:, k]))
        phase = out[idx, k]
        if abs(phase) > 0:
            out[:, k] *= np.conj(phase) / abs(phase)
    return out


def diagonalize(h_sys: np.ndarray, swap: np.ndarray | None = None) -> DressedSpectrum:
    """Eigen-decompose a Hermitian system matrix and classify exchange symmetry.

    When the swap operator is supplied and commutes with the input, the
    diagonalization runs inside the symmetric and antisymmetric sectors, so
    every state carries an exact symmetry label even across degeneracies.
    """
    h_sys = np.asarray(h_sys)
    scale = max(1.0, np.abs(h_sys).max())
    defect = np.abs(h_sys - h_sys.conj().T).max()
    if defect > 1e-10 * scale:
        raise ValueError(f"input is not Hermitian (defect {defect:g})")
    exchange_symmetric = (
        swap is not None
        and np.abs(h_sys @ swap - swap @ h_sys).max() < 1e-8 * scale
    )
    if not exchange_symmetric:
        energies, states = np.linalg.eigh(h_sys)
        states = _fix_gauge(states)
        symmetry = ["mixed"] * energies.size
        if swap is not None:
            for k in range(energies.size):
                expect = np.real(states[:, k].conj() @ swap @ states[:, k])
                if expect > 1.0 - 1e-8:
                    symmetry[k] = "symmetric"
                elif expect < -1.0 + 1e-8:
                    symmetry[k] = "antisymmetric"
        return DressedSpectrum(energies=energies, states=states, symmetry=symmetry)

    sval, svec = np.linalg.eigh(swap)
    blocks = []
    for sign, tag in ((1.0, "symmetric"), (-1.0, "antisymmetric")):
        basis = svec[:, np.abs(sval - sign) < 1e-8]
        h_block = basis.conj().T @ h_sys @ basis
        e_block, v_block = np.linalg.eigh(h_block)
        vecs = basis @ v_block
        for k in range(e_block.size):
            blocks.append((e_block[k], vecs[:, k], tag))
    blocks.sort(key=lambda item: item[0])
    energies = np.array([b[0] for b in blocks])
    states = _fix_gauge(np.column_stack([b[1] for b in blocks]))
    symmetry = [b[2] for b in blocks]
    return DressedSpectrum(energies=energies, states=states, symmetry=symmetry)


def single_atom_closed_form(delta1: float, rabi01: float, rabi12: float, delta2: float = 0.0):
    """Analytic dressed states of one diamond emitter at two-photon resonance.

    Returns (energies, states, names) with names ordered (a, b, c, d):
    |a> = |3> at zero energy, |b> the superposition dark to level |1>, and
    |c>, |d> the upper/lower branch of the two-photon doublet,
        e_b = -delta1/3,  e_{c,d} = (delta1 +/- 3 zeta)/6,
        zeta = sqrt(delta1^2 + 16 rabi01^2 + 16 rabi12^2).
    """
    if delta2 != 0.0:
        raise ValueError("closed form holds on the two-photon resonance branch (delta2 = 0)")
    if rabi01 == 0.0 and rabi12 == 0.0:
        raise ValueError("closed form needs at least one nonzero Rabi amplitude")
    zeta = np.sqrt(delta1**2 + 16.0 * rabi01**2 + 16.0 * rabi12**2)
    energies = np.array([0.0, -delta1 / 3.0, (delta1 + 3.0 * zeta) / 6.0, (delta1 - 3.0 * zeta) / 6.0])
    vec_a = np.array([0.0, 0.0, 0.0, 1.0])
    vec_b = np.array([rabi12, 0.0, -rabi01, 0.0])
    vec_c = np.array([rabi01, 0.25 * (delta1 + zeta), rabi12, 0.0])
    vec_d = np.array([rabi01, 0.25 * (delta1 - zeta), rabi12, 0.0])
    states = np.column_stack([v / np.linalg.norm(v) for v in (vec_a, vec_b, vec_c, vec_d)])
    return energies, states, SINGLE_STATE_NAMES


def _single_dressed_states(system: DiamondSystem) -> dict:
    """Numerically labeled single-emitter dressed states {name: (energy, vec)}."""
    h1 = system.single_hamiltonian()
    energies, states = np.linalg.eigh(h1)
    states = _fix_gauge(states)
    out = {}
    rest = []
    for k in range(4):
        if abs(states[3, k]) > 0.99:
            out["a"] = (energies[k], states[:, k])
        else:
            rest.append(k)
    if "a" not in out or len(rest) != 3:
        raise ValueError("could not identify the decoupled cascade state")
    k_b = min(rest, key=lambda k: abs(states[1, k]))
    out["b"] = (energies[k_b], states[:, k_b])
    rest.remove(k_b)
    k_c, k_d = sorted(rest, key=lambda k: -energies[k])
    out["c"] = (energies[k_c], states[:, k_c])
    out["d"] = (energies[k_d], states[:, k_d])
    return out


def asymptotic_states(system: DiamondSystem) -> dict:
    """Symmetrized two-emitter products of single-emitter dressed states.

    Keys are tags like 'bc+' / 'bc-'; diagonal pairs only have the '+' entry.
    """
    singles = _single_dressed_states(system)
    out = {}
    for i, ni in enumerate(SINGLE_STATE_NAMES):
        for j, nj in enumerate(SINGLE_STATE_NAMES):
            if i > j:
                continue
            vi, vj = singles[ni][1], singles[nj][1]
            if i == j:
                out[f"{ni}{nj}+"] = np.kron(vi, vi)
            else:
                out[f"{ni}{nj}+"] = (np.kron(vi, vj) + np.kron(vj, vi)) / np.sqrt(2.0)
                out[f"{ni}{nj}-"] = (np.kron(vi, vj) - np.kron(vj, vi)) / np.sqrt(2.0)
    return out


AMBIGUITY_MARGIN = 1e-3


def _assign_by_overlap(reference: dict, spectrum: DressedSpectrum, sectors: dict) -> tuple:
    """Greedily map reference vectors onto spectrum columns, sector-matched."""
    labels = [None] * spectrum.size
    flagged = [False] * spectrum.size
    used = set()
    overlap = {name: np.abs(np.conj(vec) @ spectrum.states) for name, vec in reference.items()}
    order = sorted(reference, key=lambda nm: -overlap[nm].max())
    for name in order:
        ov = overlap[name].copy()
        for k in range(spectrum.size):
            if k in used or spectrum.symmetry[k] != sectors[name]:
                ov[k] = -1.0
        ranked = np.argsort(-ov)
        best = ranked[0]
        labels[best] = name
        used.add(best)
        if len(ranked) > 1 and ov[ranked[1]] >= 0 and ov[best] - ov[ranked[1]] < AMBIGUITY_MARGIN:
            flagged[best] = True
    return labels, flagged


def track_labels(spectra: list, reference: dict) -> list:
    """Propagate asymptotic labels along an ordered sweep of spectra.

    The sweep must start at the asymptotic end, where ``reference`` holds the
    constructed product states.  Each later spectrum inherits labels from its
    predecessor by maximum in-sector eigenvector overlap; assignments whose
    winning margin is below 1e-3 are flagged rather than guessed.
    """
    sectors = {name: ("symmetric" if name.endswith("+") else "antisymmetric") for name in reference}
    labeled = []
    prev = None
    for spec in spectra:
        if prev is None:
            labels, flagged = _assign_by_overlap(reference, spec, sectors)
        else:
            carried = {prev.labels[k]: prev.states[:, k] for k in range(prev.size)}
            labels, flagged = _assign_by_overlap(carried, spec, sectors)
        spec.labels = labels
        spec.flagged = flagged
        labeled.append(spec)
        prev = spec
    return labeled


def dressed_distance_sweep(
    radii=None,
    delta1: float = -70.0,
    delta2: float = 0.0,
    rabi01: float | None = None,
    rabi12: float | None = None,
    couplings_on: bool = True,
    transition_toggle: dict | None = None,
) -> list:
    """Labeled two-emitter spectra along a distance sweep (asymptotic end first).

    Default grid: 200 log-spaced separations from 2 um down to 60 nm.
    """
    if radii is None:
        radii = np.geomspace(2000.0, 60.0, 200)
    radii = np.asarray(radii, dtype=float)
    if radii[0] < radii[-1]:
        radii = radii[::-1]
    kw = {}
    if rabi01 is not None:
        kw["rabi01"] = rabi01
    if rabi12 is not None:
        kw["rabi12"] = rabi12
    swap = swap_operator(4)
    spectra = []
    reference = None
    for r in radii:
        system = rb87_diamond(r12=r, delta1=delta1, delta2=delta2,
                              couplings_on=couplings_on,
                              transition_toggle=transition_toggle, **kw)
        if reference is None:
            reference = asymptotic_states(system)
        spectra.append(diagonalize(system.hamiltonian(), swap))
    return track_labels(spectra, reference), radii
