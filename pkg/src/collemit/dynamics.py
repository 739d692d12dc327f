"""Dissipative dynamics in the Hermitian operator basis.

Heisenberg-picture operators obey a linear system dw/dt = Lam w once expanded
in a trace-orthogonal basis; Lam is real because the basis is Hermitian and
the generator preserves Hermiticity.  Everything here is cross-checked by an
independent Schroedinger-picture density-matrix propagation that shares no
assembly code with the generator route.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, null_space

from .em_coupling import CouplingTensors
from .operator_algebra import OperatorBasis, expand_operator, transition_operator

#: converts (1e6 rad/s) * (ns) products to dimensionless phase
NS = 1e-3

GENERATOR_IMAG_TOL = 1e-8
_GENERATOR_CACHE: dict = {}
_GENERATOR_CACHE_LIMIT = 64


class GeneratorError(ValueError):
    """Generator assembly produced non-real entries."""


class DegenerateSteadyStateError(ValueError):
    """More than one stationary direction is compatible with the dynamics."""

    def __init__(self, dimension: int):
        super().__init__(f"stationary subspace has dimension {dimension}")
        self.dimension = dimension


def damping_channels(tensors: CouplingTensors, n_l: int, n_a: int) -> list:
    """Flatten the damping tensor into (rate, sigma_a, sigma_b) triples.

    Each triple contributes rate/2 * (2 sigma_a^dag Q sigma_b
    - {sigma_a^dag sigma_b, Q}) to the Heisenberg dissipator.
    """
    channels = []
    for (alpha, beta, pair_a, pair_b), rate in tensors.gamma.items():
        if rate == 0.0:
            continue
        sig_a = transition_operator(*pair_a, alpha, n_l, n_a)
        sig_b = transition_operator(*pair_b, beta, n_l, n_a)
        channels.append((rate, sig_a, sig_b))
    return channels


def apply_dissipator(q: np.ndarray, channels) -> np.ndarray:
    """Heisenberg-form damping superoperator acting on one operator."""
    q = np.asarray(q, dtype=complex)
    out = np.zeros_like(q)
    for rate, sig_a, sig_b in channels:
        ad = sig_a.conj().T
        adb = ad @ sig_b
        out += 0.5 * rate * (2.0 * ad @ q @ sig_b - adb @ q - q @ adb)
    return out


def apply_generator(q: np.ndarray, h_sys: np.ndarray, channels) -> np.ndarray:
    """Full Heisenberg derivative i[H, Q] + dissipator."""
    return 1j * (h_sys @ q - q @ h_sys) + apply_dissipator(q, channels)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Real matrix Lam with dw_i/dt = sum_j Lam[i, j] w_j."""

    matrix: np.ndarray
    basis: OperatorBasis
    build_key: str


def _build_key(h_sys: np.ndarray, channels, basis: OperatorBasis) -> str:
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(h_sys).tobytes())
    for rate, sig_a, sig_b in channels:
        digest.update(np.float64(rate).tobytes())
        digest.update(np.ascontiguousarray(sig_a).tobytes())
        digest.update(np.ascontiguousarray(sig_b).tobytes())
    digest.update(f"{basis.n_l}:{basis.n_a}:{id(basis)}".encode())
    return digest.hexdigest()


def build_generator(h_sys: np.ndarray, channels, basis: OperatorBasis,
                    use_cache: bool = True) -> GeneratorMatrix:
    """Project the Heisenberg generator onto the operator basis.

    Lam[i, j] = Tr[Q_j^dag (i[H, Q_i] + D(Q_i))] / Tr[Q_j^dag Q_j]; the
    normalization keeps the projection exact for non-uniform basis norms.
    """
    h_sys = np.asarray(h_sys, dtype=complex)
    key = _build_key(h_sys, channels, basis)
    if use_cache and key in _GENERATOR_CACHE:
        return _GENERATOR_CACHE[key]
    qs = basis.elements
    derivs = 1j * (np.matmul(h_sys, qs) - np.matmul(qs, h_sys))
    for rate, sig_a, sig_b in channels:
        ad = sig_a.conj().T
        adb = ad @ sig_b
        derivs += 0.5 * rate * (
            2.0 * np.matmul(np.matmul(ad, qs), sig_b)
            - np.matmul(adb, qs)
            - np.matmul(qs, adb)
        )
    flat_q = qs.conj().reshape(basis.size, -1)
    flat_d = derivs.reshape(basis.size, -1)
    lam = (flat_q @ flat_d.T).T / basis.norms[None, :]
    imag_residue = np.abs(lam.imag).max()
    if imag_residue > GENERATOR_IMAG_TOL:
        raise GeneratorError(
            f"generator has imaginary residue {imag_residue:g}; "
            "check frame validity and Hermiticity of the inputs"
        )
    gen = GeneratorMatrix(matrix=lam.real, basis=basis, build_key=key)
    if use_cache:
        if len(_GENERATOR_CACHE) >= _GENERATOR_CACHE_LIMIT:
            _GENERATOR_CACHE.pop(next(iter(_GENERATOR_CACHE)))
        _GENERATOR_CACHE[key] = gen
    return gen


@dataclass
class StateVector:
    """Expectation values of every basis element at one instant."""

    w: np.ndarray
    time: float  # ns


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, N)

    def at(self, index: int) -> StateVector:
        return StateVector(w=self.states[index], time=float(self.times[index]))

    @property
    def final(self) -> StateVector:
        return self.at(-1)


def initial_state(basis: OperatorBasis, level: int = 0) -> StateVector:
    """Product initial state with every emitter in the given bare level."""
    idx = 0
    stride = 1
    for _ in range(basis.n_a):
        idx += level * stride  # joint bare index of |level, level, ...>
        stride *= basis.n_l
    w = basis.elements[:, idx, idx].real.copy()
    return StateVector(w=w, time=0.0)


def integrate(gen: GeneratorMatrix, w0: StateVector, t_final: float,
              reltol: float = 1e-9, abstol: float = 1e-12,
              method: str = "adaptive", n_samples: int = 50) -> Trajectory:
    """Propagate dw/dt = Lam w from w0 to t_final (ns).

    method "adaptive" uses an embedded Runge-Kutta stepper with the given
    tolerances; "expm" applies the exact matrix-exponential propagator on the
    same sample grid.  Both are first-class and must agree.
    """
    lam = gen.matrix * NS  # per-ns rates
    times = np.linspace(w0.time, t_final, n_samples)
    if method == "expm":
        states = np.empty((n_samples, w0.w.size))
        step = expm(lam * (times[1] - times[0])) if n_samples > 1 else None
        states[0] = w0.w
        for k in range(1, n_samples):
            states[k] = step @ states[k - 1]
        return Trajectory(times=times, states=states)
    if method != "adaptive":
        raise ValueError(f"unknown integrator {method!r}")
    sol = solve_ivp(
        lambda _, w: lam @ w, (w0.time, t_final), w0.w,
        method="DOP853", rtol=reltol, atol=abstol, t_eval=times,
    )
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    return Trajectory(times=sol.t, states=sol.y.T)


def residual(gen: GeneratorMatrix, state: StateVector) -> float:
    """Max-norm time derivative of the expectation vector (per us)."""
    return float(np.abs(gen.matrix @ state.w).max())


def integrate_to_steady_state(gen: GeneratorMatrix, w0: StateVector,
                              t_min: float = 800.0, rel_residual: float = 1e-6,
                              t_max: float = 65536.0) -> StateVector:
    """March with the exact propagator until the dual steady criterion holds.

    The state is accepted once t >= t_min and the generator residual has
    dropped below ``rel_residual`` times its initial value.
    """
    ref = max(residual(gen, w0), 1e-300)
    t, w = w0.time, w0.w.copy()
    step = t_min if t_min > 0 else 100.0
    prop = expm(gen.matrix * NS * step)
    while t < t_max:
        w = prop @ w
        t += step
        if t >= t_min and residual(gen, StateVector(w=w, time=t)) < rel_residual * ref:
            return StateVector(w=w, time=t)
    raise RuntimeError(f"no steady state below residual {rel_residual:g} before {t_max} ns")


def identity_functional(basis: OperatorBasis) -> np.ndarray:
    """Coefficients c with <identity> = c . w (total population)."""
    eye = np.eye(basis.dim, dtype=complex)
    coeffs = expand_operator(eye, basis)
    return coeffs.real


def steady_state(gen: GeneratorMatrix, w0: StateVector, rcond: float = 1e-9) -> StateVector:
    """Stationary vector with conserved functionals matching the initial state.

    Solves Lam w = 0 and fixes the free coefficients by the left null space
    (the conserved linear functionals).  Raises DegenerateSteadyStateError
    when the constraints do not single out one direction.
    """
    lam = gen.matrix
    u, s, vh = np.linalg.svd(lam)
    tol = rcond * s.max() if s.size else 0.0
    null_mask = s <= tol
    right = vh[null_mask].T          # null space of lam
    left = u[:, null_mask]           # null space of lam.T
    if right.shape[1] == 0:
        raise DegenerateSteadyStateError(0)
    constraints = left.T @ right          # (n_left, n_right)
    targets = left.T @ w0.w
    sol, residuals_, rank, _ = np.linalg.lstsq(constraints, targets, rcond=None)
    if rank < right.shape[1]:
        raise DegenerateSteadyStateError(right.shape[1])
    w_star = right @ sol
    return StateVector(w=w_star, time=np.inf)


def expectation(a: np.ndarray, state: StateVector, basis: OperatorBasis):
    """Expectation value of an arbitrary operator from the state vector."""
    coeffs = expand_operator(a, basis)
    value = complex(coeffs @ state.w)
    if abs(value.imag) < 1e-10 * max(1.0, abs(value.real)):
        return value.real
    return value


def expectation_series(traj: Trajectory, operators: dict, basis: OperatorBasis) -> list:
    """Tabular time series of selected expectation values.

    ``operators`` maps column names to joint-space matrices; rows are
    (time_ns, value_0, value_1, ...) in the given column order.
    """
    coeff_rows = {name: expand_operator(op, basis) for name, op in operators.items()}
    rows = []
    for k in range(traj.times.size):
        w = traj.states[k]
        values = []
        for name in operators:
            value = complex(coeff_rows[name] @ w)
            values.append(value.real if abs(value.imag) < 1e-10 else value)
        rows.append((float(traj.times[k]), *values))
    return rows


# ---------------------------------------------------------------------------
# Independent density-matrix oracle (Schroedinger picture)
# ---------------------------------------------------------------------------

ORACLE_DIM_GUARD = 64


def _check_oracle_dim(dim: int) -> None:
    if dim > ORACLE_DIM_GUARD:
        raise ValueError(f"oracle supports dimensions up to {ORACLE_DIM_GUARD}, got {dim}")


def liouvillian_matrix(h_sys: np.ndarray, channels) -> np.ndarray:
    """Schroedinger-picture superoperator on row-major vectorized densities."""
    h_sys = np.asarray(h_sys, dtype=complex)
    dim = h_sys.shape[0]
    _check_oracle_dim(dim)
    eye = np.eye(dim)
    liou = -1j * (np.kron(h_sys, eye) - np.kron(eye, h_sys.T))
    for rate, sig_a, sig_b in channels:
        ad = sig_a.conj().T
        adb = ad @ sig_b
        liou += 0.5 * rate * (
            2.0 * np.kron(sig_b, ad.T)
            - np.kron(adb, eye)
            - np.kron(eye, adb.T)
        )
    return liou


def evolve_density_matrix(h_sys: np.ndarray, channels, rho0: np.ndarray, t: float) -> np.ndarray:
    """Propagate a density matrix for t nanoseconds."""
    dim = rho0.shape[0]
    _check_oracle_dim(dim)
    liou = liouvillian_matrix(h_sys, channels)
    vec = expm(liou * (t * NS)) @ rho0.reshape(-1)
    rho = vec.reshape(dim, dim)
    return 0.5 * (rho + rho.conj().T)


def stationary_density_matrix(h_sys: np.ndarray, channels, rcond: float = 1e-9) -> np.ndarray:
    """Trace-one stationary density matrix from the superoperator null space."""
    dim = h_sys.shape[0]
    _check_oracle_dim(dim)
    liou = liouvillian_matrix(h_sys, channels)
    ns = null_space(liou, rcond=rcond)
    if ns.shape[1] == 0:
        raise DegenerateSteadyStateError(0)
    if ns.shape[1] > 1:
        raise DegenerateSteadyStateError(ns.shape[1])
    rho = ns[:, 0].reshape(dim, dim)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def state_vector_from_density(rho: np.ndarray, basis: OperatorBasis, time: float = np.inf) -> StateVector:
    """Expectation vector w_i = Tr[Q_i rho] of a given density matrix."""
    w = np.einsum("kab,ba->k", basis.elements, np.asarray(rho, dtype=complex))
    return StateVector(w=w.real, time=time)
