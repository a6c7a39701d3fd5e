"""Trajectory generation for the three model classes: closed bipartite
evolution, driven Lindblad dynamics, and driven Redfield dynamics.

Integration is fixed-step RK4 on the vectorized density matrix, with automatic
substep refinement until the per-interval trace drift is below 1e-8 (both
generators are trace-annihilating by construction, so this normally never
refines; it is a safety net). Trace renormalization is applied after every
substep and the correction magnitudes are logged.

The Redfield generator is built in the instantaneous (adiabatic) eigenbasis of
the driven Hamiltonian: bath correlation half-Fourier transforms reduce, in
the wide-band limit, to rate constants Gamma * (occupation factor) at each
instantaneous Bohr frequency. Lamb-shift (principal-value) parts are dropped;
non-secular terms are kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qcore
from .errors import DimensionMismatchError, IntegrationAccuracyError, ValidationError
from .qcore import DensityMatrix, HermitianObservable

TRACE_DRIFT_PER_STEP = 1e-8
LINDBLAD_EIG_FLOOR = -1e-6
REDFIELD_WARN_FLOOR = -1e-4
REDFIELD_FAIL_FLOOR = -5e-2
BOSE_ZERO_TOL = 1e-9
_MAX_SUBSTEP_DOUBLINGS = 12


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t1: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValidationError("time grid needs at least 2 points")
        if not self.t1 > self.t0:
            raise ValidationError(f"t1 must exceed t0, got [{self.t0}, {self.t1}]")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n_points)

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / (self.n_points - 1)


@dataclass(frozen=True)
class DrivenHamiltonian:
    """Time-dependent Hamiltonian: an evaluator plus a serializable descriptor."""

    dim: int
    evaluator: Callable[[float], np.ndarray]
    descriptor: dict

    def __call__(self, t: float) -> np.ndarray:
        h = np.asarray(self.evaluator(t), dtype=complex)
        return 0.5 * (h + h.conj().T)

    def observable(self, t: float, label: str | None = None) -> HermitianObservable:
        name = label or self.descriptor.get("protocol", "H")
        return HermitianObservable(name, self(t))


@dataclass(frozen=True)
class JumpChannel:
    """A Lindblad channel: nonnegative rate and a (possibly time-dependent) operator."""

    rate: float
    operator: Callable[[float], np.ndarray]

    def __post_init__(self):
        if self.rate < 0:
            raise ValidationError(f"jump rate must be nonnegative, got {self.rate}")


@dataclass(frozen=True)
class BathSpectrum:
    """Flat (wide-band) bath: hybridization, temperature and, for fermionic
    leads, a chemical potential."""

    statistics: str                  # "fermionic" | "bosonic"
    gamma: float
    temperature: float
    mu: float = 0.0

    def __post_init__(self):
        if self.statistics not in ("fermionic", "bosonic"):
            raise ValidationError(f"unknown bath statistics {self.statistics!r}")
        if self.gamma < 0 or not np.isfinite(self.gamma):
            raise ValidationError(f"hybridization must be finite and >= 0, got {self.gamma}")
        if self.temperature <= 0 or not np.isfinite(self.temperature):
            raise ValidationError(f"temperature must be positive, got {self.temperature}")

    def fermi(self, w):
        x = np.clip((np.asarray(w, dtype=float) - self.mu) / self.temperature, -700, 700)
        return 1.0 / (1.0 + np.exp(x))

    def bose(self, w):
        """n_B(w) for w > 0."""
        x = np.clip(np.asarray(w, dtype=float) / self.temperature, 1e-300, 700)
        return 1.0 / np.expm1(x)


@dataclass(frozen=True)
class Coupling:
    """One system-bath coupling term.

    kind 'annihilation'/'creation' are the two directions of a fermionic
    tunneling term (operator d_v resp. d_v^dagger); 'displacement' is a
    Hermitian coupling to a bosonic displacement bath.
    """

    operator: np.ndarray
    bath: BathSpectrum
    kind: str                         # "annihilation" | "creation" | "displacement"

    def __post_init__(self):
        if self.kind not in ("annihilation", "creation", "displacement"):
            raise ValidationError(f"unknown coupling kind {self.kind!r}")
        op = np.asarray(self.operator, dtype=complex)
        fermionic = self.kind in ("annihilation", "creation")
        if fermionic != (self.bath.statistics == "fermionic"):
            raise ValidationError(f"coupling kind {self.kind!r} incompatible with "
                                  f"{self.bath.statistics} bath")
        if self.kind == "displacement":
            qcore.require_hermitian(op, what="displacement coupling operator")
        object.__setattr__(self, "operator", op)


@dataclass(frozen=True)
class RedfieldModel:
    hamiltonian: DrivenHamiltonian
    couplings: tuple[Coupling, ...]

    def __post_init__(self):
        d = self.hamiltonian.dim
        for c in self.couplings:
            if c.operator.shape != (d, d):
                raise DimensionMismatchError(
                    f"coupling operator shape {c.operator.shape} != Hamiltonian dim {d}")
        object.__setattr__(self, "couplings", tuple(self.couplings))


@dataclass
class Trajectory:
    """A time grid, the states along it, and derived per-point scalar channels."""

    grid: TimeGrid
    states: list[np.ndarray]
    channels: dict[str, np.ndarray] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.states) != self.grid.n_points:
            raise ValidationError(
                f"{len(self.states)} states for {self.grid.n_points} grid points")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def state(self, k: int, eig_floor: float = qcore.EIG_FLOOR) -> DensityMatrix:
        return DensityMatrix(self.states[k], eig_floor=eig_floor)

    def min_eigenvalues(self) -> np.ndarray:
        return np.array([np.linalg.eigvalsh(s)[0] for s in self.states])

    def sanitized(self) -> tuple["Trajectory", float]:
        """Clamp negative eigenvalues to zero and renormalize each state.

        Returns the cleaned trajectory and the largest clamp magnitude, which
        callers must log: silent clamping would corrupt bound verification.
        """
        cleaned = []
        max_clamp = 0.0
        for s in self.states:
            w, v = np.linalg.eigh(0.5 * (s + s.conj().T))
            clamp = max(0.0, float(-w.min()))
            max_clamp = max(max_clamp, clamp)
            w = np.maximum(w, 0.0)
            w /= w.sum()
            m = (v * w) @ v.conj().T
            cleaned.append(0.5 * (m + m.conj().T))
        diag = dict(self.diagnostics)
        diag["positivity_clamp_max"] = max_clamp
        return Trajectory(self.grid, cleaned, dict(self.channels), diag), max_clamp


def evolve_closed(H: HermitianObservable, rho0: DensityMatrix, grid: TimeGrid) -> Trajectory:
    """Unitary evolution under a time-independent Hamiltonian, exact via
    eigendecomposition (no step error)."""
    h = qcore.as_matrix(H)
    r0 = qcore.as_matrix(rho0)
    if h.shape != r0.shape:
        raise DimensionMismatchError(
            f"Hamiltonian dim {h.shape[0]} != state dim {r0.shape[0]}")
    spec = qcore.eigh(h)
    v = spec.eigenvectors
    r0_eig = v.conj().T @ r0 @ v
    states = []
    for t in grid.times:
        phases = np.exp(-1j * spec.eigenvalues * (t - grid.t0))
        rt = phases[:, None] * r0_eig * phases.conj()[None, :]
        m = v @ rt @ v.conj().T
        states.append(0.5 * (m + m.conj().T))
    return Trajectory(grid, states, diagnostics={"integrator": "exact-unitary"})


def _rk4_interval(apply_rhs, rho, t, dt, n_sub):
    """RK4 substeps across one grid interval with trace renormalization.

    Returns (rho_end, total trace correction magnitude)."""
    correction = 0.0
    h = dt / n_sub
    for k in range(n_sub):
        tk = t + k * h
        k1 = apply_rhs(tk, rho)
        k2 = apply_rhs(tk + 0.5 * h, rho + 0.5 * h * k1)
        k3 = apply_rhs(tk + 0.5 * h, rho + 0.5 * h * k2)
        k4 = apply_rhs(tk + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        tr = rho.trace().real
        correction += abs(tr - 1.0)
        rho = rho / tr
    return rho, correction


def _integrate(apply_rhs, rho0, grid, substeps, eig_warn, eig_fail, warn_label):
    """Shared fixed-step RK4 driver with substep refinement and positivity policy."""
    rho = qcore.as_matrix(rho0).copy()
    states = [rho.copy()]
    times = grid.times
    total_correction = 0.0
    max_step_correction = 0.0
    warnings = []
    n_sub = substeps
    for i in range(grid.n_points - 1):
        dt = times[i + 1] - times[i]
        for attempt in range(_MAX_SUBSTEP_DOUBLINGS + 1):
            trial, corr = _rk4_interval(apply_rhs, rho, times[i], dt, n_sub)
            if corr <= TRACE_DRIFT_PER_STEP * n_sub or attempt == _MAX_SUBSTEP_DOUBLINGS:
                break
            n_sub *= 2
        rho = trial
        total_correction += corr
        max_step_correction = max(max_step_correction, corr)
        wmin = float(np.linalg.eigvalsh(rho)[0])
        if wmin < eig_fail:
            raise IntegrationAccuracyError(
                f"state eigenvalue {wmin:.3e} below {eig_fail:.0e} at t={times[i + 1]:.6g}; "
                "use a finer grid")
        if wmin < eig_warn:
            warnings.append((float(times[i + 1]), wmin))
        states.append(rho.copy())
    diagnostics = {
        "integrator": "rk4",
        "substeps_per_interval": n_sub,
        "trace_correction_total": total_correction,
        "trace_correction_max_step": max_step_correction,
        "positivity_warnings": warnings,
        "warn_label": warn_label,
    }
    return Trajectory(grid, states, diagnostics=diagnostics)


def evolve_lindblad(
    H: DrivenHamiltonian,
    channels: list[JumpChannel],
    rho0: DensityMatrix,
    grid: TimeGrid,
    substeps: int = 4,
) -> Trajectory:
    """Integrate drho/dt = -i[H(t), rho] + sum_mu gamma_mu D[L_mu(t)] rho."""
    r0 = qcore.as_matrix(rho0)
    if r0.shape[0] != H.dim:
        raise DimensionMismatchError(f"state dim {r0.shape[0]} != Hamiltonian dim {H.dim}")

    def rhs(t, rho):
        h = H(t)
        out = -1j * (h @ rho - rho @ h)
        for ch in channels:
            if ch.rate == 0.0:
                continue
            L = np.asarray(ch.operator(t), dtype=complex)
            LdL = L.conj().T @ L
            out += ch.rate * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
        return out

    return _integrate(rhs, r0, grid, substeps,
                      eig_warn=LINDBLAD_EIG_FLOOR, eig_fail=LINDBLAD_EIG_FLOOR,
                      warn_label="lindblad-positivity")


def erasure_model(eps0: float, eps_tau: float, tau: float, gamma1: float,
                  gamma2: float, T_E: float) -> tuple[DrivenHamiltonian, list[JumpChannel]]:
    """Driven-qubit erasure: swept gap and angle, with thermal jump operators
    built from the instantaneous eigenbasis.

    H(t) = (eps(t)/2)(cos theta sigma_z + sin theta sigma_x),
    eps(t) = eps0 + (eps_tau - eps0) sin^2(pi t / 2 tau), theta(t) = pi (t/tau - 1);
    L_1 = sqrt(eps (N_E + 1)) |0_t><1_t|, L_2 = sqrt(eps N_E) |1_t><0_t| with
    N_E = 1/(exp(eps/T_E) - 1).
    """
    if tau <= 0:
        raise ValidationError(f"protocol duration must be positive, got {tau}")
    if T_E <= 0:
        raise ValidationError(f"bath temperature must be positive, got {T_E}")

    def eps(t):
        return eps0 + (eps_tau - eps0) * math.sin(math.pi * t / (2 * tau)) ** 2

    def theta(t):
        return math.pi * (t / tau - 1.0)

    def h_of_t(t):
        return 0.5 * eps(t) * (math.cos(theta(t)) * qcore.PAULI_Z
                               + math.sin(theta(t)) * qcore.PAULI_X)

    H = DrivenHamiltonian(
        dim=2, evaluator=h_of_t,
        descriptor={"protocol": "erasure", "eps0": eps0, "eps_tau": eps_tau,
                    "tau": tau, "T_E": T_E})

    def eigenpair(t):
        spec = qcore.eigh(h_of_t(t))
        ground = spec.eigenvectors[:, 0]
        excited = spec.eigenvectors[:, 1]
        return ground, excited

    def n_bath(t):
        x = eps(t) / T_E
        return 1.0 / math.expm1(min(x, 700.0))

    def lower(t):
        g, e = eigenpair(t)
        return math.sqrt(eps(t) * (n_bath(t) + 1.0)) * np.outer(g, e.conj())

    def raiser(t):
        g, e = eigenpair(t)
        return math.sqrt(eps(t) * n_bath(t)) * np.outer(e, g.conj())

    channels = [JumpChannel(gamma1, lower), JumpChannel(gamma2, raiser)]
    return H, channels


def _fermionic_halfrates(bath: BathSpectrum, omega: np.ndarray, kind: str):
    """Half-Fourier rate factors entering Lambda and Lambda' for a tunneling term."""
    if kind == "creation":
        lam = 0.5 * bath.gamma * (1.0 - bath.fermi(-omega))
        lam_p = 0.5 * bath.gamma * bath.fermi(-omega)
    else:
        lam = 0.5 * bath.gamma * bath.fermi(omega)
        lam_p = 0.5 * bath.gamma * (1.0 - bath.fermi(omega))
    return lam, lam_p


def _bosonic_rate(bath: BathSpectrum, omega: np.ndarray) -> np.ndarray:
    """Emission/absorption rate Gamma*(1 + n_B) / Gamma*n_B at Bohr frequency
    omega; the |omega| -> 0 limit is the Rayleigh-Jeans value Gamma*T."""
    omega = np.asarray(omega, dtype=float)
    out = np.empty_like(omega)
    pos = omega > BOSE_ZERO_TOL
    neg = omega < -BOSE_ZERO_TOL
    zero = ~(pos | neg)
    out[pos] = bath.gamma * (1.0 + bath.bose(omega[pos]))
    out[neg] = bath.gamma * bath.bose(-omega[neg])
    out[zero] = bath.gamma * bath.temperature
    return out


def redfield_lambdas(model: RedfieldModel, t: float):
    """Instantaneous-eigenbasis Lambda operators for every coupling.

    Returns (H(t), [(S, Lambda, Lambda'), ...]) in the original basis; the
    dissipator is sum over terms of [Lambda rho, S] + [S, rho Lambda']."""
    h = model.hamiltonian(t)
    spec = qcore.eigh(h)
    v = spec.eigenvectors
    omega = spec.eigenvalues[:, None] - spec.eigenvalues[None, :]   # w_ab = E_a - E_b
    terms = []
    for c in model.couplings:
        s_eig = v.conj().T @ c.operator @ v
        sd_eig = s_eig.conj().T
        if c.kind == "displacement":
            lam_rate = 0.5 * _bosonic_rate(c.bath, -omega)
            lam_p_rate = 0.5 * _bosonic_rate(c.bath, omega)
        else:
            lam_rate, lam_p_rate = _fermionic_halfrates(c.bath, omega, c.kind)
        lam = v @ (sd_eig * lam_rate) @ v.conj().T
        lam_p = v @ (sd_eig * lam_p_rate) @ v.conj().T
        terms.append((c.operator, lam, lam_p))
    return h, terms


def evolve_redfield(model: RedfieldModel, rho0: DensityMatrix, grid: TimeGrid,
                    substeps: int = 4) -> Trajectory:
    """Integrate the Redfield master equation in the adiabatic eigenbasis.

    Redfield is not completely positive: eigenvalues below -1e-4 are collected
    as warnings, below -5e-2 the run aborts. Callers computing entropies must
    use Trajectory.sanitized() and log the clamp magnitude.
    """
    r0 = qcore.as_matrix(rho0)
    if r0.shape[0] != model.hamiltonian.dim:
        raise DimensionMismatchError(
            f"state dim {r0.shape[0]} != model dim {model.hamiltonian.dim}")

    def rhs(t, rho):
        h, terms = redfield_lambdas(model, t)
        out = -1j * (h @ rho - rho @ h)
        for s, lam, lam_p in terms:
            lr = lam @ rho
            rl = rho @ lam_p
            out += lr @ s - s @ lr + s @ rl - rl @ s
        return out

    return _integrate(rhs, r0, grid, substeps,
                      eig_warn=REDFIELD_WARN_FLOOR, eig_fail=REDFIELD_FAIL_FLOOR,
                      warn_label="redfield-positivity")


def generator_matrix(apply_rhs, dim: int, t: float = 0.0) -> np.ndarray:
    """Dense matrix of a superoperator rho -> apply_rhs(t, rho) acting on
    column-stacked rho; used for steady-state solves and trace-annihilation checks."""
    G = np.zeros((dim * dim, dim * dim), dtype=complex)
    for j in range(dim * dim):
        basis = np.zeros((dim, dim), dtype=complex)
        basis[j % dim, j // dim] = 1.0
        G[:, j] = apply_rhs(t, basis).reshape(-1, order="F")
    return G


def redfield_generator_matrix(model: RedfieldModel, t: float) -> np.ndarray:
    """Dense Redfield Liouvillian at time t (column-stacking convention)."""
    h, terms = redfield_lambdas(model, t)

    def rhs(_t, rho):
        out = -1j * (h @ rho - rho @ h)
        for s, lam, lam_p in terms:
            lr = lam @ rho
            rl = rho @ lam_p
            out += lr @ s - s @ lr + s @ rl - rl @ s
        return out

    return generator_matrix(rhs, model.hamiltonian.dim, t)


def _jordan_wigner_pair() -> tuple[np.ndarray, np.ndarray]:
    """Annihilation operators (d_L, d_R) on the 4-dim two-site Fock space
    ordered {|00>, |01>, |10>, |11>} with index 2 n_L + n_R."""
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    parity = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    d_left = np.kron(a, eye)
    d_right = np.kron(parity, a)
    return d_left, d_right


def dqd_model(params: dict) -> RedfieldModel:
    """Driven double quantum dot coupled to two fermionic leads and a bosonic
    (phonon) displacement bath.

    H(t) = sum_i eps_i(t) d_i^dag d_i + delta (d_L^dag d_R + h.c.) with
    eps_L(t) = eps_L0 + eps_Ltau sin(Omega t),
    eps_R(t) = eps_R0 + eps_Rtau sin(Omega t + phi).
    """
    required = ["mu_L", "mu_R", "Omega", "eps_L0", "eps_R0", "eps_Ltau", "eps_Rtau",
                "phi", "Gamma_L", "Gamma_R", "Gamma_ph", "delta",
                "T_L", "T_R", "T_ph"]
    missing = [k for k in required if k not in params]
    if missing:
        raise ValidationError(f"dqd model missing parameters: {missing}")
    p = {k: float(params[k]) for k in required}
    if not all(np.isfinite(v) for v in p.values()):
        raise ValidationError("dqd model parameters must be finite")

    d_left, d_right = _jordan_wigner_pair()
    n_left = d_left.conj().T @ d_left
    n_right = d_right.conj().T @ d_right
    hop = d_left.conj().T @ d_right
    hop = hop + hop.conj().T

    def h_of_t(t):
        eps_l = p["eps_L0"] + p["eps_Ltau"] * math.sin(p["Omega"] * t)
        eps_r = p["eps_R0"] + p["eps_Rtau"] * math.sin(p["Omega"] * t + p["phi"])
        return eps_l * n_left + eps_r * n_right + p["delta"] * hop

    H = DrivenHamiltonian(dim=4, evaluator=h_of_t,
                          descriptor={"protocol": "dqd", **p})
    left = BathSpectrum("fermionic", p["Gamma_L"], p["T_L"], p["mu_L"])
    right = BathSpectrum("fermionic", p["Gamma_R"], p["T_R"], p["mu_R"])
    phonon = BathSpectrum("bosonic", p["Gamma_ph"], p["T_ph"])
    couplings = (
        Coupling(d_left, left, "annihilation"),
        Coupling(d_left.conj().T, left, "creation"),
        Coupling(d_right, right, "annihilation"),
        Coupling(d_right.conj().T, right, "creation"),
        Coupling(hop, phonon, "displacement"),
    )
    return RedfieldModel(H, couplings)
