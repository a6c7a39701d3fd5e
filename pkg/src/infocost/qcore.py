"""Dense complex linear algebra and quantum-information primitives.

Everything here operates on small (dim <= ~64) dense complex matrices. Matrix
functions (exp, log) go through Hermitian eigendecomposition -- the eigenbasis
is needed anyway for entropies, and at these dimensions nothing fancier pays
off. Units are k_B = hbar = 1 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, SupportViolationError, ValidationError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-9
# Eigenvalues below this are treated as exact zeros inside logs.
LOG_CLAMP = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def as_matrix(obj) -> np.ndarray:
    """Unwrap HermitianObservable / DensityMatrix / array-like to a complex 2-d array."""
    if hasattr(obj, "matrix"):
        obj = obj.matrix
    a = np.asarray(obj, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValidationError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(a.view(float))):
        raise ValidationError("matrix contains non-finite entries")
    return a


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, what: str = "matrix"):
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise ValidationError(f"{what} is not Hermitian (max deviation {dev:.3e} > {tol:.0e})")


def _require_same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class HermitianObservable:
    """A labeled Hermitian matrix (Hamiltonian, charge, variance operator, ...)."""

    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        require_hermitian(m, what=f"observable {self.label!r}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """A normalized positive-semidefinite state.

    `eig_floor` loosens the positivity check for states coming out of
    integrators that are not completely positive (Redfield).
    """

    matrix: np.ndarray
    eig_floor: float = field(default=EIG_FLOOR, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        require_hermitian(m, what="density matrix")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr:.12g} != 1")
        wmin = np.linalg.eigvalsh(m)[0]
        if wmin < self.eig_floor:
            raise ValidationError(
                f"density matrix has eigenvalue {wmin:.3e} below floor {self.eig_floor:.0e}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
    unitary whose columns are the matching eigenvectors, with a fixed phase
    convention (first significant component of each column real-positive)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(A) -> Spectrum:
    """Eigendecompose a Hermitian matrix with a deterministic phase convention."""
    a = as_matrix(A)
    require_hermitian(a)
    w, v = np.linalg.eigh(a)
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col) > 1e-8)) if np.any(np.abs(col) > 1e-8) else 0
        phase = col[j] / abs(col[j])
        v[:, k] = col / phase
    return Spectrum(w, v)


def expm_hermitian(A) -> np.ndarray:
    """exp(A) for Hermitian A via eigendecomposition; Hermitian positive-definite."""
    s = eigh(A)
    v = s.eigenvectors
    out = (v * np.exp(s.eigenvalues)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def von_neumann_entropy(rho) -> float:
    """S = -sum p ln p in nats, with 0 ln 0 = 0 and eigenvalues clamped to [0, 1]."""
    w = np.linalg.eigvalsh(as_matrix(rho))
    w = np.clip(w.real, 0.0, 1.0)
    w = w[w > LOG_CLAMP]
    return float(-np.sum(w * np.log(w)))


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy D(rho || sigma) = Tr[rho (ln rho - ln sigma)] in nats.

    Raises SupportViolationError when rho has weight > 1e-10 on the numerical
    null space of sigma (eigenvalues below 1e-12), carrying the offending
    eigenvalue; the divergence would be infinite there.
    """
    r = as_matrix(rho)
    s = as_matrix(sigma)
    _require_same_dim(r, s)
    p = np.clip(np.linalg.eigvalsh(r).real, 0.0, 1.0)
    spec_s = eigh(s)
    weights = np.einsum("ia,ij,ja->a", spec_s.eigenvectors.conj(), r,
                        spec_s.eigenvectors).real
    null = spec_s.eigenvalues < LOG_CLAMP
    if np.any(null):
        bad = float(np.sum(weights[null]))
        if bad > 1e-10:
            raise SupportViolationError(
                f"support violation: weight {bad:.3e} on null space of sigma",
                offending_eigenvalue=float(spec_s.eigenvalues[null].min()),
                weight=bad,
            )
    tr_r_ln_r = float(np.sum(p[p > LOG_CLAMP] * np.log(p[p > LOG_CLAMP])))
    tr_r_ln_s = float(np.sum(weights * np.log(np.maximum(spec_s.eigenvalues, LOG_CLAMP))))
    return tr_r_ln_r - tr_r_ln_s


def expectation(rho, O) -> float:
    """Re Tr[rho O]; the imaginary part must vanish (both operands Hermitian)."""
    r = as_matrix(rho)
    o = as_matrix(O)
    _require_same_dim(r, o)
    val = np.trace(r @ o)
    assert abs(val.imag) < 1e-10, f"expectation has imaginary part {val.imag:.3e}"
    return float(val.real)


def variance(rho, O) -> float:
    """Tr[rho (O - <O>)^2]; nonnegative up to roundoff."""
    r = as_matrix(rho)
    o = as_matrix(O)
    _require_same_dim(r, o)
    mean = expectation(r, o)
    centered = o - mean * np.eye(o.shape[0])
    return expectation(r, centered @ centered)


def shifted_square(O, mean: float) -> np.ndarray:
    """(O - mean I)^2, the operator whose expectation is the variance about `mean`."""
    o = as_matrix(O)
    centered = o - mean * np.eye(o.shape[0])
    return centered @ centered


def partial_trace(rho_ab, dims: tuple[int, int], keep: str) -> DensityMatrix:
    """Reduce a bipartite state to subsystem 'A' or 'B'."""
    r = as_matrix(rho_ab)
    da, db = dims
    if r.shape[0] != da * db:
        raise DimensionMismatchError(
            f"state dim {r.shape[0]} != product of subsystem dims {da}*{db}")
    if keep not in ("A", "B"):
        raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")
    t = r.reshape(da, db, da, db)
    reduced = np.einsum("ikjk->ij", t) if keep == "A" else np.einsum("kikj->ij", t)
    return DensityMatrix(0.5 * (reduced + reduced.conj().T))


def kron(A, B) -> np.ndarray:
    """Kronecker product of two square matrices."""
    return np.kron(as_matrix(A), as_matrix(B))


def gibbs_state(H, temperature: float) -> DensityMatrix:
    """exp(-H/T) / Z."""
    if temperature <= 0:
        raise ValidationError(f"temperature must be positive, got {temperature}")
    s = eigh(H)
    w = -s.eigenvalues / temperature
    w -= w.max()
    q = np.exp(w)
    q /= q.sum()
    v = s.eigenvectors
    m = (v * q) @ v.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T))
