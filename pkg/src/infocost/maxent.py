"""Maximum-entropy inference: from observables and target expectation values to
Lagrange multipliers and reference states.

The reference state rho_r = exp(-sum_i lambda_i O_i) / Z_r is the least-biased
state matching the targets <O_i>. Multipliers are found by minimizing the
convex dual f(lambda) = ln Z_r(lambda) + sum_i lambda_i * target_i with a
damped Newton method; the gradient target_i - <O_i>_ref is exact for arbitrary
(also non-commuting) observable sets, and the Hessian is the Kubo-Mori
covariance computed from divided differences of the exponential in the
eigenbasis of sum_i lambda_i O_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qcore
from .errors import (
    BoundaryTargetError,
    DimensionMismatchError,
    UntunableConstraintError,
    ValidationError,
)
from .qcore import DensityMatrix, HermitianObservable

# Beyond this multiplier magnitude the reference state is numerically pure and
# the targets sit on the spectral boundary; fail loudly instead.
LAMBDA_MAX = 50.0

COMMUTATOR_TOL = 1e-10
DEFAULT_TOL = 1e-10
MAX_ITER = 200
_MAX_STEP = 2.0


@dataclass(frozen=True)
class ObservableSet:
    """A nonempty set of same-dimension Hermitian observables with unique labels."""

    observables: tuple[HermitianObservable, ...]
    commuting: bool = field(init=False)

    def __post_init__(self):
        obs = tuple(self.observables)
        if not obs:
            raise ValidationError("observable set must be nonempty")
        dim = obs[0].dim
        if any(o.dim != dim for o in obs):
            raise DimensionMismatchError("observables have mixed dimensions")
        labels = [o.label for o in obs]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"observable labels are not unique: {labels}")
        commuting = True
        for i in range(len(obs)):
            for j in range(i + 1, len(obs)):
                a, b = obs[i].matrix, obs[j].matrix
                if np.max(np.abs(a @ b - b @ a)) > COMMUTATOR_TOL:
                    commuting = False
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "commuting", commuting)

    @property
    def dim(self) -> int:
        return self.observables[0].dim

    @property
    def labels(self) -> list[str]:
        return [o.label for o in self.observables]

    def __len__(self) -> int:
        return len(self.observables)

    def stack(self) -> np.ndarray:
        """(K, d, d) array of the observable matrices."""
        return np.stack([o.matrix for o in self.observables])


@dataclass(frozen=True)
class MaxEntState:
    """Reference state exp(-sum lambda_i O_i)/Z_r together with its multipliers,
    log-partition function and the targets it reproduces.

    `basis` and `log_probs` hold the state's exact spectral data from the
    construction: log-probabilities stay meaningful even when the populations
    themselves underflow what an eigendecomposition of the assembled matrix
    could resolve."""

    observables: ObservableSet
    multipliers: np.ndarray
    log_partition: float
    state: DensityMatrix
    targets: np.ndarray
    basis: np.ndarray
    log_probs: np.ndarray

    @property
    def dim(self) -> int:
        return self.state.dim


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_gradient_norm: float
    converged: bool
    dual_value: float


def _exponent_spectrum(observables: ObservableSet, lam: np.ndarray):
    """Eigendecomposition of A = sum_i lambda_i O_i plus shifted Boltzmann weights.

    Returns (spectrum, probabilities, ln Z_r, log-probabilities) computed
    overflow-safely by shifting the joint spectrum by its maximum of -w.
    """
    A = np.tensordot(lam, observables.stack(), axes=1)
    spec = qcore.eigh(A)
    u = -spec.eigenvalues
    shift = u.max()
    q = np.exp(u - shift)
    z = q.sum()
    ln_z = shift + np.log(z)
    log_probs = (u - shift) - np.log(z)
    return spec, q / z, float(ln_z), log_probs


def build_reference(observables: ObservableSet, multipliers) -> MaxEntState:
    """Construct the maximum-entropy state for given multipliers."""
    lam = np.asarray(multipliers, dtype=float)
    if lam.shape != (len(observables),):
        raise ValidationError(
            f"expected {len(observables)} multipliers, got shape {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValidationError("multipliers must be finite")
    spec, probs, ln_z, log_probs = _exponent_spectrum(observables, lam)
    v = spec.eigenvectors
    m = (v * probs) @ v.conj().T
    state = DensityMatrix(0.5 * (m + m.conj().T))
    targets = np.array([qcore.expectation(state, o) for o in observables.observables])
    return MaxEntState(observables, lam, ln_z, state, targets, v, log_probs)


# Below this log-population the assembled reference matrix can no longer be
# trusted to resolve its own spectrum; an order above the log clamp.
_DEEP_TAIL_LOG = np.log(1e-10)


def reference_divergence(rho, ref: MaxEntState) -> float:
    """D(rho || rho_r) against a constructed reference state.

    Normally delegates to the generic two-eigendecomposition relative entropy,
    which keeps the margin-vs-divergence audits an independent numerical path.
    When the reference has deep-tail populations (below 1e-10) the assembled
    matrix cannot resolve them, so the exact log-probabilities from the
    construction are used instead; the true reference is full rank, so no
    support check applies there.
    """
    if float(ref.log_probs.min()) >= _DEEP_TAIL_LOG:
        return qcore.relative_entropy(rho, ref.state)
    r = qcore.as_matrix(rho)
    p = np.clip(np.linalg.eigvalsh(r).real, 0.0, 1.0)
    keep = p > qcore.LOG_CLAMP
    tr_r_ln_r = float(np.sum(p[keep] * np.log(p[keep])))
    weights = np.einsum("ia,ij,ja->a", ref.basis.conj(), r, ref.basis).real
    return tr_r_ln_r - float(weights @ ref.log_probs)


def _dual_and_gradient(observables: ObservableSet, lam, targets):
    spec, probs, ln_z, _ = _exponent_spectrum(observables, lam)
    v = spec.eigenvectors
    ops_eig = np.einsum("ia,kij,jb->kab", v.conj(), observables.stack(), v)
    expect = np.einsum("kaa,a->k", ops_eig, probs).real
    f = ln_z + float(lam @ targets)
    grad = targets - expect
    return f, grad, spec, probs, ops_eig


def _kubo_mori_hessian(spec, probs, ops_eig) -> np.ndarray:
    """Hessian of ln Z_r: the Kubo-Mori covariance of the observables.

    Uses divided differences of exp over the joint spectrum; degenerate pairs
    take the limiting value (the Boltzmann weight itself).
    """
    w = spec.eigenvalues
    u = -w
    shift = u.max()
    e = np.exp(u - shift)
    z = e.sum()
    dw = w[None, :] - w[:, None]          # w_b - w_a
    de = e[:, None] - e[None, :]          # e_a - e_b (shifted)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(np.abs(dw) > 1e-12, de / dw, e[:, None])
    g /= z
    expect = np.einsum("kaa,a->k", ops_eig, probs).real
    second = np.einsum("kab,lba,ab->kl", ops_eig, ops_eig, g).real
    return second - np.outer(expect, expect)


def _check_tunable(observables: ObservableSet):
    d = observables.dim
    eye = np.eye(d)
    for o in observables.observables:
        traceless = o.matrix - (np.trace(o.matrix).real / d) * eye
        if np.max(np.abs(traceless)) < 1e-12:
            raise UntunableConstraintError(
                f"observable {o.label!r} is proportional to the identity; "
                "its expectation value cannot be tuned")


def solve_multipliers(
    observables: ObservableSet,
    targets,
    init=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[np.ndarray, SolveReport]:
    """Find multipliers whose reference state reproduces the targets.

    Damped Newton with backtracking on the convex dual; falls back to gradient
    descent with Armijo search when the (regularized) Hessian factorization
    fails. Convergence means |<O_i>_ref - target_i| <= tol for every i.

    Raises BoundaryTargetError when |lambda| exceeds the clamp LAMBDA_MAX
    (targets on or outside the spectral boundary) and UntunableConstraintError
    for identity-proportional observables. Plain non-convergence within
    max_iter is reported, not raised.
    """
    _check_tunable(observables)
    t = np.asarray(targets, dtype=float)
    if t.shape != (len(observables),):
        raise ValidationError(f"expected {len(observables)} targets, got shape {t.shape}")
    lam = np.zeros(len(observables)) if init is None else np.asarray(init, dtype=float).copy()
    if np.max(np.abs(lam)) > LAMBDA_MAX:
        raise BoundaryTargetError(
            f"initial multipliers exceed the clamp |lambda| <= {LAMBDA_MAX}")

    f, grad, spec, probs, ops_eig = _dual_and_gradient(observables, lam, t)
    gnorm = float(np.max(np.abs(grad)))
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if gnorm <= tol:
            return lam, SolveReport(iterations - 1, gnorm, True, f)
        hess = _kubo_mori_hessian(spec, probs, ops_eig)
        hess = hess + 1e-12 * np.eye(len(lam))
        try:
            c = np.linalg.cholesky(hess)
            step = -np.linalg.solve(c.T, np.linalg.solve(c, grad))
        except np.linalg.LinAlgError:
            step = -grad
        if grad @ step >= 0:   # not a descent direction; fall back
            step = -grad
        # trust-region cap: near-singular covariance produces wild steps along
        # flat dual valleys; walk instead of jumping
        biggest = float(np.max(np.abs(step)))
        if biggest > _MAX_STEP:
            step = step * (_MAX_STEP / biggest)
        alpha = 1.0
        accepted = False
        for _ in range(60):
            trial = lam + alpha * step
            f_new, grad_new, spec_new, probs_new, ops_new = _dual_and_gradient(
                observables, trial, t)
            if f_new <= f + 1e-4 * alpha * float(grad @ step) + 1e-14:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            return lam, SolveReport(iterations, gnorm, gnorm <= tol, f)
        assert f_new <= f + 1e-12, "dual objective increased on an accepted step"
        lam, f, grad = trial, f_new, grad_new
        spec, probs, ops_eig = spec_new, probs_new, ops_new
        gnorm = float(np.max(np.abs(grad)))
        if np.max(np.abs(lam)) > LAMBDA_MAX:
            raise BoundaryTargetError(
                f"multiplier clamp hit (|lambda| > {LAMBDA_MAX}): targets lie on or "
                "outside the spectral boundary")
    return lam, SolveReport(iterations, gnorm, gnorm <= tol, f)


def solve_reference(
    observables: ObservableSet,
    targets,
    init=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[MaxEntState, SolveReport]:
    """solve_multipliers followed by build_reference."""
    lam, report = solve_multipliers(observables, targets, init=init, tol=tol,
                                    max_iter=max_iter)
    return build_reference(observables, lam), report


def gaussian_reference(
    O: HermitianObservable,
    mean: float,
    var: float,
    tol: float = DEFAULT_TOL,
    init: float | None = None,
) -> tuple[MaxEntState, SolveReport]:
    """Reference state exp(-lambda_v (O - mean)^2)/Z_r matching a variance.

    The variance operator A = (O - mean I)^2 must not be proportional to the
    identity, and `var` must lie strictly inside the open interval spanned by
    A's eigenvalues.
    """
    A = qcore.shifted_square(O, mean)
    a_eigs = np.linalg.eigvalsh(A)
    if a_eigs[-1] - a_eigs[0] < 1e-12:
        raise UntunableConstraintError(
            f"variance operator of {O.label!r} about mean {mean:.6g} is proportional "
            "to the identity; the variance constraint cannot be tuned")
    if not (a_eigs[0] < var < a_eigs[-1]):
        raise BoundaryTargetError(
            f"target variance {var:.6g} outside the open spectral interval "
            f"({a_eigs[0]:.6g}, {a_eigs[-1]:.6g})")
    obs = ObservableSet((HermitianObservable(f"var[{O.label}]", A),))
    init_vec = None if init is None else np.array([init])
    lam, report = solve_multipliers(obs, np.array([var]), init=init_vec, tol=tol)
    return build_reference(obs, lam), report


def entropy_gap(rho_S, ref: MaxEntState, target_tol: float = 1e-6) -> float:
    """D(rho_S || rho_r); equals S_r - S whenever rho_S matches the reference
    targets, which is checked as a precondition and asserted as a self-check."""
    mismatch = max(
        abs(qcore.expectation(rho_S, o) - t)
        for o, t in zip(ref.observables.observables, ref.targets)
    )
    if mismatch > target_tol:
        raise ValidationError(
            f"state does not match the reference targets (max mismatch {mismatch:.3e}); "
            "the entropy identity does not apply")
    d = reference_divergence(rho_S, ref)
    s = qcore.von_neumann_entropy(rho_S)
    s_r = qcore.von_neumann_entropy(ref.state)
    assert abs((s_r - s) - d) <= 1e-7, (
        f"entropy identity self-check failed: (S_r - S) - D = {(s_r - s) - d:.3e}")
    return d
