"""Information-cost bound evaluation along trajectories.

Two pipelines share the same structure. The charge pipeline tracks, per time
point, the weighted cost lhs = -sum_i lambda_i(0) dC_i(t) against the upper
bound U_M(t) = R(t) - dS(t) with remainder
R(t) = sum_i C_i(t) dlambda_i(t) + ln(Z_r(t)/Z_r(0)) + dS_in. The fluctuation
pipeline tracks the variance change dVar(t) against the lower bound
L_v(t) = (dS(t) - R_v(t)) / lambda_v(0). In both, the gap between bound and
tracked quantity IS the relative entropy D(rho_S(t) || rho_r(t)), which makes
the margin-vs-divergence identity a built-in audit of the whole pipeline.

Multiplier solves are warm-started, since targets move continuously in time;
a cold-start mode re-solves every point from lambda = 0 for cross-checking.
Solver failures (clamp, boundary) at isolated points are recorded as flagged
gaps rather than aborting the run: driven protocols approach the spectral
boundary by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import maxent, qcore
from .errors import (
    BoundaryTargetError,
    UntunableConstraintError,
    ValidationError,
)
from .dynamics import Trajectory
from .maxent import MaxEntState, ObservableSet
from .qcore import HermitianObservable

MARGIN_TOL = 1e-7
INITIAL_MULTIPLIER_TOL = 1e-8


@dataclass
class ChargeBoundSeries:
    """Per-time-point record of the multi-charge bound."""

    t: np.ndarray
    delta_charges: np.ndarray          # (n, K)
    delta_entropy: np.ndarray
    remainder: np.ndarray              # R(t)
    divergence: np.ndarray             # D(rho_S || rho_r)
    upper_bound: np.ndarray            # U_M(t)
    lhs: np.ndarray                    # -sum lambda_i(0) dC_i(t)
    margin: np.ndarray                 # U_M - lhs
    multipliers: np.ndarray            # (n, K)
    log_partition: np.ndarray
    initial_gap: float                 # dS_in = D(rho_S(0) || rho_r(0))
    solved: np.ndarray                 # bool mask; False entries carry NaNs
    flags: list[tuple[int, str]] = field(default_factory=list)

    @property
    def initial_multipliers(self) -> np.ndarray:
        return self.multipliers[0]

    def max_identity_residual(self) -> float:
        """max |margin - D| over solved points; zero up to numerics."""
        ok = self.solved
        return float(np.max(np.abs(self.margin[ok] - self.divergence[ok])))

    def min_margin(self) -> float:
        return float(np.min(self.margin[self.solved]))


@dataclass
class FluctuationBoundSeries:
    """Per-time-point record of the variance (fluctuation-cost) bound."""

    t: np.ndarray
    delta_variance: np.ndarray
    delta_entropy: np.ndarray
    remainder: np.ndarray              # R_v(t)
    multiplier: np.ndarray             # lambda_v(t)
    lower_bound: np.ndarray            # L_v(t)
    margin: np.ndarray                 # dVar - L_v
    divergence: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    log_partition: np.ndarray
    initial_gap: float
    inverted_sign: bool                # lambda_v(0) < 0: bound direction flips
    solved: np.ndarray
    flags: list[tuple[int, str]] = field(default_factory=list)

    @property
    def initial_multiplier(self) -> float:
        return float(self.multiplier[0])

    def max_identity_residual(self) -> float:
        """max |lambda_v(0) * margin - D| over solved points."""
        ok = self.solved
        lam0 = self.initial_multiplier
        return float(np.max(np.abs(lam0 * self.margin[ok] - self.divergence[ok])))

    def min_margin(self) -> float:
        return float(np.min(self.margin[self.solved]))


@dataclass
class LandauerSeries:
    """Generalized Landauer lower bound, evaluated when bath charge changes are
    available (e.g. closed bipartite runs, where dC_i^B = -dC_i^S)."""

    t: np.ndarray
    weighted_bath_cost: np.ndarray     # sum_i mu_i dC_i^B(t)
    neg_delta_entropy: np.ndarray      # -dS(t)
    satisfied: np.ndarray              # bool per point

    def violations(self) -> int:
        return int(np.sum(~self.satisfied))


def _charges_at(charges, t: float) -> ObservableSet:
    return charges(t) if callable(charges) else charges


def charge_bounds(
    traj: Trajectory,
    charges: ObservableSet | Callable[[float], ObservableSet],
    lam0,
    tol: float = maxent.DEFAULT_TOL,
    warm_start: bool = True,
) -> ChargeBoundSeries:
    """Evaluate the multi-charge information-cost bound along a trajectory.

    lam0 must be the multiplier vector of the initial state's own reference
    (the bound is derived with lambda_i(0) fixed by rho_r(0)); this is enforced
    against the t=0 targets before anything else runs.
    """
    lam0 = np.asarray(lam0, dtype=float)
    times = traj.times
    n = len(times)
    set0 = _charges_at(charges, times[0])
    K = len(set0)
    if lam0.shape != (K,):
        raise ValidationError(f"expected {K} initial multipliers, got {lam0.shape}")

    rho0 = traj.states[0]
    targets0 = np.array([qcore.expectation(rho0, o) for o in set0.observables])
    ref0 = maxent.build_reference(set0, lam0)
    mismatch = float(np.max(np.abs(ref0.targets - targets0)))
    if mismatch > INITIAL_MULTIPLIER_TOL:
        raise ValidationError(
            f"lambda(0) does not reproduce the initial targets (max mismatch "
            f"{mismatch:.3e}); the bound requires multipliers from the initial reference")

    s0 = qcore.von_neumann_entropy(rho0)
    initial_gap = maxent.reference_divergence(rho0, ref0)

    delta_charges = np.full((n, K), np.nan)
    delta_entropy = np.full(n, np.nan)
    remainder = np.full(n, np.nan)
    divergence = np.full(n, np.nan)
    upper = np.full(n, np.nan)
    lhs = np.full(n, np.nan)
    margin = np.full(n, np.nan)
    multipliers = np.full((n, K), np.nan)
    log_partition = np.full(n, np.nan)
    solved = np.zeros(n, dtype=bool)
    flags: list[tuple[int, str]] = []

    lam_prev = lam0.copy()
    for k in range(n):
        rho = traj.states[k]
        cset = _charges_at(charges, times[k])
        targets = np.array([qcore.expectation(rho, o) for o in cset.observables])
        init = lam_prev if warm_start else np.zeros(K)
        if k == 0:
            ref, report = ref0, None
            lam = lam0.copy()
        else:
            try:
                ref, report = maxent.solve_reference(cset, targets, init=init, tol=tol)
                lam = ref.multipliers
            except (BoundaryTargetError, UntunableConstraintError) as exc:
                flags.append((k, type(exc).__name__))
                continue
            if report is not None and not report.converged:
                flags.append((k, "non-convergence"))
                continue
        s = qcore.von_neumann_entropy(rho)
        d = maxent.reference_divergence(rho, ref)
        delta_charges[k] = targets - targets0
        delta_entropy[k] = s - s0
        remainder[k] = float(targets @ (lam - lam0)) \
            + (ref.log_partition - ref0.log_partition) + initial_gap
        divergence[k] = d
        upper[k] = remainder[k] - delta_entropy[k]
        lhs[k] = -float(lam0 @ delta_charges[k])
        margin[k] = upper[k] - lhs[k]
        multipliers[k] = lam
        log_partition[k] = ref.log_partition
        solved[k] = True
        lam_prev = lam

    return ChargeBoundSeries(
        t=times, delta_charges=delta_charges, delta_entropy=delta_entropy,
        remainder=remainder, divergence=divergence, upper_bound=upper, lhs=lhs,
        margin=margin, multipliers=multipliers, log_partition=log_partition,
        initial_gap=initial_gap, solved=solved, flags=flags)


def fluctuation_bounds(
    traj: Trajectory,
    O: HermitianObservable | Callable[[float], HermitianObservable],
    tol: float = maxent.DEFAULT_TOL,
    warm_start: bool = True,
) -> FluctuationBoundSeries:
    """Evaluate the fluctuation-cost bound along a trajectory for an observable
    (possibly time-dependent).

    The t=0 Gaussian reference must exist (initial variance strictly inside the
    spectral interval); mid-run clamp or boundary failures become per-point
    flags. When lambda_v(0) < 0 the inequality direction inverts; the series is
    marked and margin checks are the caller's responsibility.
    """
    times = traj.times
    n = len(times)

    def obs_at(t):
        return O(t) if callable(O) else O

    mean = np.full(n, np.nan)
    var = np.full(n, np.nan)
    multiplier = np.full(n, np.nan)
    log_partition = np.full(n, np.nan)
    delta_variance = np.full(n, np.nan)
    delta_entropy = np.full(n, np.nan)
    remainder = np.full(n, np.nan)
    lower = np.full(n, np.nan)
    margin = np.full(n, np.nan)
    divergence = np.full(n, np.nan)
    solved = np.zeros(n, dtype=bool)
    flags: list[tuple[int, str]] = []

    rho0 = traj.states[0]
    o0 = obs_at(times[0])
    mean0 = qcore.expectation(rho0, o0)
    var0 = qcore.variance(rho0, o0)
    try:
        ref0, _ = maxent.gaussian_reference(o0, mean0, var0, tol=tol)
    except (BoundaryTargetError, UntunableConstraintError) as exc:
        raise type(exc)(f"initial Gaussian reference unavailable: {exc}") from exc
    lam0 = float(ref0.multipliers[0])
    s0 = qcore.von_neumann_entropy(rho0)
    initial_gap = maxent.reference_divergence(rho0, ref0)

    lam_prev = lam0
    for k in range(n):
        rho = traj.states[k]
        o = obs_at(times[k])
        m = qcore.expectation(rho, o)
        v = qcore.variance(rho, o)
        if k == 0:
            ref = ref0
        else:
            try:
                ref, report = maxent.gaussian_reference(
                    o, m, v, tol=tol, init=lam_prev if warm_start else 0.0)
            except (BoundaryTargetError, UntunableConstraintError) as exc:
                flags.append((k, type(exc).__name__))
                continue
            if not report.converged:
                flags.append((k, "non-convergence"))
                continue
        lam = float(ref.multipliers[0])
        s = qcore.von_neumann_entropy(rho)
        mean[k] = m
        var[k] = v
        multiplier[k] = lam
        log_partition[k] = ref.log_partition
        delta_variance[k] = v - var0
        delta_entropy[k] = s - s0
        remainder[k] = (lam - lam0) * v + initial_gap \
            + (ref.log_partition - ref0.log_partition)
        lower[k] = (delta_entropy[k] - remainder[k]) / lam0
        margin[k] = delta_variance[k] - lower[k]
        divergence[k] = maxent.reference_divergence(rho, ref)
        solved[k] = True
        lam_prev = lam

    return FluctuationBoundSeries(
        t=times, delta_variance=delta_variance, delta_entropy=delta_entropy,
        remainder=remainder, multiplier=multiplier, lower_bound=lower,
        margin=margin, divergence=divergence, mean=mean, variance=var,
        log_partition=log_partition, initial_gap=initial_gap,
        inverted_sign=lam0 < 0, solved=solved, flags=flags)


def landauer_lower_bound(bath_deltas, mu, delta_entropy, tol: float = MARGIN_TOL
                         ) -> LandauerSeries:
    """Evaluate sum_i mu_i dC_i^B(t) >= -dS(t) pointwise.

    Violations are flagged, not raised: outside the generalized-Gibbsian-bath
    regime (e.g. finite-size environments) the bound may legitimately fail.
    """
    deltas = np.asarray(bath_deltas, dtype=float)
    mu = np.asarray(mu, dtype=float)
    ds = np.asarray(delta_entropy, dtype=float)
    if deltas.ndim != 2 or deltas.shape[1] != mu.shape[0]:
        raise ValidationError(
            f"bath deltas shape {deltas.shape} incompatible with {mu.shape[0]} affinities")
    if deltas.shape[0] != ds.shape[0]:
        raise ValidationError("bath delta and entropy series lengths differ")
    cost = deltas @ mu
    satisfied = cost + ds >= -tol
    t = np.arange(len(ds), dtype=float)
    return LandauerSeries(t=t, weighted_bath_cost=cost, neg_delta_entropy=-ds,
                          satisfied=satisfied)


def identity_audit(traj: Trajectory, charges, lam0, tol: float = maxent.DEFAULT_TOL
                   ) -> float:
    """Max absolute residual of the exact decomposition
    dS = sum lambda_i(0) dC_i + R - D along the trajectory; measures only
    solver and entropy numerics."""
    series = charge_bounds(traj, charges, lam0, tol=tol)
    return series.max_identity_residual()


def fluctuation_identity_audit(series: FluctuationBoundSeries) -> float:
    """Max absolute residual of the variance-pipeline analogue
    lambda_v(0) * (dVar - L_v) = D."""
    return series.max_identity_residual()
