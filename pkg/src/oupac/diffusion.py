"""Discrete mean-reverting SGD simulator on quadratic losses.

The constant-rate SGD recursion on a quadratic loss is a linear
stochastic recursion (discrete Ornstein-Uhlenbeck chain)::

    x' = x - lr * A (x - minimizer) + (lr / sqrt(batch_size)) * B z,
    z ~ N(0, I)

This module simulates that chain, checks its stability, estimates its
stationary moments, and runs the two-stage pipeline in which a second
(fine-tuning) chain starts from the stationary state of the first.

The discrete chain's exact stationary covariance solves the Stein
equation for ``(I - lr*A, (lr^2/batch) * B B^T)``; the continuous-time
model's covariance solves the Lyapunov equation with right-hand side
``(lr/batch) * C``.  Simulations here are compared against the Stein
solution (simulator ground truth), with the Lyapunov solution as the
small-rate limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .errors import DimensionMismatchError, TooFewSamplesError, UnstableDynamicsError
from .gaussian import MomentEstimate, empirical_moments, sample, stationary_from_dynamics
from .linalg import SpdMatrix, make_spd
from .rng import child_seed, make_rng

#: Steps of simulation noise generated per chunk (bounds peak memory).
NOISE_CHUNK = 1 << 17


@dataclass(frozen=True, eq=False)
class QuadraticLoss:
    """Quadratic loss ``offset + 0.5 (x - minimizer)^T A (x - minimizer)``."""

    hessian: SpdMatrix
    minimizer: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        minimizer = np.asarray(self.minimizer, dtype=float).reshape(-1).copy()
        if minimizer.shape[0] != self.hessian.dim:
            raise DimensionMismatchError(
                f"minimizer has dimension {minimizer.shape[0]}, hessian is "
                f"{self.hessian.dim}x{self.hessian.dim}"
            )
        minimizer.flags.writeable = False
        object.__setattr__(self, "minimizer", minimizer)

    @property
    def dim(self) -> int:
        return self.hessian.dim

    def value(self, theta: np.ndarray) -> float:
        delta = np.asarray(theta, dtype=float) - self.minimizer
        return self.offset + 0.5 * float(delta @ self.hessian.entries @ delta)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.hessian.entries @ (np.asarray(theta, dtype=float) - self.minimizer)


@dataclass(frozen=True, eq=False)
class SgdDynamics:
    """Learning rate, batch size, and gradient-noise factor B.

    The single-sample gradient-noise covariance ``C = B^T B`` is
    computed once and cached; B is usually symmetric PSD, in which case
    ``C = B B^T`` as well and the simulated chain's per-step noise
    covariance is ``(lr^2 / batch_size) * C``.  A rank-deficient B
    (semidefinite C) is allowed.
    """

    lr: float
    batch_size: int
    noise_factor: np.ndarray
    noise_cov: SpdMatrix = field(init=False)

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if int(self.batch_size) != self.batch_size or self.batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {self.batch_size}")
        factor = np.asarray(self.noise_factor, dtype=float)
        if factor.ndim != 2 or factor.shape[0] != factor.shape[1]:
            raise DimensionMismatchError(
                f"noise factor must be square, got shape {factor.shape}"
            )
        factor = factor.copy()
        factor.flags.writeable = False
        object.__setattr__(self, "noise_factor", factor)
        object.__setattr__(
            self, "noise_cov", make_spd(factor.T @ factor, strictness="semidefinite")
        )

    @property
    def dim(self) -> int:
        return self.noise_factor.shape[0]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states of a simulated chain.

    ``states`` holds the initial state plus every ``stride``-th state,
    ``total_steps // stride + 1`` records in all.
    """

    states: np.ndarray
    stride: int
    total_steps: int
    seed: int

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        expected = self.total_steps // self.stride + 1
        if states.shape[0] != expected:
            raise DimensionMismatchError(
                f"trajectory has {states.shape[0]} records, expected {expected} "
                f"for {self.total_steps} steps at stride {self.stride}"
            )
        states = states.copy()
        states.flags.writeable = False
        object.__setattr__(self, "states", states)

    @property
    def record_count(self) -> int:
        return self.states.shape[0]


class StabilityReport(NamedTuple):
    stable: bool
    spectral_radius: float


class TwoStageResult(NamedTuple):
    pt_estimate: MomentEstimate
    ft_estimate: MomentEstimate


def _check_dims(loss: QuadraticLoss, dyn: SgdDynamics) -> None:
    if loss.dim != dyn.dim:
        raise DimensionMismatchError(
            f"loss dimension {loss.dim} != dynamics dimension {dyn.dim}"
        )


def sgd_step(
    state: np.ndarray,
    loss: QuadraticLoss,
    dyn: SgdDynamics,
    noise_draw: np.ndarray,
) -> np.ndarray:
    """One SGD update from ``state`` given a standard-normal draw."""
    _check_dims(loss, dyn)
    state = np.asarray(state, dtype=float)
    noise_draw = np.asarray(noise_draw, dtype=float)
    if state.shape != (loss.dim,) or noise_draw.shape != (loss.dim,):
        raise DimensionMismatchError(
            f"state/noise shapes {state.shape}/{noise_draw.shape} do not match "
            f"dimension {loss.dim}"
        )
    drift = dyn.lr * loss.gradient(state)
    kick = (dyn.lr / np.sqrt(dyn.batch_size)) * (dyn.noise_factor @ noise_draw)
    return state - drift + kick


def stability_check(loss: QuadraticLoss, dyn: SgdDynamics) -> StabilityReport:
    """Spectral radius of the step map ``I - lr*A`` and its verdict.

    The chain has a stationary distribution iff the radius is strictly
    below 1 (equivalently ``lr * lambda_max(A) < 2``); the boundary
    case is reported unstable.
    """
    _check_dims(loss, dyn)
    eigenvalues = np.linalg.eigvalsh(loss.hessian.entries)
    radius = float(np.max(np.abs(1.0 - dyn.lr * eigenvalues)))
    return StabilityReport(stable=radius < 1.0, spectral_radius=radius)


def _require_stable(loss: QuadraticLoss, dyn: SgdDynamics, allow_unstable: bool) -> None:
    report = stability_check(loss, dyn)
    if not report.stable and not allow_unstable:
        raise UnstableDynamicsError(
            f"stability_check failed: spectral radius of the step map is "
            f"{report.spectral_radius:.6g} >= 1 (lr too large for this Hessian)"
        )


def _run_chain(
    init: np.ndarray,
    loss: QuadraticLoss,
    dyn: SgdDynamics,
    total_steps: int,
    stride: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Iterate the chain; return (records, final_state)."""
    dim = loss.dim
    step_map = np.eye(dim) - dyn.lr * loss.hessian.entries
    pull = dyn.lr * (loss.hessian.entries @ loss.minimizer)
    kick_t = ((dyn.lr / np.sqrt(dyn.batch_size)) * dyn.noise_factor).T
    records = np.empty((total_steps // stride + 1, dim))
    state = np.asarray(init, dtype=float).copy()
    records[0] = state
    step = 0
    next_record = 1
    while step < total_steps:
        chunk = min(NOISE_CHUNK, total_steps - step)
        noise = rng.standard_normal((chunk, dim)) @ kick_t
        for row in noise:
            state = step_map @ state + pull + row
            step += 1
            if step % stride == 0 and next_record < records.shape[0]:
                records[next_record] = state
                next_record += 1
    return records, state


def simulate_chain(
    init: np.ndarray,
    loss: QuadraticLoss,
    dyn: SgdDynamics,
    total_steps: int,
    stride: int = 10,
    seed: int = 0,
    allow_unstable: bool = False,
) -> Trajectory:
    """Simulate the SGD chain for ``total_steps`` updates.

    Records the initial state and every ``stride``-th state thereafter;
    deterministic for a fixed seed.  Raises
    :class:`UnstableDynamicsError` when ``stability_check`` fails,
    unless ``allow_unstable`` is set.
    """
    _check_dims(loss, dyn)
    init = np.asarray(init, dtype=float).reshape(-1)
    if init.shape[0] != loss.dim:
        raise DimensionMismatchError(
            f"init has dimension {init.shape[0]}, loss has {loss.dim}"
        )
    if total_steps < 1:
        raise ValueError(f"total_steps must be >= 1, got {total_steps}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    _require_stable(loss, dyn, allow_unstable)
    records, _ = _run_chain(init, loss, dyn, total_steps, stride, make_rng(seed))
    return Trajectory(records, stride=stride, total_steps=total_steps, seed=seed)


def estimate_stationary(traj: Trajectory, burn_in_records: int | None = None) -> MomentEstimate:
    """Moments of the post-burn-in records of a trajectory.

    ``burn_in_records`` defaults to half the recorded trajectory; at
    least two records must survive the cut.
    """
    if burn_in_records is None:
        burn_in_records = traj.record_count // 2
    if burn_in_records < 0:
        raise ValueError(f"burn_in_records must be >= 0, got {burn_in_records}")
    kept = traj.states[burn_in_records:]
    if kept.shape[0] < 2:
        raise TooFewSamplesError(
            f"{kept.shape[0]} records left after burn-in of {burn_in_records}; need >= 2"
        )
    return empirical_moments(kept)


InitMode = Literal["analytic_sample", "chain_continue"]


def two_stage_run(
    pt_loss: QuadraticLoss,
    pt_dyn: SgdDynamics,
    ft_loss: QuadraticLoss,
    ft_dyn: SgdDynamics,
    pt_steps: int,
    ft_steps: int,
    replicas: int,
    stride: int = 10,
    burn_in: int | None = None,
    master_seed: int = 0,
    init_mode: InitMode = "analytic_sample",
) -> TwoStageResult:
    """Pre-train then fine-tune; pool stationary moments over replicas.

    Each replica runs an independent pre-training chain (started at the
    pre-training minimizer) and a fine-tuning chain whose initial state
    is either a draw from the analytic stationary Gaussian of the
    pre-training dynamics (``"analytic_sample"``) or the final
    pre-training state (``"chain_continue"``).  Per-replica seeds are
    derived from ``master_seed`` by the documented hashing rule, and
    pooling concatenates post-burn-in records in replica order, so the
    result does not depend on scheduling.

    ``burn_in`` counts records per replica and stage; it defaults to
    half of each trajectory's records.
    """
    if replicas < 2:
        raise ValueError(f"replicas must be >= 2, got {replicas}")
    if init_mode not in ("analytic_sample", "chain_continue"):
        raise ValueError(f"unknown init_mode {init_mode!r}")
    _check_dims(pt_loss, pt_dyn)
    _check_dims(ft_loss, ft_dyn)
    if pt_loss.dim != ft_loss.dim:
        raise DimensionMismatchError(
            f"stage dimensions disagree: {pt_loss.dim} vs {ft_loss.dim}"
        )
    _require_stable(pt_loss, pt_dyn, allow_unstable=False)
    _require_stable(ft_loss, ft_dyn, allow_unstable=False)

    if init_mode == "analytic_sample":
        pt_stationary = stationary_from_dynamics(
            pt_loss.hessian, pt_loss.minimizer, pt_dyn.noise_cov,
            pt_dyn.lr, pt_dyn.batch_size,
        )

    pt_blocks = []
    ft_blocks = []
    for replica in range(replicas):
        pt_rng = make_rng(master_seed, replica, 0)
        pt_records, pt_final = _run_chain(
            pt_loss.minimizer, pt_loss, pt_dyn, pt_steps, stride, pt_rng
        )
        if init_mode == "analytic_sample":
            ft_init = sample(pt_stationary, 1, child_seed(master_seed, replica, 1))[0]
        else:
            ft_init = pt_final
        ft_rng = make_rng(master_seed, replica, 2)
        ft_records, _ = _run_chain(ft_init, ft_loss, ft_dyn, ft_steps, stride, ft_rng)
        pt_blocks.append(_post_burn_in(pt_records, burn_in))
        ft_blocks.append(_post_burn_in(ft_records, burn_in))

    return TwoStageResult(
        pt_estimate=empirical_moments(np.concatenate(pt_blocks, axis=0)),
        ft_estimate=empirical_moments(np.concatenate(ft_blocks, axis=0)),
    )


def _post_burn_in(records: np.ndarray, burn_in: int | None) -> np.ndarray:
    cut = records.shape[0] // 2 if burn_in is None else burn_in
    kept = records[cut:]
    if kept.shape[0] < 1:
        raise TooFewSamplesError(
            f"burn-in {cut} leaves no records out of {records.shape[0]}"
        )
    return kept
