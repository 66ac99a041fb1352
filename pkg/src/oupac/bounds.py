"""PAC-Bayes bound evaluators and domain-discrepancy measures.

The complexity terms bound the generalization gap of a randomized
predictor by a square root of (divergence + confidence and sample-size
terms) / sample size.  Two divergence conventions appear throughout:
the KL-consistent sign (log-determinant entering negatively), which the
Monte-Carlo KL oracle confirms, and the flipped ``+log det`` variant,
which is always computed and reported alongside as ``paper_literal_kl``
so the two can be compared.  All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatchError, InvalidSpecError
from .linalg import SpdMatrix, cholesky_factor, log_det, random_spd
from .rng import child_seed, make_rng


@dataclass(frozen=True, eq=False)
class DomainPair:
    """Source/target stationary covariances and the minimizer shift."""

    sigma_pt: SpdMatrix
    sigma_ft: SpdMatrix
    shift: np.ndarray

    def __post_init__(self):
        shift = np.asarray(self.shift, dtype=float).reshape(-1).copy()
        if not (self.sigma_pt.dim == self.sigma_ft.dim == shift.shape[0]):
            raise DimensionMismatchError(
                f"dimensions disagree: sigma_pt {self.sigma_pt.dim}, "
                f"sigma_ft {self.sigma_ft.dim}, shift {shift.shape[0]}"
            )
        shift.flags.writeable = False
        object.__setattr__(self, "shift", shift)

    @property
    def dim(self) -> int:
        return self.sigma_pt.dim


@dataclass(frozen=True)
class SampleSpec:
    """Sample size N and confidence level delta for a bound evaluation.

    ``delta = 1`` is admitted as the degenerate no-confidence case
    (its log term vanishes); anything outside ``(0, 1]`` is rejected.
    """

    sample_size: int
    delta: float

    def __post_init__(self):
        if int(self.sample_size) != self.sample_size or self.sample_size < 1:
            raise InvalidSpecError(
                f"sample_size must be a positive integer, got {self.sample_size}"
            )
        if not (0.0 < self.delta <= 1.0):
            raise InvalidSpecError(f"delta must lie in (0, 1], got {self.delta}")


@dataclass(frozen=True)
class BoundReport:
    """Divergence and complexity terms of one bound evaluation.

    ``paper_literal_kl`` is the flipped-sign (+log det) variant of the
    divergence term, reported unclamped so that negative values surface
    the sign discrepancy between the two conventions.
    """

    kl_term: float
    complexity_term: float
    paper_literal_kl: float
    notes: str = ""

    def __post_init__(self):
        if self.complexity_term < 0:
            raise InvalidSpecError("complexity_term must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "kl_term": self.kl_term,
            "complexity_term": self.complexity_term,
            "paper_literal_kl": self.paper_literal_kl,
            "notes": self.notes,
        }


class Lemma2Result(NamedTuple):
    d_value: float
    d_tilde_value: float
    holds: bool
    margin: float


class DominanceReport(NamedTuple):
    pt_term: float
    ft_term: float
    ratio: float


def mcallester_bound(kl: float, spec: SampleSpec) -> float:
    """Square-root complexity addend of the classical PAC-Bayes bound.

    ``sqrt((kl + log(1/delta) + log N + 2) / (2N - 1))``.
    """
    if kl < 0:
        raise InvalidSpecError(f"kl must be nonnegative, got {kl}")
    n = spec.sample_size
    numerator = kl + math.log(1.0 / spec.delta) + math.log(n) + 2.0
    return math.sqrt(numerator / (2.0 * n - 1.0))


def _complexity_from_kl_term(kl_term: float, spec: SampleSpec) -> float:
    # doubled-KL form; algebraically identical to mcallester_bound(kl_term/2)
    n = spec.sample_size
    numerator = kl_term + 2.0 * math.log(1.0 / spec.delta) + 2.0 * math.log(n) + 4.0
    return math.sqrt(numerator / (4.0 * n - 2.0))


def pretrain_bound(sigma_pt: SpdMatrix, spec: SampleSpec) -> BoundReport:
    """Bound report for the pre-training stage against the N(0, I) prior.

    ``kl_term = tr(S - I) - log det S = 2 KL(N(0, S) || N(0, I))`` and
    ``complexity_term = sqrt((kl_term + 2 log(1/delta) + 2 log N + 4)
    / (4N - 2))``.
    """
    d = sigma_pt.dim
    trace = float(np.trace(sigma_pt.entries))
    ldet = log_det(sigma_pt)
    kl_term = trace - d - ldet
    literal = ldet + trace - d
    return BoundReport(
        kl_term=kl_term,
        complexity_term=_complexity_from_kl_term(kl_term, spec),
        paper_literal_kl=literal,
        notes="divergence vs standard Gaussian prior; kl_term = 2*KL",
    )


def _pair_core(pair: DomainPair) -> tuple[float, float, float]:
    """Return (tr(Spt^-1 Sft), log det(Spt^-1 Sft), shift^T Spt^-1 shift)."""
    l_pt = cholesky_factor(pair.sigma_pt)
    l_ft = cholesky_factor(pair.sigma_ft)
    half = solve_triangular(l_pt, l_ft, lower=True)
    trace = float(np.sum(half * half))
    ldet = log_det(pair.sigma_ft) - log_det(pair.sigma_pt)
    white_shift = solve_triangular(l_pt, pair.shift, lower=True)
    maha = float(white_shift @ white_shift)
    return trace, ldet, maha


def discrepancy_d(pair: DomainPair, paper_literal: bool = False) -> float:
    """Domain discrepancy built from the two stationary Gaussians.

    Canonical value (default)::

        tr(Spt^-1 Sft - I) + shift^T Spt^-1 shift - log det(Spt^-1 Sft)

    which equals ``2 KL(N(shift, Sft) || N(0, Spt))`` and is therefore
    nonnegative.  With ``paper_literal=True`` the log-determinant enters
    with a plus sign instead; that variant can go negative and is
    returned as-is.
    """
    trace, ldet, maha = _pair_core(pair)
    d = pair.dim
    if paper_literal:
        return trace - d + maha + ldet
    return trace - d + maha - ldet


def discrepancy_d_tilde(pair: DomainPair) -> float:
    """Dimension-dependent domain discrepancy.

    ``log(tr(Spt^-1 Sft)) + tr(Spt^-1 Sft) + shift^T Spt^-1 shift
    + d log d - d``.
    """
    trace, _, maha = _pair_core(pair)
    d = pair.dim
    return math.log(trace) + trace + maha + d * math.log(d) - d


def finetune_bound(pair: DomainPair, spec: SampleSpec) -> BoundReport:
    """Bound report for the fine-tuning stage, prior = source stationary."""
    kl_term = discrepancy_d(pair)
    return BoundReport(
        kl_term=kl_term,
        complexity_term=_complexity_from_kl_term(kl_term, spec),
        paper_literal_kl=discrepancy_d(pair, paper_literal=True),
        notes="divergence between fine-tuned and pre-trained stationary measures",
    )


def finetune_bound_dimension(pair: DomainPair, spec: SampleSpec) -> BoundReport:
    """Fine-tuning bound with the dimension-dependent discrepancy."""
    kl_term = discrepancy_d_tilde(pair)
    return BoundReport(
        kl_term=kl_term,
        complexity_term=_complexity_from_kl_term(kl_term, spec),
        paper_literal_kl=discrepancy_d(pair, paper_literal=True),
        notes="dimension-dependent discrepancy variant",
    )


def lemma2_check(pair: DomainPair, tolerance: float = 1e-12) -> Lemma2Result:
    """Compare the two discrepancies on one pair.

    ``holds`` is ``d_value <= d_tilde_value + tolerance``.  Whether the
    ordering holds for all SPD pairs is an empirical question, so this
    is a report, not an assertion.
    """
    d_value = discrepancy_d(pair)
    d_tilde_value = discrepancy_d_tilde(pair)
    return Lemma2Result(
        d_value=d_value,
        d_tilde_value=d_tilde_value,
        holds=bool(d_value <= d_tilde_value + tolerance),
        margin=d_tilde_value - d_value,
    )


def lemma2_survey(
    dims: Sequence[int] = tuple(range(1, 11)),
    pairs_per_dim: int = 100,
    seed: int = 0,
    eigenvalue_low: float = 0.2,
    eigenvalue_high: float = 5.0,
    shift_scale: float = 1.0,
) -> list[dict]:
    """Random survey of the discrepancy ordering, one row per dimension.

    Each row reports ``{"dim", "pairs", "holds", "holds_fraction",
    "min_margin"}`` over ``pairs_per_dim`` random domain pairs.
    Deterministic for a fixed seed.
    """
    rows = []
    for d in dims:
        holds = 0
        min_margin = math.inf
        for i in range(pairs_per_dim):
            pair = DomainPair(
                sigma_pt=random_spd(d, eigenvalue_low, eigenvalue_high,
                                    child_seed(seed, d, i, 0)),
                sigma_ft=random_spd(d, eigenvalue_low, eigenvalue_high,
                                    child_seed(seed, d, i, 1)),
                shift=shift_scale * make_rng(seed, d, i, 2).standard_normal(d),
            )
            result = lemma2_check(pair)
            holds += int(result.holds)
            min_margin = min(min_margin, result.margin)
        rows.append({
            "dim": int(d),
            "pairs": int(pairs_per_dim),
            "holds": int(holds),
            "holds_fraction": holds / pairs_per_dim,
            "min_margin": float(min_margin),
        })
    return rows


def kl_upper_bound_trace(
    hessian: SpdMatrix,
    noise_cov: SpdMatrix,
    lr: float,
    batch_size: int,
    sigma: SpdMatrix,
) -> float:
    """Trace-based upper bound on the divergence from the N(0, I) prior.

    ``(lr / batch_size) * tr(C A^-1) / 4 - log det(S) / 2 - d / 2``.
    The stationary covariance satisfies ``tr(S) = (lr / batch_size)
    * tr(C A^-1) / 2`` exactly, so when ``sigma`` is the stationary
    solution this equals the exact KL divergence.
    """
    if not (hessian.dim == noise_cov.dim == sigma.dim):
        raise DimensionMismatchError(
            f"dimensions disagree: hessian {hessian.dim}, noise {noise_cov.dim}, "
            f"sigma {sigma.dim}"
        )
    if lr <= 0 or int(batch_size) != batch_size or batch_size < 1:
        raise InvalidSpecError(
            f"need lr > 0 and integer batch_size >= 1, got lr={lr}, "
            f"batch_size={batch_size}"
        )
    trace_ca_inv = float(np.trace(np.linalg.solve(hessian.entries, noise_cov.entries)))
    d = hessian.dim
    return 0.25 * (lr / batch_size) * trace_ca_inv - 0.5 * log_det(sigma) - 0.5 * d


def dominance_report(
    sigma_pt: SpdMatrix,
    spec_pt: SampleSpec,
    pair: DomainPair,
    spec_ft: SampleSpec,
) -> DominanceReport:
    """Compare the two stages' complexity terms; ratio = ft / pt."""
    pt_term = pretrain_bound(sigma_pt, spec_pt).complexity_term
    ft_term = finetune_bound(pair, spec_ft).complexity_term
    return DominanceReport(pt_term=pt_term, ft_term=ft_term, ratio=ft_term / pt_term)
