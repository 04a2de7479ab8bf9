"""Lagged conditional entropies between ordinal symbol sequences.

The pairwise measure is the conditional Shannon entropy of the target's
symbols given the source's symbols a fixed lag earlier, in bits. A full
tensor of these values over all ordered channel pairs and a grid of lags is
the candidate-link structure that the causal stage thresholds and prunes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from math import log2

import numpy as np

from .errors import (
    ConditioningTooLarge,
    DegenerateSample,
    InvalidLambda,
    LagTooLarge,
)
from .ordinal import PatternMatrix

# Below this many samples per joint conditioning state the plug-in entropy
# estimate becomes unreliable; we warn rather than fail.
MIN_SAMPLES_PER_STATE = 10

DEFAULT_R_MAX = 3


@dataclass(frozen=True)
class DelayGrid:
    """Strictly increasing list of non-negative lags, in samples."""

    delays: tuple[int, ...]

    def __init__(self, delays):
        delays = tuple(int(t) for t in delays)
        if not delays:
            raise ValueError("delay grid must be non-empty")
        if any(t < 0 for t in delays):
            raise ValueError("delays must be non-negative")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError("delays must be strictly increasing")
        object.__setattr__(self, "delays", delays)

    def __len__(self) -> int:
        return len(self.delays)

    def __iter__(self):
        return iter(self.delays)

    @property
    def max_delay(self) -> int:
        return self.delays[-1]

    @property
    def min_delay(self) -> int:
        return self.delays[0]


@dataclass
class CETensor:
    """N x N x J conditional entropies: values[n, m, j] = H_tau_j(X_n | X_m).

    Entry (n, m, j) measures the candidate link X_m -> X_n at lag tau_j.
    The diagonal is held at h_max so self-pairs can never look like links.
    """

    values: np.ndarray
    delays: DelayGrid
    n_patterns: int
    thresholded: bool = False

    @property
    def h_max(self) -> float:
        return log2(self.n_patterns)

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    def copy(self) -> "CETensor":
        return replace(self, values=self.values.copy())


@dataclass(frozen=True)
class ConditioningSet:
    """Set of (channel, delay) pairs whose past symbols are conditioned on."""

    members: tuple[tuple[int, int], ...]

    def __init__(self, members):
        members = tuple((int(c), int(t)) for c, t in members)
        if not members:
            raise ValueError("conditioning set must have at least one member")
        if len(set(members)) != len(members):
            raise ValueError("duplicate (channel, delay) pair in conditioning set")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def max_delay(self) -> int:
        return max(t for _, t in self.members)


def lagged_joint_counts(
    src: np.ndarray, dst: np.ndarray, tau: int, n_patterns: int
) -> np.ndarray:
    """Count co-occurrences of src symbol at t with dst symbol at t + tau."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape or src.ndim != 1:
        raise ValueError("src and dst must be one-dimensional and equally long")
    n_pairs = src.size - tau
    if n_pairs < 1:
        raise LagTooLarge(f"lag {tau} leaves no valid pairs in a series of length {src.size}")
    flat = src[:n_pairs] * n_patterns + dst[tau:]
    return np.bincount(flat, minlength=n_patterns * n_patterns).reshape(
        n_patterns, n_patterns
    )


def _conditional_entropy_from_counts(counts: np.ndarray) -> float:
    """H(col | row) in bits from a joint count matrix; empty cells contribute 0."""
    total = counts.sum()
    if total == 0:
        raise DegenerateSample("no samples to estimate entropy from")
    joint = counts / total
    row = joint.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(row > 0, joint / row, 0.0)
        terms = np.where(joint > 0, joint * np.log2(np.where(cond > 0, cond, 1.0)), 0.0)
    return float(-terms.sum())


def co_occurrence_entropy(
    src: np.ndarray, dst: np.ndarray, tau: int, n_patterns: int
) -> float:
    """Conditional entropy of dst's symbol at t + tau given src's at t, in bits."""
    counts = lagged_joint_counts(src, dst, tau, n_patterns)
    return _conditional_entropy_from_counts(counts)


def ce_tensor(pi: PatternMatrix, delays: DelayGrid) -> CETensor:
    """Pairwise conditional entropies for all ordered pairs over the lag grid."""
    n = pi.n_channels
    f = pi.n_patterns
    h_max = log2(f)
    if delays.max_delay >= pi.n_times:
        raise LagTooLarge(
            f"max delay {delays.max_delay} exceeds symbol sequence length {pi.n_times}"
        )
    values = np.full((n, n, len(delays)), h_max, dtype=float)
    for j, tau in enumerate(delays):
        for m in range(n):
            src = pi.channel(m)
            for tgt in range(n):
                if tgt == m:
                    continue
                values[tgt, m, j] = co_occurrence_entropy(src, pi.channel(tgt), tau, f)
    return CETensor(values=values, delays=delays, n_patterns=f)


def threshold(tensor: CETensor, lam: float) -> CETensor:
    """Snap every entry >= lam * h_max to exactly h_max.

    Idempotent; entries below the cut are untouched.
    """
    if not (0.0 < lam <= 1.0):
        raise InvalidLambda(f"lambda must be in (0, 1], got {lam}")
    out = tensor.copy()
    out.values[out.values >= lam * tensor.h_max] = tensor.h_max
    out.thresholded = True
    return out


def _joint_codes(pi: PatternMatrix, members, t_start: int) -> np.ndarray:
    """Mixed-radix (base m!) code of the conditioning symbols at each t."""
    f = pi.n_patterns
    n_valid = pi.n_times - t_start
    codes = np.zeros(n_valid, dtype=np.int64)
    for channel, tau in members:
        codes = codes * f + pi.symbols[t_start - tau : pi.n_times - tau, channel]
    return codes


def conditional_entropy_given_set(
    pi: PatternMatrix,
    target: int,
    cond: ConditioningSet,
    r_max: int = DEFAULT_R_MAX,
    t_start: int | None = None,
) -> float:
    """H(target symbol at t | conditioning symbols at their lags), in bits.

    Evaluated over t in [t_start, T'), where t_start defaults to the largest
    delay in the set so every lagged index exists. Passing an explicit
    t_start >= that maximum pins the window, which makes entropies for nested
    sets directly comparable.
    """
    if len(cond) > r_max:
        raise ConditioningTooLarge(
            f"conditioning set has {len(cond)} members, limit is {r_max}"
        )
    for channel, tau in cond.members:
        if not (0 <= channel < pi.n_channels):
            raise ValueError(f"conditioning channel {channel} out of range")
        if tau < 0 or tau >= pi.n_times:
            raise LagTooLarge(f"conditioning delay {tau} out of range")
    min_start = cond.max_delay
    if t_start is None:
        t_start = min_start
    elif t_start < min_start:
        raise ValueError(f"t_start {t_start} smaller than the largest delay {min_start}")
    n_valid = pi.n_times - t_start
    if n_valid < 1:
        raise DegenerateSample("no valid time indices for this conditioning set")

    f = pi.n_patterns
    if n_valid / f ** len(cond) < MIN_SAMPLES_PER_STATE:
        warnings.warn(
            f"only {n_valid} samples for {f ** len(cond)} joint conditioning states; "
            "entropy estimate may be unreliable",
            RuntimeWarning,
            stacklevel=2,
        )

    cond_codes = _joint_codes(pi, cond.members, t_start)
    target_sym = pi.symbols[t_start:, target]
    n_states = f ** len(cond)
    if n_states * f <= 10_000_000:
        counts = np.bincount(
            cond_codes * f + target_sym, minlength=n_states * f
        ).reshape(n_states, f)
        return _conditional_entropy_from_counts(counts)
    return _conditional_entropy_sparse(cond_codes, target_sym)


def _conditional_entropy_sparse(cond_codes: np.ndarray, target_sym: np.ndarray) -> float:
    """Same estimator via unique-count grouping, for very large joint alphabets."""
    total = cond_codes.size
    pair_codes = cond_codes * (target_sym.max() + 1) + target_sym
    _, joint_counts = np.unique(pair_codes, return_counts=True)
    _, state_counts = np.unique(cond_codes, return_counts=True)
    h_joint = -np.sum(joint_counts / total * np.log2(joint_counts / total))
    h_state = -np.sum(state_counts / total * np.log2(state_counts / total))
    return float(h_joint - h_state)
