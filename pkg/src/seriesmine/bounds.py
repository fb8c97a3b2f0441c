"""Lower-bound distance for window extensions, and its constant-time updates.

Given two windows of length L with correlation q, and the std of one of them
("the anchor") at both L and a longer target length, the smallest possible
z-normalized distance between the extended windows is

    lb = sqrt(L)           * sigma_anchor_L / sigma_anchor_target   if q <= 0
    lb = sqrt(L * (1-q^2)) * sigma_anchor_L / sigma_anchor_target   otherwise

Only the target-length std depends on how far the windows are extended, so
within one anchor every bound scales by the same positive factor from one
target length to the next — the relative order of a set of bounds never
changes. That rank preservation is what lets a handful of stored neighbors
per window stand in for the full distance profile at longer lengths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import OutOfRangeError, ZeroVarianceError
from .series import DataSeries, SubseqStats, extend_dot_product, znorm_distance

QValue = float


@dataclass(frozen=True)
class LowerBound:
    """A bound on the distance between two windows after extension.

    ``value`` never exceeds the true z-normalized distance at
    ``target_length``; ``anchor_sigma`` is the anchor's std at ``base_length``.
    """

    value: float
    base_length: int
    target_length: int
    anchor_sigma: float


@dataclass
class ProfileEntry:
    """One stored neighbor of a profile: true distance, bound, and dot product."""

    owner: int
    neighbor: int
    qt: float
    dist: float
    lb: float


def q_value(qt: float, a: SubseqStats, b: SubseqStats) -> QValue:
    """Pearson correlation of two equal-length windows, clamped to [-1, 1]."""
    if a.length != b.length:
        raise ValueError("windows must have equal length")
    if a.is_constant or b.is_constant:
        raise ZeroVarianceError(
            f"constant window at offset {a.offset if a.is_constant else b.offset}")
    q = (qt / a.length - a.mu * b.mu) / (a.sigma * b.sigma)
    return float(min(1.0, max(-1.0, q)))


def lower_bound(q: QValue, sigma_base: float, sigma_target: float,
                length: int, target_length: int | None = None) -> LowerBound:
    """Bound the extended distance from the base-length correlation.

    ``sigma_base`` and ``sigma_target`` belong to the anchor (the window whose
    extension is known). ``target_length`` defaults to ``length + 1``.
    """
    if sigma_base <= 0.0 or sigma_target <= 0.0:
        raise ZeroVarianceError("anchor window has zero variance")
    ratio = sigma_base / sigma_target
    if q <= 0.0:
        value = np.sqrt(length) * ratio
    else:
        value = np.sqrt(length * max(0.0, 1.0 - q * q)) * ratio
    return LowerBound(float(value),
                      base_length=length,
                      target_length=length + 1 if target_length is None else target_length,
                      anchor_sigma=sigma_base)


def scale_bound(lb: LowerBound, sigma_old: float, sigma_new: float) -> LowerBound:
    """Advance a bound by one target length: multiply by sigma_old / sigma_new.

    Exactly reproduces :func:`lower_bound` at the incremented target, since
    only the anchor's target-length std varies with the extension.
    """
    if sigma_old <= 0.0 or sigma_new <= 0.0:
        raise ZeroVarianceError("anchor window has zero variance")
    return replace(lb,
                   value=lb.value * (sigma_old / sigma_new),
                   target_length=lb.target_length + 1)


def update_dist_and_lb(entry: ProfileEntry, series: DataSeries, new_length: int) -> ProfileEntry:
    """Grow a stored neighbor entry by one length step in O(1).

    Extends the dot product, refreshes the true distance at ``new_length``,
    and recomputes the bound for ``new_length + 1`` from the extended
    correlation (anchored on the entry's owner). Raises
    :class:`OutOfRangeError` when either window no longer exists at
    ``new_length``; the caller drops such entries.
    """
    qt = extend_dot_product(entry.qt, series, entry.owner, entry.neighbor, new_length - 1)
    owner_stats = series.stats(entry.owner, new_length)
    nbr_stats = series.stats(entry.neighbor, new_length)
    dist = znorm_distance(qt, owner_stats, nbr_stats)
    if entry.owner + new_length < series.n:
        q = q_value(qt, owner_stats, nbr_stats)
        sigma_next = series.stats(entry.owner, new_length + 1).sigma
        lb = lower_bound(q, owner_stats.sigma, sigma_next, new_length).value
    else:
        lb = np.nan
    return ProfileEntry(entry.owner, entry.neighbor, qt, dist, lb)
