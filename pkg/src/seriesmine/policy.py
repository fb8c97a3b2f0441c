"""Shared matching policy: overlap exclusion, constant-window detection, tie-breaks.

Both the engine and the brute-force reference implementations import these
definitions, so equality checks between the two compare like with like.
Distance kernels are deliberately NOT shared (see ``oracle``).

Tie-break rule used everywhere (profile minima, harvest eviction, rankings):
the smaller offset wins; for ranked pairs, (norm distance, length, offsets)
lexicographic.
"""

import numpy as np

SIGMA_FLOOR_SCALE = 1e-7


def exclusion_zone(length: int) -> int:
    """Half-width of the trivial-match zone: ceil(length / 2)."""
    return -(-length // 2)


def is_trivial(i: int, j: int, length: int) -> bool:
    """True when windows at offsets i and j overlap too much to be a valid match."""
    return abs(i - j) < exclusion_zone(length)


def sigma_floor(values) -> float:
    """Std-dev threshold below which a window counts as constant.

    Scaled by the series' RMS (or 1 for an all-zero series). Sits above the
    resolution of cumulative-sum variance (whose cancellation noise is a few
    ulps of the mean square, ~1e-8 of RMS), so a window the O(1) kernel
    cannot distinguish from constant is treated as constant by every kernel.
    Constant windows are excluded from motif and discord candidacy.
    """
    if len(values) == 0:
        return SIGMA_FLOOR_SCALE
    rms = float(np.sqrt(np.mean(np.square(values))))
    return SIGMA_FLOOR_SCALE * (rms if rms > 0.0 else 1.0)
