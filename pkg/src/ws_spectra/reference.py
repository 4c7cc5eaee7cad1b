"""Published reference levels for the ``V0 = 50, r0 = 7, a = 0.6`` benchmark well.

``surrogate`` is the column computed with the exponential centrifugal
replacement, ``numerical`` the one from a general-purpose Sturm-Liouville
solver with the true barrier.  Both are printed to two decimals.
"""

from __future__ import annotations

from .closed_form import QuantumState

TOLERANCE = 0.02

# label: (surrogate, numerical)
LEVELS: dict[str, tuple[float, float]] = {
    "1s": (-49.57, -49.57),
    "2s": (-48.50, -48.50),
    "2p": (-49.52, -49.17),
    "3s": (-46.96, -46.96),
    "3p": (-48.45, -47.84),
    "3d": (-49.40, -48.68),
    "4s": (-45.02, -45.02),
    "4p": (-46.91, -46.09),
    "4d": (-48.33, -47.11),
    "4f": (-49.22, -48.12),
    "5s": (-40.11, -40.11),
    "5p": (-44.96, -43.96),
    "5d": (-46.79, -45.15),
    "5f": (-48.16, -46.32),
    "5g": (-48.99, -47.49),
    "6s": (-37.21, -37.21),
    "6p": (-42.67, -41.50),
    "6d": (-44.85, -42.85),
    "6f": (-46.62, -44.17),
    "6g": (-47.93, -45.48),
    "6h": (-48.70, -46.79),
}

COLUMN_OF_VARIANT = {"pekeris": 0, "exact": 1}


def reference_level(state: QuantumState, variant: str) -> float:
    return LEVELS[state.label][COLUMN_OF_VARIANT[variant]]
