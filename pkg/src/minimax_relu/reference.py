"""Published reference results for e^x on [0, 1], x^2 on [-1, 1] and x^3 on [0, 1]
with stepsize 1e-5 and even initialization.

Values are as printed (mostly 5 decimals). Round counts and timings are
hardware dependent and are kept only for display.
"""

from typing import NamedTuple


class ReferenceCell(NamedTuple):
    mean: float
    upper: float
    lower: float
    gap: float
    rounds: int
    seconds: float


REFERENCE = {
    ("exp", 2): ReferenceCell(0.02635, 0.04247, 0.01563, 1.1356e-6, 6177, 0.6647),
    ("exp", 3): ReferenceCell(0.01170, 0.01886, 0.00694, 1.4222e-6, 11028, 1.2448),
    ("exp", 5): ReferenceCell(0.00421, 0.00680, 0.00250, 6.5323e-7, 19896, 2.1884),
    ("exp", 10): ReferenceCell(0.00105, 0.00171, 0.00063, 3.5872e-7, 41065, 4.6130),
    ("square", 2): ReferenceCell(0.125, 0.125, 0.125, 0.0, 1, 0.00026),
    ("square", 3): ReferenceCell(0.05556, 0.05556, 0.05556, 0.0, 1, 0.00069),
    ("square", 5): ReferenceCell(0.02000, 0.02000, 0.02000, 2.0e-9, 9, 0.00252),
    ("square", 10): ReferenceCell(0.00500, 0.00500, 0.00500, 2.776e-17, 18, 0.00080),
    ("cube", 2): ReferenceCell(0.04486, 0.09375, 0.0, 2.6875e-6, 11546, 1.2748),
    ("cube", 3): ReferenceCell(0.01946, 0.04167, 0.0, 3.1486e-6, 22293, 2.4536),
    ("cube", 5): ReferenceCell(0.00687, 0.01500, 0.0, 7.6881e-7, 43065, 4.6004),
    ("cube", 10): ReferenceCell(0.00169, 0.00375, 0.0, 1.1087e-6, 93872, 10.1207),
}

FUNCTIONS = ("exp", "square", "cube")
SEGMENT_COUNTS = (2, 3, 5, 10)
MEAN_TOLERANCE = 1e-4
BOUND_TOLERANCE = 1e-4
