"""Integer-picosecond time base.

Simulated wall-clock time is carried everywhere as an integer count of
picoseconds, so event ordering, delay sums and trace bytes are exact and
platform independent.  Floating point appears only at the edges: small
quantities (delays, clock offsets) are computed in double precision seconds
and quantized once, rounding half to even.
"""

PS_PER_SECOND = 10**12
PS_PER_NS = 10**3


def seconds_to_ps(seconds: float) -> int:
    """Quantize a duration or offset in seconds to integer picoseconds."""
    return round(seconds * PS_PER_SECOND)


def ps_to_seconds(ps: int) -> float:
    return ps / PS_PER_SECOND


def ps_to_ns(ps: int) -> float:
    return ps / PS_PER_NS


def half_ps(ps: int) -> int:
    """Half of a picosecond count, rounding halves to even."""
    if ps % 2 == 0:
        return ps // 2
    q = ps // 2  # floor; true value is q + 0.5
    return q if q % 2 == 0 else q + 1
