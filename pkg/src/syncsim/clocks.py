"""Drifting software clocks.

A software clock reads C(t) = t + offset(t) where the offset combines a
drift polynomial (initial offset alpha0, frequency offset beta, frequency
drift gamma), optional per-reading noise/jitter, and accumulated
synchronization corrections.  The quadratic drift term gives the offset a
single extremum at t = -beta / (2*gamma), which `extremum_analysis` reports.

Model kinds:
  linear       offset = alpha0 + beta*t            (gamma forced to 0)
  quadratic    offset = alpha0 + beta*t + gamma*t^2
  user_defined offset from a piecewise-linear (time, offset) table,
               interpolated between points and held flat outside them
"""

from bisect import bisect_right
from dataclasses import dataclass, replace

from . import randstream
from .timebase import ps_to_seconds, seconds_to_ps

MODEL_KINDS = ("linear", "quadratic", "user_defined")


@dataclass(frozen=True)
class ClockParameters:
    """Drift model for one software clock.

    alpha0 is the initial offset in seconds, beta the frequency offset in
    seconds of drift per second, gamma the frequency drift rate in 1/s.
    noise_sigma is the standard deviation of the per-reading Gaussian noise;
    jitter_bound_ns adds a uniform [0, bound) per-reading jitter used for
    GNSS-disciplined reference clocks.
    """

    alpha0: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    noise_sigma: float = 0.0
    model_kind: str = "quadratic"
    offset_table: tuple[tuple[float, float], ...] = ()
    jitter_bound_ns: float = 0.0

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown clock model kind: {self.model_kind!r}")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.jitter_bound_ns < 0:
            raise ValueError("jitter_bound_ns must be >= 0")
        if self.model_kind == "user_defined":
            if not self.offset_table:
                raise ValueError("user_defined model requires an offset_table")
            times = [t for t, _ in self.offset_table]
            if times != sorted(times) or len(set(times)) != len(times):
                raise ValueError("offset_table times must be strictly increasing")

    @property
    def effective_gamma(self) -> float:
        """gamma as used in evaluation: exactly 0 unless the model is quadratic."""
        return self.gamma if self.model_kind == "quadratic" else 0.0

    def drift_offset(self, t: float) -> float:
        """Deterministic drift part of the offset at wall time t (seconds)."""
        if self.model_kind == "user_defined":
            return _interpolate(self.offset_table, t)
        offset = self.alpha0 + self.beta * t
        if self.model_kind == "quadratic":
            offset += self.gamma * t * t
        return offset


def _interpolate(table: tuple[tuple[float, float], ...], t: float) -> float:
    times = [p[0] for p in table]
    if t <= times[0]:
        return table[0][1]
    if t >= times[-1]:
        return table[-1][1]
    i = bisect_right(times, t)
    t0, v0 = table[i - 1]
    t1, v1 = table[i]
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


@dataclass(frozen=True)
class ExtremumReport:
    """Where, if anywhere, the drift offset has its local extremum."""

    has_extremum: bool
    t_star: float | None
    classification: str  # local_maximum | local_minimum | none
    concavity: float     # second derivative of the offset, 2*gamma


def extremum_analysis(params: ClockParameters) -> ExtremumReport:
    """Second-derivative analysis of the drift polynomial.

    With gamma != 0 the offset alpha(t) has a stationary point at
    t* = -beta / (2*gamma): a local maximum when gamma < 0, a local minimum
    when gamma > 0.  t* is reported even when negative; domain relevance is
    the caller's concern.  Linear and user-defined models report none.
    """
    gamma = params.effective_gamma
    if gamma == 0.0:
        return ExtremumReport(False, None, "none", 0.0)
    t_star = -params.beta / (2.0 * gamma)
    kind = "local_maximum" if gamma < 0 else "local_minimum"
    return ExtremumReport(True, t_star, kind, 2.0 * gamma)


class SoftwareClock:
    """A drifting clock owned by one node.

    Readings are pure functions of (params, seed, clock_id, query time,
    corrections applied so far); noise is drawn from a keyed stream, so the
    same query always returns the same value.  Corrections accumulate in
    integer picoseconds and change only via apply_step/apply_slew.
    """

    def __init__(self, clock_id: str, params: ClockParameters, seed: int = 0):
        self.clock_id = clock_id
        self.params = params
        self.seed = seed
        # (start_ps, delta_ps, rate) triples; rate None means instant step
        self._corrections: list[tuple[int, int, float | None]] = []

    # -- noise ------------------------------------------------------------

    def noise_at_ps(self, t_ps: int) -> float:
        """Per-reading random term in seconds, keyed by the quantized time."""
        noise = randstream.gaussian(self.seed, self.params.noise_sigma,
                                    "clock_noise", self.clock_id, t_ps)
        if self.params.jitter_bound_ns > 0.0:
            jitter = randstream.uniform(self.seed, "clock_jitter", self.clock_id, t_ps)
            noise += jitter * self.params.jitter_bound_ns * 1e-9
        return noise

    # -- corrections ------------------------------------------------------

    @property
    def pending_correction_ps(self) -> int:
        """Total correction that will eventually be applied, in picoseconds."""
        return sum(delta for _, delta, _ in self._corrections)

    def correction_at_ps(self, t_ps: int) -> int:
        """Correction actually in effect at t, honoring in-progress slews."""
        total = 0
        for start_ps, delta_ps, rate in self._corrections:
            if rate is None:
                total += delta_ps if t_ps >= start_ps else 0
                continue
            if t_ps <= start_ps:
                continue
            limit = round(rate * (t_ps - start_ps))
            applied = min(abs(delta_ps), limit)
            total += applied if delta_ps >= 0 else -applied
        return total

    def apply_step(self, delta_ps: int, at_ps: int = 0) -> None:
        self._corrections.append((at_ps, delta_ps, None))

    def apply_slew(self, delta_ps: int, rate: float, at_ps: int = 0) -> None:
        """Schedule a gradual correction at `rate` seconds per simulated second."""
        if rate <= 0:
            raise ValueError("slew rate must be > 0")
        self._corrections.append((at_ps, delta_ps, rate))

    # -- readings ---------------------------------------------------------

    def offset_ps(self, t_ps: int) -> int:
        """alpha(t) = C(t) - t in integer picoseconds."""
        drift = self.params.drift_offset(ps_to_seconds(t_ps))
        noisy = drift + self.noise_at_ps(t_ps)
        return seconds_to_ps(noisy) + self.correction_at_ps(t_ps)

    def reading_ps(self, t_ps: int) -> int:
        """C(t) in integer picoseconds."""
        return t_ps + self.offset_ps(t_ps)

    def offset_at(self, t: float) -> float:
        """alpha(t) in seconds; the query time is quantized to picoseconds."""
        return ps_to_seconds(self.offset_ps(seconds_to_ps(t)))

    def reading_at(self, t: float) -> float:
        """C(t) in seconds, defined as t + alpha(t) so the offset identity
        C(t) - t = alpha(t) holds exactly in float as well as picoseconds."""
        return t + self.offset_at(t)


def read_clock(clock: SoftwareClock, t: float) -> float:
    """C(t): the clock's reading at wall time t, in seconds."""
    if t < 0:
        raise ValueError("wall-clock time must be >= 0")
    return clock.reading_at(t)


def clock_offset(clock: SoftwareClock, t: float) -> float:
    """alpha(t) = C(t) - t, in seconds."""
    if t < 0:
        raise ValueError("wall-clock time must be >= 0")
    return clock.offset_at(t)


def sample_noise(clock: SoftwareClock, t: float) -> float:
    """The random term of a reading at t, in seconds."""
    return clock.noise_at_ps(seconds_to_ps(t))


def apply_correction(clock: SoftwareClock, delta: float, policy: str = "step",
                     rate: float | None = None, at: float = 0.0) -> SoftwareClock:
    """Apply a synchronization correction of `delta` seconds to the clock.

    `step` adds the whole delta immediately; `slew` spreads it linearly at
    `rate` seconds of correction per simulated second starting at `at`.
    """
    delta_ps = seconds_to_ps(delta)
    at_ps = seconds_to_ps(at)
    if policy == "step":
        clock.apply_step(delta_ps, at_ps)
    elif policy == "slew":
        if rate is None or rate <= 0:
            raise ValueError("slew policy requires a positive rate")
        clock.apply_slew(delta_ps, rate, at_ps)
    else:
        raise ValueError(f"unknown correction policy: {policy!r}")
    return clock


# Named presets addressable from scenario files.  GNSS presets are
# drift-free clocks whose readings carry a bounded uniform jitter.
CLOCK_PRESETS: dict[str, ClockParameters] = {
    "perfect": ClockParameters(model_kind="linear"),
    "cesium": ClockParameters(beta=1e-6, gamma=0.0, model_kind="linear"),
    "quartz": ClockParameters(beta=10e-6, gamma=-1e-10, model_kind="quadratic"),
    "gps": ClockParameters(model_kind="linear", jitter_bound_ns=30.0),
    "beidou": ClockParameters(model_kind="linear", jitter_bound_ns=50.0),
    "galileo": ClockParameters(model_kind="linear", jitter_bound_ns=30.0),
    "glonass": ClockParameters(model_kind="linear", jitter_bound_ns=40.0),
}


def preset_parameters(name: str, **overrides) -> ClockParameters:
    """Look up a preset by name, optionally overriding fields."""
    try:
        params = CLOCK_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown clock preset: {name!r}") from None
    return replace(params, **overrides) if overrides else params
