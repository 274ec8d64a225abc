"""Cristian's and Berkeley synchronization over simulated exchanges.

Cristian's algorithm: the client asks a time server for its reading and
adopts it plus half the measured round trip.  Under asymmetric one-way
delays the estimate is off by half the asymmetry, which the simulator can
verify exactly because it also knows the true per-leg delays.

Berkeley: a coordinator polls every member, estimates each member's offset
against its own clock with the same rtt/2 compensation, averages the
offsets (its own counts as 0, optionally discarding outliers relative to
the median), and sends every participant the delta that moves it onto the
average.

Residuals are measured against ground truth the protocol participants never
see: the wall clock drives both the true delays and the reference readings.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .engine import Engine, Message
from .timebase import half_ps, ps_to_seconds, seconds_to_ps


@dataclass(frozen=True)
class SyncOptions:
    request_size_bits: int = 12000
    reply_size_bits: int = 12000
    server_service_time: float = 0.0
    outlier_threshold: float | None = None   # seconds; None disables discard
    correction_policy: str = "step"           # step | slew
    slew_rate: float | None = None            # seconds per second, for slew
    timeout_factor: float = 5.0               # multiple of baseline RTT
    default_timeout: float = 1.0              # seconds, when no baseline exists

    def __post_init__(self):
        if self.correction_policy not in ("step", "slew"):
            raise ValueError(f"unknown correction policy: {self.correction_policy!r}")
        if self.correction_policy == "slew" and (self.slew_rate is None or self.slew_rate <= 0):
            raise ValueError("slew policy requires a positive slew_rate")


@dataclass
class SyncExchange:
    """One request/reply round between two clocked nodes.

    The client-visible timestamps drive the algorithm; the true one-way
    delays and the signed post-correction error are simulator-side ground
    truth recorded for verification only.
    """

    client: str
    server: str
    t0_client_ps: int = 0
    t_server_ps: int = 0
    t1_client_ps: int = 0
    rtt_ps: int = 0
    forward_delay_ps: int = 0
    backward_delay_ps: int = 0
    offset_error_ps: int | None = None  # client minus reference, after correction

    @property
    def rtt(self) -> float:
        return ps_to_seconds(self.rtt_ps)


@dataclass
class SyncReport:
    algorithm: str
    participants: list[str]
    corrections_ps: dict[str, int] = field(default_factory=dict)
    residuals_ps: dict[str, int] = field(default_factory=dict)  # absolute values
    messages_sent: int = 0
    convergence_ps: int = 0
    failed: bool = False
    reason: str = ""
    exchanges: list[SyncExchange] = field(default_factory=list)

    @property
    def convergence_time(self) -> float:
        return ps_to_seconds(self.convergence_ps)

    @property
    def precision_range_ps(self) -> int:
        return max(self.residuals_ps.values(), default=0)

    def trace_payload(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "participants": list(self.participants),
            "corrections_ps": dict(sorted(self.corrections_ps.items())),
            "residuals_ps": dict(sorted(self.residuals_ps.items())),
            "messages_sent": self.messages_sent,
            "convergence_ps": self.convergence_ps,
            "failed": self.failed,
        }


def _round_half_even(x: Fraction) -> int:
    floor, remainder = divmod(x.numerator, x.denominator)
    doubled = 2 * remainder
    if doubled < x.denominator:
        return floor
    if doubled > x.denominator:
        return floor + 1
    return floor if floor % 2 == 0 else floor + 1


def _apply_policy(engine: Engine, node_id: str, delta_ps: int, at_ps: int,
                  options: SyncOptions) -> None:
    clock = engine.clock(node_id)
    if options.correction_policy == "step":
        clock.apply_step(delta_ps, at_ps)
    else:
        clock.apply_slew(delta_ps, options.slew_rate, at_ps)


class CristianExchange:
    """State machine for one Cristian client/server round."""

    def __init__(self, engine: Engine, client: str, server: str,
                 options: SyncOptions | None = None):
        self.engine = engine
        self.client = client
        self.server = server
        self.options = options or SyncOptions()
        self.report: SyncReport | None = None
        self.start_ps = 0
        self._exchange = SyncExchange(client, server)
        self._timeout_event = None
        self._request: Message | None = None

    @property
    def done(self) -> bool:
        return self.report is not None

    def start(self, at_ps: int) -> None:
        """Schedule the round; all clock reads happen when events execute."""
        self.start_ps = at_ps
        self.engine.schedule_ps(at_ps, "sync_step",
                                {"algorithm": "cristian", "phase": "started",
                                 "participants": [self.client, self.server]},
                                action=self._begin)

    def _begin(self) -> dict:
        engine, opts = self.engine, self.options
        at_ps = engine.now_ps
        at = ps_to_seconds(at_ps)
        self._exchange.t0_client_ps = engine.clock(self.client).reading_ps(at_ps)
        self._request = engine.send_message(
            self.client, self.server, opts.request_size_bits, at,
            purpose="sync_request", on_delivery=self._request_arrived)
        baseline = engine.baseline_rtt_ps(self.client, self.server, at,
                                          opts.request_size_bits,
                                          opts.reply_size_bits)
        if baseline is None:
            wait_ps = seconds_to_ps(opts.default_timeout)
        else:
            wait_ps = round(opts.timeout_factor *
                            (baseline + seconds_to_ps(opts.server_service_time)))
        self._timeout_event = engine.schedule_ps(
            at_ps + wait_ps, "timeout",
            {"message_id": self._request.message_id, "node": self.client},
            action=self._timed_out)
        return {}

    def _request_arrived(self, request: Message) -> None:
        engine, opts = self.engine, self.options
        reply_at_ps = request.delivery_ps + seconds_to_ps(opts.server_service_time)
        t_server_ps = engine.clock(self.server).reading_ps(reply_at_ps)
        self._exchange.forward_delay_ps = request.route.breakdown.total_ps
        self._exchange.t_server_ps = t_server_ps
        engine.send_message(self.server, self.client, opts.reply_size_bits,
                            ps_to_seconds(reply_at_ps), purpose="sync_reply",
                            timestamp_ps=t_server_ps,
                            on_delivery=self._reply_arrived)

    def _reply_arrived(self, reply: Message) -> None:
        engine = self.engine
        engine.cancel(self._timeout_event)
        ex = self._exchange
        t1_ps = reply.delivery_ps
        ex.backward_delay_ps = reply.route.breakdown.total_ps
        ex.t1_client_ps = engine.clock(self.client).reading_ps(t1_ps)
        ex.rtt_ps = ex.t1_client_ps - ex.t0_client_ps
        # the client believes the server's clock now reads timestamp + rtt/2
        estimate_ps = reply.timestamp_ps + half_ps(ex.rtt_ps)
        delta_ps = estimate_ps - ex.t1_client_ps
        _apply_policy(engine, self.client, delta_ps, t1_ps, self.options)
        ex.offset_error_ps = (engine.clock(self.client).reading_ps(t1_ps)
                              - engine.clock(self.server).reading_ps(t1_ps))
        report = SyncReport(
            algorithm="cristian", participants=[self.client, self.server],
            corrections_ps={self.client: delta_ps},
            residuals_ps={self.client: abs(ex.offset_error_ps)},
            messages_sent=2, convergence_ps=t1_ps - self.start_ps,
            exchanges=[ex])
        self.report = report
        engine.sync_reports.append(report)
        engine.schedule_ps(t1_ps, "sync_step",
                           dict(phase="completed", **report.trace_payload()))

    def _timed_out(self) -> dict:
        if self.done:
            return {}
        report = SyncReport(algorithm="cristian",
                            participants=[self.client, self.server],
                            failed=True, reason="timeout", messages_sent=1,
                            convergence_ps=self.engine.now_ps - self.start_ps)
        self.report = report
        self.engine.sync_reports.append(report)
        return {"sync_aborted": "cristian", "participants": [self.client, self.server]}


class BerkeleyRound:
    """State machine for one Berkeley coordinator round over its members."""

    def __init__(self, engine: Engine, coordinator: str, members: list[str],
                 options: SyncOptions | None = None):
        self.engine = engine
        self.coordinator = coordinator
        # the coordinator may be listed as a member; it contributes offset 0
        # without polling itself
        self.members = [m for m in members if m != coordinator]
        self.options = options or SyncOptions()
        self.report: SyncReport | None = None
        self.start_ps = 0
        self._poll_t0: dict[str, int] = {}
        self._offsets_ps: dict[str, int] = {}
        self._exchanges: dict[str, SyncExchange] = {}
        self._unreachable: list[str] = []
        self._pending_polls: set[str] = set()
        self._poll_timeouts: dict[str, object] = {}
        self._pending_corrections: set[str] = set()
        self._messages_sent = 0
        self._last_correction_ps = 0
        self._corrections_ps: dict[str, int] = {}
        self._excluded: list[str] = []
        self._corrections_deadline_event = None

    @property
    def done(self) -> bool:
        return self.report is not None

    def start(self, at_ps: int) -> None:
        """Schedule the round; all clock reads happen when events execute."""
        self.start_ps = at_ps
        self.engine.schedule_ps(at_ps, "sync_step",
                                {"algorithm": "berkeley", "phase": "started",
                                 "participants": [self.coordinator] + self.members},
                                action=self._begin)

    def _begin(self) -> dict:
        engine, opts = self.engine, self.options
        at_ps = engine.now_ps
        at = ps_to_seconds(at_ps)
        coordinator_clock = engine.clock(self.coordinator)
        for member in self.members:
            self._pending_polls.add(member)
            self._poll_t0[member] = coordinator_clock.reading_ps(at_ps)
            poll = engine.send_message(
                self.coordinator, member, opts.request_size_bits, at,
                purpose="sync_request",
                on_delivery=lambda msg, m=member: self._poll_arrived(m, msg))
            self._messages_sent += 1
            baseline = engine.baseline_rtt_ps(self.coordinator, member, at,
                                              opts.request_size_bits,
                                              opts.reply_size_bits)
            if baseline is None:
                wait_ps = seconds_to_ps(opts.default_timeout)
            else:
                wait_ps = round(opts.timeout_factor *
                                (baseline + seconds_to_ps(opts.server_service_time)))
            self._poll_timeouts[member] = engine.schedule_ps(
                at_ps + wait_ps, "timeout",
                {"message_id": poll.message_id, "node": self.coordinator},
                action=lambda m=member: self._poll_timed_out(m))
        if not self.members:
            self._compute_corrections()
        return {}

    def _poll_arrived(self, member: str, poll: Message) -> None:
        engine, opts = self.engine, self.options
        reply_at_ps = poll.delivery_ps + seconds_to_ps(opts.server_service_time)
        member_reading_ps = engine.clock(member).reading_ps(reply_at_ps)
        exchange = SyncExchange(self.coordinator, member)
        exchange.t0_client_ps = self._poll_t0[member]
        exchange.t_server_ps = member_reading_ps
        exchange.forward_delay_ps = poll.route.breakdown.total_ps
        self._exchanges[member] = exchange
        engine.send_message(member, self.coordinator, opts.reply_size_bits,
                            ps_to_seconds(reply_at_ps), purpose="sync_reply",
                            timestamp_ps=member_reading_ps,
                            on_delivery=lambda msg, m=member: self._reply_arrived(m, msg))
        self._messages_sent += 1

    def _reply_arrived(self, member: str, reply: Message) -> None:
        engine = self.engine
        engine.cancel(self._poll_timeouts[member])
        exchange = self._exchanges[member]
        t1_ps = reply.delivery_ps
        exchange.backward_delay_ps = reply.route.breakdown.total_ps
        exchange.t1_client_ps = engine.clock(self.coordinator).reading_ps(t1_ps)
        exchange.rtt_ps = exchange.t1_client_ps - exchange.t0_client_ps
        estimate_ps = reply.timestamp_ps + half_ps(exchange.rtt_ps)
        self._offsets_ps[member] = estimate_ps - exchange.t1_client_ps
        self._pending_polls.discard(member)
        if not self._pending_polls:
            self._compute_corrections()

    def _poll_timed_out(self, member: str) -> dict:
        if self.done or member not in self._pending_polls:
            return {}
        self._unreachable.append(member)
        self._pending_polls.discard(member)
        if not self._pending_polls:
            self._compute_corrections()
        return {"unreachable": member}

    def _compute_corrections(self) -> None:
        engine, opts = self.engine, self.options
        now_ps = engine.now_ps
        reachable = [m for m in self.members if m in self._offsets_ps]
        participants = [self.coordinator] + reachable
        if len(participants) < 2:
            report = SyncReport(algorithm="berkeley",
                                participants=[self.coordinator] + self.members,
                                failed=True, reason="fewer than 2 reachable participants",
                                messages_sent=self._messages_sent,
                                convergence_ps=now_ps - self.start_ps)
            self.report = report
            engine.sync_reports.append(report)
            engine.schedule_ps(now_ps, "sync_step",
                               dict(phase="aborted", **report.trace_payload()))
            return
        offsets = {self.coordinator: 0}
        offsets.update({m: self._offsets_ps[m] for m in reachable})
        values = sorted(offsets.values())
        mid = len(values) // 2
        median = (Fraction(values[mid]) if len(values) % 2 == 1
                  else Fraction(values[mid - 1] + values[mid], 2))
        if opts.outlier_threshold is not None:
            threshold_ps = seconds_to_ps(opts.outlier_threshold)
            surviving = {p: o for p, o in offsets.items()
                         if abs(Fraction(o) - median) <= threshold_ps}
            self._excluded = sorted(set(offsets) - set(surviving))
            if not surviving:  # degenerate threshold; fall back to all
                surviving = offsets
        else:
            surviving = offsets
        mean = Fraction(sum(surviving.values()), len(surviving))
        for participant in participants:
            delta_ps = _round_half_even(mean - offsets[participant])
            self._corrections_ps[participant] = delta_ps
            if participant == self.coordinator:
                _apply_policy(engine, participant, delta_ps, now_ps, opts)
                self._last_correction_ps = now_ps
            else:
                self._pending_corrections.add(participant)
                engine.send_message(
                    self.coordinator, participant, opts.reply_size_bits,
                    ps_to_seconds(now_ps), purpose="sync_correction",
                    on_delivery=lambda msg, m=participant, d=delta_ps:
                        self._correction_arrived(m, d, msg))
                self._messages_sent += 1
        if not self._pending_corrections:
            self._finish()
        else:
            # corrections that never arrive must not stall the round
            wait_ps = seconds_to_ps(opts.default_timeout)
            self._corrections_deadline_event = engine.schedule_ps(
                now_ps + wait_ps, "timeout", {"node": self.coordinator},
                action=self._corrections_deadline)

    def _correction_arrived(self, member: str, delta_ps: int, message: Message) -> None:
        _apply_policy(self.engine, member, delta_ps, message.delivery_ps, self.options)
        self._last_correction_ps = max(self._last_correction_ps, message.delivery_ps)
        self._pending_corrections.discard(member)
        if not self._pending_corrections:
            self._finish()

    def _corrections_deadline(self) -> dict:
        if self.done:
            return {}
        stragglers = sorted(self._pending_corrections)
        self._pending_corrections.clear()
        self._finish()
        return {"undelivered_corrections": stragglers}

    def _finish(self) -> None:
        engine = self.engine
        if self._corrections_deadline_event is not None:
            engine.cancel(self._corrections_deadline_event)
        t_f = self._last_correction_ps or engine.now_ps
        corrected = list(self._corrections_ps)
        readings = {p: engine.clock(p).reading_ps(t_f) for p in corrected}
        ensemble_mean = Fraction(sum(readings.values()), len(readings))
        residuals = {p: abs(_round_half_even(Fraction(readings[p]) - ensemble_mean))
                     for p in corrected}
        report = SyncReport(
            algorithm="berkeley",
            participants=[self.coordinator] + self.members,
            corrections_ps=dict(self._corrections_ps),
            residuals_ps=residuals,
            messages_sent=self._messages_sent,
            convergence_ps=t_f - self.start_ps,
            exchanges=[self._exchanges[m] for m in self.members if m in self._exchanges])
        if self._unreachable:
            report.reason = "unreachable: " + ", ".join(sorted(self._unreachable))
        self.report = report
        engine.sync_reports.append(report)
        engine.schedule_ps(engine.now_ps, "sync_step",
                           dict(phase="completed", **report.trace_payload()))


def _run_to_completion(engine: Engine, machine) -> SyncReport:
    while not machine.done:
        next_ps = engine.next_event_time_ps()
        if next_ps is None:
            raise RuntimeError("sync round cannot complete: event queue is empty")
        engine.run_until_ps(next_ps)
    return machine.report


def cristian_sync(engine: Engine, client: str, server: str,
                  at: float | None = None,
                  options: SyncOptions | None = None) -> SyncReport:
    """Run one Cristian round to completion and return its report."""
    exchange = CristianExchange(engine, client, server, options)
    exchange.start(engine.now_ps if at is None else seconds_to_ps(at))
    return _run_to_completion(engine, exchange)


def berkeley_round(engine: Engine, coordinator: str, members: list[str],
                   at: float | None = None,
                   options: SyncOptions | None = None) -> SyncReport:
    """Run one Berkeley round to completion and return its report."""
    machine = BerkeleyRound(engine, coordinator, members, options)
    machine.start(engine.now_ps if at is None else seconds_to_ps(at))
    return _run_to_completion(engine, machine)
