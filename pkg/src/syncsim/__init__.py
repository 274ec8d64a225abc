"""Deterministic discrete-event simulator for network clock synchronization.

Models drifting software clocks, nanosecond-precision propagation delays
over a router graph, Cristian's and Berkeley synchronization, and
time-sync attack injection, with byte-reproducible traces.
"""

from .attacks import AttackSpec
from .clocks import (CLOCK_PRESETS, ClockParameters, ExtremumReport,
                     SoftwareClock, apply_correction, clock_offset,
                     extremum_analysis, preset_parameters, read_clock,
                     sample_noise)
from .delay import (HopComponent, PathBlocked, PathDelayBreakdown,
                    propagation_delay, router_path_delay, total_path_delay,
                    transmission_delay)
from .dotexport import export_graph
from .engine import Engine, Event, Message, SimConfig
from .gnss import GNSS_PRESETS, GnssPreset, gnss_preset, sample_gnss_jitter
from .metrics import metrics_report
from .netview import NetworkView
from .routing import (NoRoute, Route, RouteQuery, edge_weight_ps,
                      round_trip_routes, shortest_path)
from .scenario import (Scenario, ScenarioError, SyncScheduleEntry,
                       WorkloadEntry, build_engine, load_scenario,
                       parse_scenario, run_scenario, scenario_to_dict,
                       validate_scenario, write_scenario)
from .sync import (BerkeleyRound, CristianExchange, SyncExchange, SyncOptions,
                   SyncReport, berkeley_round, cristian_sync)
from .topology import (FailureModel, LinkSpec, NetworkGraph, NodeSpec,
                       Violation, medium_speed, router_flag, validate)
from .trace import (diff_traces, format_trace, load_trace, parse_trace,
                    trace_bytes, trace_sha256, write_trace)

__version__ = "0.1.0"
