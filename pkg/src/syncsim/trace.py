"""Trace record serialization: one canonical JSON object per line.

All times and delays in a trace are integer picoseconds and keys are
sorted, so the byte stream for a (scenario, seed) pair is identical across
runs and platforms and can be compared by hash.
"""

import hashlib
import json

RECORD_KINDS = ("message_send", "hop_arrival", "delivery", "timeout",
                "sync_step", "attack_edge")

REQUIRED_FIELDS = ("sim_time_ps", "sequence", "kind")


def format_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def format_trace(records: list[dict]) -> str:
    return "".join(format_record(r) + "\n" for r in records)


def trace_bytes(records: list[dict]) -> bytes:
    return format_trace(records).encode("utf-8")


def trace_sha256(records: list[dict]) -> str:
    return hashlib.sha256(trace_bytes(records)).hexdigest()


class TraceFormatError(ValueError):
    pass


def parse_record(line: str, lineno: int = 0) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"line {lineno}: not valid JSON ({exc})") from None
    if not isinstance(record, dict):
        raise TraceFormatError(f"line {lineno}: record must be an object")
    for key in REQUIRED_FIELDS:
        if key not in record:
            raise TraceFormatError(f"line {lineno}: missing field {key!r}")
    if record["kind"] not in RECORD_KINDS:
        raise TraceFormatError(f"line {lineno}: unknown record kind {record['kind']!r}")
    return record


def parse_trace(text: str) -> list[dict]:
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        records.append(parse_record(line, lineno))
    return records


def load_trace(path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_trace(handle.read())


def write_trace(records: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(format_trace(records))


def diff_traces(a: list[dict], b: list[dict]) -> dict:
    """Structural comparison of two traces.

    Returns a summary with the first differing record index, per-side record
    counts, and counts of records by kind present on only one side.
    """
    first_difference = None
    for index, (ra, rb) in enumerate(zip(a, b)):
        if ra != rb:
            first_difference = {"index": index, "a": ra, "b": rb}
            break
    if first_difference is None and len(a) != len(b):
        index = min(len(a), len(b))
        longer, side = (a, "a") if len(a) > len(b) else (b, "b")
        first_difference = {"index": index, side: longer[index]}
    return {
        "identical": first_difference is None,
        "records_a": len(a),
        "records_b": len(b),
        "first_difference": first_difference,
    }
