"""Report structures for scenario runs, with deterministic serialization.

A report is a timeline of steps (state summaries, outcome distributions,
named event probabilities, cut entropies) plus a list of checks, each
carrying its expected value, the tolerance regime, and a note naming the
oracle that produced the expected value. Serialization is byte-stable:
floats are always written with 17 significant digits (enough to round-trip
IEEE doubles exactly), so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .register import StateVector

TOP_K = 8


@dataclass(frozen=True)
class Check:
    """One pass/fail assertion.

    mode 'abs': |actual - expected| <= tolerance. mode 'ge'/'le': actual is
    compared against expected as a bound, tolerance loosening the bound.
    note names the source of the expected value (which oracle or closed
    form); sweep=False excludes the check from sweep tables (used for
    families whose size depends on parameters).
    """

    name: str
    mode: str
    expected: float
    actual: float
    tolerance: float
    note: str
    passed: bool = field(init=False)
    sweep: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("abs", "ge", "le"):
            raise ValueError(f"unknown check mode {self.mode!r}")
        if not self.note:
            raise ValueError("check needs a note naming the expected value's origin")
        # numpy scalars sneak in from vector math; normalize so serialization
        # sees plain Python types
        object.__setattr__(self, "expected", float(self.expected))
        object.__setattr__(self, "actual", float(self.actual))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        if self.mode == "abs":
            ok = abs(self.actual - self.expected) <= self.tolerance
        elif self.mode == "ge":
            ok = self.actual >= self.expected - self.tolerance
        else:
            ok = self.actual <= self.expected + self.tolerance
        object.__setattr__(self, "passed", bool(ok))


@dataclass(frozen=True)
class Step:
    """One timeline entry: a labeled snapshot of the run."""

    label: str
    support: int = 0
    state: tuple = ()
    distribution: tuple | None = None  # (subsystem, {label: probability})
    events: tuple = ()  # ((name, value), ...)
    entropies: tuple = ()  # ((cut label, bits), ...)

    def __post_init__(self) -> None:
        if self.distribution is not None:
            _, probs = self.distribution
            total = sum(probs.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"step distribution sums to {total!r}, not 1 within 1e-9")


def summarize_state(state: StateVector, top_k: int = TOP_K) -> tuple:
    """Top-k basis terms by weight: (assignment, re, im, probability) each.

    Ties break on the basis key, so the summary is deterministic.
    """
    reg = state.register
    ranked = sorted(state.amplitudes.items(), key=lambda kv: (-abs(kv[1]) ** 2, kv[0]))
    out = []
    for key, amp in ranked[:top_k]:
        c = complex(amp)
        out.append((reg.assignment(key), c.real, c.imag, abs(c) ** 2))
    return tuple(out)


def make_step(
    label: str,
    state: StateVector | None = None,
    distribution: tuple[str, Mapping[str, float]] | None = None,
    events: Mapping[str, float] | None = None,
    entropies: Mapping[str, float] | None = None,
    top_k: int = TOP_K,
) -> Step:
    return Step(
        label=label,
        support=state.support() if state is not None else 0,
        state=summarize_state(state, top_k) if state is not None else (),
        distribution=(distribution[0], dict(distribution[1])) if distribution else None,
        events=tuple((k, float(v)) for k, v in (events or {}).items()),
        entropies=tuple((k, float(v)) for k, v in (entropies or {}).items()),
    )


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    params: dict
    seed: int
    steps: tuple[Step, ...]
    checks: tuple[Check, ...]
    notes: tuple[str, ...] = ()

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return "%.17g" % x


def _fmt_str(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _write_json(obj, out: list, indent: int) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(inner)
            out.append(_fmt_str(str(k)))
            out.append(": ")
            _write_json(v, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        scalars = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if scalars and len(obj) <= 4:
            out.append("[")
            for i, v in enumerate(obj):
                _write_json(v, out, indent)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(inner)
            _write_json(v, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(_fmt_str(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj) -> str:
    out: list[str] = []
    _write_json(obj, out, 0)
    out.append("\n")
    return "".join(out)


def report_to_jsonable(report: ScenarioReport) -> dict:
    steps = []
    for s in report.steps:
        entry: dict = {"label": s.label}
        if s.state:
            entry["support"] = s.support
            entry["state"] = [
                {
                    "assignment": assignment,
                    "amplitude": [re, im],
                    "probability": prob,
                }
                for assignment, re, im, prob in s.state
            ]
        if s.distribution is not None:
            subsystem, probs = s.distribution
            entry["distribution"] = {"subsystem": subsystem, "probabilities": dict(probs)}
        if s.events:
            entry["events"] = dict(s.events)
        if s.entropies:
            entry["entropies"] = dict(s.entropies)
        steps.append(entry)
    return {
        "scenario": report.scenario,
        "seed": report.seed,
        "params": dict(report.params),
        "all_passed": report.all_passed,
        "notes": list(report.notes),
        "steps": steps,
        "checks": [
            {
                "name": c.name,
                "mode": c.mode,
                "expected": c.expected,
                "actual": c.actual,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "note": c.note,
            }
            for c in report.checks
        ],
    }


def report_to_json(report: ScenarioReport) -> str:
    return dumps_json(report_to_jsonable(report))


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def report_to_csv(report: ScenarioReport) -> str:
    """Flat check table: one row per check."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "seed", "check", "mode", "expected", "actual", "tolerance", "passed", "note"])
    for c in report.checks:
        w.writerow(
            [
                report.scenario,
                report.seed,
                c.name,
                c.mode,
                _csv_cell(c.expected),
                _csv_cell(c.actual),
                _csv_cell(c.tolerance),
                _csv_cell(c.passed),
                c.note,
            ]
        )
    return buf.getvalue()


def sweep_to_csv(param: str, points: Sequence[tuple[float, ScenarioReport]]) -> str:
    """One row per sweep point: parameter value, then each stable check's actual."""
    if not points:
        raise ValueError("sweep needs at least one point")
    names = [c.name for c in points[0][1].checks if c.sweep]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([param] + names + ["all_passed"])
    for value, report in points:
        row_checks = {c.name: c for c in report.checks if c.sweep}
        if sorted(row_checks) != sorted(names):
            raise ValueError("sweep points disagree on check names; cannot tabulate")
        w.writerow(
            [_csv_cell(float(value))]
            + [_csv_cell(row_checks[n].actual) for n in names]
            + [_csv_cell(report.all_passed)]
        )
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to a file (tmp + rename)."""
    if path is None:
        print(text, end="")
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".ketsim-", dir=directory)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
