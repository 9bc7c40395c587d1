"""Labeled quantum registers and sparse state vectors.

A register is an ordered collection of named subsystems, each spanned by a
small set of string-labeled basis states (paths, spin directions, detector
readouts, bookkeeping flags). A pure state over a register is stored sparsely
as a map from joint label assignments to complex amplitudes; assignments that
never appear carry amplitude zero.

Joint basis keys are tuples of per-subsystem label indices. The canonical
enumeration order is lexicographic over those tuples, so the first subsystem
varies slowest.

StateVector instances are treated as immutable values: every operation in
this package returns a fresh state and never mutates its input. Sharing a
state between concurrent readers is therefore safe by construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

NORM_TOL = 1e-10
# Amplitudes below this magnitude are dropped from the sparse map. Well below
# every tolerance used by callers (tightest check tolerance is 1e-12).
PRUNE_TOL = 1e-15


@dataclass(frozen=True)
class SubsystemSpec:
    """One named subsystem with at least two distinct basis labels."""

    name: str
    labels: tuple[str, ...]

    def __init__(self, name: str, labels: Sequence[str]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "labels", tuple(labels))
        if not isinstance(name, str) or not name:
            raise ValueError("subsystem name must be a non-empty string")
        if len(self.labels) < 2:
            raise ValueError(
                f"subsystem {name!r} needs at least two labels, got {len(self.labels)}"
            )
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"subsystem {name!r} has duplicate labels")
        for lab in self.labels:
            if not isinstance(lab, str) or not lab:
                raise ValueError(f"subsystem {name!r} has a non-string or empty label")

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Register:
    """Ordered, uniquely named subsystems defining a joint basis."""

    subsystems: tuple[SubsystemSpec, ...]

    def __init__(self, subsystems: Sequence[SubsystemSpec]):
        object.__setattr__(self, "subsystems", tuple(subsystems))
        if not self.subsystems:
            raise ValueError("register needs at least one subsystem")
        names = [s.name for s in self.subsystems]
        if len(set(names)) != len(names):
            raise ValueError("subsystem names must be unique")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s.name: i for i, s in enumerate(self.subsystems)}

    @cached_property
    def _label_index(self) -> tuple[dict[str, int], ...]:
        return tuple({lab: i for i, lab in enumerate(s.labels)} for s in self.subsystems)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems)

    @property
    def dim(self) -> int:
        d = 1
        for s in self.subsystems:
            d *= s.dim
        return d

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown subsystem {name!r}") from None

    def spec(self, name: str) -> SubsystemSpec:
        return self.subsystems[self.index(name)]

    def label_index(self, name: str, label: str) -> int:
        si = self.index(name)
        try:
            return self._label_index[si][label]
        except KeyError:
            raise ValueError(f"subsystem {name!r} has no label {label!r}") from None

    def key(self, assignment: Mapping[str, str]) -> tuple[int, ...]:
        """Full assignment (every subsystem) -> joint basis key."""
        if set(assignment) != set(self.names):
            missing = set(self.names) - set(assignment)
            extra = set(assignment) - set(self.names)
            raise ValueError(
                f"assignment must cover every subsystem exactly; missing={sorted(missing)} unknown={sorted(extra)}"
            )
        return tuple(self.label_index(n, assignment[n]) for n in self.names)

    def partial_items(self, assignment: Mapping[str, str]) -> tuple[tuple[int, int], ...]:
        """Partial assignment -> ((subsystem index, label index), ...)."""
        return tuple((self.index(n), self.label_index(n, lab)) for n, lab in assignment.items())

    def assignment(self, key: Sequence[int]) -> dict[str, str]:
        return {s.name: s.labels[key[i]] for i, s in enumerate(self.subsystems)}

    def keys(self) -> Iterator[tuple[int, ...]]:
        """All joint basis keys in canonical order (first subsystem slowest)."""
        return itertools.product(*(range(s.dim) for s in self.subsystems))


def new_register(specs: Iterable[SubsystemSpec | tuple[str, Sequence[str]]]) -> Register:
    """Build a register from SubsystemSpec values or (name, labels) pairs."""
    built = []
    for s in specs:
        if isinstance(s, SubsystemSpec):
            built.append(s)
        else:
            name, labels = s
            built.append(SubsystemSpec(name, labels))
    return Register(built)


def matches(key: tuple[int, ...], items: tuple[tuple[int, int], ...]) -> bool:
    """True if the joint key agrees with every (subsystem, label) constraint."""
    return all(key[si] == li for si, li in items)


@dataclass
class StateVector:
    """Sparse pure state: joint basis key -> complex amplitude.

    Treat instances as immutable; operations return new states.
    """

    register: Register
    amplitudes: dict[tuple[int, ...], complex]

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n < 1e-12:
            raise ValueError("cannot normalize a zero state")
        return StateVector(self.register, {k: a / n for k, a in self.amplitudes.items()})

    def amplitude(self, assignment: Mapping[str, str]) -> complex:
        return self.amplitudes.get(self.register.key(assignment), 0j)

    def items_sorted(self) -> list[tuple[tuple[int, ...], complex]]:
        """Populated (key, amplitude) pairs in canonical basis order."""
        return sorted(self.amplitudes.items())

    def support(self) -> int:
        return len(self.amplitudes)

    def __str__(self) -> str:
        parts = []
        top = sorted(self.amplitudes.items(), key=lambda kv: (-abs(kv[1]) ** 2, kv[0]))[:6]
        for k, a in top:
            labels = ",".join(self.register.assignment(k)[n] for n in self.register.names)
            parts.append(f"({a.real:+.4f}{a.imag:+.4f}j)|{labels}>")
        extra = "" if self.support() <= 6 else f" ... (+{self.support() - 6} terms)"
        return " + ".join(parts) + extra


def prune(amplitudes: dict[tuple[int, ...], complex]) -> dict[tuple[int, ...], complex]:
    return {k: a for k, a in amplitudes.items() if abs(a) > PRUNE_TOL}


def superpose(
    register: Register,
    terms: Sequence[tuple[complex, Mapping[str, str]]],
    normalize: bool = True,
) -> StateVector:
    """Build a state from (amplitude, full assignment) terms.

    Duplicate assignments have their amplitudes summed. With normalize=False
    the coefficients must already carry unit norm within 1e-10.
    """
    amps: dict[tuple[int, ...], complex] = {}
    for coeff, assignment in terms:
        k = register.key(assignment)
        amps[k] = amps.get(k, 0j) + complex(coeff)
    amps = prune(amps)
    state = StateVector(register, amps)
    n = state.norm()
    if normalize:
        if n < 1e-12:
            raise ValueError("terms sum to the zero state; nothing to normalize")
        return state.normalized()
    if abs(n - 1.0) > NORM_TOL:
        raise ValueError(f"norm is {n!r}, not 1 within {NORM_TOL} (pass normalize=True?)")
    return state


def amplitude(state: StateVector, assignment: Mapping[str, str]) -> complex:
    """Amplitude of one fully specified joint basis state (0 if absent)."""
    return state.amplitude(assignment)


def overlap(a: StateVector, b: StateVector) -> complex:
    """<a|b> over the shared register."""
    if a.register != b.register:
        raise ValueError("states live on different registers")
    small, big = (a, b) if a.support() <= b.support() else (b, a)
    acc = 0j
    for k, amp in small.amplitudes.items():
        other = big.amplitudes.get(k)
        if other is not None:
            if small is a:
                acc += amp.conjugate() * other
            else:
                acc += other.conjugate() * amp
    return acc


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2. Insensitive to global phase. Registers must match."""
    return abs(overlap(a, b)) ** 2
