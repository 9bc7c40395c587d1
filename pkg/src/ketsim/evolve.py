"""Unitary evolution on labeled registers, with an invertible operation log.

Every operation here acts as an exact unitary on the joint basis (splitters,
in-place rotations, basis changes between label pairs, conditional label
permutations, conditional phases). Operations optionally append a parameter
record to an OpLog; time_reverse replays the inverse parameters in reverse
order, so round trips are exact rather than numerically approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .register import Register, StateVector, matches, prune

Matrix2 = Sequence[Sequence[complex]]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class OpEntry:
    """One logged operation: a kind tag plus the parameters that rebuilt it."""

    kind: str
    params: tuple


class OpLog:
    """Append-only record of operations applied during one scenario run."""

    def __init__(self) -> None:
        self._entries: list[OpEntry] = []

    def record(self, kind: str, params: tuple) -> None:
        self._entries.append(OpEntry(kind, params))

    @property
    def entries(self) -> tuple[OpEntry, ...]:
        return tuple(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


def _apply_label_matrix(
    state: StateVector,
    sub_index: int,
    label_indices: Sequence[int],
    matrix: Sequence[Sequence[complex]],
) -> StateVector:
    """Apply a small unitary over the given labels of one subsystem.

    Keys whose label is outside `label_indices` pass through untouched.
    """
    pos = {li: p for p, li in enumerate(label_indices)}
    new_amps: dict[tuple[int, ...], complex] = {}
    for key, amp in state.amplitudes.items():
        p = pos.get(key[sub_index])
        if p is None:
            new_amps[key] = new_amps.get(key, 0j) + amp
            continue
        for j, lj in enumerate(label_indices):
            c = matrix[j][p]
            if c == 0:
                continue
            nk = key[:sub_index] + (lj,) + key[sub_index + 1 :]
            new_amps[nk] = new_amps.get(nk, 0j) + c * amp
    return StateVector(state.register, prune(new_amps))


def _check_unitary_2x2(u: Matrix2) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    m = ((complex(u[0][0]), complex(u[0][1])), (complex(u[1][0]), complex(u[1][1])))
    # U†U = I within 1e-10
    for i in range(2):
        for j in range(2):
            acc = sum(m[k][i].conjugate() * m[k][j] for k in range(2))
            want = 1.0 if i == j else 0.0
            if abs(acc - want) > 1e-10:
                raise ValueError("matrix is not unitary within 1e-10")
    return m


def apply_split(
    state: StateVector,
    subsystem: str,
    source_label: str,
    out_pair: tuple[str, str],
    log: OpLog | None = None,
) -> StateVector:
    """Symmetric 50/50 splitter between a source port and an arm pair.

    Forward pass: |source> -> (|l1> + |l2>)/sqrt2. Return pass: the symmetric
    arm combination exits back through the source port, |l1> -> |source>/sqrt2
    + (|l1>-|l2>)/2 and |l2> -> |source>/sqrt2 - (|l1>-|l2>)/2, i.e. the
    antisymmetric combination plays the second exit port and stays in the
    arms. The map is real, symmetric and self-inverse, so applying it twice
    is the identity.
    """
    reg = state.register
    si = reg.index(subsystem)
    l1, l2 = out_pair
    idx = (
        reg.label_index(subsystem, source_label),
        reg.label_index(subsystem, l1),
        reg.label_index(subsystem, l2),
    )
    if len(set(idx)) != 3:
        raise ValueError("source label and arm pair must be three distinct labels")
    s = _INV_SQRT2
    u3 = (
        (0.0, s, s),
        (s, 0.5, -0.5),
        (s, -0.5, 0.5),
    )
    out = _apply_label_matrix(state, si, idx, u3)
    if log is not None:
        log.record("split", (subsystem, source_label, (l1, l2)))
    return out


def apply_rotation(
    state: StateVector,
    subsystem: str,
    pair: tuple[str, str],
    alpha: float,
    log: OpLog | None = None,
) -> StateVector:
    """In-place rotation on a label pair.

    |la> -> cos(a)|la> + sin(a)|lb>, |lb> -> -sin(a)|la> + cos(a)|lb>.
    n applications compose to a single rotation by n*a.
    """
    reg = state.register
    si = reg.index(subsystem)
    la, lb = pair
    idx = (reg.label_index(subsystem, la), reg.label_index(subsystem, lb))
    if idx[0] == idx[1]:
        raise ValueError("rotation pair must be two distinct labels")
    c, s = math.cos(alpha), math.sin(alpha)
    out = _apply_label_matrix(state, si, idx, ((c, -s), (s, c)))
    if log is not None:
        log.record("rotation", (subsystem, (la, lb), alpha))
    return out


def apply_basis_change(
    state: StateVector,
    subsystem: str,
    u: Matrix2,
    pair: tuple[str, str],
    out_pair: tuple[str, str] | None = None,
    log: OpLog | None = None,
) -> StateVector:
    """2x2 unitary between label bases of one subsystem.

    Without out_pair the matrix acts in place on `pair`. With out_pair the
    subsystem carries two alternative bases as separate labels (spin Z+/Z-
    versus X+/X-) and the map sends |pair_i> -> sum_j u[j][i] |out_pair_j>
    while moving any out_pair amplitude back onto `pair` through the same
    matrix. Both forms are exactly unitary; the inverse is u† on the same
    pairs.
    """
    reg = state.register
    si = reg.index(subsystem)
    m = _check_unitary_2x2(u)
    a1, a2 = pair
    ia = (reg.label_index(subsystem, a1), reg.label_index(subsystem, a2))
    if ia[0] == ia[1]:
        raise ValueError("basis pair must be two distinct labels")
    if out_pair is None:
        out = _apply_label_matrix(state, si, ia, m)
    else:
        b1, b2 = out_pair
        ib = (reg.label_index(subsystem, b1), reg.label_index(subsystem, b2))
        allidx = ia + ib
        if len(set(allidx)) != 4:
            raise ValueError("pair and out_pair must be four distinct labels")
        z = 0j
        block = (
            (z, z, m[0][0], m[0][1]),
            (z, z, m[1][0], m[1][1]),
            (m[0][0], m[0][1], z, z),
            (m[1][0], m[1][1], z, z),
        )
        out = _apply_label_matrix(state, si, allidx, block)
    if log is not None:
        log.record("basis_change", (subsystem, _matrix_tuple(m), pair, out_pair))
    return out


def _matrix_tuple(m) -> tuple:
    return ((complex(m[0][0]), complex(m[0][1])), (complex(m[1][0]), complex(m[1][1])))


def _dagger(m: Matrix2) -> tuple:
    return (
        (complex(m[0][0]).conjugate(), complex(m[1][0]).conjugate()),
        (complex(m[0][1]).conjugate(), complex(m[1][1]).conjugate()),
    )


def controlled_relabel(
    state: StateVector,
    condition: Mapping[str, str],
    mapping: Sequence[tuple[Mapping[str, str], Mapping[str, str]]],
    log: OpLog | None = None,
) -> StateVector:
    """Permute joint basis labels on every branch matching `condition`.

    Each mapping entry is (from-assignment, to-assignment) over one common set
    of subsystems; from-patterns must be pairwise distinct, and condition keys
    must not overlap mapping keys (this keeps the inverse exact: flip the
    pairs, keep the condition). The induced map must extend to a permutation
    of the joint basis: on the populated support, every target key must be
    either another source or unpopulated. Violations raise before any state
    is built. An empty mapping is the identity.
    """
    reg = state.register
    cond_items = reg.partial_items(condition)
    if not mapping:
        if log is not None:
            log.record("relabel", (tuple(condition.items()), ()))
        return StateVector(reg, dict(state.amplitudes))

    keysets = {frozenset(frm) for frm, _ in mapping}
    if len(keysets) != 1:
        raise ValueError("all mapping entries must address the same subsystems")
    for frm, to in mapping:
        if set(frm) != set(to):
            raise ValueError("from/to assignments must address the same subsystems")
    if set(condition) & set(mapping[0][0]):
        raise ValueError("condition keys must be disjoint from mapping keys")

    pairs = []
    seen_from = set()
    for frm, to in mapping:
        fi = reg.partial_items(frm)
        ti = reg.partial_items(to)
        fkey = tuple(sorted(fi))
        if fkey in seen_from:
            raise ValueError("duplicate from-assignment in mapping")
        seen_from.add(fkey)
        pairs.append((fi, ti))

    moves: dict[tuple[int, ...], tuple[int, ...]] = {}
    for key, _ in state.amplitudes.items():
        if not matches(key, cond_items):
            continue
        hit = None
        for fi, ti in pairs:
            if matches(key, fi):
                hit = ti
                break
        if hit is None:
            continue
        nk = list(key)
        for si, li in hit:
            nk[si] = li
        moves[key] = tuple(nk)

    sources = set(moves)
    targets = list(moves.values())
    if len(set(targets)) != len(targets):
        raise ValueError("mapping is not a permutation: two branches collide on one target")
    for t in targets:
        if t not in sources and t in state.amplitudes:
            raise ValueError(
                "mapping is not a permutation: target "
                f"{reg.assignment(t)} is already populated and is not itself relabeled"
            )

    new_amps = {k: a for k, a in state.amplitudes.items() if k not in sources}
    for src, dst in moves.items():
        new_amps[dst] = state.amplitudes[src]
    if log is not None:
        log.record(
            "relabel",
            (
                tuple(condition.items()),
                tuple((tuple(frm.items()), tuple(to.items())) for frm, to in mapping),
            ),
        )
    return StateVector(reg, new_amps)


def controlled_phase(
    state: StateVector,
    condition: Mapping[str, str],
    phi: float,
    log: OpLog | None = None,
) -> StateVector:
    """Multiply every branch matching the partial assignment by exp(i*phi)."""
    reg = state.register
    cond_items = reg.partial_items(condition)
    phase = complex(math.cos(phi), math.sin(phi))
    new_amps = {
        k: (a * phase if matches(k, cond_items) else a) for k, a in state.amplitudes.items()
    }
    if log is not None:
        log.record("phase", (tuple(condition.items()), phi))
    return StateVector(reg, new_amps)


def time_reverse(state: StateVector, log: OpLog) -> StateVector:
    """Apply the inverse of every logged operation in reverse order.

    Inverses come from the logged parameters, not from matrix inversion, so
    the round trip is exact: the splitter is its own inverse, rotations flip
    the angle, basis changes use u†, relabelings flip their pairs, phases
    flip sign.
    """
    out = state
    for entry in reversed(log.entries):
        if entry.kind == "split":
            subsystem, source_label, out_pair = entry.params
            out = apply_split(out, subsystem, source_label, out_pair)
        elif entry.kind == "rotation":
            subsystem, pair, alpha = entry.params
            out = apply_rotation(out, subsystem, pair, -alpha)
        elif entry.kind == "basis_change":
            subsystem, m, pair, out_pair = entry.params
            out = apply_basis_change(out, subsystem, _dagger(m), pair, out_pair)
        elif entry.kind == "relabel":
            cond, mapping = entry.params
            flipped = [(dict(to), dict(frm)) for frm, to in mapping]
            out = controlled_relabel(out, dict(cond), flipped)
        elif entry.kind == "phase":
            cond, phi = entry.params
            out = controlled_phase(out, dict(cond), -phi)
        else:
            raise ValueError(f"log contains a non-invertible entry kind {entry.kind!r}")
    return out


def recombine_probability(
    state: StateVector,
    subsystem: str,
    pair: tuple[str, str],
    source_label: str,
) -> float:
    """Probability of finding the subsystem back at its source after the
    inverse split, without mutating the state.

    Feeds the arm pair through the splitter's return pass and reads the Born
    weight of the source exit port: per spectator branch this is
    |a_l1 + a_l2|^2 / 2. Apply it to pre-recombination states; amplitude
    already sitting on the source label re-splits into the arms and
    contributes nothing to the source port.
    """
    reg = state.register
    si = reg.index(subsystem)
    i1 = reg.label_index(subsystem, pair[0])
    i2 = reg.label_index(subsystem, pair[1])
    isrc = reg.label_index(subsystem, source_label)
    if len({i1, i2, isrc}) != 3:
        raise ValueError("source label and arm pair must be three distinct labels")
    after = apply_split(state, subsystem, source_label, pair)
    return float(sum(abs(a) ** 2 for k, a in after.amplitudes.items() if k[si] == isrc))
