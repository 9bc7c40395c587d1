"""Born-rule readout: projective, post-selected, partial, and weak measurement.

Everything here is a pure transformation; randomness enters only through a
caller-supplied seed or numpy Generator, so runs replay exactly. Projections
renormalize, and an outcome whose Born weight falls at or below the 1e-12
floor raises ImpossibleOutcomeError rather than returning NaN amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ImpossibleOutcomeError, ParameterError
from .grid import GridWavefunction, contained, gaussian_packet, translate
from .register import NORM_TOL, Register, StateVector, matches, prune

PROB_FLOOR = 1e-12


def as_generator(seed) -> np.random.Generator:
    """Accept an integer seed or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class MeasurementRecord:
    """One readout: which outcome occurred, how likely it was, what remains.

    outcomes maps subsystem name to the recorded outcome (a register label,
    or the click/no-click tag of a partial readout). negated=True means the
    record conditions on the outcome NOT being the listed assignment (a null
    result over several subsystems at once).
    """

    outcomes: dict[str, str]
    probability: float
    post_state: StateVector
    negated: bool = False

    def __post_init__(self) -> None:
        if not (PROB_FLOOR < self.probability <= 1.0 + 1e-10):
            raise ImpossibleOutcomeError(
                f"outcome probability {self.probability!r} outside (1e-12, 1]"
            )
        n = self.post_state.norm()
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"post state norm {n!r} is not 1 within {NORM_TOL}")

    @property
    def subsystem(self) -> str:
        (name,) = self.outcomes
        return name

    @property
    def outcome(self) -> str:
        (label,) = self.outcomes.values()
        return label


def born_probabilities(state: StateVector, subsystem: str) -> dict[str, float]:
    """Marginal outcome distribution of one subsystem (zero entries dropped)."""
    reg = state.register
    si = reg.index(subsystem)
    spec = reg.spec(subsystem)
    acc = [0.0] * spec.dim
    for key, amp in state.amplitudes.items():
        acc[key[si]] += abs(amp) ** 2
    return {spec.labels[i]: w for i, w in enumerate(acc) if w > 0.0}


def joint_probability(state: StateVector, assignments: Mapping[str, str]) -> float:
    """Born weight of a partial assignment, without projecting."""
    items = state.register.partial_items(assignments)
    return float(sum(abs(a) ** 2 for k, a in state.amplitudes.items() if matches(k, items)))


def _conditioned(
    state: StateVector, assignments: Mapping[str, str], keep_matching: bool
) -> tuple[float, StateVector]:
    items = state.register.partial_items(assignments)
    kept = {
        k: a for k, a in state.amplitudes.items() if matches(k, items) == keep_matching
    }
    prob = float(sum(abs(a) ** 2 for a in kept.values()))
    if prob <= PROB_FLOOR:
        word = "" if keep_matching else "complement of "
        raise ImpossibleOutcomeError(
            f"{word}{dict(assignments)} has probability {prob:g}; cannot condition on it"
        )
    scale = 1.0 / math.sqrt(prob)
    post = StateVector(state.register, {k: a * scale for k, a in kept.items()})
    return prob, post


def project(state: StateVector, subsystem: str, label: str) -> MeasurementRecord:
    """Projective readout of one subsystem onto one label."""
    state.register.label_index(subsystem, label)
    prob, post = _conditioned(state, {subsystem: label}, True)
    return MeasurementRecord({subsystem: label}, prob, post)


def postselect(state: StateVector, assignments: Mapping[str, str]) -> MeasurementRecord:
    """Condition on a joint outcome over several subsystems at once."""
    if not assignments:
        raise ParameterError("postselect needs at least one subsystem assignment")
    prob, post = _conditioned(state, assignments, True)
    return MeasurementRecord(dict(assignments), prob, post)


def postselect_out(state: StateVector, assignments: Mapping[str, str]) -> MeasurementRecord:
    """Condition on a joint outcome NOT occurring (the null-result branch).

    This is the no-detection reading: every branch matching the assignment is
    removed, the rest renormalized. With a single detector subsystem it
    coincides with projecting the detector onto its quiet label.
    """
    if not assignments:
        raise ParameterError("postselect_out needs at least one subsystem assignment")
    prob, post = _conditioned(state, assignments, False)
    return MeasurementRecord(dict(assignments), prob, post, negated=True)


def sample_measure(state: StateVector, subsystem: str, seed) -> MeasurementRecord:
    """Draw one projective outcome from the Born distribution and collapse."""
    rng = as_generator(seed)
    dist = born_probabilities(state, subsystem)
    labels = list(dist)
    weights = np.array([dist[l] for l in labels], dtype=float)
    weights /= weights.sum()
    label = labels[int(rng.choice(len(labels), p=weights))]
    return project(state, subsystem, label)


@dataclass(frozen=True)
class PartialStrength:
    """Coupling fraction of a partial readout: the detector sees only a
    portion eps of the monitored branch; eps=1 is projective, eps=0 is off."""

    eps: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.eps <= 1.0):
            raise ParameterError(f"eps must lie in [0, 1], got {self.eps!r}")


def _strength_eps(strength) -> float:
    if isinstance(strength, PartialStrength):
        return strength.eps
    return PartialStrength(float(strength)).eps


def _partial_images(
    state: StateVector, subsystem: str, monitored_label: str, eps: float
) -> tuple[float, dict, float, dict]:
    """(p_click, click image, p_noclick, no-click image), images unnormalized.

    Click operator: sqrt(eps) * P_monitored. No-click operator:
    P_rest + sqrt(1-eps) * P_monitored. Their squares sum to the identity.
    """
    reg = state.register
    si = reg.index(subsystem)
    mi = reg.label_index(subsystem, monitored_label)
    s_click = math.sqrt(eps)
    s_pass = math.sqrt(1.0 - eps)
    click: dict = {}
    noclick: dict = {}
    for k, a in state.amplitudes.items():
        if k[si] == mi:
            click[k] = s_click * a
            noclick[k] = s_pass * a
        else:
            noclick[k] = a
    p_click = sum(abs(a) ** 2 for a in click.values())
    p_noclick = sum(abs(a) ** 2 for a in noclick.values())
    return p_click, prune(click), p_noclick, prune(noclick)


def apply_partial_outcome(
    state: StateVector, subsystem: str, monitored_label: str, strength, outcome: str
) -> MeasurementRecord:
    """Deterministically apply one partial-readout outcome ('click'/'no-click')."""
    eps = _strength_eps(strength)
    p_click, click, p_noclick, noclick = _partial_images(state, subsystem, monitored_label, eps)
    if outcome == "click":
        p, image = p_click, click
    elif outcome == "no-click":
        p, image = p_noclick, noclick
    else:
        raise ParameterError(f"outcome must be 'click' or 'no-click', got {outcome!r}")
    if p <= PROB_FLOOR:
        raise ImpossibleOutcomeError(f"partial outcome {outcome!r} has probability {p:g}")
    scale = 1.0 / math.sqrt(p)
    post = StateVector(state.register, {k: a * scale for k, a in image.items()})
    return MeasurementRecord({subsystem: outcome}, p, post)


def partial_measure(
    state: StateVector, subsystem: str, monitored_label: str, strength, seed
) -> MeasurementRecord:
    """Sample a partial readout of the monitored branch.

    Click probability is eps times the branch's Born weight; the no-click
    image keeps the rest untouched and damps the monitored branch by
    sqrt(1-eps), so repeated null results bias the state without collapsing.
    """
    eps = _strength_eps(strength)
    rng = as_generator(seed)
    p_click, _, _, _ = _partial_images(state, subsystem, monitored_label, eps)
    outcome = "click" if rng.random() < p_click else "no-click"
    return apply_partial_outcome(state, subsystem, monitored_label, eps, outcome)


def erase_partial(
    state: StateVector, subsystem: str, pair: tuple[str, str]
) -> tuple[float, float, StateVector]:
    """Undo the bias of earlier null results on a two-label subsystem.

    For a state a|l_boosted> + b|l_suppressed> with |a| >= |b| > 0, a second
    partial readout on the boosted branch with eps' solving
    sqrt(1-eps')*|a| = |b| returns, on its no-click outcome, to equal
    magnitudes with the relative phase intact. Returns
    (eps', success probability = 2|b|^2, the no-click post state).
    """
    l_boost, l_supp = pair
    w = born_probabilities(state, subsystem)
    w_boost = w.get(l_boost, 0.0)
    w_supp = w.get(l_supp, 0.0)
    if abs(w_boost + w_supp - 1.0) > NORM_TOL:
        raise ParameterError("state must be supported on the given pair alone")
    if w_supp <= PROB_FLOOR:
        raise ImpossibleOutcomeError(
            "suppressed branch has no amplitude left; the bias is a full collapse"
        )
    if w_boost < w_supp - NORM_TOL:
        raise ParameterError("first pair label must carry the boosted (larger) weight")
    eps_prime = 1.0 - w_supp / w_boost
    record = apply_partial_outcome(state, subsystem, l_boost, eps_prime, "no-click")
    success = 2.0 * w_supp
    return eps_prime, success, record.post_state


@dataclass(frozen=True)
class WeakParams:
    """Pointer coupling: each eigenvalue shifts a Gaussian pointer by g*value.

    sigma is the pointer width (amplitude exp(-x^2/2 sigma^2)); the grid must
    resolve it with at least 8 points per sigma.
    """

    g: float
    sigma: float
    n: int = 4096
    x_min: float = -40.0
    x_max: float = 40.0

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0):
            raise ParameterError("sigma must be positive")
        if not math.isfinite(self.g):
            raise ParameterError("g must be finite")
        dx = (self.x_max - self.x_min) / self.n
        if dx > self.sigma / 8.0:
            raise ParameterError(
                f"grid spacing {dx:g} does not resolve sigma={self.sigma:g}"
                " (need >= 8 points per sigma)"
            )


def make_pointer(params: WeakParams) -> GridWavefunction:
    """Centered Gaussian pointer on the params grid."""
    return gaussian_packet(params.n, params.x_min, params.x_max, 0.0, params.sigma)


@dataclass(frozen=True, eq=False)
class WeakJointState:
    """System-pointer state after a weak coupling.

    pointers maps each populated system key to its (unnormalized) pointer
    amplitude array; the system amplitude is folded in, so the total norm
    sum_k sum_j |arr_k[j]|^2 dx is 1.
    """

    register: Register
    n: int
    x_min: float
    x_max: float
    pointers: dict

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    def norm_sq(self) -> float:
        return float(
            sum(np.sum(np.abs(arr) ** 2) for arr in self.pointers.values()) * self.dx
        )


def weak_measure(
    state: StateVector,
    pointer: GridWavefunction,
    subsystem: str,
    observable: Mapping[str, float],
    params: WeakParams,
) -> WeakJointState:
    """Couple an observable of one subsystem to the pointer position.

    Each branch drags its pointer copy by g times the branch's eigenvalue;
    nothing is sampled yet, so the joint state stays pure. The shifted
    pointers must remain contained on the grid.
    """
    reg = state.register
    si = reg.index(subsystem)
    spec = reg.spec(subsystem)
    if pointer.n != params.n or pointer.x_min != params.x_min or pointer.x_max != params.x_max:
        raise ParameterError("pointer grid does not match params grid")
    shifted: dict[int, np.ndarray] = {}
    pointers: dict = {}
    for key, amp in state.amplitudes.items():
        label = spec.labels[key[si]]
        if label not in observable:
            raise ParameterError(f"observable gives no eigenvalue for populated label {label!r}")
        li = key[si]
        if li not in shifted:
            moved = translate(pointer, params.g * float(observable[label]))
            if not contained(moved):
                raise ParameterError(
                    "shifted pointer leaks off the grid; enlarge the domain or reduce g"
                )
            shifted[li] = moved.amplitudes
        pointers[key] = amp * shifted[li]
    return WeakJointState(reg, params.n, params.x_min, params.x_max, pointers)


def read_pointer(joint: WeakJointState, seed) -> tuple[float, StateVector]:
    """Sample the pointer position and collapse the system accordingly.

    Returns (position reading, normalized post-readout system state). A wide
    pointer barely disturbs the system; ensemble means of readings divided by
    g recover the observable's expectation value.
    """
    rng = as_generator(seed)
    keys = list(joint.pointers)
    stack = np.stack([joint.pointers[k] for k in keys])
    density = np.sum(np.abs(stack) ** 2, axis=0) * joint.dx
    total = float(density.sum())
    if total <= PROB_FLOOR:
        raise ImpossibleOutcomeError("joint state has no weight to sample")
    j = int(rng.choice(joint.n, p=density / total))
    xs = joint.x_min + joint.dx * np.arange(joint.n)
    reading = float(xs[j])
    amps = {k: complex(stack[i, j]) for i, k in enumerate(keys)}
    amps = prune(amps)
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    if norm <= 1e-150:
        raise ImpossibleOutcomeError("sampled a zero-weight pointer position")
    post = StateVector(joint.register, {k: a / norm for k, a in amps.items()})
    return reading, post
