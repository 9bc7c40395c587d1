import cmath
import math

import numpy as np
import pytest

from ketsim import (
    ImpossibleOutcomeError,
    MeasurementRecord,
    ParameterError,
    PartialStrength,
    WeakParams,
    amplitude,
    apply_partial_outcome,
    born_probabilities,
    erase_partial,
    fidelity,
    joint_probability,
    make_pointer,
    new_register,
    partial_measure,
    postselect,
    postselect_out,
    project,
    read_pointer,
    sample_measure,
    superpose,
    weak_measure,
)

import oracles


def pair_register():
    return new_register([("a", ("0", "1", "2")), ("b", ("x", "y"))])


def spin_register():
    return new_register([("spin", ("up", "down")), ("tag", ("t0", "t1"))])


def test_born_probabilities_match_dense_marginal():
    reg = pair_register()
    for seed in range(15):
        rng = np.random.default_rng(seed)
        state = oracles.random_state(reg, rng)
        dist = born_probabilities(state, "a")
        want = oracles.dense_marginal(state, "a")
        labels = state.register.spec("a").labels
        for i, lab in enumerate(labels):
            assert dist.get(lab, 0.0) == pytest.approx(float(want[i]), abs=1e-12)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-10)


def test_joint_probability_matches_dense():
    reg = pair_register()
    rng = np.random.default_rng(42)
    state = oracles.random_state(reg, rng)
    for assignments in ({"a": "1"}, {"b": "y"}, {"a": "2", "b": "x"}):
        assert joint_probability(state, assignments) == pytest.approx(
            oracles.dense_probability(state, assignments), abs=1e-12
        )


def test_project_collapses_and_reports_probability():
    reg = pair_register()
    state = superpose(reg, [(1.0, {"a": "0", "b": "x"}), (1.0, {"a": "1", "b": "y"}), (1.0, {"a": "2", "b": "y"})])
    rec = project(state, "b", "y")
    assert rec.probability == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert rec.subsystem == "b"
    assert rec.outcome == "y"
    assert born_probabilities(rec.post_state, "b") == {"y": pytest.approx(1.0, abs=1e-12)}
    assert abs(rec.post_state.norm() - 1.0) < 1e-12


def test_project_impossible_outcome_raises():
    reg = pair_register()
    state = superpose(reg, [(1.0, {"a": "0", "b": "x"})])
    with pytest.raises(ImpossibleOutcomeError):
        project(state, "b", "y")
    with pytest.raises(ValueError):
        project(state, "b", "zzz")


def test_postselect_and_complement_partition_the_state():
    reg = pair_register()
    state = superpose(
        reg,
        [(1.0, {"a": "0", "b": "x"}), (1.0, {"a": "1", "b": "y"}), (1.0, {"a": "2", "b": "y"}), (1.0, {"a": "0", "b": "y"})],
    )
    inside = postselect(state, {"a": "0", "b": "y"})
    outside = postselect_out(state, {"a": "0", "b": "y"})
    assert inside.probability + outside.probability == pytest.approx(1.0, abs=1e-12)
    assert outside.negated and not inside.negated
    assert joint_probability(outside.post_state, {"a": "0", "b": "y"}) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ParameterError):
        postselect(state, {})
    with pytest.raises(ParameterError):
        postselect_out(state, {})


def test_postselect_out_impossible_when_everything_matches():
    reg = pair_register()
    state = superpose(reg, [(1.0, {"a": "0", "b": "x"})])
    with pytest.raises(ImpossibleOutcomeError):
        postselect_out(state, {"a": "0"})


def test_measurement_record_validation():
    reg = pair_register()
    good = superpose(reg, [(1.0, {"a": "0", "b": "x"})])
    with pytest.raises(ImpossibleOutcomeError):
        MeasurementRecord({"a": "0"}, 0.0, good)
    with pytest.raises(ImpossibleOutcomeError):
        MeasurementRecord({"a": "0"}, 1.5, good)
    bad = superpose(reg, [(1.0, {"a": "0", "b": "x"})], normalize=True)
    bad.amplitudes[(0, 0)] = 0.5  # break the norm behind the constructor's back
    with pytest.raises(ValueError):
        MeasurementRecord({"a": "0"}, 0.5, bad)


def test_sample_measure_is_seed_deterministic_and_unbiased():
    reg = spin_register()
    state = superpose(reg, [(math.sqrt(0.7), {"spin": "up", "tag": "t0"}), (math.sqrt(0.3), {"spin": "down", "tag": "t0"})],
                      normalize=False)
    a = sample_measure(state, "spin", 123)
    b = sample_measure(state, "spin", 123)
    assert a.outcomes == b.outcomes
    rng = np.random.default_rng(0)
    hits = sum(sample_measure(state, "spin", rng).outcome == "up" for _ in range(2000))
    # 4 sigma around 1400 with sigma = sqrt(2000 * .7 * .3) ~ 20.5
    assert abs(hits - 1400) < 4 * math.sqrt(2000 * 0.7 * 0.3)


def test_partial_strength_range():
    with pytest.raises(ParameterError):
        PartialStrength(-0.1)
    with pytest.raises(ParameterError):
        PartialStrength(1.1)
    assert PartialStrength(0.0).eps == 0.0


def test_partial_outcome_probabilities_are_complete():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    eps = 0.2
    click = apply_partial_outcome(state, "spin", "down", eps, "click")
    noclick = apply_partial_outcome(state, "spin", "down", eps, "no-click")
    assert click.probability == pytest.approx(eps * 0.5, abs=1e-12)
    assert click.probability + noclick.probability == pytest.approx(1.0, abs=1e-12)
    # click collapses onto the monitored branch
    assert born_probabilities(click.post_state, "spin") == {"down": pytest.approx(1.0, abs=1e-12)}
    # null result damps the monitored branch by sqrt(1-eps)
    ratio = abs(amplitude(noclick.post_state, {"spin": "down", "tag": "t0"})) / abs(
        amplitude(noclick.post_state, {"spin": "up", "tag": "t0"})
    )
    assert ratio == pytest.approx(math.sqrt(1 - eps), abs=1e-12)


def test_partial_outcome_validation():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"})])
    with pytest.raises(ParameterError):
        apply_partial_outcome(state, "spin", "up", 0.5, "maybe")
    with pytest.raises(ImpossibleOutcomeError):
        apply_partial_outcome(state, "spin", "down", 0.5, "click")


def test_null_result_walk_biases_state_monotonically():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    p_up = [born_probabilities(state, "spin")["up"]]
    for _ in range(12):
        state = apply_partial_outcome(state, "spin", "down", 0.3, "no-click").post_state
        p_up.append(born_probabilities(state, "spin")["up"])
    assert all(b > a for a, b in zip(p_up, p_up[1:]))
    assert p_up[-1] > 0.95


def test_partial_measure_click_frequency():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    eps = 0.3
    rng = np.random.default_rng(11)
    n = 3000
    clicks = sum(partial_measure(state, "spin", "down", eps, rng).outcome == "click" for _ in range(n))
    p = eps * 0.5
    assert abs(clicks - n * p) < 4 * math.sqrt(n * p * (1 - p))


def test_erase_partial_restores_magnitudes_and_phase():
    reg = spin_register()
    phase = cmath.exp(0.9j)
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (phase, {"spin": "down", "tag": "t0"})])
    # walk the state toward 'up' with null results
    eps = 0.25
    for _ in range(6):
        state = apply_partial_outcome(state, "spin", "down", eps, "no-click").post_state
    w = born_probabilities(state, "spin")
    eps_prime, success, post = erase_partial(state, "spin", ("up", "down"))
    assert success == pytest.approx(2 * w["down"], abs=1e-12)
    assert eps_prime == pytest.approx(1.0 - w["down"] / w["up"], abs=1e-12)
    target = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (phase, {"spin": "down", "tag": "t0"})])
    assert fidelity(post, target) == pytest.approx(1.0, abs=1e-12)
    # the relative phase specifically, not just |<a|b>|
    ratio = amplitude(post, {"spin": "down", "tag": "t0"}) / amplitude(post, {"spin": "up", "tag": "t0"})
    assert abs(ratio - phase) < 1e-12


def test_erase_partial_validation():
    reg = spin_register()
    lopsided = superpose(reg, [(math.sqrt(0.3), {"spin": "up", "tag": "t0"}), (math.sqrt(0.7), {"spin": "down", "tag": "t0"})],
                         normalize=False)
    with pytest.raises(ParameterError):
        erase_partial(lopsided, "spin", ("up", "down"))  # first label must dominate
    collapsed = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"})])
    with pytest.raises(ImpossibleOutcomeError):
        erase_partial(collapsed, "spin", ("up", "down"))
    wide = pair_register()
    spread = superpose(
        wide, [(1.0, {"a": "0", "b": "x"}), (1.0, {"a": "1", "b": "x"}), (1.0, {"a": "2", "b": "x"})]
    )
    with pytest.raises(ParameterError):
        erase_partial(spread, "a", ("0", "1"))  # support leaks outside the pair


def test_weak_params_validation():
    with pytest.raises(ParameterError):
        WeakParams(g=1.0, sigma=0.0)
    with pytest.raises(ParameterError):
        WeakParams(g=1.0, sigma=0.01)  # default grid cannot resolve it
    WeakParams(g=1.0, sigma=1.0)


def test_weak_measure_norm_and_validation():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    params = WeakParams(g=1.0, sigma=2.0)
    pointer = make_pointer(params)
    joint = weak_measure(state, pointer, "spin", {"up": 1.0, "down": -1.0}, params)
    assert joint.norm_sq() == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ParameterError):
        weak_measure(state, pointer, "spin", {"up": 1.0}, params)  # missing eigenvalue
    other = WeakParams(g=1.0, sigma=2.0, n=2048)
    with pytest.raises(ParameterError):
        weak_measure(state, make_pointer(other), "spin", {"up": 1.0, "down": -1.0}, params)
    # pointer dragged right onto the grid edge: containment must trip
    big_g = WeakParams(g=40.0, sigma=2.0)
    with pytest.raises(ParameterError):
        weak_measure(state, make_pointer(big_g), "spin", {"up": 1.0, "down": -1.0}, big_g)


def test_read_pointer_recovers_expectation_value():
    reg = spin_register()
    state = superpose(
        reg,
        [(math.sqrt(0.8), {"spin": "up", "tag": "t0"}), (math.sqrt(0.2), {"spin": "down", "tag": "t0"})],
        normalize=False,
    )
    params = WeakParams(g=1.0, sigma=2.0)
    joint = weak_measure(state, make_pointer(params), "spin", {"up": 1.0, "down": -1.0}, params)
    rng = np.random.default_rng(7)
    n = 4000
    readings = np.array([read_pointer(joint, rng)[0] for _ in range(n)])
    want = 0.8 - 0.2  # <A>
    se = math.sqrt(params.sigma**2 / 2 + params.g**2) / math.sqrt(n)
    assert abs(readings.mean() / params.g - want) < 4 * se
    # post state stays normalized
    _, post = read_pointer(joint, 5)
    assert abs(post.norm() - 1.0) < 1e-12


def test_read_pointer_seed_determinism():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    params = WeakParams(g=1.0, sigma=2.0)
    joint = weak_measure(state, make_pointer(params), "spin", {"up": 1.0, "down": -1.0}, params)
    r1, p1 = read_pointer(joint, 99)
    r2, p2 = read_pointer(joint, 99)
    assert r1 == r2
    assert fidelity(p1, p2) == pytest.approx(1.0, abs=1e-12)


def test_narrow_pointer_collapses_system():
    reg = spin_register()
    state = superpose(reg, [(1.0, {"spin": "up", "tag": "t0"}), (1.0, {"spin": "down", "tag": "t0"})])
    params = WeakParams(g=1.0, sigma=0.05, n=8192, x_min=-8.0, x_max=8.0)
    joint = weak_measure(state, make_pointer(params), "spin", {"up": 1.0, "down": -1.0}, params)
    rng = np.random.default_rng(13)
    for _ in range(20):
        _, post = read_pointer(joint, rng)
        top = max(born_probabilities(post, "spin").values())
        assert top > 0.999
