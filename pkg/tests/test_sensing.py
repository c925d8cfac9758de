import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghostedge import Image, NoiseModel, ParameterError, PatternStack, ShapeError
from ghostedge.sensing import generate_patterns, measure, one_hot_patterns
from oracles import naive_measure


def test_near_one_density_gives_all_ones():
    hits = sum(
        bool(np.all(generate_patterns(2, 2, 1, 0.999999, seed).patterns == 1))
        for seed in range(100)
    )
    assert hits >= 1


def test_patterns_are_deterministic():
    assert generate_patterns(8, 8, 10, 0.5, 7) == generate_patterns(8, 8, 10, 0.5, 7)
    assert generate_patterns(8, 8, 10, 0.5, 7) != generate_patterns(8, 8, 10, 0.5, 8)


def test_patterns_are_binary_uint8():
    stack = generate_patterns(5, 6, 3, 0.3, 1)
    assert stack.patterns.dtype == np.uint8
    assert set(np.unique(stack.patterns)) <= {0, 1}
    assert stack.shape == (5, 6)


def test_prefix_property_of_stream():
    small = generate_patterns(4, 4, 5, 0.5, 3)
    large = generate_patterns(4, 4, 9, 0.5, 3)
    assert large[:5] == small


def test_per_pixel_mean_law_of_large_numbers():
    stack = generate_patterns(64, 64, 10_000, 0.5, 11)
    per_pixel = stack.patterns.mean(axis=0)
    assert np.all(np.abs(per_pixel - 0.5) <= 0.02)


@pytest.mark.parametrize("density", [0.0, 1.0, 1.5, -0.2])
def test_invalid_density(density):
    with pytest.raises(ParameterError):
        generate_patterns(2, 2, 1, density, 0)


def test_invalid_count():
    with pytest.raises(ParameterError):
        generate_patterns(2, 2, 0, 0.5, 0)


def test_zero_object_gives_zero_measurements():
    stack = generate_patterns(4, 4, 6, 0.5, 0)
    assert np.all(measure(stack, np.zeros((4, 4))).values == 0)


def test_all_ones_pattern_sums_object(rng):
    obj = rng.random((3, 5))
    y = measure(PatternStack(np.ones((1, 3, 5), dtype=np.uint8)), obj)
    assert y.values.tolist() == [pytest.approx(obj.sum(), abs=1e-12)]


def test_matches_double_loop_oracle(rng):
    obj = rng.random((4, 4))
    stack = generate_patterns(4, 4, 16, 0.5, 5)
    expected = naive_measure(stack.patterns, obj)
    assert np.max(np.abs(measure(stack, obj).values - expected)) <= 1e-12


def test_noiseless_measure_is_exactly_ax(rng):
    obj = Image.from_array(rng.random((5, 5)))
    stack = generate_patterns(5, 5, 7, 0.5, 2)
    assert np.array_equal(measure(stack, obj).values, stack.flatten() @ obj.pixels.reshape(-1))


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**31))
def test_linearity(alpha, beta, seed):
    rng = np.random.default_rng(seed)
    x1, x2 = rng.random((6, 6)), rng.random((6, 6))
    stack = generate_patterns(6, 6, 9, 0.5, seed % 1000)
    lhs = measure(stack, alpha * x1 + beta * x2).values
    rhs = alpha * measure(stack, x1).values + beta * measure(stack, x2).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        measure(generate_patterns(4, 4, 2, 0.5, 0), np.zeros((4, 5)))


def test_noise_is_seeded_and_additive():
    stack = generate_patterns(8, 8, 200, 0.5, 0)
    obj = np.full((8, 8), 0.5)
    noise = NoiseModel.gaussian(0.7)
    y1 = measure(stack, obj, noise, seed=4).values
    y2 = measure(stack, obj, noise, seed=4).values
    clean = measure(stack, obj).values
    assert np.array_equal(y1, y2)
    resid = y1 - clean
    assert abs(resid.std() - 0.7) < 0.15
    assert not np.array_equal(y1, measure(stack, obj, noise, seed=5).values)


def test_noise_model_validation():
    with pytest.raises(ParameterError):
        NoiseModel("none", 0.1)
    with pytest.raises(ParameterError):
        NoiseModel("additive-gaussian", -1.0)
    with pytest.raises(ParameterError):
        NoiseModel("poisson", 1.0)
    assert NoiseModel.gaussian(0.0).kind == "none"


def test_one_hot_patterns_are_identity():
    stack = one_hot_patterns(3, 4)
    assert np.array_equal(stack.flatten(), np.eye(12))
