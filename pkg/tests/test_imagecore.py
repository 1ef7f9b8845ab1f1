import numpy as np
import pytest
from hypothesis import given, strategies as st

from entrofuse.errors import ConfigError, DimensionMismatchError, FusionError
from entrofuse.imagecore import as_stack, luminance, normalize_from_8bit, quantize_to_levels


def test_normalize_bounds_and_midpoint():
    out = normalize_from_8bit(np.array([[0, 255, 128]]))
    assert out[0, 0] == 0.0
    assert out[0, 1] == 1.0
    assert out[0, 2] == pytest.approx(0.501960784313725490, abs=1e-15)


@pytest.mark.parametrize("bad", [[-1], [256], [3.5]])
def test_normalize_rejects_out_of_range(bad):
    with pytest.raises(FusionError):
        normalize_from_8bit(np.array(bad))


def test_requantize_is_identity_on_all_codes():
    codes = np.arange(256)
    assert np.array_equal(quantize_to_levels(normalize_from_8bit(codes)), codes)


def test_quantize_examples():
    assert quantize_to_levels(np.array([0.0, 1.0, 0.5])).tolist() == [0, 255, 128]


def test_quantize_rejects_too_few_levels():
    with pytest.raises(ConfigError):
        quantize_to_levels(np.zeros(3), levels=1)


@given(st.lists(st.floats(0, 1), min_size=2, max_size=50))
def test_quantize_monotone(values):
    x = np.sort(np.array(values))
    assert np.all(np.diff(quantize_to_levels(x)) >= 0)


def test_luminance_examples():
    rgb = np.array([[[1, 1, 1], [0, 0, 0], [1, 0, 0]]], dtype=float)
    y = luminance(rgb)
    assert y[0, 0] == pytest.approx(1.0)
    assert y[0, 1] == 0.0
    assert y[0, 2] == pytest.approx(0.299)


def test_luminance_between_channel_extremes(rng):
    rgb = rng.random((20, 20, 3))
    y = luminance(rgb)
    assert np.all(y <= rgb.max(axis=2) + 1e-12)
    assert np.all(y >= rgb.min(axis=2) - 1e-12)


def test_stack_validation():
    with pytest.raises(FusionError):
        as_stack([])
    with pytest.raises(DimensionMismatchError):
        as_stack([np.zeros((4, 4)), np.zeros((4, 5))])
    with pytest.raises(FusionError):
        as_stack([np.full((4, 4), 1.5)])
