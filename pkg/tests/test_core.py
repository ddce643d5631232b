import numpy as np
import pytest

from multipole_edges.core import (
    Bitmap,
    ConfigError,
    DipoleField,
    DipoleVector,
    PipelineConfig,
    QuadrupoleField,
    QuadrupoleTensor,
    ScalarField,
    pixel_coordinates,
)


@pytest.mark.parametrize("ij, xy", [((1, 1), (1.0, 1.0)), ((1, 5), (1.0, 5.0)), ((255, 255), (255.0, 255.0))])
def test_pixel_coordinates(ij, xy):
    assert pixel_coordinates(*ij) == xy


@pytest.mark.parametrize("ij", [(0, 1), (1, 0), (5, 1)])
def test_pixel_coordinates_out_of_range(ij):
    with pytest.raises(IndexError):
        pixel_coordinates(*ij, height=4, width=4)


def test_bitmap_validation():
    with pytest.raises(ValueError):
        Bitmap(np.array([[0, 256]]))
    with pytest.raises(ValueError):
        Bitmap(np.array([[-1, 2]]))
    with pytest.raises(ValueError):
        Bitmap(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        Bitmap(np.array([1, 2, 3]))
    with pytest.raises(ValueError):
        Bitmap(np.array([[0.5, 2.0]]))


def test_bitmap_is_immutable_copy():
    src = np.array([[1, 2], [3, 4]])
    bm = Bitmap(src)
    src[0, 0] = 99
    assert bm.tone(1, 1) == 1
    with pytest.raises(ValueError):
        bm.tones[0, 0] = 5
    assert bm.height == 2 and bm.width == 2
    assert bm.transpose().tone(1, 2) == 3


def test_fields_reject_nan():
    with pytest.raises(ValueError):
        ScalarField(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        DipoleField(np.zeros((2, 2)), np.full((2, 2), np.inf))
    with pytest.raises(ValueError):
        DipoleVector(np.nan, 0.0)
    with pytest.raises(ValueError):
        QuadrupoleTensor(0.0, 0.0, np.nan)


def test_quadrupole_traceless_check():
    QuadrupoleTensor(3.0, -3.0, 1.0)
    QuadrupoleTensor(1e12, -1e12 + 1e-4, 0.0)  # within 1e-9 relative
    with pytest.raises(ValueError):
        QuadrupoleTensor(1.0, 1.0, 0.0)
    t = QuadrupoleTensor.traceless(2.5, 7.0)
    assert t.qxx + t.qyy == 0.0
    assert t.determinant == -2.5**2 - 49.0
    with pytest.raises(ValueError):
        QuadrupoleField(np.ones((2, 2)), np.ones((2, 2)), np.zeros((2, 2)))
    f = QuadrupoleField.traceless(np.arange(4.0).reshape(2, 2), np.ones((2, 2)))
    assert f.at(2, 2) == QuadrupoleTensor(3.0, -3.0, 1.0)


def test_config_defaults():
    cfg = PipelineConfig()
    assert (cfg.window_height, cfg.window_width) == (2, 2)
    assert cfg.window_anchor == "topleft-even"
    assert cfg.origin == "window-center"
    assert cfg.qxy_factor == 2
    assert (cfg.alpha, cfg.beta) == (0.5, 0.25)
    assert list(cfg.row_offsets()) == [0, 1]
    assert list(PipelineConfig(5, 3, "centered-odd").row_offsets()) == [-2, -1, 0, 1, 2]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(window_height=1, window_width=1),
        dict(window_height=0),
        dict(window_height=3, window_width=3, window_anchor="topleft-even"),
        dict(window_height=2, window_width=2, window_anchor="centered-odd"),
        dict(mean_normalization="paper-4didj"),
        dict(window_height=1, window_width=3, window_anchor="centered-odd", mean_normalization="paper-4didj"),
        dict(alpha=0.0),
        dict(beta=float("nan")),
        dict(qxy_factor=3),
        dict(boundary="wrap"),
        dict(origin="corner"),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        PipelineConfig(**kwargs)


def test_unit_dimension_fits_either_anchor():
    PipelineConfig(1, 2, "topleft-even")
    PipelineConfig(1, 3, "centered-odd")
    assert PipelineConfig(3, 3, "centered-odd", mean_normalization="paper-4didj").normalizer() == 4
