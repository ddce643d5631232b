import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import tone_arrays
from multipole_edges.core import Bitmap, DipoleField, PipelineConfig, QuadrupoleField, ScalarField
from multipole_edges.pipeline import detect_edges, dipole_magnitude_map, quadrupole_det_map, tone_map, tone_values


def step_image(n=16, vertical=True):
    tones = np.zeros((n, n), dtype=int)
    tones[:, n // 2:] = 255
    return Bitmap(tones if vertical else tones.T)


def test_dipole_magnitude_examples():
    z = np.zeros((2, 2))
    assert np.all(dipole_magnitude_map(DipoleField(z, z)).values == 0)
    p = dipole_magnitude_map(DipoleField(np.array([[31.875, 3.0]]), np.array([[0.0, 4.0]])))
    assert p.values.tolist() == [[31.875, 5.0]]


def test_quadrupole_det_examples():
    qf = QuadrupoleField.traceless(np.array([[0.0, 0.0, 7.0]]), np.array([[0.0, 63.75, 0.0]]))
    assert quadrupole_det_map(qf).values.tolist() == [[0.0, 4064.0625, 49.0]]


def test_tone_map_examples():
    assert np.all(tone_map(ScalarField(np.zeros((3, 3))), 0.5).tones == 0)
    for e in (0.25, 0.5, 1.0, 3.0):
        assert tone_map(ScalarField(np.array([[0.0, 8.0]])), e).tones.tolist() == [[0, 255]]
    # 255 * (1/4) ** 0.5 = 127.5 rounds half up
    assert tone_map(ScalarField(np.array([[1.0, 4.0]])), 0.5).tones.tolist() == [[128, 255]]


def test_tone_map_errors():
    with pytest.raises(ValueError):
        tone_map(ScalarField(np.array([[-1.0, 2.0]])), 0.5)
    with pytest.raises(ValueError):
        tone_map(ScalarField(np.array([[1.0]])), 0.0)


@given(arrays(np.float64, (1, 30), elements=st.floats(0, 1e6)), st.floats(0.05, 4.0))
def test_tone_map_monotone(values, exponent):
    out = tone_map(ScalarField(values), exponent).tones[0].astype(int)
    order = np.argsort(values[0], kind="stable")
    assert np.all(np.diff(out[order]) >= 0)


@given(tone_arrays(max_side=10), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_argmax_independent_of_exponent(tones, a1, a2):
    # holds for the real-valued map; rounding may pull near-maximal pixels up to 255 too
    p = dipole_magnitude_map(detect_edges(Bitmap(tones)).dipole)
    v1, v2 = tone_values(p, a1), tone_values(p, a2)
    assert np.array_equal(v1 == v1.max(), v2 == v2.max())
    peak = p.values == p.values.max()
    assert np.all(tone_map(p, a1).tones[peak] == (255 if p.max() > 0 else 0))


@given(tone_arrays(max_side=10), st.sampled_from([PipelineConfig(), PipelineConfig(3, 3, "centered-odd")]))
def test_det_identity_and_sign(tones, cfg):
    res = detect_edges(Bitmap(tones), cfg)
    qf = res.quadrupole
    ident = qf.qxx**2 + qf.qxy**2
    q = res.q_map.values
    assert np.all(res.p_map.values >= 0) and np.all(q >= 0)
    assert np.all(np.abs(q - ident) <= 1e-9 * np.maximum(q, 1))
    assert res.p_max == res.p_map.values.max() and res.q_max == q.max()


@given(tone_arrays(max_side=10, max_tone=200), st.integers(1, 55))
def test_outputs_shift_invariant(tones, c):
    a = detect_edges(Bitmap(tones))
    b = detect_edges(Bitmap(tones + c))
    assert a.dipole_bitmap == b.dipole_bitmap
    assert a.quadrupole_bitmap == b.quadrupole_bitmap


def test_constant_image_gives_black_maps():
    res = detect_edges(Bitmap(np.full((8, 8), 120)))
    assert np.all(res.dipole_bitmap.tones == 0)
    assert np.all(res.quadrupole_bitmap.tones == 0)
    assert res.p_max == 0 and res.q_max == 0


def test_step_dipole_line():
    res = detect_edges(step_image(16))
    p = res.p_map.values
    # only windows spanning columns 8 and 9 (1-based) see both levels
    assert np.all(p[:, 7] == p.max()) and p.max() > 0
    assert np.count_nonzero(p) == 16
    expected = np.zeros((16, 16), dtype=np.uint8)
    expected[:, 7] = 255
    assert np.array_equal(res.dipole_bitmap.tones, expected)


def test_step_transpose():
    a = detect_edges(step_image(16, vertical=True))
    b = detect_edges(step_image(16, vertical=False))
    assert np.array_equal(b.dipole_bitmap.tones, a.dipole_bitmap.tones.T)
    assert np.array_equal(b.quadrupole_bitmap.tones, a.quadrupole_bitmap.tones.T)


def test_oblique_edge_lights_quadrupole_map():
    tones = np.where(np.add.outer(np.arange(12), np.arange(12)) >= 12, 255, 0)
    res = detect_edges(Bitmap(tones))
    assert res.q_max > 0
    assert res.quadrupole_bitmap.tones.max() == 255
