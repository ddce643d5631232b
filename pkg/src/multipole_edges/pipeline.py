"""Edge maps from local moments: scalar P/Q maps and their tone-mapped bitmaps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bitmap, DipoleField, PipelineConfig, QuadrupoleField, ScalarField
from .moments import fast_moment_fields


@dataclass(frozen=True)
class EdgeResult:
    p_map: ScalarField
    q_map: ScalarField
    dipole_bitmap: Bitmap
    quadrupole_bitmap: Bitmap
    dipole: DipoleField
    quadrupole: QuadrupoleField

    @property
    def p_max(self) -> float:
        return self.p_map.max()

    @property
    def q_max(self) -> float:
        return self.q_map.max()


def dipole_magnitude_map(df: DipoleField) -> ScalarField:
    return ScalarField(np.sqrt(df.px * df.px + df.py * df.py))


def quadrupole_det_map(qf: QuadrupoleField) -> ScalarField:
    """|qxx*qyy - qxy^2| per pixel."""
    return ScalarField(np.abs(qf.qxx * qf.qyy - qf.qxy * qf.qxy))


def tone_values(sf: ScalarField, exponent: float) -> np.ndarray:
    """Unrounded tones 255 * (v / v_max) ** exponent; all zero when v_max is 0."""
    if not (np.isfinite(exponent) and exponent > 0):
        raise ValueError(f"exponent must be finite and positive, got {exponent!r}")
    v = sf.values
    if np.any(v < 0):
        raise ValueError("tone mapping needs a non-negative field")
    vmax = v.max()
    if vmax == 0:
        return np.zeros(v.shape)
    return 255.0 * np.minimum(v / vmax, 1.0) ** exponent


def tone_map(sf: ScalarField, exponent: float) -> Bitmap:
    """Gray tones round(255 * (v / v_max) ** exponent), rounding halves up."""
    return Bitmap(np.floor(tone_values(sf, exponent) + 0.5).astype(np.uint8))


def detect_edges(bm: Bitmap, cfg: PipelineConfig | None = None) -> EdgeResult:
    """Dipole and quadrupole edge maps of ``bm``."""
    cfg = cfg or PipelineConfig()
    df, qf = fast_moment_fields(bm, cfg)
    p = dipole_magnitude_map(df)
    q = quadrupole_det_map(qf)
    return EdgeResult(
        p_map=p,
        q_map=q,
        dipole_bitmap=tone_map(p, cfg.alpha),
        quadrupole_bitmap=tone_map(q, cfg.beta),
        dipole=df,
        quadrupole=qf,
    )
