"""Global and local dipole / quadrupole moments of a gray-tone image.

Two independent routes compute the local fields:

* a naive reference (``local_dipole_field``, ``local_quadrupole_field``) that
  resolves every window explicitly and sums charges pixel by pixel, and
* ``fast_moment_fields``, which gets all window sums from exact integer
  running sums, so its cost does not depend on the window area.

Coordinates follow the pixel-index convention: x is the 1-based row index,
y the 1-based column index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    Bitmap,
    ConfigError,
    DipoleField,
    DipoleVector,
    PipelineConfig,
    QuadrupoleField,
    QuadrupoleTensor,
    ScalarField,
    check_index,
)

# largest magnitude we let int64 intermediates reach before switching to Python ints
_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# global moments


def global_dipole(bm: Bitmap) -> DipoleVector:
    """Tone-weighted mean position over the whole frame (absolute coordinates)."""
    h, w = bm.shape
    b = bm.tones.astype(np.int64)
    x = np.arange(1, h + 1, dtype=np.int64)[:, None]
    y = np.arange(1, w + 1, dtype=np.int64)[None, :]
    n = h * w
    return DipoleVector(int((b * x).sum()) / n, int((b * y).sum()) / n)


def global_quadrupole(bm: Bitmap) -> QuadrupoleTensor:
    h, w = bm.shape
    b = bm.tones.astype(np.int64)
    x = np.arange(1, h + 1, dtype=np.int64)[:, None]
    y = np.arange(1, w + 1, dtype=np.int64)[None, :]
    n = h * w
    # 2x^2 - r^2 = x^2 - y^2; integer sums keep qxx + qyy == 0 exact
    sxx = int((b * (x * x - y * y)).sum())
    sxy = int((b * x * y).sum())
    return QuadrupoleTensor(sxx / n, -sxx / n, 2 * sxy / n)


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class WindowSpec:
    """Resolved neighborhood of one pixel, after boundary substitution.

    ``rows``/``cols`` may repeat indices (clamp, reflect); the window is
    their Cartesian product and every listed pair is summed over.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    centroid_x: float
    centroid_y: float
    count: int


def substitute_index(k: int, size: int, boundary: str) -> int:
    """Bring a 1-based index back into [1, size]."""
    if 1 <= k <= size:
        return k
    if boundary == "clamp":
        return min(max(k, 1), size)
    if boundary == "reflect":
        # half-sample mirror: ... 2 1 | 1 2 ... size | size size-1 ...
        period = 2 * size
        m = (k - 1) % period
        if m >= size:
            m = period - 1 - m
        return m + 1
    raise IndexError(f"index {k} leaves the image and boundary mode is {boundary!r}")


def window_fits(cfg: PipelineConfig, bm: Bitmap, i: int, j: int) -> bool:
    rows = [i + o for o in cfg.row_offsets()]
    cols = [j + o for o in cfg.col_offsets()]
    return rows[0] >= 1 and rows[-1] <= bm.height and cols[0] >= 1 and cols[-1] <= bm.width


def resolve_window(cfg: PipelineConfig, bm: Bitmap, i: int, j: int) -> WindowSpec:
    """Neighborhood of 1-based pixel (i, j) under ``cfg``.

    In skip-border mode a window leaving the image is an error; callers check
    ``window_fits`` first and treat such pixels as zero.
    """
    check_index(bm, i, j)
    if cfg.boundary == "skip-border" and not window_fits(cfg, bm, i, j):
        raise IndexError(f"window at ({i}, {j}) leaves the image (skip-border)")
    rows = tuple(substitute_index(i + o, bm.height, cfg.boundary) for o in cfg.row_offsets())
    cols = tuple(substitute_index(j + o, bm.width, cfg.boundary) for o in cfg.col_offsets())
    return WindowSpec(
        rows=rows,
        cols=cols,
        centroid_x=sum(rows) / len(rows),
        centroid_y=sum(cols) / len(cols),
        count=len(rows) * len(cols),
    )


def _normalizer(win: WindowSpec, cfg: PipelineConfig) -> float:
    fixed = cfg.normalizer()
    return float(win.count if fixed is None else fixed)


def local_mean(bm: Bitmap, win: WindowSpec, cfg: PipelineConfig) -> float:
    if cfg.mean_normalization == "paper-4didj" and cfg.window_anchor != "centered-odd":
        raise ConfigError("paper-4didj normalization needs a centered-odd window")
    t = bm.tones
    total = sum(int(t[k - 1, l - 1]) for k in win.rows for l in win.cols)
    return total / _normalizer(win, cfg)


# ---------------------------------------------------------------------------
# naive reference


def multipole_sums(
    charges: Iterable[tuple[float, float, float]], normalizer: float, qxy_factor: int = 2
) -> tuple[DipoleVector, QuadrupoleTensor]:
    """Dipole and quadrupole of point charges ``(q, x, y)``, divided by ``normalizer``.

    Each quadrupole component is summed from its own defining expression,
    so tracelessness of the result is a genuine check rather than a given.
    """
    px = py = qxx = qyy = qxy = 0.0
    for q, x, y in charges:
        r2 = x * x + y * y
        px += q * x
        py += q * y
        qxx += q * (2 * x * x - r2)
        qyy += q * (2 * y * y - r2)
        qxy += q * (qxy_factor * x * y)
    return (
        DipoleVector(px / normalizer, py / normalizer),
        QuadrupoleTensor(qxx / normalizer, qyy / normalizer, qxy / normalizer),
    )


def window_charges(bm: Bitmap, win: WindowSpec, cfg: PipelineConfig) -> list[tuple[float, float, float]]:
    """Charges of a window relative to that window's own mean, with their coordinates."""
    mean = local_mean(bm, win, cfg)
    if cfg.origin == "window-center":
        ox, oy = win.centroid_x, win.centroid_y
    else:
        ox = oy = 0.0
    t = bm.tones
    return [
        (float(t[k - 1, l - 1]) - mean, k - ox, l - oy)
        for k in win.rows
        for l in win.cols
    ]


def window_moments(bm: Bitmap, win: WindowSpec, cfg: PipelineConfig) -> tuple[DipoleVector, QuadrupoleTensor]:
    return multipole_sums(window_charges(bm, win, cfg), _normalizer(win, cfg), cfg.qxy_factor)


def _naive_fields(bm: Bitmap, cfg: PipelineConfig):
    h, w = bm.shape
    out = np.zeros((5, h, w))
    for i in range(1, h + 1):
        for j in range(1, w + 1):
            if cfg.boundary == "skip-border" and not window_fits(cfg, bm, i, j):
                continue
            d, q = window_moments(bm, resolve_window(cfg, bm, i, j), cfg)
            out[:, i - 1, j - 1] = (d.px, d.py, q.qxx, q.qyy, q.qxy)
    return out


def local_dipole_field(bm: Bitmap, cfg: PipelineConfig) -> DipoleField:
    """Per-pixel dipole, evaluated window by window (reference path)."""
    f = _naive_fields(bm, cfg)
    return DipoleField(f[0], f[1])


def local_quadrupole_field(bm: Bitmap, cfg: PipelineConfig) -> QuadrupoleField:
    """Per-pixel quadrupole, evaluated window by window (reference path)."""
    f = _naive_fields(bm, cfg)
    return QuadrupoleField(f[2], f[3], f[4])


def naive_moment_fields(bm: Bitmap, cfg: PipelineConfig) -> tuple[DipoleField, QuadrupoleField]:
    f = _naive_fields(bm, cfg)
    return DipoleField(f[0], f[1]), QuadrupoleField(f[2], f[3], f[4])


# ---------------------------------------------------------------------------
# fast path


def _index_map(size: int, offsets: range, boundary: str) -> np.ndarray:
    """Substituted 1-based indices for nominal positions 1+min(offsets) .. size+max(offsets)."""
    nominal = range(1 + offsets[0], size + offsets[-1] + 1)
    # skip-border pixels whose window leaves the image are masked afterwards
    mode = "clamp" if boundary == "skip-border" else boundary
    return np.array([substitute_index(k, size, mode) for k in nominal], dtype=np.int64)


def _box(a: np.ndarray, size: int, axis: int) -> np.ndarray:
    """Sums over every run of ``size`` consecutive entries along ``axis``."""
    c = np.cumsum(a, axis=axis)
    pad = [(0, 0)] * a.ndim
    pad[axis] = (1, 0)
    c = np.pad(c, pad)
    n = c.shape[axis]
    return np.take(c, range(size, n), axis=axis) - np.take(c, range(0, n - size), axis=axis)


@dataclass(frozen=True)
class _WindowSums:
    """Exact integer window sums, coordinates shifted by each window's start (r, t)."""

    n: int
    r: np.ndarray  # (h, 1) start row of each window
    t: np.ndarray  # (1, w) start column
    A: np.ndarray  # sum b
    Bx: np.ndarray  # sum b (x - r)
    By: np.ndarray  # sum b (y - t)
    Cxx: np.ndarray
    Cyy: np.ndarray
    Cxy: np.ndarray
    SX: np.ndarray  # sum (x - r) over the window, (h, 1)
    SY: np.ndarray  # (1, w)
    SXX: np.ndarray
    SYY: np.ndarray
    SXY: np.ndarray  # (h, w)
    valid: np.ndarray  # (h, w) bool, False where skip-border zeroes the output


def _window_sums(bm: Bitmap, cfg: PipelineConfig) -> _WindowSums:
    h, w = bm.shape
    wh, ww = cfg.window_height, cfg.window_width
    roff, coff = cfg.row_offsets(), cfg.col_offsets()
    ridx = _index_map(h, roff, cfg.boundary)
    cidx = _index_map(w, coff, cfg.boundary)

    T = bm.tones.astype(np.int64)[np.ix_(ridx - 1, cidx - 1)]
    X = ridx[:, None]
    Y = cidx[None, :]
    r = np.arange(1, h + 1, dtype=np.int64)[:, None] + roff[0]
    t = np.arange(1, w + 1, dtype=np.int64)[None, :] + coff[0]

    # vertical pass: column sums of b, b x, b x^2 over each window's rows
    V0 = _box(T, wh, 0)
    V1 = _box(T * X, wh, 0)
    V2 = _box(T * X * X, wh, 0)
    # shift to the window's own start row; exact in integers
    V1, V2 = V1 - r * V0, V2 - 2 * r * V1 + r * r * V0

    # horizontal pass
    A = _box(V0, ww, 1)
    Bx = _box(V1, ww, 1)
    Cxx = _box(V2, ww, 1)
    H01 = _box(V0 * Y, ww, 1)
    H02 = _box(V0 * Y * Y, ww, 1)
    H11 = _box(V1 * Y, ww, 1)
    By = H01 - t * A
    Cyy = H02 - 2 * t * H01 + t * t * A
    Cxy = H11 - t * Bx

    # coordinate sums of the (substituted) index lists
    RX1 = _box(ridx, wh, 0)[:, None] - wh * r
    RX2 = _box(ridx * ridx, wh, 0)[:, None] - 2 * r * _box(ridx, wh, 0)[:, None] + wh * r * r
    CY1 = _box(cidx, ww, 0)[None, :] - ww * t
    CY2 = _box(cidx * cidx, ww, 0)[None, :] - 2 * t * _box(cidx, ww, 0)[None, :] + ww * t * t

    if cfg.boundary == "skip-border":
        rows_ok = (r >= 1) & (r + wh - 1 <= h)
        cols_ok = (t >= 1) & (t + ww - 1 <= w)
        valid = rows_ok & cols_ok
    else:
        valid = np.ones((h, w), dtype=bool)

    return _WindowSums(
        n=wh * ww, r=r, t=t, A=A, Bx=Bx, By=By, Cxx=Cxx, Cyy=Cyy, Cxy=Cxy,
        SX=ww * RX1, SY=wh * CY1, SXX=ww * RX2, SYY=wh * CY2, SXY=RX1 * CY1,
        valid=valid,
    )


def _divide(num: np.ndarray, den) -> np.ndarray:
    if num.dtype == object:
        return np.vectorize(lambda a, b: a / b, otypes=[np.float64])(num, den)
    return num / np.asarray(den, dtype=np.float64) if np.ndim(den) else num / float(den)


_SUM_NAMES = ("A", "Bx", "By", "Cxx", "Cyy", "Cxy", "SX", "SY", "SXX", "SYY", "SXY", "r", "t")


def _promote_if_needed(s: _WindowSums, bm: Bitmap, cfg: PipelineConfig, Nm: int, g: int):
    """Python-int arrays when the numerators below could overflow int64."""
    n = s.n
    span = max(cfg.window_height, cfg.window_width) + 1
    if cfg.origin == "window-center":
        bound = 12 * (max(Nm, n) // g) * n**3 * 255 * span**2
    else:
        coord = max(bm.height, bm.width) + span
        bound = 4 * Nm * n * 255 * coord**2
    arrays = [getattr(s, k) for k in _SUM_NAMES]
    if bound < _INT64_SAFE:
        return arrays
    return [np.asarray(a).astype(object) for a in arrays]


def fast_moment_fields(bm: Bitmap, cfg: PipelineConfig) -> tuple[DipoleField, QuadrupoleField]:
    """Local dipole and quadrupole fields in O(h*w) time for any window size.

    All window sums are exact integers; each output component is a single
    integer numerator divided by an integer denominator, so the only
    rounding is the final division.
    """
    s = _window_sums(bm, cfg)
    n = s.n
    fixed = cfg.normalizer()
    Nm = n if fixed is None else fixed  # mean normalizer
    N = Nm  # moment normalizer mirrors the mean normalizer
    f = cfg.qxy_factor
    g = math.gcd(Nm, n)
    A, Bx, By, Cxx, Cyy, Cxy, SX, SY, SXX, SYY, SXY, r, t = _promote_if_needed(s, bm, cfg, Nm, g)

    if cfg.origin == "window-center":
        # x' = x - cx with cx = SX / n, so sum(x') = 0 and the mean term drops
        px = _divide(n * Bx - SX * A, n * N)
        py = _divide(n * By - SY * A, n * N)
        dx2 = SX * SX - SY * SY
        num_b = n * n * (Cxx - Cyy) - 2 * n * (SX * Bx - SY * By) + dx2 * A
        num_c = n * (SXX - SYY) - dx2
        # common factor of the two normalizers cancels (all of n in pixel-count mode)
        m1, m2 = Nm // g, n // g
        den = n * n * m1 * N
        qxx = _divide(m1 * num_b - A * m2 * num_c, den)
        num_bxy = n * n * Cxy - n * SY * Bx - n * SX * By + SX * SY * A
        num_cxy = n * SXY - SX * SY
        qxy = _divide(f * (m1 * num_bxy - A * m2 * num_cxy), den)
    else:
        # undo the per-window shift to get absolute-coordinate sums
        aBx = Bx + r * A
        aBy = By + t * A
        aCxx = Cxx + 2 * r * Bx + r * r * A
        aCyy = Cyy + 2 * t * By + t * t * A
        aCxy = Cxy + t * Bx + r * By + r * t * A
        aSX = SX + r * n
        aSY = SY + t * n
        aSXX = SXX + 2 * r * SX + r * r * n
        aSYY = SYY + 2 * t * SY + t * t * n
        aSXY = SXY + t * SX + r * SY + r * t * n
        px = _divide(Nm * aBx - A * aSX, Nm * N)
        py = _divide(Nm * aBy - A * aSY, Nm * N)
        qxx = _divide(Nm * (aCxx - aCyy) - A * (aSXX - aSYY), Nm * N)
        qxy = _divide(f * (Nm * aCxy - A * aSXY), Nm * N)

    shape = bm.shape
    px, py, qxx, qxy = (np.broadcast_to(a, shape).astype(np.float64) for a in (px, py, qxx, qxy))
    if not s.valid.all():
        for a in (px, py, qxx, qxy):
            a[~s.valid] = 0.0
    return DipoleField(px, py), QuadrupoleField.traceless(qxx, qxy)


def local_mean_map(bm: Bitmap, cfg: PipelineConfig) -> ScalarField:
    """Window mean M at every pixel (zero where skip-border drops the window)."""
    s = _window_sums(bm, cfg)
    Nm = cfg.normalizer() or s.n
    m = s.A / float(Nm)
    m[~s.valid] = 0.0
    return ScalarField(m)


def charge_map(bm: Bitmap, cfg: PipelineConfig) -> ScalarField:
    """q(i, j) = b(i, j) - M(i, j), the tone's deviation from its own window mean."""
    s = _window_sums(bm, cfg)
    Nm = cfg.normalizer() or s.n
    b = bm.tones.astype(np.int64)
    q = (Nm * b - s.A) / float(Nm)
    q[~s.valid] = 0.0
    return ScalarField(q)
