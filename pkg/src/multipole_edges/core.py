"""Value types shared across the package.

Arrays held by these types are copied on construction and marked read-only,
so instances can be passed around freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Anchor = Literal["centered-odd", "topleft-even"]
Boundary = Literal["clamp", "reflect", "skip-border"]
Origin = Literal["window-center", "absolute"]
MeanNorm = Literal["pixel-count", "paper-4didj"]

ANCHORS = ("centered-odd", "topleft-even")
BOUNDARIES = ("clamp", "reflect", "skip-border")
ORIGINS = ("window-center", "absolute")
MEAN_NORMS = ("pixel-count", "paper-4didj")

TRACE_RTOL = 1e-9


class ConfigError(ValueError):
    """Raised for invalid or mutually inconsistent pipeline settings."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _check_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")


@dataclass(frozen=True, eq=False)
class Bitmap:
    """An h x w grid of 8-bit gray tones, stored row-major."""

    tones: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.tones)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"bitmap must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
                raise ValueError("bitmap tones must be integers")
        elif arr.dtype.kind not in "iub":
            raise ValueError(f"unsupported tone dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("bitmap tones must lie in [0, 255]")
        object.__setattr__(self, "tones", _frozen(arr.astype(np.uint8)))

    @classmethod
    def from_rows(cls, rows) -> "Bitmap":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def height(self) -> int:
        return self.tones.shape[0]

    @property
    def width(self) -> int:
        return self.tones.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.tones.shape

    def tone(self, i: int, j: int) -> int:
        """Tone at 1-based position (i, j)."""
        check_index(self, i, j)
        return int(self.tones[i - 1, j - 1])

    def transpose(self) -> "Bitmap":
        return Bitmap(self.tones.T)

    def __eq__(self, other):
        if not isinstance(other, Bitmap):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.tones, other.tones))

    def __repr__(self):
        return f"Bitmap({self.height}x{self.width})"


@dataclass(frozen=True, eq=False)
class ScalarField:
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"field must be a non-empty 2-D grid, got shape {arr.shape}")
        _check_finite("scalar field", arr)
        object.__setattr__(self, "values", _frozen(arr))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def max(self) -> float:
        # recomputed on demand; the field is immutable so this never goes stale
        return float(self.values.max())

    def __repr__(self):
        return f"ScalarField({self.height}x{self.width})"


@dataclass(frozen=True)
class DipoleVector:
    px: float
    py: float

    def __post_init__(self):
        if not (np.isfinite(self.px) and np.isfinite(self.py)):
            raise ValueError("dipole components must be finite")

    @property
    def magnitude(self) -> float:
        return float(np.hypot(self.px, self.py))


@dataclass(frozen=True)
class QuadrupoleTensor:
    """Symmetric traceless 2x2 tensor [[qxx, qxy], [qxy, qyy]]."""

    qxx: float
    qyy: float
    qxy: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.qxx, self.qyy, self.qxy)):
            raise ValueError("quadrupole components must be finite")
        scale = max(abs(self.qxx), abs(self.qyy), 1.0)
        if abs(self.qxx + self.qyy) > TRACE_RTOL * scale:
            raise ValueError(f"tensor is not traceless: qxx + qyy = {self.qxx + self.qyy!r}")

    @classmethod
    def traceless(cls, qxx: float, qxy: float) -> "QuadrupoleTensor":
        return cls(qxx, -qxx, qxy)

    @property
    def determinant(self) -> float:
        return self.qxx * self.qyy - self.qxy * self.qxy


@dataclass(frozen=True, eq=False)
class DipoleField:
    px: np.ndarray
    py: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.px, dtype=np.float64)
        py = np.asarray(self.py, dtype=np.float64)
        if px.ndim != 2 or px.shape != py.shape or 0 in px.shape:
            raise ValueError("dipole components must be equal-shaped non-empty 2-D grids")
        _check_finite("px", px)
        _check_finite("py", py)
        object.__setattr__(self, "px", _frozen(px))
        object.__setattr__(self, "py", _frozen(py))

    @property
    def shape(self) -> tuple[int, int]:
        return self.px.shape

    def at(self, i: int, j: int) -> DipoleVector:
        return DipoleVector(float(self.px[i - 1, j - 1]), float(self.py[i - 1, j - 1]))


@dataclass(frozen=True, eq=False)
class QuadrupoleField:
    qxx: np.ndarray
    qyy: np.ndarray
    qxy: np.ndarray

    def __post_init__(self):
        comps = [np.asarray(getattr(self, n), dtype=np.float64) for n in ("qxx", "qyy", "qxy")]
        if comps[0].ndim != 2 or 0 in comps[0].shape or any(c.shape != comps[0].shape for c in comps):
            raise ValueError("quadrupole components must be equal-shaped non-empty 2-D grids")
        for name, c in zip(("qxx", "qyy", "qxy"), comps):
            _check_finite(name, c)
        qxx, qyy, _ = comps
        scale = np.maximum(np.maximum(np.abs(qxx), np.abs(qyy)), 1.0)
        if np.any(np.abs(qxx + qyy) > TRACE_RTOL * scale):
            raise ValueError("quadrupole field is not traceless")
        for name, c in zip(("qxx", "qyy", "qxy"), comps):
            object.__setattr__(self, name, _frozen(c))

    @classmethod
    def traceless(cls, qxx, qxy) -> "QuadrupoleField":
        qxx = np.asarray(qxx, dtype=np.float64)
        return cls(qxx, -qxx, qxy)

    @property
    def shape(self) -> tuple[int, int]:
        return self.qxx.shape

    def at(self, i: int, j: int) -> QuadrupoleTensor:
        k, l = i - 1, j - 1
        return QuadrupoleTensor(float(self.qxx[k, l]), float(self.qyy[k, l]), float(self.qxy[k, l]))


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of the moment pipeline.

    The defaults reproduce the 2x2 experiment: a window spanning
    {i, i+1} x {j, j+1}, true-mean charges, coordinates relative to the
    window centroid, the factor-2 off-diagonal convention and tone-map
    exponents 1/2 (dipole) and 1/4 (quadrupole).
    """

    window_height: int = 2
    window_width: int = 2
    window_anchor: Anchor = "topleft-even"
    boundary: Boundary = "clamp"
    origin: Origin = "window-center"
    qxy_factor: int = 2
    alpha: float = 0.5
    beta: float = 0.25
    mean_normalization: MeanNorm = "pixel-count"

    def __post_init__(self):
        for name in ("window_height", "window_width"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if self.window_height * self.window_width < 2:
            raise ConfigError("a 1x1 window has identically zero charge; use at least 2 pixels")
        _choice("window_anchor", self.window_anchor, ANCHORS)
        _choice("boundary", self.boundary, BOUNDARIES)
        _choice("origin", self.origin, ORIGINS)
        _choice("mean_normalization", self.mean_normalization, MEAN_NORMS)
        if self.qxy_factor not in (1, 2):
            raise ConfigError(f"qxy_factor must be 1 or 2, got {self.qxy_factor!r}")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be finite and positive, got {v!r}")

        # a dimension of 1 is both centred and top-left anchored
        for name in ("window_height", "window_width"):
            v = getattr(self, name)
            if v == 1:
                continue
            if self.window_anchor == "centered-odd" and v % 2 == 0:
                raise ConfigError(
                    f"centered-odd anchor needs odd window dimensions, {name}={v} is even"
                )
            if self.window_anchor == "topleft-even" and v % 2 == 1:
                raise ConfigError(
                    f"topleft-even anchor needs even window dimensions, {name}={v} is odd"
                )
        if self.mean_normalization == "paper-4didj":
            if self.window_anchor != "centered-odd":
                raise ConfigError("paper-4didj normalization needs a centered-odd window (half-widths undefined)")
            if self.window_height < 3 or self.window_width < 3:
                raise ConfigError("paper-4didj normalization needs both half-widths >= 1")

    @property
    def half_height(self) -> int:
        return (self.window_height - 1) // 2

    @property
    def half_width(self) -> int:
        return (self.window_width - 1) // 2

    def normalizer(self) -> int | None:
        """Fixed 4*di*dj prefactor in paper-4didj mode, None when the pixel count is used."""
        if self.mean_normalization == "paper-4didj":
            return 4 * self.half_height * self.half_width
        return None

    def row_offsets(self) -> range:
        """Window row offsets relative to the anchored pixel."""
        return _offsets(self.window_height, self.window_anchor)

    def col_offsets(self) -> range:
        return _offsets(self.window_width, self.window_anchor)


def _offsets(size: int, anchor: str) -> range:
    if anchor == "centered-odd":
        half = (size - 1) // 2
        return range(-half, half + 1)
    return range(0, size)


def _choice(name, value, allowed):
    if value not in allowed:
        raise ConfigError(f"{name} must be one of {', '.join(allowed)}; got {value!r}")


def check_index(bm: Bitmap, i: int, j: int) -> None:
    if not (1 <= i <= bm.height and 1 <= j <= bm.width):
        raise IndexError(f"pixel ({i}, {j}) outside {bm.height}x{bm.width} bitmap")


def pixel_coordinates(i: int, j: int, height: int | None = None, width: int | None = None) -> tuple[float, float]:
    """Map 1-based pixel indices to coordinates: x is the row, y the column.

    When ``height``/``width`` are given the indices are range-checked.
    """
    if i < 1 or j < 1 or (height is not None and i > height) or (width is not None and j > width):
        raise IndexError(f"pixel index ({i}, {j}) out of range")
    return float(i), float(j)
