"""Reading and writing 8-bit portable graymaps (P2 ASCII, P5 binary)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bitmap

_WS = b" \t\n\r\v\f"
_MAX_DIGITS = 10
_MAX_LINE = 70


class PgmError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class PgmHeader:
    magic: str
    width: int
    height: int
    maxval: int


class _Scanner:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.token_start = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos]
            if c in _WS:
                self.pos += 1
            elif c == ord("#"):
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.token_start = self.pos
        data = self.data
        while self.pos < len(data) and 48 <= data[self.pos] <= 57:
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise PgmError(f"unexpected end of data reading {what}", start)
            raise PgmError(f"expected a decimal integer for {what}", start)
        if self.pos - start > _MAX_DIGITS:
            raise PgmError(f"{what} token too long", start)
        if self.pos < len(data) and data[self.pos] not in _WS and data[self.pos] != ord("#"):
            raise PgmError(f"malformed token for {what}", self.pos)
        return int(data[start:self.pos])


def read_header(data: bytes) -> tuple[PgmHeader, int]:
    """Parse the header; returns it with the offset just past maxval."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"bad magic {magic!r}, expected P2 or P5", 0)
    if len(data) > 2 and data[2] not in _WS and data[2] != ord("#"):
        raise PgmError("bad magic, expected whitespace after P2/P5", 2)
    sc = _Scanner(data)
    sc.pos = 2
    width = sc.integer("width")
    height = sc.integer("height")
    maxval = sc.integer("maxval")
    maxval_at = sc.token_start
    if width < 1 or height < 1:
        raise PgmError(f"image dimensions must be positive, got {width}x{height}", maxval_at)
    if not 1 <= maxval <= 255:
        raise PgmError(f"maxval must be in [1, 255], got {maxval}", maxval_at)
    return PgmHeader(magic.decode(), width, height, maxval), sc.pos


def _rescale(values: np.ndarray, maxval: int) -> np.ndarray:
    if maxval == 255:
        return values
    # round(255 t / maxval), halves up, in integers
    return (510 * values + maxval) // (2 * maxval)


def read_pgm(data: bytes) -> Bitmap:
    header, pos = read_header(data)
    count = header.width * header.height
    if header.magic == "P5":
        if pos >= len(data) or data[pos] not in _WS:
            raise PgmError("expected one whitespace byte before the binary payload", pos)
        pos += 1
        payload = data[pos:pos + count]
        if len(payload) < count:
            raise PgmError(f"truncated payload: need {count} bytes, found {len(payload)}", pos + len(payload))
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
        over = np.flatnonzero(values > header.maxval)
        if over.size:
            raise PgmError(f"sample exceeds maxval {header.maxval}", pos + int(over[0]))
    else:
        sc = _Scanner(data)
        sc.pos = pos
        values = np.empty(count, dtype=np.int64)
        for k in range(count):
            v = sc.integer("sample")
            if v > header.maxval:
                raise PgmError(f"sample {v} exceeds maxval {header.maxval}", sc.token_start)
            values[k] = v
    tones = _rescale(values, header.maxval).reshape(header.height, header.width)
    return Bitmap(tones)


def write_pgm(bm: Bitmap, fmt: str = "P5") -> bytes:
    """Canonical encoding: magic, dimensions and maxval 255 on separate lines."""
    if fmt not in ("P2", "P5"):
        raise ValueError(f"format must be P2 or P5, got {fmt!r}")
    head = f"{fmt}\n{bm.width} {bm.height}\n255\n".encode("ascii")
    if fmt == "P5":
        return head + bm.tones.tobytes()
    lines = []
    for row in bm.tones:
        line = ""
        for v in row:
            tok = str(int(v))
            if line and len(line) + 1 + len(tok) > _MAX_LINE:
                lines.append(line)
                line = tok
            else:
                line = f"{line} {tok}" if line else tok
        lines.append(line)
    return head + ("\n".join(lines) + "\n").encode("ascii")


def load(path) -> Bitmap:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())
