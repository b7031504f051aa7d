"""Minimal netpbm image I/O: P2 and P5 grayscale, P6 color.

The reader accepts any legal header (arbitrary whitespace, ``#`` comments).
The writer always emits the canonical form ``{magic}\\n{w} {h}\\n{maxval}\\n``
followed by the raster, so writing what was just read canonicalizes a file,
and a second write is byte-identical.  Pixel values are floats or ints on
the way in; they are rounded half up and clamped to ``[0, maxval]`` only at
write time.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

__all__ = ["NetpbmError", "read_netpbm", "write_netpbm"]

MAGICS = ("P2", "P5", "P6")


class NetpbmError(OSError):
    """A netpbm file that cannot be parsed or written."""


def _header_ints(data: bytes, start: int, count: int) -> tuple[list[int], int]:
    """Read ``count`` integer tokens, honoring comments, from ``start``.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the header (the raster begins there).
    """
    tokens: list[int] = []
    i = start
    while len(tokens) < count:
        if i >= len(data):
            raise NetpbmError("truncated header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            token = data[i:j]
            if not token.isdigit():
                raise NetpbmError(f"bad header token {token!r}")
            tokens.append(int(token))
            i = j
    if i >= len(data) or not data[i : i + 1].isspace():
        raise NetpbmError("header must end with a whitespace byte")
    return tokens, i + 1


def read_netpbm(path) -> tuple[np.ndarray, int, str]:
    """Read a P2/P5/P6 file as ``(pixels, maxval, magic)``.

    Grayscale pixels come back as an ``(h, w)`` int array, color as
    ``(h, w, 3)``.
    """
    data = Path(path).read_bytes()
    magic = data[:2].decode("ascii", errors="replace")
    if magic not in MAGICS:
        raise NetpbmError(f"{path}: unsupported magic {magic!r}")
    if magic == "P2":
        text = re.sub(rb"#[^\n\r]*", b" ", data[2:])
        fields = text.split()
        if len(fields) < 3:
            raise NetpbmError(f"{path}: truncated header")
        try:
            values = [int(f) for f in fields]
        except ValueError as e:
            raise NetpbmError(f"{path}: non-integer sample: {e}") from None
        w, h, maxval = values[:3]
        _check_dims(path, w, h, maxval)
        samples = values[3:]
        if len(samples) != w * h:
            raise NetpbmError(f"{path}: expected {w * h} samples, found {len(samples)}")
        pixels = np.asarray(samples, dtype=int).reshape(h, w)
    else:
        (w, h, maxval), offset = _header_ints(data, 2, 3)
        _check_dims(path, w, h, maxval)
        channels = 3 if magic == "P6" else 1
        dtype = ">u2" if maxval > 255 else "u1"
        count = w * h * channels
        raster = data[offset : offset + count * np.dtype(dtype).itemsize]
        if len(raster) < count * np.dtype(dtype).itemsize:
            raise NetpbmError(f"{path}: truncated raster")
        pixels = np.frombuffer(raster, dtype=dtype).astype(int)
        pixels = pixels.reshape((h, w) if channels == 1 else (h, w, 3))
    if pixels.max(initial=0) > maxval:
        raise NetpbmError(f"{path}: sample exceeds maxval {maxval}")
    return pixels, maxval, magic


def _check_dims(path, w: int, h: int, maxval: int) -> None:
    if w < 1 or h < 1:
        raise NetpbmError(f"{path}: bad image size {w}x{h}")
    if not 1 <= maxval <= 65535:
        raise NetpbmError(f"{path}: maxval {maxval} outside [1, 65535]")


def _quantize(values, maxval: int) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return np.clip(np.floor(v + 0.5), 0, maxval).astype(np.int64)


def write_netpbm(path, pixels, maxval: int = 255, magic: str | None = None) -> None:
    """Write ``pixels`` in canonical form; see the module docstring.

    The magic defaults to P5 for ``(h, w)`` arrays and P6 for ``(h, w, 3)``.
    """
    pixels = np.asarray(pixels)
    if magic is None:
        magic = "P6" if pixels.ndim == 3 else "P5"
    if magic not in MAGICS:
        raise NetpbmError(f"unsupported magic {magic!r}")
    if not 1 <= int(maxval) <= 65535:
        raise NetpbmError(f"maxval {maxval} outside [1, 65535]")
    if magic == "P6":
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise NetpbmError(f"P6 needs (h, w, 3) pixels, got {pixels.shape}")
    elif pixels.ndim != 2:
        raise NetpbmError(f"{magic} needs (h, w) pixels, got {pixels.shape}")
    q = _quantize(pixels, int(maxval))
    h, w = q.shape[:2]
    header = f"{magic}\n{w} {h}\n{int(maxval)}\n"
    if magic == "P2":
        body = "".join(" ".join(str(v) for v in row) + "\n" for row in q)
        Path(path).write_bytes(header.encode("ascii") + body.encode("ascii"))
    else:
        dtype = ">u2" if int(maxval) > 255 else "u1"
        Path(path).write_bytes(header.encode("ascii") + q.astype(dtype).tobytes())
