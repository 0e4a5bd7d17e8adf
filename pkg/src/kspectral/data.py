"""Point-cloud input, synthetic generators, images, and pairwise distances.

Point sets are plain float64 arrays of shape (n, d).  Gray images are uint8
arrays of shape (height, width).  All generators draw from a seeded
:func:`numpy.random.default_rng` stream so identical seeds reproduce
identical datasets bit for bit.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import ParameterError, ParseError
from .validation import as_points, check_int, check_scalar

# rows x cols of the difference tensor kept below ~8M doubles per block
_DIST_BLOCK_BUDGET = 1 << 23


def load_points(path) -> np.ndarray:
    """Read a headerless CSV of coordinates into an (n, d) float array.

    One row per point, comma separated, decimal point notation, UTF-8
    with either LF or CRLF line endings.  Duplicate points are legal.

    Raises
    ------
    ParseError
        If the file is empty, a row has a different number of columns
        than the first row, or a field is not a finite number.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    # a trailing newline produces one empty tail entry; drop only that
    while lines and lines[-1].strip("\r") == "":
        lines.pop()
    if not lines:
        raise ParseError(f"{path}: empty input, expected at least one point row")
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        fields = line.rstrip("\r").split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            noun = "field" if len(fields) == 1 else "fields"
            raise ParseError(
                f"{path}: row {lineno} has {len(fields)} {noun}, expected {width}"
            )
        values = []
        for col, field in enumerate(fields, start=1):
            try:
                value = float(field)
            except ValueError:
                raise ParseError(
                    f"{path}: row {lineno}, column {col}: not a number: {field!r}"
                ) from None
            if not math.isfinite(value):
                raise ParseError(
                    f"{path}: row {lineno}, column {col}: non-finite value {field!r}"
                )
            values.append(value)
        rows.append(values)
    return np.array(rows, dtype=np.float64)


def save_points(path, points: np.ndarray) -> None:
    """Write points as a headerless CSV with 17 significant digits."""
    arr = as_points(points)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for row in arr:
            fh.write(",".join(format(v, ".17g") for v in row))
            fh.write("\n")


def squared_distances(points) -> np.ndarray:
    """All pairwise squared Euclidean distances of a point set.

    Each entry is accumulated from explicit coordinate differences (not
    the expanded dot-product identity) for accuracy, computed once for
    the upper triangle and mirrored, so the result is exactly symmetric
    with an exactly zero diagonal.
    """
    ps = as_points(points)
    n, d = ps.shape
    d2 = np.empty((n, n), dtype=np.float64)
    block = max(1, _DIST_BLOCK_BUDGET // max(1, n * d))
    for start in range(0, n, block):
        stop = min(n, start + block)
        diff = ps[start:stop, None, :] - ps[None, :, :]
        d2[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    d2 = np.triu(d2, 1)
    return d2 + d2.T


def gen_blobs(centers, n_per: int, spread: float, seed=None) -> np.ndarray:
    """Gaussian blobs around the given centers, n_per points each.

    Points are emitted blob by blob in center order; each point is
    ``center + spread * g`` with g standard normal.
    """
    ctr = as_points(centers, name="centers")
    n_per = check_int(n_per, "n_per", low=1)
    spread = check_scalar(spread, "spread", low=0.0)
    rng = np.random.default_rng(seed)
    parts = [c + spread * rng.standard_normal((n_per, ctr.shape[1])) for c in ctr]
    return np.concatenate(parts, axis=0)


def gen_rings(radii, n_per: int, noise: float, seed=None) -> np.ndarray:
    """Concentric noisy circles in the plane, n_per points per radius.

    Each point is ``r * (cos t, sin t) + noise * g`` with t uniform on
    [0, 2*pi) and g standard normal, emitted ring by ring.
    """
    radii = [check_scalar(r, "radius", low=0.0, low_open=True) for r in np.atleast_1d(radii)]
    n_per = check_int(n_per, "n_per", low=1)
    noise = check_scalar(noise, "noise", low=0.0)
    rng = np.random.default_rng(seed)
    parts = []
    for r in radii:
        theta = rng.uniform(0.0, 2.0 * np.pi, n_per)
        ring = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
        parts.append(ring + noise * rng.standard_normal((n_per, 2)))
    return np.concatenate(parts, axis=0)


def blob_centers(k: int, separation: float) -> np.ndarray:
    """k blob centers in the plane with adjacent centers `separation` apart.

    Centers sit on a circle; for k <= 3 all pairwise distances equal the
    separation, for larger k it is the nearest-neighbor distance.
    """
    k = check_int(k, "k", low=1)
    separation = check_scalar(separation, "separation", low=0.0)
    if k == 1:
        return np.zeros((1, 2))
    radius = separation / (2.0 * math.sin(math.pi / k))
    angles = 2.0 * math.pi * np.arange(k) / k
    return radius * np.column_stack((np.cos(angles), np.sin(angles)))


def load_pgm(path) -> np.ndarray:
    """Read a PGM image (binary P5 or ASCII P2) with maxval <= 255.

    '#' comments are honored in the header (and between samples of an
    ASCII image).  Returns a uint8 array of shape (height, width).
    """
    raw = Path(path).read_bytes()
    pos = 0

    def skip_separators(pos: int) -> int:
        while pos < len(raw):
            ch = raw[pos:pos + 1]
            if ch in b" \t\r\n\x0b\x0c":
                pos += 1
            elif ch == b"#":
                while pos < len(raw) and raw[pos:pos + 1] not in b"\r\n":
                    pos += 1
            else:
                break
        return pos

    def next_token(pos: int) -> tuple[bytes, int]:
        pos = skip_separators(pos)
        start = pos
        while pos < len(raw) and raw[pos:pos + 1] not in b" \t\r\n\x0b\x0c#":
            pos += 1
        if start == pos:
            raise ParseError(f"{path}: truncated header")
        return raw[start:pos], pos

    magic, pos = next_token(pos)
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"{path}: unsupported magic {magic!r}, expected P2 or P5")

    header = []
    for name in ("width", "height", "maxval"):
        token, pos = next_token(pos)
        try:
            value = int(token)
        except ValueError:
            raise ParseError(f"{path}: bad {name} field {token!r}") from None
        header.append(value)
    width, height, maxval = header
    if width < 1 or height < 1:
        raise ParseError(f"{path}: bad dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise ParseError(f"{path}: maxval {maxval} out of supported range [1, 255]")

    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        data = raw[pos:pos + count]
        if len(data) < count:
            raise ParseError(
                f"{path}: truncated pixel data, expected {count} bytes, got {len(data)}"
            )
        pixels = np.frombuffer(data, dtype=np.uint8).astype(np.uint8)
    else:
        values = []
        for _ in range(count):
            token, pos = next_token(pos)
            try:
                values.append(int(token))
            except ValueError:
                raise ParseError(f"{path}: bad pixel value {token!r}") from None
        pixels = np.array(values, dtype=np.int64)
    if pixels.max(initial=0) > maxval:
        raise ParseError(f"{path}: pixel value exceeds maxval {maxval}")
    return pixels.astype(np.uint8).reshape(height, width)


def extract_windows(image: np.ndarray, window: int, stride: int) -> np.ndarray:
    """Slide a square window over an image and return one point per window.

    Offsets run over multiples of `stride` for which the window fits
    entirely, row major; each window is flattened row major and rescaled
    to [0, 1] by dividing by 255.  The stride must be smaller than the
    window side, so consecutive windows overlap.
    """
    img = np.asarray(image)
    if img.ndim != 2:
        raise ParameterError(f"image must be 2-D, got ndim={img.ndim}")
    height, width = img.shape
    window = check_int(window, "window", low=1, high=min(height, width))
    stride = check_int(stride, "stride", low=1)
    if stride >= window:
        raise ParameterError(
            f"stride must be smaller than the window side, got stride={stride}, window={window}"
        )
    row_offsets = range(0, height - window + 1, stride)
    col_offsets = range(0, width - window + 1, stride)
    out = np.empty((len(row_offsets) * len(col_offsets), window * window), dtype=np.float64)
    k = 0
    for a in row_offsets:
        for b in col_offsets:
            out[k] = img[a:a + window, b:b + window].reshape(-1)
            k += 1
    out /= 255.0
    return out
