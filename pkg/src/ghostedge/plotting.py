"""Tiny deterministic line-plot renderer producing an 8-bit gray raster."""
from __future__ import annotations

import numpy as np

# 3x5 bitmaps for tick labels
_GLYPHS = {
    "0": ("111", "101", "101", "101", "111"),
    "1": ("010", "110", "010", "010", "111"),
    "2": ("111", "001", "111", "100", "111"),
    "3": ("111", "001", "111", "001", "111"),
    "4": ("101", "101", "111", "001", "001"),
    "5": ("111", "100", "111", "001", "111"),
    "6": ("111", "100", "111", "101", "111"),
    "7": ("111", "001", "010", "010", "010"),
    "8": ("111", "101", "111", "101", "111"),
    "9": ("111", "101", "111", "001", "111"),
    ".": ("000", "000", "000", "000", "010"),
    "-": ("000", "000", "111", "000", "000"),
}


def _line(canvas: np.ndarray, r0: int, c0: int, r1: int, c1: int, value: int) -> None:
    # Bresenham; all arguments are pixel indices
    dr, dc = abs(r1 - r0), abs(c1 - c0)
    sr = 1 if r1 >= r0 else -1
    sc = 1 if c1 >= c0 else -1
    err = dc - dr
    h, w = canvas.shape
    while True:
        if 0 <= r0 < h and 0 <= c0 < w:
            canvas[r0, c0] = value
        if r0 == r1 and c0 == c1:
            return
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c0 += sc
        if e2 < dc:
            err += dc
            r0 += sr


def _text(canvas: np.ndarray, row: int, col: int, text: str, value: int = 0) -> None:
    for k, ch in enumerate(text):
        glyph = _GLYPHS.get(ch)
        if glyph is None:
            continue
        for dr, bits in enumerate(glyph):
            for dc, bit in enumerate(bits):
                r, c = row + dr, col + 4 * k + dc
                if bit == "1" and 0 <= r < canvas.shape[0] and 0 <= c < canvas.shape[1]:
                    canvas[r, c] = value


def _fmt(v: float) -> str:
    return f"{v:.0f}" if abs(v) >= 10 or v == int(v) else f"{v:.1f}"


def render_line_plot(x, series, width: int = 480, height: int = 320, ticks: int = 5) -> np.ndarray:
    """Draw one or more y-series against shared x values.

    Parameters
    ----------
    x : sequence of float
    series : sequence of sequences of float
        Non-finite entries break the polyline.
    width, height : int
        Raster size in pixels.

    Returns
    -------
    ndarray of uint8, shape (height, width)
        White background, black axes, series in successively lighter grays.
    """
    x = np.asarray(x, dtype=np.float64)
    ys = [np.asarray(s, dtype=np.float64) for s in series]
    canvas = np.full((height, width), 255, dtype=np.uint8)
    left, right, top, bottom = 40, width - 12, 12, height - 24

    finite = np.concatenate([s[np.isfinite(s)] for s in ys] or [np.zeros(0)])
    y_lo, y_hi = (finite.min(), finite.max()) if finite.size else (0.0, 1.0)
    if y_hi - y_lo < 1e-9:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = (x.min(), x.max()) if x.size else (0.0, 1.0)
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0

    def to_px(xv, yv):
        col = left + (xv - x_lo) / (x_hi - x_lo) * (right - left)
        row = bottom - (yv - y_lo) / (y_hi - y_lo) * (bottom - top)
        return int(round(row)), int(round(col))

    for k in range(ticks):
        frac = k / (ticks - 1)
        yv = y_lo + frac * (y_hi - y_lo)
        r, _ = to_px(x_lo, yv)
        canvas[r, left + 1:right + 1] = 225
        _line(canvas, r, left - 4, r, left, 0)
        _text(canvas, r - 2, 2, _fmt(yv))
    for xv in x:
        r, c = to_px(xv, y_lo)
        _line(canvas, bottom, c, bottom + 4, c, 0)
        label = _fmt(xv)
        _text(canvas, bottom + 8, c - 2 * len(label), label)
    _line(canvas, top, left, bottom, left, 0)
    _line(canvas, bottom, left, bottom, right, 0)

    for idx, s in enumerate(ys):
        shade = min(40 + 70 * idx, 180)
        prev = None
        for xv, yv in zip(x, s):
            if not np.isfinite(yv):
                prev = None
                continue
            pt = to_px(xv, yv)
            if prev is not None:
                _line(canvas, *prev, *pt, shade)
            r, c = pt
            canvas[max(r - 2, 0):r + 3, max(c - 2, 0):c + 3] = shade
            prev = pt
    return canvas
