"""Pure-Python reference implementation of the grid-geometry kernels.

These are the hot inner loops of the engine: per-cell rasterization,
side filtering, and rectangle overlap scans.  A compiled twin with the
exact same signatures lives in ``_fast.pyx``; both must produce
bit-identical results (the arithmetic is restricted to IEEE-754
multiplication, min/max, and comparisons in a fixed order).

Cells are indexed row-major: ``index = row * cols + col``; cell (r, c)
covers ``[c*s, (c+1)*s] x [r*s, (r+1)*s]``.  Occupancy codes: 0 free,
1 occupied, 2 anchor-occupied.
"""

from __future__ import annotations

BACKEND = "python"

_EPS = 1e-9


def rect_intersection_area(
    ax0: float, ay0: float, ax1: float, ay1: float,
    bx0: float, by0: float, bx1: float, by1: float,
) -> float:
    w = min(ax1, bx1) - max(ax0, bx0)
    if w <= 0.0:
        return 0.0
    h = min(ay1, by1) - max(ay0, by0)
    if h <= 0.0:
        return 0.0
    return w * h


def rasterize_codes(
    cols: int,
    rows: int,
    cell_size: float,
    rects: list[tuple[float, float, float, float, int]],
) -> list[int]:
    """Occupancy code per cell: the highest code of any rect whose
    intersection with the cell has area > eps (shared edges never mark)."""
    codes = [0] * (rows * cols)
    for (x0, y0, x1, y1, code) in rects:
        for r in range(rows):
            cy0 = r * cell_size
            cy1 = cy0 + cell_size
            h = min(y1, cy1) - max(y0, cy0)
            if h <= 0.0:
                continue
            base = r * cols
            for c in range(cols):
                cx0 = c * cell_size
                cx1 = cx0 + cell_size
                w = min(x1, cx1) - max(x0, cx0)
                if w <= 0.0:
                    continue
                if w * h > _EPS and code > codes[base + c]:
                    codes[base + c] = code
    return codes


def free_cells_on_side(
    cols: int,
    rows: int,
    cell_size: float,
    codes: list[int],
    side: int,
    ax0: float, ay0: float, ax1: float, ay1: float,
) -> list[int]:
    """Indices of free cells strictly on one side of the anchor rectangle.

    Side codes: 0 left (cell max-x <= anchor min-x), 1 right, 2 bottom,
    3 top, with a 1e-9 slack so flush cells count.
    """
    out: list[int] = []
    for r in range(rows):
        cy0 = r * cell_size
        cy1 = cy0 + cell_size
        base = r * cols
        for c in range(cols):
            if codes[base + c] != 0:
                continue
            cx0 = c * cell_size
            cx1 = cx0 + cell_size
            if side == 0:
                keep = cx1 <= ax0 + _EPS
            elif side == 1:
                keep = cx0 >= ax1 - _EPS
            elif side == 2:
                keep = cy1 <= ay0 + _EPS
            else:
                keep = cy0 >= ay1 - _EPS
            if keep:
                out.append(base + c)
    return out


def first_overlap(
    x0: float, y0: float, x1: float, y1: float,
    rects: list[tuple[float, float, float, float]],
    eps: float,
) -> int:
    """Index of the first rect overlapping (x0,y0,x1,y1) with area > eps, else -1."""
    for i, (bx0, by0, bx1, by1) in enumerate(rects):
        w = min(x1, bx1) - max(x0, bx0)
        if w <= 0.0:
            continue
        h = min(y1, by1) - max(y0, by0)
        if h <= 0.0:
            continue
        if w * h > eps:
            return i
    return -1
