# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the grid-geometry kernels in ``_ref``.

Same signatures, same arithmetic in the same order, so results are
bit-identical to the pure-Python backend.
"""

BACKEND = "cython"

cdef double _EPS = 1e-9


cpdef double rect_intersection_area(
    double ax0, double ay0, double ax1, double ay1,
    double bx0, double by0, double bx1, double by1,
):
    cdef double w = min(ax1, bx1) - max(ax0, bx0)
    if w <= 0.0:
        return 0.0
    cdef double h = min(ay1, by1) - max(ay0, by0)
    if h <= 0.0:
        return 0.0
    return w * h


cpdef list rasterize_codes(int cols, int rows, double cell_size, list rects):
    cdef list codes = [0] * (rows * cols)
    cdef double x0, y0, x1, y1, cx0, cx1, cy0, cy1, w, h
    cdef int code, r, c, base
    for rect in rects:
        x0 = rect[0]
        y0 = rect[1]
        x1 = rect[2]
        y1 = rect[3]
        code = rect[4]
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
                if w * h > _EPS and code > <int> codes[base + c]:
                    codes[base + c] = code
    return codes


cpdef list free_cells_on_side(
    int cols, int rows, double cell_size, list codes, int side,
    double ax0, double ay0, double ax1, double ay1,
):
    cdef list out = []
    cdef double cx0, cx1, cy0, cy1
    cdef int r, c, base
    cdef bint keep
    for r in range(rows):
        cy0 = r * cell_size
        cy1 = cy0 + cell_size
        base = r * cols
        for c in range(cols):
            if <int> codes[base + c] != 0:
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


cpdef int first_overlap(
    double x0, double y0, double x1, double y1, list rects, double eps,
):
    cdef double bx0, by0, bx1, by1, w, h
    cdef int i
    for i in range(len(rects)):
        rect = rects[i]
        bx0 = rect[0]
        by0 = rect[1]
        bx1 = rect[2]
        by1 = rect[3]
        w = min(x1, bx1) - max(x0, bx0)
        if w <= 0.0:
            continue
        h = min(y1, by1) - max(y0, by0)
        if h <= 0.0:
            continue
        if w * h > eps:
            return i
    return -1
