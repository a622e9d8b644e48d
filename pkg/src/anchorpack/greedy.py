"""Sequential greedy packing: each anchor takes a maximum-area free rectangle."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import GeometryError, Point, PointSet, Rect, scale_points, sweep_order
from .tiling import AnchoredPacking, check_order


def _best_corner(ax, ay, blockers, right, top):
    """Upper-right corner of the largest rectangle anchored at ``(ax, ay)``.

    ``blockers`` are ``(x0, y0, x1, y1)`` boxes whose open interior the
    rectangle must avoid; a point obstacle is a box with x0 == x1, y0 == y1,
    treated as blocking whenever it lies strictly inside the rectangle.
    Candidate right edges are ``right`` and the left edges of blockers;
    between two candidates the height ceiling is constant, so only the
    widest width of each ceiling plateau needs evaluating. Smallest width
    wins ties.
    """
    ceiling = top
    pending = []
    for x0, y0, x1, y1 in blockers:
        if x1 <= ax or y1 <= ay or x0 >= right or y0 >= top:
            if not (x0 == x1 and x0 > ax and y0 > ay and x0 < right and y0 < top):
                continue
        if x0 <= ax:
            c = y0 if y0 > ay else ay
            if c < ceiling:
                ceiling = c
        else:
            pending.append((x0, y0))
    pending.sort()
    best_x, best_y, best_area = ax, ceiling, 0
    k = 0
    m = len(pending)
    while k < m and ceiling > ay:
        x = pending[k][0]
        area = (x - ax) * (ceiling - ay)
        if area > best_area:
            best_x, best_y, best_area = x, ceiling, area
        while k < m and pending[k][0] == x:
            y0 = pending[k][1]
            c = y0 if y0 > ay else ay
            if c < ceiling:
                ceiling = c
            k += 1
    if ceiling > ay:
        area = (right - ax) * (ceiling - ay)
        if area > best_area:
            best_x, best_y, best_area = right, ceiling, area
    if best_area == 0:
        return ax, ay
    return best_x, best_y


def max_anchored_empty_rect(
    anchor: Point, obstacles: Iterable[Rect], points: Iterable[Point] = ()
) -> Rect:
    """Largest rectangle in [0,1]^2 with lower-left corner ``anchor`` whose
    interior misses every obstacle (and every point in ``points``).

    Returns the degenerate rectangle ``[anchor, anchor]`` when nothing of
    positive area fits.
    """
    blockers = []
    for r in obstacles:
        if r.is_degenerate():
            continue
        if r.interior_contains(anchor):
            raise GeometryError(f"anchor {anchor} lies inside obstacle {r}")
        blockers.append((r.lo.x, r.lo.y, r.hi.x, r.hi.y))
    for q in points:
        blockers.append((q.x, q.y, q.x, q.y))
    one = Fraction(1)
    X, Y = _best_corner(anchor.x, anchor.y, blockers, one, one)
    return Rect(anchor, Point(X, Y))


def greedy_packing(
    ps: PointSet, order: Sequence[int] | None = None, *, avoid_points: bool = True
) -> AnchoredPacking:
    """Place rectangles one anchor at a time in ``order`` (default: sweep order).

    With ``avoid_points`` (the one-round game) no rectangle may hold another
    input point in its interior. Without it only earlier rectangles are
    obstacles, which is the multi-round game where points are revealed one
    at a time; an anchor that falls inside an earlier rectangle then gets a
    degenerate rectangle.
    """
    order = sweep_order(ps) if order is None else check_order(ps, order)
    D, xs, ys = scale_points(ps.points)
    placed: list[tuple[int, int, int, int]] = []
    rects = []
    point_blockers = [(xs[i], ys[i], xs[i], ys[i]) for i in range(len(ps))] if avoid_points else []
    for idx in order:
        ax, ay = xs[idx], ys[idx]
        inside = False
        for x0, y0, x1, y1 in placed:
            if x0 < ax < x1 and y0 < ay < y1:
                inside = True
                break
        if inside:
            X, Y = ax, ay
        else:
            X, Y = _best_corner(ax, ay, placed + point_blockers, D, D)
        if X > ax and Y > ay:
            placed.append((ax, ay, X, Y))
        p = ps[idx]
        rects.append(Rect(p, Point(Fraction(X, D), Fraction(Y, D))))
    return AnchoredPacking(ps, order, rects)
