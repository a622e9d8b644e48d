"""Exact-rational planar primitives.

All coordinates are :class:`fractions.Fraction`. Inputs may be given as
ints, Fractions or strings (``"3/5"``, ``"0.6"``); strings are parsed
exactly, never through binary floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from sortedcontainers import SortedList

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


class GeometryError(ValueError):
    """Raised for invalid geometric input."""


def as_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary value; callers wanting decimals should pass strings
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: ScalarLike, y: ScalarLike) -> "Point":
        p = cls(as_scalar(x), as_scalar(y))
        if not (0 <= p.x <= 1 and 0 <= p.y <= 1):
            raise GeometryError(f"point {p} lies outside the unit square")
        return p

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


ORIGIN = Point(ZERO, ZERO)


class PointSet:
    """An ordered collection of distinct points of the unit square."""

    __slots__ = ("points", "contains_origin", "_index")

    def __init__(self, points: Iterable[Point | tuple]):
        pts = []
        for p in points:
            if not isinstance(p, Point):
                p = Point.of(*p)
            elif not (0 <= p.x <= 1 and 0 <= p.y <= 1):
                raise GeometryError(f"point {p} lies outside the unit square")
            pts.append(p)
        index = {}
        for i, p in enumerate(pts):
            if p in index:
                raise GeometryError(f"duplicate point {p}")
            index[p] = i
        self.points: tuple[Point, ...] = tuple(pts)
        self.contains_origin: bool = ORIGIN in index
        self._index = index

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __contains__(self, p) -> bool:
        return p in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"PointSet(n={len(self.points)}, origin={self.contains_origin})"

    def index(self, p: Point) -> int:
        return self._index[p]


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle ``[lo.x, hi.x] x [lo.y, hi.y]``."""

    lo: Point
    hi: Point

    def __post_init__(self):
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise GeometryError(f"inverted rectangle {self.lo} -> {self.hi}")

    @classmethod
    def of(cls, x0, y0, x1, y1) -> "Rect":
        return cls(Point(as_scalar(x0), as_scalar(y0)), Point(as_scalar(x1), as_scalar(y1)))

    @property
    def width(self) -> Fraction:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> Fraction:
        return self.hi.y - self.lo.y

    @property
    def area(self) -> Fraction:
        return rect_area(self)

    def is_degenerate(self) -> bool:
        return self.lo.x == self.hi.x or self.lo.y == self.hi.y

    def contains_point(self, p: Point) -> bool:
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y

    def interior_contains(self, p: Point) -> bool:
        return self.lo.x < p.x < self.hi.x and self.lo.y < p.y < self.hi.y

    def contains_rect(self, other: "Rect") -> bool:
        return self.contains_point(other.lo) and self.contains_point(other.hi)

    def __str__(self) -> str:
        return f"[{self.lo.x}, {self.hi.x}]x[{self.lo.y}, {self.hi.y}]"


UNIT_SQUARE = Rect(ORIGIN, Point(ONE, ONE))


@dataclass(frozen=True)
class StaircasePolygon:
    """Staircase polygon with lower-left corner ``anchor``.

    ``steps`` are the convex corners of the descending chain, ordered left
    to right (x strictly increasing, y strictly decreasing). The polygon is
    the union of the rectangles ``[anchor, p]`` over all steps ``p``.
    """

    anchor: Point
    steps: tuple[Point, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise GeometryError("a staircase needs at least one step")
        a = self.anchor
        prev = None
        for p in steps:
            if not dominates(a, p):
                raise GeometryError(f"step {p} does not dominate anchor {a}")
            if prev is not None and not (p.x > prev.x and p.y < prev.y):
                raise GeometryError("steps must go strictly right and down")
            prev = p

    @property
    def width(self) -> Fraction:
        return self.steps[-1].x - self.anchor.x

    @property
    def height(self) -> Fraction:
        return self.steps[0].y - self.anchor.y

    @property
    def reflex_vertices(self) -> tuple[Point, ...]:
        s = self.steps
        return tuple(Point(s[k].x, s[k + 1].y) for k in range(len(s) - 1))

    @property
    def area(self) -> Fraction:
        return staircase_area(self)

    def bounding_box(self) -> Rect:
        return Rect(self.anchor, Point(self.steps[-1].x, self.steps[0].y))

    def contains(self, q: Point) -> bool:
        return any(dominates(self.anchor, q) and dominates(q, p) for p in self.steps)

    def columns(self) -> list[Rect]:
        """Vertical sectors, left to right."""
        out = []
        x = self.anchor.x
        for p in self.steps:
            out.append(Rect(Point(x, self.anchor.y), p))
            x = p.x
        return out

    def rows(self) -> list[Rect]:
        """Horizontal sectors, bottom to top."""
        out = []
        y = self.anchor.y
        for p in reversed(self.steps):
            out.append(Rect(Point(self.anchor.x, y), p))
            y = p.y
        return out

    def translated(self, dx: Fraction, dy: Fraction) -> "StaircasePolygon":
        return StaircasePolygon(
            Point(self.anchor.x + dx, self.anchor.y + dy),
            tuple(Point(p.x + dx, p.y + dy) for p in self.steps),
        )


def dominates(p: Point, q: Point) -> bool:
    """True iff ``p`` is dominated by ``q``: both coordinates of p are <= q's."""
    return p.x <= q.x and p.y <= q.y


def sweep_order(ps: PointSet | Sequence[Point]) -> list[int]:
    """Indices by decreasing x+y, ties broken by decreasing x."""
    pts = ps.points if isinstance(ps, PointSet) else ps
    return sorted(range(len(pts)), key=lambda i: (-(pts[i].x + pts[i].y), -pts[i].x))


def rect_area(r: Rect) -> Fraction:
    return (r.hi.x - r.lo.x) * (r.hi.y - r.lo.y)


def interior_disjoint(r1: Rect, r2: Rect) -> bool:
    return (
        min(r1.hi.x, r2.hi.x) <= max(r1.lo.x, r2.lo.x)
        or min(r1.hi.y, r2.hi.y) <= max(r1.lo.y, r2.lo.y)
    )


def staircase_area(t: StaircasePolygon) -> Fraction:
    a = t.anchor
    total = ZERO
    x = a.x
    for p in t.steps:
        total += (p.x - x) * (p.y - a.y)
        x = p.x
    return total


def staircase_area_by_rows(t: StaircasePolygon) -> Fraction:
    a = t.anchor
    total = ZERO
    y = a.y
    for p in reversed(t.steps):
        total += (p.y - y) * (p.x - a.x)
        y = p.y
    return total


def maximal_rects(t: StaircasePolygon) -> list[Rect]:
    return [Rect(t.anchor, p) for p in t.steps]


def max_rect(t: StaircasePolygon) -> Rect:
    # strict comparison keeps the leftmost of equal-area candidates
    best = None
    best_area = None
    for r in maximal_rects(t):
        a = rect_area(r)
        if best is None or a > best_area:
            best, best_area = r, a
    return best


# --------------------------------------------------------------------------
# exact integer scaling

def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    seen = set()
    for v in values:
        q = v.denominator
        if q not in seen:
            seen.add(q)
            d = math.lcm(d, q)
    return d


def scale_points(points: Sequence[Point], scale: int | None = None) -> tuple[int, list[int], list[int]]:
    """Map points onto the integer lattice ``(1/scale) Z^2`` exactly."""
    if scale is None:
        scale = common_denominator(v for p in points for v in p)
    xs = [p.x.numerator * (scale // p.x.denominator) for p in points]
    ys = [p.y.numerator * (scale // p.y.denominator) for p in points]
    return scale, xs, ys


def find_overlap(rects: Sequence[tuple]) -> tuple[int, int] | None:
    """Return indices of two rectangles with intersecting interiors, or None.

    ``rects`` holds ``(x0, y0, x1, y1)`` tuples of mutually comparable exact
    numbers. Sweep over x keeping the active y-intervals, which are pairwise
    disjoint as long as no overlap has been found, in an ordered list.
    """
    events = []
    for i, (x0, y0, x1, y1) in enumerate(rects):
        if x0 < x1 and y0 < y1:
            events.append((x0, 1, i))
            events.append((x1, 0, i))
    events.sort()
    active = SortedList()
    for _, kind, i in events:
        x0, y0, x1, y1 = rects[i]
        if kind == 0:
            active.remove((y0, y1, i))
            continue
        k = active.bisect_left((y0, y1, i))
        if k > 0 and active[k - 1][1] > y0:
            return active[k - 1][2], i
        if k < len(active) and active[k][0] < y1:
            return active[k][2], i
        active.add((y0, y1, i))
    return None


def rect_tuple(r: Rect) -> tuple:
    return (r.lo.x, r.lo.y, r.hi.x, r.hi.y)
