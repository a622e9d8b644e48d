"""Dominance-order staircase tiling of the unit square and TilePacking."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sortedcontainers import SortedList

from .geometry import (
    ZERO,
    GeometryError,
    Point,
    PointSet,
    Rect,
    StaircasePolygon,
    find_overlap,
    rect_area,
    scale_points,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", witness=None) -> CheckResult:
        c = CheckResult(name, bool(passed), detail, witness)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
        }


class Tiling:
    """Tiles in processing order; tile ``i`` is anchored at ``points[order[i]]``.

    Tiles computed by :func:`compute_tiling` are held as integer corner
    chains over a common denominator ``scale`` and turned into
    :class:`StaircasePolygon` objects only when first accessed.
    """

    def __init__(
        self,
        points: PointSet,
        order: Sequence[int],
        tiles: Sequence[StaircasePolygon] | None = None,
        *,
        _scaled=None,
    ):
        self.points = points
        self.order = tuple(order)
        self._tiles = list(tiles) if tiles is not None else None
        self._scaled = _scaled

    def __len__(self) -> int:
        return len(self._scaled[1]) if self._tiles is None else len(self._tiles)

    def anchor_of(self, i: int) -> int:
        return self.order[i]

    @property
    def tiles(self) -> list[StaircasePolygon]:
        if self._tiles is None:
            self._tiles = [self._build(i) for i in range(len(self))]
        return self._tiles

    def tile(self, i: int) -> StaircasePolygon:
        if self._tiles is not None:
            return self._tiles[i]
        return self._build(i)

    def _build(self, i: int) -> StaircasePolygon:
        scale, offsets, cx, cy = self._scaled[0], self._scaled[1], self._scaled[2], self._scaled[3]
        lo = offsets[i]
        hi = offsets[i + 1] if i + 1 < len(offsets) else len(cx)
        steps = tuple(Point(Fraction(cx[k], scale), Fraction(cy[k], scale)) for k in range(lo, hi))
        return StaircasePolygon(self.points[self.order[i]], steps)

    def scaled(self):
        """Return ``(scale, anchors, chains)`` with integer coordinates.

        ``anchors[i]`` is ``(X, Y)`` and ``chains[i]`` a list of ``(X, Y)``
        step corners; actual coordinates are these divided by ``scale``.
        """
        if self._tiles is None:
            scale, offsets, cx, cy, ax, ay = self._scaled
            chains = []
            for i in range(len(offsets)):
                lo = offsets[i]
                hi = offsets[i + 1] if i + 1 < len(offsets) else len(cx)
                chains.append(list(zip(cx[lo:hi], cy[lo:hi])))
            anchors = [(ax[j], ay[j]) for j in self.order]
            return scale, anchors, chains
        pts = [t.anchor for t in self._tiles] + [p for t in self._tiles for p in t.steps]
        scale, xs, ys = scale_points(pts)
        n = len(self._tiles)
        anchors = list(zip(xs[:n], ys[:n]))
        chains = []
        k = n
        for t in self._tiles:
            m = len(t.steps)
            chains.append(list(zip(xs[k:k + m], ys[k:k + m])))
            k += m
        return scale, anchors, chains


@dataclass
class AnchoredPacking:
    """Rectangles ``rects[i]`` anchored at ``points[order[i]]``."""

    points: PointSet
    order: tuple[int, ...]
    rects: tuple[Rect, ...]

    def __post_init__(self):
        self.order = tuple(self.order)
        self.rects = tuple(self.rects)
        if len(self.order) != len(self.rects):
            raise GeometryError("order and rects differ in length")

    @property
    def coverage(self) -> Fraction:
        return sum((rect_area(r) for r in self.rects), ZERO)

    def areas(self) -> list[Fraction]:
        return [rect_area(r) for r in self.rects]

    def rect_for(self, point_index: int) -> Rect:
        return self.rects[self.order.index(point_index)]

    def by_point(self) -> dict[int, Rect]:
        return dict(zip(self.order, self.rects))


def _validate_for_tiling(ps: PointSet) -> None:
    if not isinstance(ps, PointSet):
        raise TypeError("expected a PointSet")
    if not ps.contains_origin:
        raise GeometryError("the point set must contain the origin")


def check_order(ps: PointSet, order: Sequence[int]) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(len(ps))):
        raise GeometryError("order is not a permutation of the point indices")
    return order


def is_sweep_compatible(ps: PointSet, order: Sequence[int]) -> bool:
    sums = [ps[i].x + ps[i].y for i in order]
    return all(sums[k] >= sums[k + 1] for k in range(len(sums) - 1))


def compute_tiling(ps: PointSet, order: Sequence[int] | None = None) -> Tiling:
    """Sweep the points in decreasing x+y order, cutting one tile per point.

    The uncovered region is a staircase whose reflex corners are the
    processed points not dominating any other processed point. Those are
    kept in an ordered set keyed by x (y then decreases with x). Each new
    point shoots a vertical ray (predecessor by x) and a horizontal ray (the
    scan past the frontier points it now dominates); every frontier point is
    inserted and deleted once, so the sweep is O(n log n).

    A custom ``order`` must still be non-increasing in x+y.
    """
    _validate_for_tiling(ps)
    if order is None:
        scale, xs, ys = scale_points(ps.points)
        n = len(xs)
        order = sorted(range(n), key=lambda i: (-(xs[i] + ys[i]), -xs[i]))
    else:
        order = check_order(ps, order)
        if not is_sweep_compatible(ps, order):
            raise GeometryError("order is not non-increasing in x+y")
        scale, xs, ys = scale_points(ps.points)
    D = scale

    front = SortedList()
    fy: dict[int, int] = {}
    offsets = []
    cx: list[int] = []
    cy: list[int] = []
    for idx in order:
        sx = xs[idx]
        sy = ys[idx]
        i = front.bisect_right(sx)
        if i:
            lx = front[i - 1]
            top = fy[lx]
        else:
            lx = None
            top = D
        j = i
        nfront = len(front)
        offsets.append(len(cx))
        prev_y = top
        while j < nfront:
            mx = front[j]
            my = fy[mx]
            if my <= sy:
                break
            # a point on the top edge only dominates a segment
            if my < prev_y:
                cx.append(mx)
                cy.append(prev_y)
                prev_y = my
            j += 1
        if j < nfront:
            rx = front[j]
            right_y = fy[rx]
        else:
            rx = D
            right_y = None
        # likewise for a point on the right edge
        if len(cx) == offsets[-1] or cx[-1] < rx:
            cx.append(rx)
            cy.append(prev_y)
        # points now dominating s leave the frontier
        hi = j + 1 if right_y == sy else j
        lo = i - 1 if lx == sx else i
        if hi > lo:
            for k in range(lo, hi):
                del fy[front[k]]
            del front[lo:hi]
        front.add(sx)
        fy[sx] = sy
    return Tiling(ps, order, _scaled=(D, offsets, cx, cy, xs, ys))


def tile_packing(ps: PointSet, order: Sequence[int] | None = None) -> tuple[Tiling, AnchoredPacking]:
    tiling = compute_tiling(ps, order)
    D, anchors, chains = tiling.scaled()
    rects = []
    for (ax, ay), chain, idx in zip(anchors, chains, tiling.order):
        best = None
        best_area = -1
        for X, Y in chain:
            a = (X - ax) * (Y - ay)
            if a > best_area:
                best, best_area = (X, Y), a
        if best_area == 0:
            # tiles of zero area (anchor on the top or right edge) get a point
            best = (ax, ay)
        rects.append(Rect(ps[idx], Point(Fraction(best[0], D), Fraction(best[1], D))))
    return tiling, AnchoredPacking(ps, tiling.order, rects)


def verify_tiling(t: Tiling) -> VerificationReport:
    """Check that the tiles partition the unit square as a dominance tiling."""
    rep = VerificationReport()
    ps = t.points
    D, anchors, chains = t.scaled()
    n = len(chains)

    total = 0
    inside = True
    inside_witness = None
    for i, ((ax, ay), chain) in enumerate(zip(anchors, chains)):
        x = ax
        for X, Y in chain:
            total += (X - x) * (Y - ay)
            x = X
        if ax < 0 or ay < 0 or chain[-1][0] > D or chain[0][1] > D:
            if inside:
                inside, inside_witness = False, i
    deficit = Fraction(D * D - total, D * D)
    rep.add(
        "area_sum",
        deficit == 0,
        "tile areas sum to 1" if deficit == 0 else f"area sum is 1 - ({deficit})",
        deficit,
    )
    rep.add("inside_unit_square", inside, "" if inside else f"tile {inside_witness} leaves [0,1]^2", inside_witness)

    sectors = []
    owner = []
    for i, ((ax, ay), chain) in enumerate(zip(anchors, chains)):
        x = ax
        for X, Y in chain:
            sectors.append((x, ay, X, Y))
            owner.append(i)
            x = X
    hit = find_overlap(sectors)
    if hit is None:
        rep.add("disjoint", True, "tiles are pairwise interior-disjoint")
    else:
        a, b = owner[hit[0]], owner[hit[1]]
        rep.add("disjoint", False, f"tiles {a} and {b} overlap", (a, b))

    bad_anchor = None
    if n != len(t.order):
        bad_anchor = ("count", n, len(t.order))
    else:
        for i, idx in enumerate(t.order):
            p = ps[idx]
            X, Y = anchors[i]
            if X * p.x.denominator != p.x.numerator * D or Y * p.y.denominator != p.y.numerator * D:
                bad_anchor = i
                break
    rep.add(
        "anchors",
        bad_anchor is None,
        "" if bad_anchor is None else f"tile anchor mismatch at {bad_anchor}",
        bad_anchor,
    )

    # reflex corners must be input points, each used by at most one tile
    point_keys = set()
    for p in ps.points:
        X, Y = p.x * D, p.y * D
        if X.denominator == 1 and Y.denominator == 1:
            point_keys.add((X.numerator, Y.numerator))
    used: dict[tuple, int] = {}
    reflex_ok = True
    unique_ok = True
    witness = None
    for i, chain in enumerate(chains):
        for k in range(len(chain) - 1):
            v = (chain[k][0], chain[k + 1][1])
            if v not in point_keys:
                reflex_ok = False
                witness = witness or (i, v)
            elif v in used:
                unique_ok = False
                witness = witness or (i, v)
            used[v] = i
    rep.add("reflex_vertices_in_S", reflex_ok, "" if reflex_ok else f"tile/vertex {witness}", witness)
    rep.add("reflex_vertex_unique", unique_ok, "" if unique_ok else f"tile/vertex {witness}", witness)
    return rep


def verify_packing(pk: AnchoredPacking) -> VerificationReport:
    """Anchoring, containment in the square and pairwise disjointness."""
    rep = VerificationReport()
    ps = pk.points
    bad = [i for i, (idx, r) in enumerate(zip(pk.order, pk.rects)) if r.lo != ps[idx]]
    rep.add("anchored", not bad, "" if not bad else f"rect {bad[0]} not anchored at its point", bad[:1])
    outside = [i for i, r in enumerate(pk.rects) if not (r.lo.x >= 0 and r.lo.y >= 0 and r.hi.x <= 1 and r.hi.y <= 1)]
    rep.add("inside_unit_square", not outside, "" if not outside else f"rect {outside[0]} leaves [0,1]^2", outside[:1])
    pts = [r.lo for r in pk.rects] + [r.hi for r in pk.rects]
    D, xs, ys = scale_points(pts)
    n = len(pk.rects)
    hit = find_overlap([(xs[i], ys[i], xs[n + i], ys[n + i]) for i in range(n)])
    rep.add("disjoint", hit is None, "" if hit is None else f"rects {hit[0]} and {hit[1]} overlap", hit)
    covered = sorted(set(pk.order)) == list(range(len(ps)))
    rep.add("one_rect_per_point", covered, "" if covered else "order does not cover every point")
    return rep
