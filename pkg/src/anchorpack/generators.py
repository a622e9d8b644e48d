"""Instance generators: diagonals, permutation grids, random sets, tight
staircases under a hyperbola, the multi-round adversary and densified sets."""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    ORIGIN,
    GeometryError,
    Point,
    PointSet,
    Rect,
    StaircasePolygon,
    as_scalar,
    find_overlap,
    max_rect,
    rect_area,
    staircase_area,
)
from .tiling import AnchoredPacking, VerificationReport


def diagonal(n: int) -> PointSet:
    if n < 1:
        raise ValueError("diagonal needs n >= 1")
    return PointSet([Point(Fraction(i, n), Fraction(i, n)) for i in range(n)])


def permutation_grid(perm: Sequence[int]) -> tuple[PointSet, AnchoredPacking]:
    """Points ``(i/n, perm[i]/n)`` with the packing ``[i/n, 1] x [perm[i]/n, (perm[i]+1)/n]``."""
    perm = list(perm)
    n = len(perm)
    if n == 0 or sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
    if perm[0] != 0:
        raise ValueError("perm[0] must be 0 so that the origin is included")
    ps = PointSet([Point(Fraction(i, n), Fraction(perm[i], n)) for i in range(n)])
    rects = [
        Rect(ps[i], Point(Fraction(1), Fraction(perm[i] + 1, n))) for i in range(n)
    ]
    return ps, AnchoredPacking(ps, list(range(n)), rects)


def uniform_random(n: int, seed: int) -> PointSet:
    """The origin plus ``n - 1`` distinct points on the grid ``k / 2**32``."""
    if n < 1:
        raise ValueError("uniform_random needs n >= 1")
    rng = random.Random(seed)
    denom = 1 << 32
    seen = {(0, 0)}
    pts = [ORIGIN]
    while len(pts) < n:
        key = (rng.getrandbits(32), rng.getrandbits(32))
        if key in seen:
            continue
        seen.add(key)
        pts.append(Point(Fraction(key[0], denom), Fraction(key[1], denom)))
    return PointSet(pts)


# --------------------------------------------------------------------------
# staircases under a hyperbola

_GRID_BITS = 64
_SLACK = Fraction(1, 1 << 20)


def _floor_dyadic(v: Fraction, bits: int = _GRID_BITS) -> Fraction:
    return Fraction(math.floor(v * (1 << bits)), 1 << bits)


def hyperbola_ratio(beta: Fraction, m: int) -> Fraction:
    """Common ratio q of the geometric corner sequence.

    With corners ``(w q^(m-k), h q^k)`` every maximal rectangle has area
    ``hw q^m`` while the polygon has area ``hw q^m (1 + m(1-q))``; q is
    picked a hair below ``1 - (beta-1)/m`` so the ratio strictly exceeds beta.
    """
    return 1 - (beta - 1) / m * (1 + _SLACK)


def hyperbola_staircase(beta, h, w, m: int, *, anchor: Point = ORIGIN) -> StaircasePolygon:
    """An m-step staircase of height h and width w whose corners lie strictly
    under a hyperbola ``u^2 / x`` and whose area exceeds ``beta * u^2``.

    Corners are rounded down onto a dyadic grid, which keeps them under the
    curve and keeps the numbers small.
    """
    beta = as_scalar(beta)
    h = as_scalar(h)
    w = as_scalar(w)
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if h <= 0 or w <= 0:
        raise ValueError("h and w must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    if beta == 1:
        return StaircasePolygon(anchor, (Point(anchor.x + w, anchor.y + h),))
    if m <= beta - 1:
        raise ValueError(f"m={m} too small for beta={beta}: need m > beta - 1")
    q = hyperbola_ratio(beta, m)
    powers = [Fraction(1)]
    for _ in range(m):
        powers.append(_floor_dyadic(powers[-1] * q, 128))
    steps = []
    for k in range(m + 1):
        tx = Fraction(1) if k == m else _floor_dyadic(powers[m - k])
        ty = Fraction(1) if k == 0 else _floor_dyadic(powers[k])
        steps.append(Point(anchor.x + w * tx, anchor.y + h * ty))
    t = StaircasePolygon(anchor, tuple(steps))
    if not staircase_area(t) > beta * rect_area(max_rect(t)):
        raise GeometryError("rounding destroyed the area ratio; increase m")
    return t


# --------------------------------------------------------------------------
# multi-round adversary


@dataclass
class AdversarySequence:
    points: list[Point]
    epsilon: Fraction
    staircase_inventory: list[StaircasePolygon]
    beta: Fraction
    steps: int
    fence_offset: Fraction = Fraction(0)
    target_reached: bool = False
    boxes_left: int = 0

    @property
    def point_set(self) -> PointSet:
        return PointSet(self.points)

    @property
    def order(self) -> list[int]:
        return list(range(len(self.points)))

    def staircase_area(self) -> Fraction:
        return sum((staircase_area(t) for t in self.staircase_inventory), Fraction(0))

    def audit(self) -> VerificationReport:
        rep = VerificationReport()
        pts = self.points
        rep.add("last_point_origin", bool(pts) and pts[-1] == ORIGIN)
        rep.add("distinct", len(set(pts)) == len(pts))
        rep.add("inside_unit_square", all(0 <= p.x <= 1 and 0 <= p.y <= 1 for p in pts))
        cols = [
            (c.lo.x, c.lo.y, c.hi.x, c.hi.y)
            for t in self.staircase_inventory
            for c in t.columns()
        ]
        hit = find_overlap(cols)
        rep.add("disjoint", hit is None, "" if hit is None else f"columns {hit} overlap", hit)
        total = self.staircase_area()
        need = 1 - self.epsilon / 2
        rep.add(
            "target_area",
            total >= need,
            f"staircase area {float(total):.6f} vs required {float(need):.6f}",
            total,
        )
        bad = []
        for i, t in enumerate(self.staircase_inventory):
            rects = [Rect(t.anchor, p) for p in t.steps]
            areas = [rect_area(r) for r in rects]
            best = max(areas)
            if areas.count(best) != 1 or areas[-1] != best:
                bad.append(i)
            elif staircase_area(t) < self.beta * best:
                bad.append(i)
        rep.add(
            "unique_full_width_max_rect",
            not bad,
            "" if not bad else f"{len(bad)} staircases fail",
            bad[:10],
        )
        return rep


_MARGIN = Fraction(1, 256)
_BUMP = Fraction(1, 1024)
_TEMPLATE_BITS = 40


def _adversary_template(beta: Fraction, m: int) -> list[tuple[Fraction, Fraction]]:
    """Corners of a staircase in the unit box whose bottom rectangle is the
    unique maximum, with area at least beta times that rectangle."""
    q = hyperbola_ratio(beta * (1 + _BUMP), m)
    if q <= 0:
        raise ValueError(f"m={m} too small for beta={beta}")
    corners = []
    for k in range(m + 1):
        tx = Fraction(1) if k == m else _floor_dyadic(Fraction(q) ** (m - k), _TEMPLATE_BITS)
        ty = Fraction(1) if k == 0 else _floor_dyadic(Fraction(q) ** k, _TEMPLATE_BITS)
        corners.append((tx, ty))
    # lift the bottom step so the full-width rectangle wins outright
    tx, ty = corners[-1]
    corners[-1] = (tx, _floor_dyadic(ty * (1 + _BUMP), _TEMPLATE_BITS))
    t = StaircasePolygon(ORIGIN, tuple(Point(x, y) for x, y in corners))
    areas = [x * y for x, y in corners]
    best = areas[-1]
    if any(a >= best for a in areas[:-1]) or staircase_area(t) < beta * best:
        raise GeometryError("staircase template fails its own invariants")
    return corners


@dataclass
class _Node:
    box: tuple[Fraction, Fraction, Fraction, Fraction]
    stair: Optional[StaircasePolygon] = None
    children: list["_Node"] = field(default_factory=list)


def adversarial_sequence(
    epsilon,
    *,
    beta=None,
    steps: Optional[int] = None,
    max_staircases: int = 256,
    target_area=None,
) -> AdversarySequence:
    """Point sequence on which multi-round greedy covers little area.

    Staircases with area ratio ``beta`` (default ``2/epsilon``) are packed
    into the unit square largest box first: each staircase is shrunk into
    its box, leaving a thin margin on the left and bottom, and the region
    above its chain is cut into vertical sectors that become new boxes.
    Packing stops once the staircases cover ``target_area`` (default
    ``1 - epsilon/2``) or after
    ``max_staircases`` placements, whichever comes first.

    Points are revealed innermost staircase first, sectors right to left;
    each staircase contributes its chain vertices, then its lower-left
    corner, then an extra point just left of that corner which forces a
    thin fence along the staircase's left side. The origin comes last.
    """
    eps = as_scalar(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    beta = 2 / eps if beta is None else as_scalar(beta)
    m = math.ceil(8 / eps) if steps is None else int(steps)
    if max_staircases < 1:
        raise ValueError("max_staircases must be positive")
    template = _adversary_template(beta, m)
    one = Fraction(1)
    root = _Node((Fraction(0), Fraction(0), one, one))
    heap = [(-one, 0, root)]
    counter = 1
    placed: list[_Node] = []
    covered = Fraction(0)
    need = 1 - eps / 2 if target_area is None else as_scalar(target_area)
    while heap and len(placed) < max_staircases and covered < need:
        _, _, node = heapq.heappop(heap)
        x0, y0, x1, y1 = node.box
        sx = x0 + _MARGIN * (x1 - x0)
        sy = y0 + _MARGIN * (y1 - y0)
        W = x1 - sx
        H = y1 - sy
        chain = tuple(Point(sx + W * tx, sy + H * ty) for tx, ty in template)
        node.stair = StaircasePolygon(Point(sx, sy), chain)
        covered += staircase_area(node.stair)
        placed.append(node)
        for k in range(m):
            box = (chain[k].x, chain[k + 1].y, chain[k + 1].x, y1)
            child = _Node(box)
            node.children.append(child)
            area = (box[2] - box[0]) * (box[3] - box[1])
            heapq.heappush(heap, (-area, counter, child))
            counter += 1

    feature = min(
        min(min(n.stair.anchor.x - n.box[0], n.stair.anchor.y - n.box[1]) for n in placed),
        min(
            min(b.x - a.x, a.y - b.y)
            for n in placed
            for a, b in zip(n.stair.steps, n.stair.steps[1:])
        ),
    )
    delta = feature / 4

    out: list[Point] = []

    def emit(node: _Node) -> None:
        t = node.stair
        for child in reversed(node.children):
            if child.stair is not None:
                emit(child)
        out.extend(t.steps)
        out.extend(t.reflex_vertices)
        out.append(t.anchor)
        out.append(Point(t.anchor.x - delta, t.anchor.y + delta))

    emit(root)
    out.append(ORIGIN)
    return AdversarySequence(
        points=out,
        epsilon=eps,
        staircase_inventory=[n.stair for n in placed],
        beta=beta,
        steps=m,
        fence_offset=delta,
        target_reached=covered >= need,
        boxes_left=len(heap),
    )


# --------------------------------------------------------------------------
# densification


def densify(ps: PointSet, eps) -> PointSet:
    """Add ``(x - eps, y)`` and ``(x, y - eps)`` for every point, dropping
    companions that would leave the unit square.

    Requires distinct coordinate sums and ``eps`` smaller than the gap
    between consecutive sums, so each companion stays between its source's
    sweep line and the next lower one.
    """
    eps = as_scalar(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    sums = sorted(p.x + p.y for p in ps)
    for a, b in zip(sums, sums[1:]):
        if a == b:
            raise GeometryError(f"two points share the sweep line x + y = {a}")
        if b - a <= eps:
            raise GeometryError(f"eps={eps} is not below the sweep-line gap {b - a}")
    out = list(ps.points)
    seen = set(out)
    for p in ps.points:
        for c in ((p.x - eps, p.y), (p.x, p.y - eps)):
            if c[0] < 0 or c[1] < 0:
                continue
            q = Point(*c)
            if q in seen:
                raise GeometryError(f"companion {q} collides with an existing point")
            seen.add(q)
            out.append(q)
    return PointSet(out)
