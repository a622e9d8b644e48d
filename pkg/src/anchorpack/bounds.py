"""Coverage lower-bound formulas and exact per-tile diagnostics.

The bound formulas run in IEEE double. Tile measurements are exact; where
they meet powers of e, the comparison goes through a rational interval
enclosure of the exponential so the verdict is certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .geometry import (
    Point,
    PointSet,
    Rect,
    StaircasePolygon,
    max_rect,
    rect_area,
    scale_points,
    staircase_area,
)
from .tiling import Tiling, VerificationReport

EULER_GAMMA = 0.57721566490153286060651209008240243


# --------------------------------------------------------------------------
# closed-form bounds


def _check_params(beta: float, lam: float) -> None:
    if not beta >= 5:
        raise ValueError(f"beta must be >= 5, got {beta}")
    if not 0 < lam < 1:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")


def lambda_factor(lam: float) -> float:
    """The lambda-only factor shared by both bounds."""
    return (3 - 3 * lam + lam * lam) * (8 + 3 * lam - lam * lam) / (
        2 * lam * (1 - lam) * (2 - lam) ** 2
    )


def F(beta: float, lam: float) -> float:
    """Upper bound on the total area of all beta-tiles."""
    _check_params(beta, lam)
    return lambda_factor(lam) * beta * math.exp(5 - beta)


def simple_lower_bound(beta: float, lam: float) -> float:
    return (1 - F(beta, lam)) / beta


def _e1_series(x: float) -> float:
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)):
            break
        k += 1
    return -EULER_GAMMA - math.log(x) - total


def _e1_continued_fraction(x: float) -> float:
    # modified Lentz on e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    i = 1
    while i < 10000:
        an = -float(i * i)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        i += 1
    return h * math.exp(-x)


def exp_integral_E1(x: float) -> float:
    """E1(x) = integral of e^-t / t over [x, inf), for x > 0.

    Power series up to x = 1; above that the series loses every digit to
    cancellation (terms near 1e3 around x = 10 for a result near 1e-6), so
    the continued fraction takes over.
    """
    if not x > 0:
        raise ValueError("E1 is only defined here for x > 0")
    if x <= 1.0:
        return _e1_series(x)
    return _e1_continued_fraction(x)


def integrated_lower_bound(beta0: float, lam: float) -> float:
    _check_params(beta0, lam)
    return 1.0 / beta0 - lambda_factor(lam) * math.exp(5.0) * exp_integral_E1(beta0)


@dataclass(frozen=True)
class BoundParams:
    beta: float
    lam: float
    value: float


def _grid_maximize(func, beta_lo, beta_hi, lam_lo, lam_hi, step, rounds):
    def scan(b0, b1, l0, l1, st):
        best = None
        nb = int(round((b1 - b0) / st))
        nl = int(round((l1 - l0) / st))
        for i in range(nb + 1):
            b = b0 + i * st
            if b < beta_lo or b > beta_hi:
                continue
            for j in range(nl + 1):
                lam = l0 + j * st
                if not lam_lo < lam < lam_hi:
                    continue
                v = func(b, lam)
                # ties resolve to the lexicographically smallest parameters
                if best is None or v > best[0]:
                    best = (v, b, lam)
        return best

    best = scan(beta_lo, beta_hi, step, lam_hi - step, step)
    st = step
    for _ in range(rounds):
        v, b, lam = best
        fine = st / 10
        cand = scan(b - st, b + st, max(lam - st, fine), min(lam + st, lam_hi - fine), fine)
        if cand is not None and cand[0] >= best[0]:
            best = cand
        st = fine
    v, b, lam = best
    return BoundParams(b, lam, v)


def optimize_bounds(
    beta_range=(5.0, 30.0), step: float = 0.05, rounds: int = 4
) -> dict[str, BoundParams]:
    """Nested grid refinement for both bounds over (beta, lambda)."""
    lo, hi = beta_range
    simple = _grid_maximize(simple_lower_bound, lo, hi, 0.0, 1.0, step, rounds)
    e1_cache: dict[float, float] = {}

    def integrated(b, lam):
        e1 = e1_cache.get(b)
        if e1 is None:
            e1 = e1_cache[b] = exp_integral_E1(b)
        return 1.0 / b - lambda_factor(lam) * math.exp(5.0) * e1

    integ = _grid_maximize(integrated, lo, hi, 0.0, 1.0, step, rounds)
    return {"simple": simple, "integrated": integ}


# --------------------------------------------------------------------------
# certified exponential


_E_TERMS = 40
_PRECISION = 96


def _round_out(lo: Fraction, hi: Fraction, bits: int = _PRECISION) -> tuple[Fraction, Fraction]:
    s = 1 << bits
    return Fraction(math.floor(lo * s), s), Fraction(-math.floor(-hi * s), s)


def exp_enclosure(x: Fraction, terms: int = _E_TERMS) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= e**x <= hi`` for rational ``x``."""
    x = Fraction(x)
    if x < 0:
        lo, hi = exp_enclosure(-x, terms)
        return 1 / hi, 1 / lo
    n = math.floor(x)
    f = x - n
    # e^f for f in [0, 1): Taylor sum plus remainder f^(N+1)/(N+1)! * e
    s = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        s += term
        term = term * f / (k + 1)
    lo_f, hi_f = s, s + term * 3
    lo_f, hi_f = _round_out(lo_f, hi_f)
    # e itself: partial sum plus tail bound 1/(N! N)
    e_sum = Fraction(0)
    fact = 1
    for k in range(terms + 1):
        if k:
            fact *= k
        e_sum += Fraction(1, fact)
    e_lo, e_hi = _round_out(e_sum, e_sum + Fraction(1, fact * terms))
    lo = lo_f * e_lo ** n
    hi = hi_f * e_hi ** n
    return _round_out(lo, hi)


def _less_exp(m: Fraction, exponent: Fraction, bound: Fraction) -> Optional[bool]:
    """Decide ``m * e**exponent < bound`` for ``m >= 0``.

    Returns None when the enclosure is too coarse to separate the sides.
    """
    lo, hi = exp_enclosure(exponent)
    if m * hi < bound:
        return True
    if m * lo >= bound:
        return False
    return None


# --------------------------------------------------------------------------
# per-tile diagnostics


@dataclass(frozen=True)
class TileDiagnostics:
    width: Fraction
    height: Fraction
    area: Fraction
    max_rect: Rect
    main_width: Fraction
    main_height: Fraction
    right_tip: StaircasePolygon
    upper_tip: StaircasePolygon
    main_body: StaircasePolygon
    vertical_sectors: tuple[Rect, ...]
    horizontal_sectors: tuple[Rect, ...]
    is_beta_tile: bool
    tips_disjoint: bool
    classification: str
    trapezoid_A: tuple[tuple[Fraction, Fraction], ...]
    triangle_delta: tuple[tuple[Fraction, Fraction], ...]
    triangle_gamma: tuple[tuple[Fraction, Fraction], ...]

    @property
    def right_tip_width(self) -> Fraction:
        return self.right_tip.width

    @property
    def upper_tip_height(self) -> Fraction:
        return self.upper_tip.height


def polygon_area(vertices) -> Fraction:
    """Shoelace area of a simple polygon given as exact (x, y) pairs."""
    s = Fraction(0)
    m = len(vertices)
    for k in range(m):
        x0, y0 = vertices[k]
        x1, y1 = vertices[(k + 1) % m]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def _right_cut(t: StaircasePolygon, threshold: Fraction) -> Fraction:
    """Rightmost vertex abscissa whose right part has area >= threshold."""
    cols = t.columns()
    acc = Fraction(0)
    for col in reversed(cols):
        acc += rect_area(col)
        if acc >= threshold:
            return col.lo.x
    return t.anchor.x


def _upper_cut(t: StaircasePolygon, threshold: Fraction) -> Fraction:
    rows = t.rows()
    acc = Fraction(0)
    for row in reversed(rows):
        acc += rect_area(row)
        if acc >= threshold:
            return row.lo.y
    return t.anchor.y


def _clip(t: StaircasePolygon, xmax: Fraction, ymax: Fraction) -> StaircasePolygon:
    a = t.anchor
    steps = []
    for p in t.steps:
        q = Point(min(p.x, xmax), min(p.y, ymax))
        if q.x <= a.x or q.y <= a.y:
            continue
        while steps and steps[-1].y <= q.y:
            steps.pop()
        if steps and steps[-1].x >= q.x:
            continue
        steps.append(q)
    if not steps:
        steps = [Point(max(min(t.steps[0].x, xmax), a.x), max(min(t.steps[0].y, ymax), a.y))]
    return StaircasePolygon(a, tuple(steps))


def tile_diagnostics(t: StaircasePolygon, beta, lam) -> TileDiagnostics:
    beta = Fraction(beta)
    lam = Fraction(lam)
    if beta < 5:
        raise ValueError("beta must be >= 5")
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    a = t.anchor
    area = staircase_area(t)
    r = max_rect(t)
    is_beta = rect_area(r) * beta < area
    threshold = area / beta
    c = _right_cut(t, threshold)
    d = _upper_cut(t, threshold)
    right_tip = StaircasePolygon(
        Point(c, a.y), tuple(p for p in t.steps if p.x > c) or (Point(c, t.steps[-1].y),)
    )
    upper_tip = StaircasePolygon(
        Point(a.x, d), tuple(p for p in t.steps if p.y > d) or (Point(t.steps[0].x, d),)
    )
    tips_disjoint = not any(p.x > c and p.y > d for p in t.steps)
    body = _clip(t, c, d)
    aw = c - a.x
    bh = d - a.y
    w = t.width
    h = t.height
    trapezoid = (
        (a.x, a.y),
        (a.x + aw, a.y),
        (a.x + aw, a.y - lam * aw),
        (a.x + lam * aw, a.y - lam * aw),
    )
    delta = ((a.x, a.y), (a.x + w, a.y), (a.x + w, a.y - w))
    gamma = ((a.x, a.y), (a.x, a.y + h), (a.x - h, a.y + h))
    return TileDiagnostics(
        width=w,
        height=h,
        area=area,
        max_rect=r,
        main_width=aw,
        main_height=bh,
        right_tip=right_tip,
        upper_tip=upper_tip,
        main_body=body,
        vertical_sectors=tuple(t.columns()),
        horizontal_sectors=tuple(t.rows()),
        is_beta_tile=is_beta,
        tips_disjoint=tips_disjoint,
        classification="wide" if aw >= bh else "tall",
        trapezoid_A=trapezoid,
        triangle_delta=delta,
        triangle_gamma=gamma,
    )


def bounding_box_bound_holds(t: StaircasePolygon) -> Optional[bool]:
    """Bounding-box inequality for a tile at its own area/max-rect ratio.

    With ratio q = area/maxrect the claim ``area < q e^(1-q) h w`` reads
    ``maxrect * e^(q-1) < h w``; a single rectangle meets it with equality.
    Zero-area tiles pass vacuously.
    """
    area = staircase_area(t)
    m = rect_area(max_rect(t))
    if area == 0:
        return True
    q = area / m
    hw = t.width * t.height
    if len(t.steps) == 1:
        return m == hw
    return _less_exp(m, q - 1, hw)


def main_body_bound_holds(diag: TileDiagnostics, beta) -> Optional[bool]:
    """area(t) < beta e^(5-beta) |a'| |b'|."""
    beta = Fraction(beta)
    return _less_exp(diag.area, beta - 5, beta * diag.main_width * diag.main_height)


def side_bound_holds(diag: TileDiagnostics, beta) -> Optional[bool]:
    """area(t) < beta e^(5-beta) |a'|^2 for wide tiles, |b'|^2 for tall ones."""
    beta = Fraction(beta)
    side = diag.main_width if diag.classification == "wide" else diag.main_height
    return _less_exp(diag.area, beta - 5, beta * side * side)


# --------------------------------------------------------------------------
# empty triangles


class _PrefixMin:
    """Fenwick tree of prefix minima with argmin."""

    def __init__(self, n: int):
        self.n = n
        self.tree = [None] * (n + 1)

    def update(self, i: int, value) -> None:
        i += 1
        while i <= self.n:
            cur = self.tree[i]
            if cur is None or value < cur:
                self.tree[i] = value
            i += i & -i

    def query(self, i: int):
        """Minimum over positions [0, i)."""
        best = None
        while i > 0:
            cur = self.tree[i]
            if cur is not None and (best is None or cur < best):
                best = cur
            i -= i & -i
        return best


def verify_empty_triangles(ps: PointSet, tl: Tiling) -> VerificationReport:
    """No input point lies strictly inside any tile's triangle below its
    bottom side or left of its left side.

    A point q is strictly inside the lower triangle of the tile at s iff
    x(q)+y(q) > x(s)+y(s), y(q) < y(s) and x(q) < x(s)+|a|. Sweeping points
    by decreasing coordinate sum, the points already seen with a strictly
    larger sum are the only candidates; a prefix-minimum tree over y ranks
    returns the smallest x among those below s (symmetrically for the left
    triangle), so the whole check is O(n log n).
    """
    rep = VerificationReport()
    D, anchors, chains = tl.scaled()
    if len(chains) != len(tl.order):
        rep.add("delta_empty", False, "tiling does not match its order")
        rep.add("gamma_empty", False, "tiling does not match its order")
        return rep
    _, xs, ys = scale_points(ps.points, D)
    n = len(ps)
    y_rank = {v: k for k, v in enumerate(sorted(set(ys)))}
    x_rank = {v: k for k, v in enumerate(sorted(set(xs)))}
    min_x_below = _PrefixMin(len(y_rank))
    min_y_left = _PrefixMin(len(x_rank))
    tile_of = {idx: i for i, idx in enumerate(tl.order)}
    by_sum = sorted(range(n), key=lambda j: -(xs[j] + ys[j]))
    delta_bad = None
    gamma_bad = None
    k = 0
    while k < n:
        s_val = xs[by_sum[k]] + ys[by_sum[k]]
        group = []
        while k < n and xs[by_sum[k]] + ys[by_sum[k]] == s_val:
            group.append(by_sum[k])
            k += 1
        for j in group:
            i = tile_of[j]
            sx, sy = xs[j], ys[j]
            chain = chains[i]
            w = chain[-1][0] - sx
            h = chain[0][1] - sy
            hit = min_x_below.query(y_rank[sy])
            if hit is not None and hit[0] < sx + w and delta_bad is None:
                delta_bad = (j, hit[1])
            hit = min_y_left.query(x_rank[sx])
            if hit is not None and hit[0] < sy + h and gamma_bad is None:
                gamma_bad = (j, hit[1])
        for j in group:
            min_x_below.update(y_rank[ys[j]], (xs[j], j))
            min_y_left.update(x_rank[xs[j]], (ys[j], j))
    rep.add(
        "delta_empty",
        delta_bad is None,
        "" if delta_bad is None else f"point {delta_bad[1]} inside lower triangle of point {delta_bad[0]}",
        delta_bad,
    )
    rep.add(
        "gamma_empty",
        gamma_bad is None,
        "" if gamma_bad is None else f"point {gamma_bad[1]} inside left triangle of point {gamma_bad[0]}",
        gamma_bad,
    )
    return rep
