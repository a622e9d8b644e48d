"""Brute-force optimal packings for tiny instances, Pareto checks and
exhaustive search over greedy orders."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .geometry import GeometryError, Point, PointSet, Rect, scale_points, sweep_order
from .greedy import greedy_packing, max_anchored_empty_rect
from .tiling import AnchoredPacking

DEFAULT_MAX_N = 7
PERMUTATION_MAX_N = 8


class InstanceTooLarge(ValueError):
    pass


def default_cap() -> int:
    raw = os.environ.get("ANCHOREDPACK_MAX_N")
    return int(raw) if raw else DEFAULT_MAX_N


@dataclass
class OptimalResult:
    packing: AnchoredPacking
    value: Fraction
    nodes_explored: int


def candidate_grid(ps: PointSet, *, allow_degenerate: bool = True) -> list[list[Rect]]:
    """Per point: rectangles ``[s, (X, Y)]`` with X, Y drawn from larger
    coordinates of other points or 1, holding no point in their interior.

    The zero-area rectangle ``[s, s]`` is appended when degenerate
    rectangles are admissible.
    """
    D, xs, ys = scale_points(ps.points)
    out = []
    for i, cands in enumerate(_candidates(xs, ys, D, allow_degenerate)):
        s = ps[i]
        out.append([Rect(s, Point(Fraction(X, D), Fraction(Y, D))) for X, Y in cands])
    return out


def _candidates(xs, ys, D, allow_degenerate):
    n = len(xs)
    grid = []
    for i in range(n):
        sx, sy = xs[i], ys[i]
        Xs = sorted({x for x in xs if x > sx} | {D})
        Ys = sorted({y for y in ys if y > sy} | {D})
        cands = []
        for X in Xs:
            if X <= sx:
                continue
            for Y in Ys:
                if Y <= sy:
                    continue
                if any(sx < xs[j] < X and sy < ys[j] < Y for j in range(n)):
                    continue
                cands.append((X, Y))
        cands.sort(key=lambda c: -(c[0] - sx) * (c[1] - sy))
        if allow_degenerate or not cands:
            cands.append((sx, sy))
        grid.append(cands)
    return grid


def optimal_packing(
    ps: PointSet, *, max_n: int | None = None, allow_degenerate: bool = True
) -> OptimalResult:
    """Maximum total area over the candidate grid, by branch and bound.

    Anchors are assigned in sweep order; a branch is cut when its area plus
    the best candidate of every unassigned anchor (capped at the unit
    square) cannot beat the incumbent.
    """
    cap = default_cap() if max_n is None else max_n
    n = len(ps)
    if n > cap:
        raise InstanceTooLarge(f"instance too large: n={n} exceeds cap {cap}")
    D, xs, ys = scale_points(ps.points)
    grid = _candidates(xs, ys, D, allow_degenerate)
    order = sweep_order(ps)
    area_of = [
        [(X - xs[i]) * (Y - ys[i]) for X, Y in grid[i]] for i in range(n)
    ]
    for i in range(n):
        if not allow_degenerate and all(a == 0 for a in area_of[i]):
            raise GeometryError(f"point {ps[i]} admits no rectangle of positive area")
    suffix = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] + max(area_of[order[k]])
    full = D * D

    best_value = -1
    best_choice: list[tuple[int, int]] | None = None
    nodes = 0
    chosen: list[tuple[int, int, int, int]] = []
    picks: list[tuple[int, int]] = []

    def search(k: int, value: int) -> None:
        nonlocal best_value, best_choice, nodes
        nodes += 1
        if k == n:
            if value > best_value:
                best_value = value
                best_choice = list(picks)
            return
        if min(value + suffix[k], full) <= best_value:
            return
        i = order[k]
        sx, sy = xs[i], ys[i]
        for (X, Y), a in zip(grid[i], area_of[i]):
            if a > 0:
                if any(min(X, x1) > max(sx, x0) and min(Y, y1) > max(sy, y0) for x0, y0, x1, y1 in chosen):
                    continue
                if min(value + a + suffix[k + 1], full) <= best_value:
                    # candidates are sorted by area; the rest cannot do better
                    break
                chosen.append((sx, sy, X, Y))
                picks.append((X, Y))
                search(k + 1, value + a)
                picks.pop()
                chosen.pop()
            else:
                picks.append((X, Y))
                search(k + 1, value)
                picks.pop()

    search(0, 0)
    if best_choice is None:
        raise GeometryError("no feasible packing")
    rects = [
        Rect(ps[i], Point(Fraction(X, D), Fraction(Y, D))) for i, (X, Y) in zip(order, best_choice)
    ]
    packing = AnchoredPacking(ps, order, rects)
    return OptimalResult(packing, Fraction(best_value, full), nodes)


def pareto_witnesses(ps: PointSet, pk: AnchoredPacking) -> list[tuple[int, Fraction, Fraction]]:
    """``(point index, current area, best area with others fixed)`` per anchor."""
    out = []
    rects = list(pk.rects)
    for k, idx in enumerate(pk.order):
        others = rects[:k] + rects[k + 1:]
        current = rects[k].area
        try:
            best = max_anchored_empty_rect(ps[idx], others).area
        except GeometryError:
            best = Fraction(0)
        out.append((idx, current, best))
    return out


def is_pareto_optimal(ps: PointSet, pk: AnchoredPacking) -> bool:
    return all(cur == best for _, cur, best in pareto_witnesses(ps, pk))


def best_permutation(ps: PointSet, *, max_n: int = PERMUTATION_MAX_N) -> tuple[tuple[int, ...], AnchoredPacking]:
    """Greedy over every processing order; the first order of maximum
    coverage in lexicographic enumeration is returned."""
    n = len(ps)
    if n > max_n:
        raise InstanceTooLarge(f"instance too large: n={n} exceeds cap {max_n}")
    best = None
    for perm in itertools.permutations(range(n)):
        pk = greedy_packing(ps, perm)
        if best is None or pk.coverage > best[1].coverage:
            best = (perm, pk)
    return best
