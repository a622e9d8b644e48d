from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anchorpack.generators import densify, uniform_random
from anchorpack.geometry import GeometryError, Point, PointSet, Rect, interior_disjoint
from anchorpack.greedy import greedy_packing, max_anchored_empty_rect
from anchorpack.tiling import tile_packing, verify_packing

from .conftest import grid_point_sets


def P(x, y):
    return Point(F(x), F(y))


UNIT = Rect.of(0, 0, 1, 1)


class TestMaxAnchoredEmptyRect:
    def test_free_square(self):
        assert max_anchored_empty_rect(P(0, 0), []) == UNIT

    def test_single_obstacle(self):
        r = max_anchored_empty_rect(P("0.2", "0.5"), [Rect.of("0.6", "0.3", 1, 1)])
        assert r == Rect.of("0.2", "0.5", "0.6", 1)

    def test_tie_goes_to_smaller_width(self):
        obstacles = [Rect.of("0.6", "0.3", 1, 1), Rect.of("0.2", "0.5", "0.6", 1)]
        r = max_anchored_empty_rect(P(0, 0), obstacles)
        assert r == Rect.of(0, 0, "0.6", "0.5")
        assert r.area == F(3, 10)

    def test_anchor_inside_obstacle(self):
        with pytest.raises(GeometryError):
            max_anchored_empty_rect(P("0.5", "0.5"), [Rect.of("0.4", "0.4", "0.6", "0.6")])

    def test_nothing_fits(self):
        r = max_anchored_empty_rect(P(1, "0.5"), [])
        assert r.is_degenerate() and r.lo == r.hi

    def test_point_blockers(self):
        r = max_anchored_empty_rect(P(0, 0), [], points=[P("1/2", "1/2")])
        assert r.area == F(1, 2)


def brute_force_best_area(anchor, obstacles, denom):
    best = F(0)
    for i in range(denom + 1):
        for j in range(denom + 1):
            hi = Point(F(i, denom), F(j, denom))
            if hi.x <= anchor.x or hi.y <= anchor.y:
                continue
            r = Rect(anchor, hi)
            if all(interior_disjoint(r, o) for o in obstacles):
                best = max(best, r.area)
    return best


@st.composite
def obstacle_scenes(draw, denom=8):
    c = st.integers(0, denom)
    obstacles = []
    for _ in range(draw(st.integers(0, 5))):
        x0, x1 = sorted(draw(st.tuples(c, c)))
        y0, y1 = sorted(draw(st.tuples(c, c)))
        if x0 == x1 or y0 == y1:
            continue
        r = Rect.of(F(x0, denom), F(y0, denom), F(x1, denom), F(y1, denom))
        if all(interior_disjoint(r, o) for o in obstacles):
            obstacles.append(r)
    anchor = Point(F(draw(c), denom), F(draw(c), denom))
    return anchor, obstacles, denom


@given(obstacle_scenes())
def test_matches_brute_force(scene):
    anchor, obstacles, denom = scene
    if any(o.interior_contains(anchor) for o in obstacles):
        return
    r = max_anchored_empty_rect(anchor, obstacles)
    assert r.lo == anchor
    assert UNIT.contains_rect(r)
    assert all(interior_disjoint(r, o) for o in obstacles)
    assert r.area == brute_force_best_area(anchor, obstacles, denom)


def test_three_point_sweep(three_points):
    pk = greedy_packing(three_points)
    assert pk.areas() == [F(28, 100), F(20, 100), F(30, 100)]
    assert pk.coverage == F(78, 100)


def test_single_point():
    assert greedy_packing(PointSet([(0, 0)])).coverage == 1


@given(grid_point_sets(max_size=20))
def test_greedy_dominates_tile_per_anchor(ps):
    _, tp = tile_packing(ps)
    gp = greedy_packing(ps)
    assert verify_packing(gp).ok
    tile_area = {i: r.area for i, r in tp.by_point().items()}
    for i, r in gp.by_point().items():
        assert r.area >= tile_area[i]
    assert gp.coverage >= tp.coverage


@given(grid_point_sets(max_size=8, origin=False), st.randoms(use_true_random=False))
def test_any_order_is_valid(ps, rnd):
    order = list(range(len(ps)))
    rnd.shuffle(order)
    for avoid in (True, False):
        pk = greedy_packing(ps, order, avoid_points=avoid)
        assert verify_packing(pk).ok
        if avoid:
            assert not any(r.interior_contains(p) for r in pk.rects for p in ps)


def test_online_mode_can_swallow_later_points(two_diagonal):
    # origin first: in the multi-round game it may take the whole square
    pk = greedy_packing(two_diagonal, [0, 1], avoid_points=False)
    assert pk.coverage == 1
    assert pk.rect_for(1).is_degenerate()
    assert greedy_packing(two_diagonal, [0, 1]).coverage == F(3, 4)


def test_bad_order(three_points):
    with pytest.raises(GeometryError):
        greedy_packing(three_points, [0, 0, 1])


@pytest.mark.parametrize("seed", range(10))
def test_densified_greedy_equals_tile(seed):
    ps = uniform_random(30, seed)
    dense = densify(ps, F(1, 1 << 40))
    _, tp = tile_packing(dense)
    gp = greedy_packing(dense)
    assert tp.by_point() == gp.by_point()
