"""JSON instance and result files with exact rational coordinates.

Numbers are written as strings (``"3/5"``, ``"1"``); decimal strings such
as ``"0.6"`` are accepted on input and parsed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .geometry import GeometryError, Point, PointSet, Rect, StaircasePolygon
from .tiling import AnchoredPacking, Tiling


class FormatError(ValueError):
    """Raised for malformed instance or result documents."""


def parse_scalar(value) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # read the decimal literal, not the binary double
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"cannot parse {value!r} as a rational") from exc
    raise FormatError(f"not a number: {value!r}")


def format_scalar(v: Fraction) -> str:
    return str(Fraction(v))


def _pair(raw) -> Point:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise FormatError(f"expected an [x, y] pair, got {raw!r}")
    return Point(parse_scalar(raw[0]), parse_scalar(raw[1]))


def _fmt_point(p: Point) -> list[str]:
    return [format_scalar(p.x), format_scalar(p.y)]


@dataclass
class Instance:
    points: PointSet
    order: Optional[list[int]] = None
    online: bool = False

    def to_dict(self) -> dict:
        d: dict = {"points": [_fmt_point(p) for p in self.points]}
        if self.order is not None:
            d["order"] = list(self.order)
        if self.online:
            d["online"] = True
        return d

    @classmethod
    def from_dict(cls, d) -> "Instance":
        if not isinstance(d, dict) or "points" not in d:
            raise FormatError("instance must be an object with a 'points' array")
        raw = d["points"]
        if not isinstance(raw, list):
            raise FormatError("'points' must be an array")
        try:
            ps = PointSet(Point.of(*_pair(r)) for r in raw)
        except GeometryError as exc:
            raise FormatError(str(exc)) from exc
        order = d.get("order")
        if order is not None:
            if not isinstance(order, list) or sorted(order) != list(range(len(ps))):
                raise FormatError("'order' must be a permutation of the point indices")
            order = [int(i) for i in order]
        return cls(ps, order, bool(d.get("online", False)))


@dataclass
class Result:
    algorithm: str
    rects: list[Rect]
    coverage: Fraction
    tiles: Optional[list[StaircasePolygon]] = None

    def to_dict(self) -> dict:
        d: dict = {
            "algorithm": self.algorithm,
            "coverage": format_scalar(self.coverage),
            "coverage_float": float(self.coverage),
            "rects": [
                {"anchor": _fmt_point(r.lo), "lo": _fmt_point(r.lo), "hi": _fmt_point(r.hi)}
                for r in self.rects
            ],
        }
        if self.tiles is not None:
            d["tiles"] = [
                {"anchor": _fmt_point(t.anchor), "steps": [_fmt_point(p) for p in t.steps]}
                for t in self.tiles
            ]
        return d

    @classmethod
    def from_dict(cls, d) -> "Result":
        try:
            rects = []
            for r in d["rects"]:
                lo = _pair(r["lo"])
                if "anchor" in r and _pair(r["anchor"]) != lo:
                    raise FormatError(f"rect anchor {r['anchor']} differs from its corner")
                rects.append(Rect(lo, _pair(r["hi"])))
            tiles = None
            if d.get("tiles") is not None:
                tiles = [
                    StaircasePolygon(_pair(t["anchor"]), tuple(_pair(p) for p in t["steps"]))
                    for t in d["tiles"]
                ]
            res = cls(str(d["algorithm"]), rects, parse_scalar(d["coverage"]), tiles)
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed result: {exc}") from exc
        except GeometryError as exc:
            raise FormatError(str(exc)) from exc
        total = sum((r.area for r in rects), Fraction(0))
        if total != res.coverage:
            raise FormatError(f"coverage {res.coverage} differs from the rect area sum {total}")
        return res

    @classmethod
    def from_packing(cls, algorithm: str, pk: AnchoredPacking, tiling: Optional[Tiling] = None) -> "Result":
        return cls(algorithm, list(pk.rects), pk.coverage, None if tiling is None else list(tiling.tiles))

    def to_packing(self, ps: PointSet) -> AnchoredPacking:
        order = []
        for r in self.rects:
            if r.lo not in ps:
                raise FormatError(f"rect anchor {r.lo} is not an instance point")
            order.append(ps.index(r.lo))
        if sorted(order) != list(range(len(ps))):
            raise FormatError("result does not assign exactly one rectangle per point")
        return AnchoredPacking(ps, order, self.rects)

    def to_tiling(self, ps: PointSet) -> Optional[Tiling]:
        if self.tiles is None:
            return None
        order = []
        for t in self.tiles:
            if t.anchor not in ps:
                raise FormatError(f"tile anchor {t.anchor} is not an instance point")
            order.append(ps.index(t.anchor))
        return Tiling(ps, order, self.tiles)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def read_instance(path) -> Instance:
    return Instance.from_dict(load_json(path))


def write_instance(path, inst: Instance) -> None:
    Path(path).write_text(dumps(inst.to_dict()))


def read_result(path) -> Result:
    return Result.from_dict(load_json(path))


def write_result(path, res: Result) -> None:
    Path(path).write_text(dumps(res.to_dict()))
