"""Metrized cell shapes with their model direction sets.

A ShapeTemplate is a convex polygon with exact QuadNumber coordinates,
directed sides, and a finite set of model DirectionAnchors: boundary
points with inward unit directions.  Chords (straight segments from an
anchor to its exit point) and billiard traces (chord + specular
reflection) are computed exactly; the anchor sets of the catalog shapes
are closed under the chord map and cover every side with a perpendicular
direction.

Catalog names: TriQ244, TriH236, Equilateral, UnitSquare, Gon4, Gon6,
Gon12 (also spelled "Gon(4)" etc).  A name may carry a scale suffix,
e.g. "TriQ244@1/2*sqrt2".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quadfield import (ONE, QuadNumber, SQRT2, SQRT3, cross, dot,
                        format_scalar, norm_sq, parse_scalar, vec_add,
                        vec_scale, vec_sub)

Vec = tuple[QuadNumber, QuadNumber]


class ChordError(ValueError):
    """Raised when a chord is undefined (it exits through a vertex)."""


@dataclass(frozen=True)
class DirectionAnchor:
    """A boundary point with an inward unit direction.

    side  -- index of the directed side carrying the point
    u     -- position in (0,1) along the directed side
    dir   -- unit direction (shape coordinates), pointing strictly inward
    """
    side: int
    u: QuadNumber
    dir: Vec

    def key(self):
        return (self.side, self.u.coeffs, self.dir[0].coeffs, self.dir[1].coeffs)


@dataclass(frozen=True)
class ChordSegment:
    start: DirectionAnchor
    end: DirectionAnchor
    start_point: Vec
    end_point: Vec
    length: QuadNumber


class ShapeTemplate:
    """Convex polygon with directed sides and model anchors."""

    def __init__(self, name: str, vertices: list[Vec],
                 anchors: list[DirectionAnchor],
                 symmetries: list[tuple] | None = None,
                 scale: QuadNumber = ONE):
        self.name = name
        self.vertices = list(vertices)
        self.n_sides = len(vertices)
        self.anchors = list(anchors)
        self.symmetries = symmetries or []
        self.scale = scale
        self._check()

    # -- geometry -------------------------------------------------------------

    def side_points(self, i: int) -> tuple[Vec, Vec]:
        return self.vertices[i], self.vertices[(i + 1) % self.n_sides]

    def side_vector(self, i: int) -> Vec:
        p, q = self.side_points(i)
        return vec_sub(q, p)

    @property
    def side_lengths(self) -> list[QuadNumber]:
        return [self._length(i) for i in range(self.n_sides)]

    def _length(self, i: int) -> QuadNumber:
        v = self.side_vector(i)
        sq = norm_sq(v)
        # side lengths of catalog shapes always lie in the field; find the
        # exact square root by testing the small candidate set
        for cand in _sqrt_candidates(sq):
            return cand
        raise ValueError(f"side length sqrt({sq}) not in Q(sqrt2,sqrt3)")

    def side_unit(self, i: int) -> Vec:
        v = self.side_vector(i)
        return vec_scale(self._length(i).inverse(), v)

    def side_normal_in(self, i: int) -> Vec:
        """Unit inward normal: left normal of the directed side (ccw polygon)."""
        u = self.side_unit(i)
        return (-u[1], u[0])

    def point_at(self, side: int, u: QuadNumber) -> Vec:
        p, _ = self.side_points(side)
        return vec_add(p, vec_scale(u, self.side_vector(side)))

    def contains_open(self, pt: Vec) -> bool:
        for i in range(self.n_sides):
            p, _ = self.side_points(i)
            if cross(self.side_vector(i), vec_sub(pt, p)).sign() <= 0:
                return False
        return True

    def _check(self):
        n = self.n_sides
        if n < 3:
            raise ValueError("polygon needs at least 3 sides")
        for i in range(n):
            v1 = self.side_vector(i)
            v2 = self.side_vector((i + 1) % n)
            if cross(v1, v2).sign() <= 0:
                raise ValueError(f"{self.name}: not strictly convex ccw at corner {i}")
        for a in self.anchors:
            if not (QuadNumber(0) < a.u < ONE):
                raise ValueError(f"{self.name}: anchor parameter {a.u} not in (0,1)")
            if norm_sq(a.dir) != ONE:
                raise ValueError(f"{self.name}: anchor direction not unit")
            if cross(self.side_unit(a.side), a.dir).sign() <= 0:
                raise ValueError(f"{self.name}: anchor on side {a.side} not inward")

    # -- chords and billiards ---------------------------------------------------

    def chord(self, anchor: DirectionAnchor) -> ChordSegment:
        """Straight-line exit of the anchor's ray; ends with the reversed
        direction at the exit point.  Raises ChordError on a vertex hit."""
        x = self.point_at(anchor.side, anchor.u)
        d = anchor.dir
        best = None
        for j in range(self.n_sides):
            if j == anchor.side:
                continue
            p, _ = self.side_points(j)
            w = self.side_vector(j)
            den = cross(d, w)
            if den.is_zero():
                continue
            diff = vec_sub(p, x)
            tau = cross(diff, w) / den
            mu = cross(diff, d) / den
            if tau.sign() <= 0:
                continue
            if mu.sign() < 0 or (mu - ONE).sign() > 0:
                continue
            if best is None or tau < best[0]:
                best = (tau, j, mu)
        if best is None:
            raise ChordError("ray does not exit the polygon")
        tau, j, mu = best
        if mu.sign() == 0 or (mu - ONE).sign() == 0:
            raise ChordError(f"vertex hit leaving side {anchor.side} at u={anchor.u}")
        end = DirectionAnchor(j, mu, (-d[0], -d[1]))
        return ChordSegment(anchor, end, x, self.point_at(j, mu), tau)

    def reflect(self, anchor: DirectionAnchor) -> DirectionAnchor:
        """Specular reflection of the reversed-chord direction at the anchor.

        For an anchor recording the *ending* direction of a chord this is
        the outgoing billiard direction.
        """
        d = (-anchor.dir[0], -anchor.dir[1])  # direction of travel at impact
        n = self.side_normal_in(anchor.side)
        k = dot(d, n) * QuadNumber(2)
        out = (d[0] - k * n[0], d[1] - k * n[1])
        return DirectionAnchor(anchor.side, anchor.u, out)

    def billiard_trace(self, start: DirectionAnchor, max_bounces: int):
        """Iterate chord + reflection; report exact closure.

        Returns a BilliardTrace with the chord list, closure flag, period
        (number of chords until the start anchor recurs) and the number of
        distinct undirected segments.
        """
        if max_bounces < 1:
            raise ValueError("max_bounces must be >= 1")
        chords: list[ChordSegment] = []
        segments: set = set()
        current = start
        for _ in range(max_bounces):
            ch = self.chord(current)
            chords.append(ch)
            a = (ch.start.side, ch.start.u.coeffs)
            b = (ch.end.side, ch.end.u.coeffs)
            segments.add(frozenset((a, b)))
            nxt = self.reflect(ch.end)
            if nxt.key() == start.key():
                return BilliardTrace(True, len(chords), chords, len(segments))
            current = nxt
        return BilliardTrace(False, None, chords, len(segments))

    def anchor_set_keys(self) -> set:
        return {a.key() for a in self.anchors}


@dataclass
class BilliardTrace:
    closed: bool
    period: int | None
    chords: list[ChordSegment]
    distinct_segments: int


def _sqrt_candidates(sq: QuadNumber):
    """Exact square roots of sq among field elements r*1, r*sqrt2, r*sqrt3,
    r*sqrt6 and small two-term combinations (covers catalog geometry)."""
    from itertools import product
    if sq.is_rational():
        f = sq.as_fraction()
        if f == 0:
            yield QuadNumber(0)
            return
        # try rational root
        pn, pd = f.numerator, f.denominator
        import math as _m
        rn, rd = _m.isqrt(pn), _m.isqrt(pd)
        if rn * rn == pn and rd * rd == pd:
            yield QuadNumber(Fraction(rn, rd))
            return
        for base, rad in ((SQRT2, 2), (SQRT3, 3), (QuadNumber(0, 0, 0, 1), 6)):
            g = f / rad
            gn, gd = g.numerator, g.denominator
            rn, rd = _m.isqrt(gn), _m.isqrt(gd)
            if rn * rn == gn and rd * rd == gd:
                yield base * Fraction(rn, rd)
                return
    # general fallback: (p + q*sqrt2 + r*sqrt3 + s*sqrt6)^2 == sq with small
    # denominators; search a tiny grid sufficient for scaled catalog shapes
    denoms = (1, 2, 3, 4, 6, 8, 12)
    vals = [Fraction(n, d) for d in denoms for n in range(-8, 9)]
    vals = sorted(set(vals), key=lambda f: (f < 0, abs(f)))
    for p, q in product(vals, vals):
        cand = QuadNumber(p, q)
        if cand.sign() > 0 and cand * cand == sq:
            yield cand
            return
        cand = QuadNumber(p, 0, q)
        if cand.sign() > 0 and cand * cand == sq:
            yield cand
            return
        cand = QuadNumber(p, 0, 0, q)
        if cand.sign() > 0 and cand * cand == sq:
            yield cand
            return


# -- catalog ------------------------------------------------------------------

_F = Fraction
_Q = QuadNumber


def _q(a=0, b=0, c=0, d=0):
    return _Q(a, b, c, d)


def _anch(side, u, dx, dy):
    return DirectionAnchor(side, QuadNumber.of(u) if not isinstance(u, QuadNumber) else u,
                           (dx if isinstance(dx, QuadNumber) else _Q(dx),
                            dy if isinstance(dy, QuadNumber) else _Q(dy)))


def _tri_q244() -> ShapeTemplate:
    # right isoceles triangle, legs 1, hypotenuse sqrt2; right angle at origin
    verts = [(_q(0), _q(0)), (_q(1), _q(0)), (_q(0), _q(1))]
    h = _q(0, _F(1, 2))           # sqrt2/2
    anchors = [
        # hypotenuse (side 1): perpendicular at u=1/4 and 3/4, two pi/4
        # directions at the midpoint
        _anch(1, _F(1, 4), -h, -h),
        _anch(1, _F(3, 4), -h, -h),
        _anch(1, _F(1, 2), _q(-1), _q(0)),
        _anch(1, _F(1, 2), _q(0), _q(-1)),
        # bottom leg (side 0), midpoint: pi/4 pair and perpendicular
        _anch(0, _F(1, 2), h, h),
        _anch(0, _F(1, 2), -h, h),
        _anch(0, _F(1, 2), _q(0), _q(1)),
        # left leg (side 2), midpoint
        _anch(2, _F(1, 2), h, h),
        _anch(2, _F(1, 2), h, -h),
        _anch(2, _F(1, 2), _q(1), _q(0)),
    ]
    # reflection swapping the two legs: (x,y) -> (y,x)
    sym = [("reflect_xy",)]
    return ShapeTemplate("TriQ244", verts, anchors, sym)


def _tri_h236() -> ShapeTemplate:
    # right triangle with angles pi/2, pi/3, pi/6: legs 1/2 and sqrt3/6,
    # hypotenuse sqrt3/3 (the barycentric piece of a unit equilateral triangle)
    verts = [(_q(0), _q(0)), (_q(_F(1, 2)), _q(0)), (_q(0), _q(0, 0, _F(1, 6)))]
    s32 = _q(0, 0, _F(1, 2))     # sqrt3/2
    half = _q(_F(1, 2))
    anchors = [
        # long leg (side 0)
        _anch(0, _F(1, 4), _q(0), _q(1)),
        _anch(0, _F(1, 2), s32, half),
        _anch(0, _F(1, 2), -s32, half),
        _anch(0, _F(2, 3), half, s32),
        _anch(0, _F(2, 3), -half, s32),
        _anch(0, _F(3, 4), _q(0), _q(1)),
        # hypotenuse (side 1)
        _anch(1, _F(1, 4), -half, -s32),
        _anch(1, _F(1, 4), -s32, -half),
        _anch(1, _F(1, 4), _q(0), _q(-1)),
        _anch(1, _F(1, 2), _q(-1), _q(0)),
        _anch(1, _F(1, 2), half, -s32),
        _anch(1, _F(3, 4), _q(0), _q(-1)),
        _anch(1, _F(3, 4), -s32, -half),
        # short leg (side 2)
        _anch(2, _F(1, 2), _q(1), _q(0)),
        _anch(2, _F(1, 2), s32, half),
        _anch(2, _F(1, 2), s32, -half),
    ]
    return ShapeTemplate("TriH236", verts, anchors, [])


def _equilateral() -> ShapeTemplate:
    verts = [(_q(0), _q(0)), (_q(1), _q(0)), (_q(_F(1, 2)), _q(0, 0, _F(1, 2)))]
    s32 = _q(0, 0, _F(1, 2))
    half = _q(_F(1, 2))
    anchors = []
    # derived closed billiards: perpendiculars at u=1/4, 3/4 on every side
    # plus the two pi/6 directions at every midpoint
    tmp = ShapeTemplate("tmp", verts, [])
    for side in range(3):
        n = tmp.side_normal_in(side)
        u = tmp.side_unit(side)
        anchors.append(DirectionAnchor(side, _Q(_F(1, 4)), n))
        anchors.append(DirectionAnchor(side, _Q(_F(3, 4)), n))
        for sgn in (1, -1):
            d = (s32 * sgn * u[0] + half * n[0], s32 * sgn * u[1] + half * n[1])
            anchors.append(DirectionAnchor(side, _Q(_F(1, 2)), d))
    sym = [("rot3",), ("reflect",)]
    return ShapeTemplate("Equilateral", verts, anchors, sym)


def _gon(two_n: int) -> ShapeTemplate:
    """Regular 2n-gon with side 1; perpendicular anchors at u=1/4 and 3/4
    of every side.  Exact coordinates exist for 2n in {4, 6, 12}."""
    if two_n == 4:
        verts = [(_q(0), _q(0)), (_q(1), _q(0)), (_q(1), _q(1)), (_q(0), _q(1))]
    elif two_n == 6:
        s32 = _q(0, 0, _F(1, 2))
        verts = [(_q(1), _q(0)), (_q(_F(1, 2)), s32), (_q(-_F(1, 2)), s32),
                 (_q(-1), _q(0)), (_q(-_F(1, 2)), -s32), (_q(_F(1, 2)), -s32)]
    elif two_n == 12:
        r = _q(0, _F(1, 2), 0, _F(1, 2))          # (sqrt2 + sqrt6)/2
        cos30 = _q(0, 0, _F(1, 2))
        sin30 = _q(_F(1, 2))
        # rotate (r, 0) by multiples of 30 degrees
        cs = [( _q(1), _q(0)), (cos30, sin30), (sin30, cos30), (_q(0), _q(1)),
              (-sin30, cos30), (-cos30, sin30), (-_q(1), _q(0)), (-cos30, -sin30),
              (-sin30, -cos30), (_q(0), -_q(1)), (sin30, -cos30), (cos30, -sin30)]
        verts = [(r * c[0], r * c[1]) for c in cs]
    else:
        raise ValueError(
            f"Gon({two_n}) has no exact model in Q(sqrt2, sqrt3); "
            "supported: Gon4, Gon6, Gon12")
    tmp = ShapeTemplate("tmp", verts, [])
    anchors = []
    for side in range(two_n):
        n = tmp.side_normal_in(side)
        anchors.append(DirectionAnchor(side, _Q(_F(1, 4)), n))
        anchors.append(DirectionAnchor(side, _Q(_F(3, 4)), n))
    return ShapeTemplate(f"Gon{two_n}", verts, anchors, [("rot", two_n)])


_BUILDERS = {
    "TriQ244": _tri_q244,
    "TriH236": _tri_h236,
    "Equilateral": _equilateral,
    "UnitSquare": lambda: _rename(_gon(4), "UnitSquare"),
    "Gon4": lambda: _gon(4),
    "Gon6": lambda: _gon(6),
    "Gon12": lambda: _gon(12),
}


def _rename(t: ShapeTemplate, name: str) -> ShapeTemplate:
    t.name = name
    return t


def _scaled(t: ShapeTemplate, scale: QuadNumber, full_name: str) -> ShapeTemplate:
    verts = [(scale * v[0], scale * v[1]) for v in t.vertices]
    return ShapeTemplate(full_name, verts, t.anchors, t.symmetries, scale)


def normalize_name(name: str) -> str:
    base = name.replace("Gon(", "Gon").replace(")", "")
    return base


@lru_cache(maxsize=None)
def shape_catalog(name: str) -> ShapeTemplate:
    """Look up a catalog shape, e.g. "TriQ244", "Gon(6)", "TriH236@2"."""
    full = normalize_name(name)
    if "@" in full:
        base, scale_text = full.split("@", 1)
        scale = parse_scalar(scale_text)
        if scale.sign() <= 0:
            raise ValueError(f"shape scale must be positive: {name}")
    else:
        base, scale = full, ONE
    if base not in _BUILDERS:
        raise KeyError(f"unknown shape {name!r}; catalog: {sorted(_BUILDERS)}")
    t = _BUILDERS[base]()
    if scale == ONE:
        t.name = base
        return t
    return _scaled(t, scale, f"{base}@{format_scalar(scale)}")


def scaled_name(base: str, scale: QuadNumber) -> str:
    base = normalize_name(base).split("@")[0]
    if scale == ONE:
        return base
    return f"{base}@{format_scalar(scale)}"


def apply_symmetries(t: ShapeTemplate):
    """Yield the isometries of the template as anchor permutation maps.

    Each symmetry is returned as a function on anchors; used by tests to
    confirm the anchor set is setwise invariant.
    """
    n = t.n_sides

    def rot_map(k):
        def f(a: DirectionAnchor):
            return DirectionAnchor((a.side + k) % n, a.u, _rotate_dir(t, a, k))
        return f
    # rotational symmetry only for the regular shapes
    maps = []
    for s in t.symmetries:
        if s[0] == "rot":
            maps.extend(rot_map(k) for k in range(1, s[1]))
        elif s[0] == "rot3":
            maps.extend(rot_map(k) for k in range(1, 3))
        elif s[0] == "reflect_xy":
            def f(a: DirectionAnchor):
                side_map = {0: 2, 1: 1, 2: 0}
                return DirectionAnchor(side_map[a.side], ONE - a.u,
                                       (a.dir[1], a.dir[0]))
            maps.append(f)
        elif s[0] == "reflect":
            def g(a: DirectionAnchor):
                # reflection of the equilateral triangle across x = 1/2
                side_map = {0: 0, 1: 2, 2: 1}
                return DirectionAnchor(side_map[a.side], ONE - a.u,
                                       (-a.dir[0], a.dir[1]))
            maps.append(g)
    return maps


def _rotate_dir(t: ShapeTemplate, a: DirectionAnchor, k: int) -> Vec:
    # express dir in the frame of side a.side, re-emit in frame of side+k
    u1, n1 = t.side_unit(a.side), t.side_normal_in(a.side)
    p, q = dot(a.dir, u1), dot(a.dir, n1)
    s2 = (a.side + k) % t.n_sides
    u2, n2 = t.side_unit(s2), t.side_normal_in(s2)
    return (p * u2[0] + q * n2[0], p * u2[1] + q * n2[1])
