"""Iso-Delaunay tessellation of the upper half-plane.

A point z = x + iy of H names the surface M_z * S with M_z = [[1, x],
[0, y]] (z = i is the base surface; the Delaunay condition is invariant
under rotation and scaling, so this slice of GL(2, R) suffices).  For a
hinge developed in the base chart with quadrilateral coordinates (a_k,
b_k), the lifted incircle determinant of the transformed hinge factors as

    det(z) = y * (A (x**2 + y**2) + B x + C),

with A, B, C 4x4 determinants of the base coordinates: every hinge is
Delaunay on one side of a geodesic a (x**2+y**2) + b x + c = 0 (a wall),
always, or never.  Cells are intersections of wall half-planes; in the
coordinates (u, v) = (x**2 + y**2, x) walls become straight lines and H
the region u > v**2, so supporting walls are found by exact 1-dimensional
feasibility tests.  On an exact surface every combinatorial decision is
exact; floating point only chooses sample points, which are rationalized
and then verified.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .numeric import CubicNumber, Scalar, is_exact, sign, to_float
from . import delaunay as dl
from .delaunay import DelaunayError, HalfEdge, Triangulation, hinge
from .surface import Surface

ALWAYS = "always"
NEVER = "never"

WALL_FLOAT_TOL = 1e-9


class IsoDelaunayError(RuntimeError):
    pass


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise IsoDelaunayError(f"not in the upper half-plane: {self.x} + {self.y}i")

    def hyperbolic_distance(self, other: "HPoint") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * self.y * other.y))


@dataclass(frozen=True)
class Wall:
    """Oriented geodesic form q = a (x**2 + y**2) + b x + c.

    The hinge it came from is Delaunay exactly where q <= 0.  The locus
    q = 0 is a half-circle centered on the real axis (a != 0) or a
    vertical line (a = 0, b != 0).  Coefficients are scaled so the largest
    |coefficient| is 1; reporting flips the sign so the first nonzero
    coefficient is positive (the orientation is kept separately).
    """

    a: Scalar
    b: Scalar
    c: Scalar

    def evaluate(self, u: Scalar, v: Scalar) -> Scalar:
        """The linear form a*u + b*v + c in the coordinates u = |z|^2, v = x."""
        return self.a * u + self.b * v + self.c

    def value_at(self, x: Scalar, y: Scalar) -> Scalar:
        return self.a * (x * x + y * y) + self.b * x + self.c

    @property
    def is_vertical(self) -> bool:
        return sign(self.a) == 0

    def floats(self) -> Tuple[float, float, float]:
        return (to_float(self.a), to_float(self.b), to_float(self.c))

    def geometry(self) -> Tuple[str, float, float]:
        """("circle", center, radius) or ("vertical", x, 0)."""
        a, b, c = self.floats()
        if abs(a) < 1e-300:
            return ("vertical", -c / b, 0.0)
        center = -b / (2 * a)
        rad2 = center * center - c / a
        return ("circle", center, math.sqrt(max(rad2, 0.0)))

    def _orientation(self) -> int:
        for lead in (self.a, self.b, self.c):
            s = sign(lead)
            if s:
                return s
        return 1

    def locus_key(self):
        """Orientation-free key identifying the geodesic."""
        flip = self._orientation()
        if is_exact(self.a) and is_exact(self.b) and is_exact(self.c):
            return (_scalar_key(flip * self.a), _scalar_key(flip * self.b), _scalar_key(flip * self.c))
        return tuple(round(flip * t, 9) for t in self.floats())

    def oriented_key(self):
        """(locus key, side): identifies the geodesic plus its Delaunay side."""
        return (self.locus_key(), self._orientation())

    def normalized_floats(self) -> Tuple[float, float, float]:
        """Reported form: max |coefficient| = 1, first nonzero positive."""
        flip = self._orientation()
        return tuple(flip * t for t in self.floats())


def _scalar_key(x: Scalar):
    if isinstance(x, CubicNumber):
        return (x.c0, x.c1, x.c2)
    return (Fraction(x), Fraction(0), Fraction(0))


def _abs_cmp_max(values: Sequence[Scalar]) -> Scalar:
    best = None
    for v in values:
        av = -v if sign(v) < 0 else v
        if best is None or sign(av - best) > 0:
            best = av
    return best


def _det4_ones(c1: Sequence[Scalar], c2: Sequence[Scalar], c3: Sequence[Scalar]) -> Scalar:
    """det of the 4x4 matrix with columns (c1, c2, c3, 1) via row reduction."""
    r = []
    for i in range(3):
        r.append((c1[i] - c1[3], c2[i] - c2[3], c3[i] - c3[3]))
    return (
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    )


def wall_of_hinge(t: Triangulation, edge: HalfEdge):
    """The wall of a hinge, or ALWAYS/NEVER when its sign is constant on H.

    The hinge is developed in the base chart; the returned wall is the
    cocircularity locus of the M_z-transformed hinge.  ALWAYS means the
    hinge is Delaunay for every z, NEVER that it never is.
    """
    h = hinge(t, edge)
    quad = (h.p1, h.p2, h.p3, h.p4)
    ax = [p[0] for p in quad]
    bx = [p[1] for p in quad]
    asq = [p[0] * p[0] for p in quad]
    bsq = [p[1] * p[1] for p in quad]
    ab = [p[0] * p[1] for p in quad]
    a = _det4_ones(ax, bx, bsq)
    b = 2 * _det4_ones(ax, bx, ab)
    c = _det4_ones(ax, bx, asq)
    sa, sb, sc = sign(a), sign(b), sign(c)
    if sa == 0 and sb == 0:
        # Constant sign: Delaunay iff c <= 0.
        return ALWAYS if sc <= 0 else NEVER
    if sa != 0:
        disc = b * b - 4 * a * c
        if sign(disc) <= 0:
            return ALWAYS if sa < 0 else NEVER
    return _normalize_wall(a, b, c)


def _normalize_wall(a: Scalar, b: Scalar, c: Scalar) -> Wall:
    # Positive scaling only: the sign of q must keep matching the
    # Delaunay determinant.
    m = _abs_cmp_max([a, b, c])
    if isinstance(m, CubicNumber):
        inv = m.inverse()
        return Wall(a * inv, b * inv, c * inv)
    return Wall(a / m, b / m, c / m)


# -- Delaunay triangulations over the half-plane --------------------------------------


def _q_sign(t: Triangulation, edge: HalfEdge, u: Scalar, v: Scalar, exact: bool) -> int:
    """Sign of the hinge's Delaunay form at (u, v); negative means Delaunay."""
    w = wall_of_hinge(t, edge)
    if w is ALWAYS:
        return -1
    if w is NEVER:
        return 1
    val = w.evaluate(u, v)
    if exact:
        return sign(val)
    f = to_float(val)
    if abs(f) <= WALL_FLOAT_TOL:
        return 0
    return 1 if f > 0 else -1


def delaunayize_at(t: Triangulation, u: Scalar, v: Scalar, cap: int = dl.FLIP_CAP) -> Triangulation:
    """Flip until every hinge is Delaunay for the surface at z with
    (|z|^2, Re z) = (u, v); operates on base-chart holonomies throughout."""
    out = t.copy()
    exact = out.is_exact() and is_exact(u) and is_exact(v)
    queue = deque(out.edges())
    queued = set(queue)
    flips = 0
    while queue:
        edge = queue.popleft()
        queued.discard(edge)
        if _q_sign(out, edge, u, v, exact) <= 0:
            continue
        h = hinge(out, edge)
        if h.folded:
            raise DelaunayError(f"non-Delaunay folded hinge at {edge}")
        if not h.is_strictly_convex():
            raise DelaunayError(f"non-convex non-Delaunay hinge at {edge}")
        ta = edge[0]
        tb = out.twin(edge)[0]
        dl._flip_in_place(out, edge)
        flips += 1
        if flips > cap:
            raise DelaunayError(f"flip cap {cap} exceeded in delaunayize_at")
        for tri in (ta, tb):
            for e in range(3):
                he = (tri, e)
                key = min(he, out.glue[he])
                if key not in queued:
                    queue.append(key)
                    queued.add(key)
    return out


# -- cells ------------------------------------------------------------------------------


@dataclass
class Cell:
    """An iso-Delaunay region: a combinatorial Delaunay class over H.

    comb_hash is the canonical combinatorial code of the triangulation
    (mirror-inclusive, so a reflected surface yields an equal hash); the
    identity key is the supporting wall set with orientations, which pins
    the region itself.
    """

    comb_hash: Tuple[int, ...]
    walls: Tuple[Wall, ...]
    sample: HPoint
    key: FrozenSet = field(repr=False, default=frozenset())
    sample_exact: Tuple[Fraction, Fraction] = field(repr=False, default=(Fraction(0), Fraction(1)))
    triangulation: Optional[Triangulation] = field(repr=False, default=None, compare=False)
    constraints: list = field(repr=False, default_factory=list, compare=False)


def _rationalize(x: float, max_den: int = 10 ** 9) -> Fraction:
    return Fraction(x).limit_denominator(max_den)


class _Constraint:
    """An oriented wall bounding the cell (interior where q < 0)."""

    __slots__ = ("wall", "hinges")

    def __init__(self, wall: Wall):
        self.wall = wall
        self.hinges: List[HalfEdge] = []

    def value(self, u: Scalar, v: Scalar) -> Scalar:
        return self.wall.evaluate(u, v)

    def item(self):
        return self.wall.oriented_key()


def _collect_constraints(t: Triangulation, u: Scalar, v: Scalar, exact: bool) -> List[_Constraint]:
    by_key: Dict[object, _Constraint] = {}
    for edge in t.edges():
        w = wall_of_hinge(t, edge)
        if w is ALWAYS or w is NEVER:
            if w is NEVER:
                raise IsoDelaunayError("never-Delaunay hinge in a Delaunay triangulation")
            continue
        val = w.evaluate(u, v)
        s = sign(val) if exact else (0 if abs(to_float(val)) <= WALL_FLOAT_TOL else (1 if to_float(val) > 0 else -1))
        if s == 0:
            raise _OnWall(w)
        if s > 0:
            raise IsoDelaunayError("non-Delaunay hinge after delaunayize_at")
        key = w.oriented_key()
        con = by_key.get(key)
        if con is None:
            con = _Constraint(w)
            by_key[key] = con
        con.hinges.append(edge)
    return list(by_key.values())


class _OnWall(Exception):
    def __init__(self, wall: Wall):
        self.wall = wall


def _line_param(con: _Constraint):
    """Rational parametrization of the wall line in (u, v) coordinates.

    Returns (u0, du, v0, dv): points (u0 + s*du, v0 + s*dv).
    """
    w = con.wall
    if sign(w.a) != 0:
        # u = -(b v + c)/a, parametrized by v = s
        if isinstance(w.a, CubicNumber):
            inv = w.a.inverse()
        else:
            inv = Fraction(1) / Fraction(w.a) if not isinstance(w.a, float) else 1.0 / w.a
        return (-w.c * inv, -w.b * inv, 0, 1)
    # vertical wall: v = -c/b, parametrized by u = s
    if isinstance(w.b, CubicNumber):
        inv = w.b.inverse()
    else:
        inv = Fraction(1) / Fraction(w.b) if not isinstance(w.b, float) else 1.0 / w.b
    return (0, 1, -w.c * inv, 0)


def _supporting_interval(target: _Constraint, others: Sequence[_Constraint], exact: bool):
    """Parameter interval of the facet: points of the wall on the cell
    boundary and inside H, or None when the wall is redundant.

    All computations are linear/quadratic sign evaluations over the scalar
    field; the parabola u > v**2 enters as a concave quadratic.
    """
    u0, du, v0, dv = _line_param(target)
    lo: Optional[Scalar] = None
    hi: Optional[Scalar] = None

    def val_sign(x: Scalar) -> int:
        return sign(x) if exact else (0 if abs(to_float(x)) < 1e-13 else (1 if to_float(x) > 0 else -1))

    for con in others:
        if con is target:
            continue
        # a (u0 + s du) + b (v0 + s dv) + c <= 0
        w = con.wall
        slope = w.a * du + w.b * dv
        const = w.a * u0 + w.b * v0 + w.c
        ss = val_sign(slope)
        if ss == 0:
            if val_sign(const) > 0:
                return None
            continue
        bound = -const / slope if not isinstance(slope, CubicNumber) else -const * slope.inverse()
        if ss > 0:
            if hi is None or val_sign(bound - hi) < 0:
                hi = bound
        else:
            if lo is None or val_sign(bound - lo) > 0:
                lo = bound
    if lo is not None and hi is not None and val_sign(hi - lo) <= 0:
        return None
    # Inside H: g(s) = u(s) - v(s)**2 > 0.  On circle walls (parametrized
    # by v) g is concave with g2 = -1; on vertical walls (parametrized by
    # u) it is linear increasing with slope 1.
    g2 = -(dv * dv)
    g1 = du - 2 * v0 * dv
    g0 = u0 - v0 * v0

    def g_at(x: Scalar) -> Scalar:
        return g2 * x * x + g1 * x + g0

    if val_sign(g2) != 0:
        vertex = -g1 / (2 * g2) if not isinstance(g2, CubicNumber) else -g1 * (2 * g2).inverse()
        candidates = []
        if (lo is None or val_sign(vertex - lo) > 0) and (hi is None or val_sign(hi - vertex) > 0):
            candidates.append(vertex)
        if lo is not None:
            candidates.append(lo)
        if hi is not None:
            candidates.append(hi)
        if any(val_sign(g_at(x)) > 0 for x in candidates):
            return (lo, hi)
        return None
    s1 = val_sign(g1)
    if s1 > 0:
        if hi is None or val_sign(g_at(hi)) > 0:
            return (lo, hi)
        return None
    if s1 < 0:
        if lo is None or val_sign(g_at(lo)) > 0:
            return (lo, hi)
        return None
    return (lo, hi) if val_sign(g0) > 0 else None


def cell_at(s: Surface, z: HPoint, _tri: Optional[Triangulation] = None) -> Cell:
    """The iso-Delaunay cell containing z (perturbing z off walls if needed)."""
    exact = s.is_exact()
    base = _tri if _tri is not None else dl.triangulate(s)
    zx, zy = z.x, z.y
    for attempt in range(8):
        if exact:
            vx = _rationalize(zx)
            vy = _rationalize(zy)
        else:
            vx, vy = zx, zy
        u = vx * vx + vy * vy
        try:
            t = delaunayize_at(base, u, vx)
            cons = _collect_constraints(t, u, vx, exact)
        except _OnWall:
            zx += (1e-9 if attempt % 2 == 0 else -2e-9) * (attempt + 1)
            zy += 1e-9 * (attempt + 1)
            continue
        supporting = []
        for con in cons:
            if _supporting_interval(con, cons, exact) is not None:
                supporting.append(con)
        supporting.sort(key=lambda c: c.item())
        walls = tuple(c.wall for c in supporting)
        key = frozenset(c.item() for c in supporting)
        return Cell(
            comb_hash=dl.canonical_code(t, include_mirror=True),
            walls=walls,
            sample=HPoint(to_float(vx), to_float(vy)),
            key=key,
            sample_exact=(vx, vy) if exact else (Fraction(0), Fraction(1)),
            triangulation=t,
            constraints=supporting,
        )
    raise IsoDelaunayError(f"could not move sample {z} off the walls")


# -- exploration --------------------------------------------------------------------------


@dataclass
class Tessellation:
    surface: Surface
    cells: List[Cell]
    adjacency: Set[Tuple[FrozenSet, FrozenSet, Wall]] = field(default_factory=set)

    def cell_hashes(self) -> List[Tuple[int, ...]]:
        return sorted(c.comb_hash for c in self.cells)

    def all_walls(self) -> List[Wall]:
        """One representative per geodesic among explored supporting walls."""
        seen = {}
        for c in self.cells:
            for w in c.walls:
                seen[w.locus_key()] = w
        return [seen[k] for k in sorted(seen, key=repr)]


def _facet_crossing_point(con: _Constraint, interval, z0: HPoint, radius: float) -> Optional[HPoint]:
    """Hyperbolic midpoint of the facet clipped to the ball, as a float point."""
    lo, hi = interval
    lo_f = None if lo is None else to_float(lo)
    hi_f = None if hi is None else to_float(hi)
    a, b, c = con.wall.floats()
    # Parametrize the geodesic by its natural coordinate and collect the
    # sub-range of the facet within the ball by sampling.
    samples: List[Tuple[float, HPoint]] = []
    if abs(a) > 1e-300:
        center = -b / (2 * a)
        rad2 = center * center - c / a
        if rad2 <= 0:
            return None
        r = math.sqrt(rad2)
        # v = center + r cos(theta), y = r sin(theta)
        n = 512
        for k in range(1, n):
            th = math.pi * k / n
            v = center + r * math.cos(th)
            if lo_f is not None and v < lo_f:
                continue
            if hi_f is not None and v > hi_f:
                continue
            y = r * math.sin(th)
            p = HPoint(v, y)
            if p.hyperbolic_distance(z0) <= radius:
                samples.append((math.log(math.tan(th / 2)), p))
    else:
        x = -c / b
        n = 512
        for k in range(-n, n + 1):
            y = z0.y * math.exp(radius * k / n * 1.5)
            u = x * x + y * y
            if lo_f is not None and u < lo_f:
                continue
            if hi_f is not None and u > hi_f:
                continue
            p = HPoint(x, y)
            if p.hyperbolic_distance(z0) <= radius:
                samples.append((math.log(y), p))
    if not samples:
        return None
    samples.sort(key=lambda t: t[0])
    s_mid = 0.5 * (samples[0][0] + samples[-1][0])
    best = min(samples, key=lambda t: abs(t[0] - s_mid))
    return best[1]


def _cross_wall(s: Surface, cell: Cell, con: _Constraint, at: HPoint) -> Optional[Cell]:
    """A sample just across the wall from the cell, verified exactly."""
    a, b, c = con.wall.floats()
    # gradient of the oriented q in (x, y): points out of the cell
    exact = s.is_exact()
    for eps in (1e-4, 1e-5, 1e-6, 1e-7):
        gx = 2 * a * at.x + b
        gy = 2 * a * at.y
        norm = math.hypot(gx, gy)
        if norm == 0:
            return None
        zx = at.x + eps * gx / norm
        zy = at.y + eps * gy / norm
        if zy <= 0:
            continue
        if exact:
            vx, vy = _rationalize(zx), _rationalize(zy)
        else:
            vx, vy = zx, zy
        u = vx * vx + vy * vy
        crossed = con.wall.evaluate(u, vx)
        ok = sign(crossed) > 0 if exact else to_float(crossed) > WALL_FLOAT_TOL
        if not ok:
            continue
        inside = True
        for other in cell.constraints:
            if other is con:
                continue
            val = other.value(u, vx)
            good = sign(val) < 0 if exact else to_float(val) < -WALL_FLOAT_TOL
            if not good:
                inside = False
                break
        if not inside:
            continue
        try:
            return cell_at(s, HPoint(to_float(vx), to_float(vy)), _tri=cell.triangulation)
        except IsoDelaunayError:
            continue
    return None


def explore(s: Surface, z0: HPoint, radius: float, cell_budget: int = 10 ** 5,
            threads: int = 1) -> Tessellation:
    """Breadth-first tessellation of the hyperbolic ball around z0.

    From each cell every supporting wall whose facet meets the ball is
    crossed by flipping the hinges that become cocircular there; cells are
    deduplicated by their supporting wall set.  Deterministic: the
    frontier is processed in sorted order.
    """
    if not radius > 0:
        raise IsoDelaunayError("radius must be positive")
    start = cell_at(s, z0)
    cells: Dict[FrozenSet, Cell] = {start.key: start}
    adjacency: Set = set()
    frontier = [start]

    def expand(cell: Cell) -> List[Tuple[Cell, Wall, Cell]]:
        found = []
        for con in cell.constraints:
            interval = _supporting_interval(con, cell.constraints, s.is_exact())
            if interval is None:
                continue
            at = _facet_crossing_point(con, interval, z0, radius)
            if at is None:
                continue
            neighbor = _cross_wall(s, cell, con, at)
            if neighbor is not None:
                found.append((cell, con.wall, neighbor))
        return found

    while frontier:
        frontier.sort(key=lambda c: (c.comb_hash, sorted(map(repr, c.key))))
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                batches = list(pool.map(expand, frontier))
        else:
            batches = [expand(cell) for cell in frontier]
        next_frontier: List[Cell] = []
        for batch in batches:  # merged in frontier order: deterministic
            for cell, wall, neighbor in batch:
                adjacency.add(
                    (min(cell.key, neighbor.key, key=repr), max(cell.key, neighbor.key, key=repr), wall)
                )
                if neighbor.key not in cells:
                    if len(cells) >= cell_budget:
                        raise IsoDelaunayError(f"cell budget {cell_budget} exceeded")
                    cells[neighbor.key] = neighbor
                    next_frontier.append(neighbor)
        frontier = next_frontier
    return Tessellation(s, list(cells.values()), adjacency)


def walls_through(tess: Tessellation, u: Scalar, v: Scalar) -> List[Wall]:
    """Distinct explored walls passing exactly through the point (u, v)."""
    out = []
    for w in tess.all_walls():
        val = w.evaluate(u, v)
        if (sign(val) == 0) if is_exact(val) else abs(to_float(val)) < 1e-7:
            out.append(w)
    return out


# -- SVG rendering -----------------------------------------------------------------------


def render_svg(tess: Tessellation, viewport: Tuple[float, float, float] = (-2.5, 2.5, 3.0),
               size: int = 800) -> str:
    """Draw the tessellation's walls as geodesics in the half-plane.

    viewport = (xmin, xmax, ymax); deterministic output for a given
    tessellation.
    """
    xmin, xmax, ymax = viewport
    scale = size / (xmax - xmin)
    height = int(ymax * scale)

    def to_px(x: float, y: float) -> Tuple[float, float]:
        return ((x - xmin) * scale, height - y * scale)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
        f'viewBox="0 0 {size} {height}">',
        f'<rect width="{size}" height="{height}" fill="white"/>',
        f'<line x1="0" y1="{height}" x2="{size}" y2="{height}" stroke="black" stroke-width="1"/>',
    ]
    for w in tess.all_walls():
        kind, p, r = w.geometry()
        if kind == "vertical":
            if xmin <= p <= xmax:
                x0, y0 = to_px(p, 0.0)
                x1, y1 = to_px(p, ymax)
                parts.append(
                    f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" '
                    f'stroke="steelblue" stroke-width="1" fill="none"/>'
                )
        else:
            if p + r < xmin or p - r > xmax:
                continue
            x0, y0 = to_px(p - r, 0.0)
            x1, y1 = to_px(p + r, 0.0)
            pr = r * scale
            parts.append(
                f'<path d="M {x0:.3f} {y0:.3f} A {pr:.3f} {pr:.3f} 0 0 1 {x1:.3f} {y1:.3f}" '
                f'stroke="steelblue" stroke-width="1" fill="none"/>'
            )
    for cell in sorted(tess.cells, key=lambda c: (c.sample.x, c.sample.y)):
        cx, cy = to_px(cell.sample.x, cell.sample.y)
        parts.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="2" fill="firebrick"/>')
    parts.append("</svg>")
    return "\n".join(parts)
