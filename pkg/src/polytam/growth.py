"""Single translation-only polygon tiles: exact overlap tests, attachment
search, the seed-only/unbounded classifier and the chain property check.

All coordinates are Fractions.  A glue occupies the sub-interval [t0, t1] of
one boundary edge (parameters along the edge, counterclockwise).  Two placed
tiles bond through a pair of equal-label glues lying on a common line with
overlap of positive length.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction as F

from .tam import ModelError

SEED_ONLY, UNBOUNDED = "SeedOnly", "Unbounded"


def _pt(p):
    return (F(p[0]), F(p[1]))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def area2(poly) -> F:
    return sum(_cross(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly)))


@dataclass(frozen=True)
class EdgeGlue:
    edge: int
    t0: F
    t1: F
    label: str
    strength: int


class PolyTile:
    def __init__(self, vertices, glues=(), name: str = "T"):
        self.vertices = tuple(_pt(v) for v in vertices)
        self.name = name
        if len(self.vertices) < 3 or area2(self.vertices) <= 0:
            raise ModelError("polygon must have at least 3 vertices in counterclockwise order")
        if not is_simple(self.vertices):
            raise ModelError("polygon is not simple")
        self.glues = tuple(glues)
        strengths = {}
        for g in self.glues:
            if not (0 <= g.edge < len(self.vertices)) or not (0 <= g.t0 < g.t1 <= 1):
                raise ModelError(f"glue {g.label} is not a sub-segment of an edge")
            if strengths.setdefault(g.label, g.strength) != g.strength:
                raise ModelError(f"glue label {g.label} has two strengths")
        self.triangles = triangulate(self.vertices)
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))

    def segment(self, g: EdgeGlue):
        a = self.vertices[g.edge]
        b = self.vertices[(g.edge + 1) % len(self.vertices)]
        d = _sub(b, a)
        return (a[0] + g.t0 * d[0], a[1] + g.t0 * d[1]), (a[0] + g.t1 * d[0], a[1] + g.t1 * d[1])

    def to_json(self) -> dict:
        return {"vertices": [[str(x), str(y)] for x, y in self.vertices],
                "glues": [{"edge": g.edge, "from": str(g.t0), "to": str(g.t1), "label": g.label,
                           "strength": g.strength} for g in self.glues]}

    @classmethod
    def from_json(cls, doc) -> "PolyTile":
        glues = [EdgeGlue(int(g["edge"]), F(str(g.get("from", 0))), F(str(g.get("to", 1))),
                          str(g["label"]), int(g["strength"])) for g in doc.get("glues", [])]
        return cls([(F(str(x)), F(str(y))) for x, y in doc["vertices"]], glues, doc.get("name", "T"))


# -- exact polygon predicates ----------------------------------------------------------

def _proper_cross(p1, p2, q1, q2) -> bool:
    d1 = _cross(_sub(p2, p1), _sub(q1, p1))
    d2 = _cross(_sub(p2, p1), _sub(q2, p1))
    d3 = _cross(_sub(q2, q1), _sub(p1, q1))
    d4 = _cross(_sub(q2, q1), _sub(p2, q1))
    return d1 * d2 < 0 and d3 * d4 < 0


def _on_segment(p, a, b) -> bool:
    return (_cross(_sub(b, a), _sub(p, a)) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def is_simple(poly) -> bool:
    n = len(poly)
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        a, b = edges[i]
        c, d = edges[j]
        if j == i + 1 or (i == 0 and j == n - 1):
            shared = b if j == i + 1 else a
            other = d if j == i + 1 else c
            if _cross(_sub(b, a), _sub(d, c)) == 0 and _dot(_sub(b, a), _sub(d, c)) < 0:
                return False        # folds back on itself
            far = a if j == i + 1 else b
            if _on_segment(other, a, b) and other != shared or _on_segment(far, c, d) and far != shared:
                return False
            continue
        if _proper_cross(a, b, c, d) or any(_on_segment(p, c, d) for p in (a, b)) \
                or any(_on_segment(p, a, b) for p in (c, d)):
            return False
    return True


def _in_triangle(p, a, b, c) -> bool:
    """p inside or on the closed triangle (a, b, c) given counterclockwise."""
    return _cross(_sub(b, a), _sub(p, a)) >= 0 and _cross(_sub(c, b), _sub(p, b)) >= 0 \
        and _cross(_sub(a, c), _sub(p, c)) >= 0


def triangulate(poly) -> list:
    """Ear clipping on a simple counterclockwise polygon."""
    idx = list(range(len(poly)))
    out = []
    while len(idx) > 3:
        for k in range(len(idx)):
            i, j, l = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = poly[i], poly[j], poly[l]
            turn = _cross(_sub(b, a), _sub(c, b))
            if turn < 0:
                continue
            if turn == 0:
                idx.pop(k)          # collinear vertex, no area lost
                break
            if any(_in_triangle(poly[m], a, b, c) for m in idx if m not in (i, j, l)):
                continue
            out.append((a, b, c))
            idx.pop(k)
            break
        else:
            raise ModelError("ear clipping failed; polygon is not simple")
    a, b, c = (poly[i] for i in idx)
    if _cross(_sub(b, a), _sub(c, b)) > 0:
        out.append((a, b, c))
    return out


def convex_overlap(p, q) -> bool:
    """Interiors of two convex counterclockwise polygons intersect."""
    for poly in (p, q):
        for i in range(len(poly)):
            a, b = poly[i], poly[(i + 1) % len(poly)]
            e = _sub(b, a)
            # every vertex of the other polygon on or right of the edge line separates them
            other = q if poly is p else p
            if all(_cross(e, _sub(v, a)) <= 0 for v in other):
                return False
    return True


def _shift(tri, v):
    return tuple(_add(p, v) for p in tri)


def overlaps(t: PolyTile, va, vb) -> bool:
    """Interiors of t + va and t + vb intersect."""
    d = _sub(vb, va)
    x0, y0, x1, y1 = t.bbox
    if abs(d[0]) >= x1 - x0 or abs(d[1]) >= y1 - y0:
        return False
    for ta in t.triangles:
        for tb in t.triangles:
            if convex_overlap(ta, _shift(tb, d)):
                return True
    return False


def bond_strength(t: PolyTile, va, vb) -> int:
    total = 0
    for g in t.glues:
        a1, a2 = (_add(p, va) for p in t.segment(g))
        for h in t.glues:
            if h.label != g.label:
                continue
            b1, b2 = (_add(p, vb) for p in t.segment(h))
            if _overlap_len_positive(a1, a2, b1, b2):
                total += g.strength
    return total


def _overlap_len_positive(a1, a2, b1, b2) -> bool:
    da, db = _sub(a2, a1), _sub(b2, b1)
    if _cross(da, db) != 0 or _dot(da, db) >= 0 or _cross(da, _sub(b1, a1)) != 0:
        return False
    n = _dot(da, da)
    s1, s2 = _dot(_sub(b1, a1), da) / n, _dot(_sub(b2, a1), da) / n
    return max(0, min(s1, s2)) < min(1, max(s1, s2))


# -- attachment search -----------------------------------------------------------------

def _vsegments(t: PolyTile, placed):
    """Open translation segments (v0, d, smax, strength) on which one glue pair bonds."""
    out = []
    for p in placed:
        for h in t.glues:
            h1, h2 = (_add(x, p) for x in t.segment(h))
            dh = _sub(h2, h1)
            for g in t.glues:
                if g.label != h.label:
                    continue
                g1, g2 = t.segment(g)
                dg = _sub(g2, g1)
                if _cross(dg, dh) != 0 or _dot(dg, dh) >= 0:
                    continue
                lam = _ratio(dg, dh)
                out.append((_sub(h1, g1), dh, 1 + lam, g.strength))
    return out


def _ratio(dg, dh) -> F:
    """|dg| / |dh| for parallel vectors."""
    return abs(dg[0] / dh[0]) if dh[0] != 0 else abs(dg[1] / dh[1])


def _events(t: PolyTile, placed, v0, d, smax) -> set:
    """Parameters s where a vertex of the moving tile crosses an edge line of a placed
    tile or vice versa; the overlap status is constant between consecutive events."""
    out = set()
    verts = t.vertices
    n = len(verts)
    for q in placed:
        for i in range(n):
            e = _sub(verts[(i + 1) % n], verts[i])
            c = _cross(e, d)
            if c == 0:
                continue
            ea = _add(verts[i], q)
            fa = verts[i]
            for p in verts:
                s = -_cross(e, _sub(_add(p, v0), ea)) / c
                if 0 < s < smax:
                    out.add(s)
                s = _cross(e, _sub(_add(p, q), _add(fa, v0))) / c
                if 0 < s < smax:
                    out.add(s)
    return out


def _strength_at(t, placed, v) -> int:
    return sum(bond_strength(t, v, p) for p in placed)


def _valid(t, placed, v, tau) -> bool:
    if any(overlaps(t, v, p) for p in placed):
        return False
    return _strength_at(t, placed, v) >= tau


def find_attachments(t: PolyTile, placed, tau: int, first_only: bool = False, partners=None) -> list:
    """Translations at which one more copy attaches with strength >= tau.

    Candidates: crossings of two bonding segments in translation space, plus
    breakpoints and interval midpoints along every bonding segment.  partners
    restricts which placed copies generate segments (all copies are obstacles).
    """
    placed = list(placed)
    segs = _vsegments(t, placed if partners is None else partners)
    found = []
    seen = set()

    def test(v):
        if v in seen:
            return False
        seen.add(v)
        if _valid(t, placed, v, tau):
            found.append(v)
            return first_only
        return False

    # crossings first: cooperative attachments live there
    for (v1, d1, m1, _), (v2, d2, m2, _) in itertools.combinations(segs, 2):
        c = _cross(d1, d2)
        if c == 0:
            continue
        w = _sub(v2, v1)
        s1 = _cross(w, d2) / c
        s2 = _cross(w, d1) / c
        if 0 < s1 < m1 and 0 < s2 < m2:
            if test(_add(v1, (d1[0] * s1, d1[1] * s1))):
                return found
    for v0, d, smax, _ in segs:
        cuts = {F(0), smax}
        for v1, d1, m1, _ in segs:
            if _cross(d, d1) == 0:
                if _cross(d, _sub(v1, v0)) == 0:
                    dd = _dot(d, d)
                    for s in (_dot(_sub(v1, v0), d) / dd, _dot(_sub(_add(v1, (d1[0] * m1, d1[1] * m1)), v0), d) / dd):
                        if 0 < s < smax:
                            cuts.add(s)
                continue
            c = _cross(d, d1)
            w = _sub(v1, v0)
            s = _cross(w, d1) / c
            s1 = _cross(w, d) / c
            if 0 < s < smax and 0 < s1 < m1:
                cuts.add(s)
        near = [p for p in placed if _near(t, p, v0, d, smax)]
        cuts |= _events(t, near, v0, d, smax)
        cuts = sorted(cuts)
        pts = cuts[1:-1] + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        for s in pts:
            if test(_add(v0, (d[0] * s, d[1] * s))):
                return found
    return sorted(found)


def _near(t, p, v0, d, smax) -> bool:
    x0, y0, x1, y1 = t.bbox
    wx, wy = x1 - x0, y1 - y0
    ends = (v0, _add(v0, (d[0] * smax, d[1] * smax)))
    lo = (min(e[0] for e in ends), min(e[1] for e in ends))
    hi = (max(e[0] for e in ends), max(e[1] for e in ends))
    return lo[0] - wx < p[0] < hi[0] + wx and lo[1] - wy < p[1] < hi[1] + wy


# -- seeds, classification, growth ---------------------------------------------------------

def seed_bond_graph(t: PolyTile, seed) -> dict:
    out = {}
    for i, j in itertools.combinations(range(len(seed)), 2):
        if overlaps(t, seed[i], seed[j]):
            raise ModelError(f"seed copies {i} and {j} overlap")
        s = bond_strength(t, seed[i], seed[j])
        if s:
            out[(i, j)] = s
    return out


def seed_min_cut(t: PolyTile, seed) -> int | None:
    n = len(seed)
    if n == 1:
        return None
    bonds = seed_bond_graph(t, seed)
    best = None
    for r in range(1, n):
        for side in itertools.combinations(range(n), r):
            if 0 not in side:
                continue
            s = set(side)
            w = sum(v for (i, j), v in bonds.items() if (i in s) != (j in s))
            best = w if best is None else min(best, w)
    return best


def _check_seed(t, seed, tau):
    if not 1 <= len(seed) <= 3:
        raise ModelError("seed must have 1 to 3 copies")
    cut = seed_min_cut(t, seed)
    if cut is not None and cut < tau:
        raise ModelError(f"seed is not {tau}-stable (min cut {cut})")


def growth_classify(t: PolyTile, seed, tau: int) -> str:
    seed = [_pt(v) for v in seed]
    _check_seed(t, seed, tau)
    return UNBOUNDED if find_attachments(t, seed, tau, first_only=True) else SEED_ONLY


def grow(t: PolyTile, seed, tau: int, max_tiles: int = 50) -> list:
    """Greedy growth: attach one copy at a time until max_tiles or no attachment.

    Each step searches partners among the most recent copies first and falls
    back to all copies; among found translations it takes the one farthest
    from the seed centroid.
    """
    placed = [_pt(v) for v in seed]
    _check_seed(t, placed, tau)
    cx = sum(p[0] for p in placed) / len(placed)
    cy = sum(p[1] for p in placed) / len(placed)
    while len(placed) < max_tiles:
        found = find_attachments(t, placed, tau, partners=placed[-3:])
        if not found:
            found = find_attachments(t, placed, tau)
        if not found:
            break
        placed.append(max(found, key=lambda v: ((v[0] - cx) ** 2 + (v[1] - cy) ** 2, v)))
    return placed


def chain_check(t: PolyTile, v, c_max: int) -> bool:
    """Copies translated by c*v, 0 < |c| <= c_max, are interior-disjoint from t."""
    v = _pt(v)
    zero = (F(0), F(0))
    if overlaps(t, zero, v):
        raise ModelError("shape and its translate by v overlap")
    return all(not overlaps(t, zero, (c * v[0], c * v[1]))
               for c in range(-c_max, c_max + 1) if c)


def random_star_polygon(rng: random.Random, k: int = 8, den: int = 64) -> PolyTile:
    """Star-shaped polygon around the origin with k rational vertices."""
    while True:
        angles = sorted(rng.sample(range(360), k))
        pts = []
        for a in angles:
            r = rng.randint(den // 4, den)
            # rational direction close to the angle, exact afterwards
            x = F(round(r * _cos(a)), den)
            y = F(round(r * _sin(a)), den)
            pts.append((x, y))
        if len(set(pts)) == k and area2(pts) > 0 and is_simple(pts):
            return PolyTile(pts)


def _cos(deg):
    import math
    return math.cos(math.radians(deg))


def _sin(deg):
    import math
    return math.sin(math.radians(deg))


def random_feasible_vector(rng: random.Random, t: PolyTile, den: int = 16):
    x0, y0, x1, y1 = t.bbox
    span = max(x1 - x0, y1 - y0)
    zero = (F(0), F(0))
    while True:
        v = (F(rng.randint(-2 * den, 2 * den), den) * span, F(rng.randint(-2 * den, 2 * den), den) * span)
        if v != zero and not overlaps(t, zero, v):
            return v


def _glue(edge, label, strength, t0=0, t1=1):
    return EdgeGlue(edge, F(t0), F(t1), label, strength)


SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))
HEXAGON = ((0, 0), (2, 0), (3, 1), (2, 2), (0, 2), (-1, 1))


def handcrafted() -> dict:
    """name -> (tile, seed translations, tau); singleton and three-copy seeds."""
    def sq(*glues):
        return PolyTile(SQUARE, glues)
    coop = sq(_glue(0, "v", 1), _glue(2, "v", 1), _glue(1, "h", 1), _glue(3, "h", 1))
    def lshape(e):
        return PolyTile(((0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)),
                        [_glue(1, "e", e), _glue(5, "e", e), _glue(0, "s", 1), _glue(4, "s", 1)])
    star = PolyTile(((0, 0), (4, 0), (4, 1), (3, 1), (3, 2), (1, 2), (1, 1), (0, 1)),
                    [_glue(1, "p", 1), _glue(7, "p", 1), _glue(3, "q", 1)])
    one = [(0, 0)]
    return {
        "square-strong": (sq(_glue(1, "x", 2), _glue(3, "x", 2)), one, 2),
        "square-weak": (sq(_glue(1, "x", 1), _glue(3, "x", 1)), one, 2),
        "square-mismatch": (sq(_glue(1, "a", 2), _glue(3, "b", 2)), one, 2),
        "square-half-glues": (sq(_glue(1, "x", 2, 0, F(1, 2)), _glue(3, "x", 2, F(1, 2), 1)), one, 2),
        "coop-single": (coop, one, 2),
        "coop-triangle": (coop, [(0, 0), (1, 0), (F(1, 2), 1)], 2),
        "right-triangle": (PolyTile(((0, 0), (1, 0), (0, 1)), [_glue(i, "z", 5) for i in range(3)]), one, 2),
        "parallelogram": (PolyTile(((0, 0), (2, 0), (3, 1), (1, 1)), [_glue(1, "k", 2), _glue(3, "k", 2)]), one, 2),
        "hexagon": (PolyTile(HEXAGON, [_glue(0, "m", 3), _glue(3, "m", 3)]), one, 3),
        "l-path": (lshape(3), [(0, 0), (2, 0), (4, 0)], 3),
        "l-weak": (lshape(2), one, 3),
        "step-star": (star, one, 2),
    }
