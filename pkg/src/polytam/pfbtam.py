"""Single-polygon systems on the hex lattice: attachment, enumeration,
certified numeric validation and SVG rendering."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

from mpmath import iv, mp

from .enumeration import Exploration, ProdSet, explore
from .geometry import FORBIDDEN, GeometryParams, classify
from .polygon import HEX_CCW, Orientation, PolygonCompilation, PolygonTileType, valid_orientations
from .tam import HEX, OPPOSITE, ModelError, canonical_key, neighbors


@dataclass
class PolySystem:
    tile: PolygonTileType
    temperature: int
    seed: dict          # hex coord -> Orientation

    @classmethod
    def from_compilation(cls, comp: PolygonCompilation) -> "PolySystem":
        return cls(comp.tile, comp.temperature, dict(comp.seed))


def contacts(sys: PolySystem, cells: dict, q) -> dict:
    out = {}
    for d, r in neighbors(HEX, q):
        o = cells.get(r)
        if o is not None:
            out[d] = sys.tile.facing(o, OPPOSITE[d])
    return out


def poly_attachments_at(sys: PolySystem, cells: dict, q) -> list:
    c = contacts(sys, cells, q)
    if not c:
        return []
    return sorted(valid_orientations(sys.tile, sys.temperature, c))


def poly_attachments(sys: PolySystem, cells: dict) -> set:
    out = set()
    for p in cells:
        for _, q in neighbors(HEX, p):
            if q not in cells:
                out.update((q, o) for o in poly_attachments_at(sys, cells, q))
    return out


def poly_explore(sys: PolySystem, max_tiles=None, **kw) -> Exploration:
    if max_tiles is not None and max_tiles < len(sys.seed):
        raise ModelError("bound smaller than the seed")
    return explore(HEX, sys.seed, lambda cells, q: poly_attachments_at(sys, cells, q), max_tiles, **kw)


def poly_enumerate(sys: PolySystem, max_tiles: int) -> ProdSet:
    ex = poly_explore(sys, max_tiles)
    return ProdSet({canonical_key(s) for s in ex.states}, max_tiles, ex.truncated)


def poly_bond_edges(sys: PolySystem, cells: dict) -> dict:
    """(p, q) with p < q -> bond strength, for positive bonds."""
    from .geometry import bond_strength
    out = {}
    for p, o in cells.items():
        for d, q in neighbors(HEX, p):
            if q in cells and p < q:
                s = bond_strength(sys.tile.facing(o, d), sys.tile.facing(cells[q], OPPOSITE[d]))
                if s:
                    out[(p, q)] = s
    return out


def has_forbidden_contact(sys: PolySystem, cells: dict) -> bool:
    for p, o in cells.items():
        for d, q in neighbors(HEX, p):
            if q in cells and classify(sys.tile.facing(o, d), sys.tile.facing(cells[q], OPPOSITE[d])) == FORBIDDEN:
                return True
    return False


# -- numeric validation -----------------------------------------------------------

@dataclass
class NumericReport:
    ok: bool
    violation: tuple | None = None
    max_width: float = 0.0
    reason: str = ""


def _width(x) -> float:
    return float(x.b - x.a)


@lru_cache(maxsize=None)
def _frame(n: int, dps: int):
    """Interval constants for an n-gon of unit side in a contact frame."""
    mp.dps = dps
    iv.dps = dps
    theta = 2 * iv.pi / n
    params = GeometryParams(n)
    d = iv.mpf(params.d.numerator) / params.d.denominator
    h = d * iv.tan(theta) / 2
    r = 1 / (2 * iv.tan(iv.pi / n))
    R = 1 / (2 * iv.sin(iv.pi / n))
    phis = [iv.pi + k * theta for k in range(n)]
    starts = [(iv.mpf(1), iv.mpf(0))]
    for k in range(n - 1):
        x, y = starts[-1]
        starts.append((x + iv.cos(phis[k]), y + iv.sin(phis[k])))
    return theta, h, r, R, d, phis, starts


def _side_points(prof, k, frame):
    """Interval y-coordinates of the feature corners of side k (not its endpoints)."""
    _, h, _, _, _, phis, starts = frame
    sx, sy = starts[k]
    s, c = iv.sin(phis[k]), iv.cos(phis[k])
    ys = []
    bounds = [t for t, _ in prof.steps] + [prof.length]
    for (t0, v), t1 in zip(prof.steps, bounds[1:]):
        if v == 0:
            continue
        for t in (t0, t1):
            tt = iv.mpf(t.numerator) / t.denominator
            ys.append(sy + tt * s + v * h * (-c))
    return ys


def _certify_contact(tile: PolygonTileType, oa: Orientation, pa: int, frame) -> tuple:
    """True when every non-contact feature of the tile lies strictly below
    the contact line; returns (ok, max width)."""
    n = tile.n
    _, h, _, _, _, _, starts = frame
    worst = 0.0
    for k in (1, 2, n - 1, n - 2):
        side = tile.exposed(tile.side_at(oa, (pa + k) % n), oa.flip)
        for y in _side_points(side, k, frame):
            worst = max(worst, _width(y))
            if not y.b < 0:
                return False, worst
    for y in (starts[3][1] + h, starts[n - 2][1] + h):
        worst = max(worst, _width(y))
        if not y.b < 0:
            return False, worst
    return True, worst


def numeric_validate(sys: PolySystem, cells, params: GeometryParams | None = None, dps: int = 40) -> NumericReport:
    """Certify pairwise interior-disjointness of the realized tiles."""
    items = list(cells.items()) if isinstance(cells, dict) else list(cells)
    tile = sys.tile
    n = tile.n
    frame = _frame(n, dps)
    _, h, r, R, d, _, _ = frame
    worst = max(_width(h), _width(r), _width(R))
    prop1 = d - h
    far = iv.sqrt(3) * 2 * r - 2 * (R + h)
    if not (prop1.a > 0 and far.a > 0):
        return NumericReport(False, None, worst, "lattice constants not certified")
    for i, (p, oa) in enumerate(items):
        for q, ob in items[i + 1:]:
            if p == q:
                return NumericReport(False, (p, q), worst, "two tiles at one site")
            dirs = [dd for dd, x in neighbors(HEX, p) if x == q]
            if not dirs:
                continue
            dd = dirs[0]
            sa = tile.facing(oa, dd)
            sb = tile.facing(ob, OPPOSITE[dd])
            if classify(sa, sb) == FORBIDDEN:
                return NumericReport(False, (p, q), worst, "contact profiles overlap")
            for o, dirn in ((oa, dd), (ob, OPPOSITE[dd])):
                ok, w = _certify_contact(tile, o, HEX_CCW.index(dirn) * tile.c, frame)
                worst = max(worst, w)
                if not ok:
                    return NumericReport(False, (p, q), worst, "non-contact feature crosses the contact line")
    if worst >= 1e-9:
        return NumericReport(False, None, worst, "interval too wide")
    return NumericReport(True, None, worst)


def overlap_witness(sa, sb, hval: float = 1.0):
    """A point inside both tiles when the contact is Forbidden, in contact-frame units."""
    L = sa.length
    cuts = sorted({t for t, _ in sa.steps} | {L - t for t, _ in sb.steps} | {0, L})
    for x, y in zip(cuts, cuts[1:]):
        m = (x + y) / 2
        top = sa.height_at(m)          # tile A occupies y < top*h
        bottom = -sb.height_at(L - m)  # tile B occupies y > bottom*h
        if top > bottom:
            return (m, (top + bottom) * hval / 2)
    return None


# -- SVG ----------------------------------------------------------------------------

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
           "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac")


def _color(key) -> str:
    digest = hashlib.sha1(repr(key).encode()).digest()
    return PALETTE[digest[0] % len(PALETTE)]


def _hex_center(p, spacing: float):
    x, y = p
    return (x * spacing * math.sqrt(3) / 2, (y - x / 2) * spacing)


def polygon_outline(tile: PolygonTileType, o: Orientation, center, h: float):
    n = tile.n
    R = 1 / (2 * math.sin(math.pi / n))
    pts = []
    for pos in range(n):
        nrm = math.pi / 2 + 2 * math.pi * pos / n
        a0, a1 = nrm - math.pi / n, nrm + math.pi / n
        v0 = (center[0] + R * math.cos(a0), center[1] + R * math.sin(a0))
        v1 = (center[0] + R * math.cos(a1), center[1] + R * math.sin(a1))
        ux, uy = v1[0] - v0[0], v1[1] - v0[1]
        nx, ny = math.cos(nrm), math.sin(nrm)
        prof = tile.exposed(tile.side_at(o, pos), o.flip)
        pts.append(v0)
        bounds = [t for t, _ in prof.steps] + [prof.length]
        for (t0, v), t1 in zip(prof.steps, bounds[1:]):
            if v == 0:
                continue
            a, b = float(t0), float(t1)
            pts.append((v0[0] + a * ux, v0[1] + a * uy))
            pts.append((v0[0] + a * ux + v * h * nx, v0[1] + a * uy + v * h * ny))
            pts.append((v0[0] + b * ux + v * h * nx, v0[1] + b * uy + v * h * ny))
            pts.append((v0[0] + b * ux, v0[1] + b * uy))
    return pts


def _path(pts) -> str:
    return "M " + " L ".join(f"{x:.4f} {-y:.4f}" for x, y in pts) + " Z"


def _svg(paths, pad=1.0) -> str:
    xs = [x for pts, _ in paths for x, _ in pts]
    ys = [-y for pts, _ in paths for _, y in pts]
    x0, y0 = min(xs) - pad, min(ys) - pad
    wd, ht = max(xs) - x0 + pad, max(ys) - y0 + pad
    body = "\n".join(f'  <path d="{_path(pts)}" fill="{col}" stroke="#222" stroke-width="0.02"/>'
                     for pts, col in paths)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.4f} {y0:.4f} {wd:.4f} {ht:.4f}">\n'
            f"{body}\n</svg>\n")


def render_poly_svg(sys: PolySystem, cells: dict, exaggerate: float = 4.0) -> str:
    n = sys.tile.n
    spacing = 1 / math.tan(math.pi / n)
    h = GeometryParams(n).h * exaggerate
    paths = []
    for p, o in sorted(cells.items()):
        paths.append((polygon_outline(sys.tile, o, _hex_center(p, spacing), h), _color((o.rot, o.flip))))
    return _svg(paths)


def render_lattice_svg(lattice: str, cells: dict, names=None) -> str:
    paths = []
    for p, t in sorted(cells.items()):
        key = names[t] if names else t
        if lattice == HEX:
            cx, cy = _hex_center(p, 1.0)
            R = 1 / math.sqrt(3)
            pts = [(cx + R * math.cos(math.pi / 3 * k), cy + R * math.sin(math.pi / 3 * k)) for k in range(6)]
        else:
            x, y = p
            pts = [(x - .5, y - .5), (x + .5, y - .5), (x + .5, y + .5), (x - .5, y + .5)]
        paths.append((pts, _color(key)))
    return _svg(paths, pad=0.5)
