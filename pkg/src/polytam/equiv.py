"""Bounded checks of the simulation relations between compiler stages."""
from __future__ import annotations

from dataclasses import dataclass, field

from .enumeration import explore
from .hexcompile import BLOCK, HexRepresentationMap, block_center, hex_to_square_assembly
from .tam import HEX, OFFSETS, OPPOSITE, SQUARE, Assembly, TamSystem, attachments_at, matches

PASS, FAIL, BOUNDED = "Pass", "Fail", "Bounded-Pass"


@dataclass
class SimReport:
    verdict: str
    bound: int
    counts: dict = field(default_factory=dict)
    witness: object = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, (frozenset, set)):
            w = [list(map(_jsonable, x)) for x in sorted(w, key=repr)]
        return {"formatVersion": 1, "verdict": self.verdict, "bound": self.bound,
                "counts": self.counts, "reason": self.reason, "witness": _jsonable(w)}


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if isinstance(x, Assembly):
        return sorted([[p[0], p[1]], _jsonable(v)] for p, v in x.cells.items())
    return x


def _fail(bound, counts, witness, reason):
    return SimReport(FAIL, bound, counts, witness, reason)


def _verdict(open_):
    return BOUNDED if open_ else PASS


def square_bond_edges(sq: Assembly, src: TamSystem) -> set:
    out = set()
    for p, t in sq.cells.items():
        for d in ("N", "E"):
            q = (p[0] + OFFSETS[SQUARE][d][0], p[1] + OFFSETS[SQUARE][d][1])
            if q in sq.cells and matches(src.glue(t, d), src.glue(sq.cells[q], OPPOSITE[d])):
                out.add((p, q))
    return out


_JUMP = {"N": "N", "E": "SE"}


def c_bond_edges(cells: dict, system: TamSystem, blocks, c: int = 3) -> set:
    """Block pairs joined by a straight bonded path of length c between centers."""
    out = set()
    for b in blocks:
        for d, j in _JUMP.items():
            nb = (b[0] + BLOCK[d][0], b[1] + BLOCK[d][1])
            if nb not in blocks:
                continue
            off = OFFSETS[HEX][j]
            p = block_center(b)
            ok = True
            for _ in range(c):
                q = (p[0] + off[0], p[1] + off[1])
                if p not in cells or q not in cells or not matches(
                        system.glue(cells[p], j), system.glue(cells[q], OPPOSITE[j])):
                    ok = False
                    break
                p = q
            if ok:
                out.add((b, nb))
    return out


def _square_step_ok(r1: Assembly, r2: Assembly, src: TamSystem) -> bool:
    if not set(r1.cells.items()) < set(r2.cells.items()) or len(r2) != len(r1) + 1:
        return False
    (q, t), = set(r2.cells.items()) - set(r1.cells.items())
    return t in attachments_at(src, r1.cells, q)


def check_block_sim(hex_sys: TamSystem, square_sys: TamSystem, m: HexRepresentationMap,
                    c: int = 3, max_squares: int = 3) -> SimReport:
    centers = {i for i, t in enumerate(hex_sys.tiles) if t.name in m.phi}

    def allow(cells, q, v):
        return v not in centers or sum(1 for t in cells.values() if t in centers) < max_squares

    hx = explore(HEX, hex_sys.seed.cells, lambda cl, q: attachments_at(hex_sys, cl, q),
                 None, allow, record_edges=True)
    sq = explore(SQUARE, square_sys.seed.cells, lambda cl, q: attachments_at(square_sys, cl, q),
                 max_squares, record_edges=True)
    counts = {"hexStates": len(hx.states), "squareStates": len(sq.states)}
    rep = {}
    for st in hx.states:
        a = Assembly(HEX, st)
        r = hex_to_square_assembly(a, hex_sys, m, square_sys)
        if r is None:
            if len(st) > c * c - 1:
                return _fail(max_squares, counts, st, "hex assembly is not a valid block representation")
            continue
        if r.key not in sq.states:
            return _fail(max_squares, counts, st, "represented square assembly is not producible")
        if c_bond_edges(a.cells, hex_sys, r.cells, c) != square_bond_edges(r, square_sys):
            return _fail(max_squares, counts, st, "c-bond graph differs from the square bond graph")
        rep[st] = r.key
    if set(rep.values()) != sq.states:
        missing = next(iter(sq.states - set(rep.values())))
        return _fail(max_squares, counts, missing, "producible square assembly has no hex representative")
    hsteps = set()
    for st, kids in hx.edges.items():
        for k in kids:
            r1, r2 = rep.get(st), rep.get(k)
            if r1 is None or r2 is None or r1 == r2:
                continue
            if not _square_step_ok(Assembly(SQUARE, r1), Assembly(SQUARE, r2), square_sys):
                return _fail(max_squares, counts, (st, k), "hex step represents an invalid square step")
            hsteps.add((r1, r2))
    ssteps = {(st, k) for st, kids in sq.edges.items() for k in kids}
    counts["squareSteps"] = len(ssteps)
    if ssteps - hsteps:
        return _fail(max_squares, counts, next(iter(ssteps - hsteps)), "square step not simulated")
    return SimReport(_verdict(hx.truncated or sq.truncated), max_squares, counts)


# -- polygon stage ------------------------------------------------------------------

def _poly_model(sys):
    from .pfbtam import PolySystem, poly_attachments_at, poly_bond_edges

    if isinstance(sys, PolySystem):
        return (lambda cl, q: poly_attachments_at(sys, cl, q)), (lambda cells: poly_bond_edges(sys, cells)), sys.seed
    return (lambda cl, q: attachments_at(sys, cl, q)), (lambda cells: hex_bond_edges(sys, cells)), sys.seed.cells


def hex_bond_edges(system: TamSystem, cells: dict) -> dict:
    out = {}
    for p, t in cells.items():
        for d in ("N", "NE", "SE"):
            off = OFFSETS[HEX][d]
            q = (p[0] + off[0], p[1] + off[1])
            if q in cells:
                s = matches(system.glue(t, d), system.glue(cells[q], OPPOSITE[d]))
                if s:
                    out[tuple(sorted((p, q)))] = s
    return out


def _image(state, omap):
    out = []
    for p, o in state:
        t = omap.get(o)
        if t is None:
            return None
        out.append((p, t))
    return frozenset(out)


def check_orientation_sim(poly_sys, hex_sys: TamSystem, omap: dict, max_tiles: int) -> SimReport:
    """Bond-graph bijection and one-step dynamics between a polygon system and a hex system."""
    att, bonds, seed = _poly_model(poly_sys)
    px = explore(HEX, seed, att, max_tiles, record_edges=True)
    hx = explore(HEX, hex_sys.seed.cells, lambda cl, q: attachments_at(hex_sys, cl, q), max_tiles,
                 record_edges=True)
    counts = {"polyStates": len(px.states), "hexStates": len(hx.states)}
    img = {}
    for st in px.states:
        im = _image(st, omap)
        if im is None:
            return _fail(max_tiles, counts, st, "orientation outside the orientation map")
        if im not in hx.states:
            return _fail(max_tiles, counts, st, "image is not a producible hex assembly")
        if bonds(dict(st)) != hex_bond_edges(hex_sys, dict(im)):
            return _fail(max_tiles, counts, st, "bond graph differs from the image's bond graph")
        img[st] = im
    if len(set(img.values())) != len(img):
        return _fail(max_tiles, counts, None, "two polygon assemblies share an image")
    if set(img.values()) != hx.states:
        return _fail(max_tiles, counts, next(iter(hx.states - set(img.values()))),
                     "producible hex assembly has no polygon preimage")
    psteps = {(img[a], img[b]) for a, kids in px.edges.items() for b in kids}
    hsteps = {(a, b) for a, kids in hx.edges.items() for b in kids}
    if psteps != hsteps:
        return _fail(max_tiles, counts, next(iter(psteps ^ hsteps)), "one-step dynamics differ")
    counts["steps"] = len(hsteps)
    return SimReport(_verdict(px.truncated or hx.truncated), max_tiles, counts)


def clean_violation(hex_cells: dict, hex_sys: TamSystem, m: HexRepresentationMap):
    """A non-empty, unrepresented block with no represented neighbor, if any."""
    from .hexcompile import block_of

    blocks = {block_of(p)[0] for p in hex_cells}
    if len(blocks) <= 1:
        return None
    centers = {block_of(p)[0] for p, t in hex_cells.items() if hex_sys.tiles[t].name in m.phi}
    for b in sorted(blocks - centers):
        if not any((b[0] + o[0], b[1] + o[1]) in centers for o in BLOCK.values()):
            return b
    return None


def check_production_dynamics(poly_sys, square_sys: TamSystem, hex_sys: TamSystem,
                              hmap: HexRepresentationMap, omap: dict, c: int = 3,
                              max_squares: int = 2) -> SimReport:
    """Production and dynamics of the composed polygon -> square representation."""
    att, _, seed = _poly_model(poly_sys)
    center_o = {o for o, t in omap.items() if hex_sys.tiles[t].name in hmap.phi}

    def allow(cells, q, v):
        return v not in center_o or sum(1 for o in cells.values() if o in center_o) < max_squares

    px = explore(HEX, seed, att, None, allow, record_edges=True)
    sq = explore(SQUARE, square_sys.seed.cells, lambda cl, q: attachments_at(square_sys, cl, q),
                 max_squares, record_edges=True)
    counts = {"polyStates": len(px.states), "squareStates": len(sq.states)}
    rep = {}
    for st in px.states:
        im = _image(st, omap)
        if im is None:
            return _fail(max_squares, counts, st, "orientation outside the orientation map")
        cells = dict(im)
        bad = clean_violation(cells, hex_sys, hmap)
        if bad is not None:
            return _fail(max_squares, counts, (st, bad), "assembly does not map cleanly")
        r = hex_to_square_assembly(Assembly(HEX, cells), hex_sys, hmap, square_sys)
        if r is None:
            return _fail(max_squares, counts, st, "assembly is not representable")
        if r.key not in sq.states:
            return _fail(max_squares, counts, st, "image is not a producible square assembly")
        rep[st] = r.key
    if set(rep.values()) != sq.states:
        return _fail(max_squares, counts, next(iter(sq.states - set(rep.values()))),
                     "producible square assembly has no polygon preimage")
    reverse = {}
    for a, kids in px.edges.items():
        for b in kids:
            reverse.setdefault(b, []).append(a)
            r1, r2 = rep[a], rep[b]
            if r1 != r2 and not _square_step_ok(Assembly(SQUARE, r1), Assembly(SQUARE, r2), square_sys):
                return _fail(max_squares, counts, (a, b), "polygon step represents an invalid square step")
    by_rep = {}
    for st, r in rep.items():
        by_rep.setdefault(r, []).append(st)
    nsteps = 0
    for alpha, kids in sq.edges.items():
        for beta in kids:
            nsteps += 1
            reach = set(by_rep[beta])
            stack = list(reach)
            while stack:
                for a in reverse.get(stack.pop(), ()):
                    if a not in reach:
                        reach.add(a)
                        stack.append(a)
            for st in by_rep[alpha]:
                if st not in reach:
                    return _fail(max_squares, counts, (st, beta), "polygon assembly cannot grow into a square successor")
    counts["squareSteps"] = nsteps
    return SimReport(_verdict(px.truncated or sq.truncated), max_squares, counts)


def bad_orientations(j: int, n: int) -> tuple:
    """The half-turn, flip and flip-plus-half-turn variants of tile j's orientation."""
    from .polygon import Orientation
    return (Orientation((n // 2 - j) % n), Orientation(j % n, True), Orientation((j + n // 2) % n, True))


def check_bad_orientations(poly_sys, max_tiles: int) -> SimReport:
    """At every frontier site of every producible assembly where some tile can
    attach in its represented orientation, none of its bad variants can."""
    from .pfbtam import contacts
    from .polygon import valid_orientations

    tile = poly_sys.tile
    att, _, seed = _poly_model(poly_sys)
    ex = explore(HEX, seed, att, max_tiles)
    n_ctx = 0
    for st in ex.states:
        cells = dict(st)
        sites = {(p[0] + dx, p[1] + dy) for p in cells for dx, dy in OFFSETS[HEX].values()} - set(cells)
        for q in sorted(sites):
            c = contacts(poly_sys, cells, q)
            ok = valid_orientations(tile, poly_sys.temperature, c) if c else {}
            for o in ok:
                if o.flip:
                    continue
                n_ctx += 1
                for b in bad_orientations(-o.rot % tile.n, tile.n):
                    if b in ok:
                        return _fail(max_tiles, {"contexts": n_ctx}, (st, q, o, b), "bad orientation attaches")
    return SimReport(_verdict(ex.truncated), max_tiles, {"contexts": n_ctx})


def check_self_seed(comp, max_tiles: int) -> SimReport:
    """Exactly one τ-label bond per multi-tile assembly, and every non-seed
    tile bonds through a side in the wedge [0, comp.wedge)."""
    from .geometry import bond_strength
    from .pfbtam import PolySystem
    from .polygon import HEX_CCW, TAU_LABEL

    ps = PolySystem.from_compilation(comp)
    tile = ps.tile
    att, _, seed = _poly_model(ps)
    ex = explore(HEX, seed, att, max_tiles)
    for st in ex.states:
        cells = dict(st)
        n_tau = 0
        for p, o in cells.items():
            wedge = False
            for d, (dx, dy) in OFFSETS[HEX].items():
                q = (p[0] + dx, p[1] + dy)
                if q not in cells:
                    continue
                a = tile.facing(o, d)
                if not bond_strength(a, tile.facing(cells[q], OPPOSITE[d])):
                    continue
                wedge |= tile.side_at(o, HEX_CCW.index(d) * tile.c) < comp.wedge
                if p < q and a.glue.label == TAU_LABEL:
                    n_tau += 1
            if p not in comp.seed and not wedge:
                return _fail(max_tiles, {"states": len(ex.states)}, (st, p), "tile bonds outside the wedge")
        if len(cells) >= 2 and n_tau != 1:
            return _fail(max_tiles, {"states": len(ex.states)}, st, f"{n_tau} τ-label bonds")
    return SimReport(_verdict(ex.truncated), max_tiles, {"states": len(ex.states)})


# -- slider stage ------------------------------------------------------------------------

def check_terminal_sim(pyramid, slider, max_tiles: int | None = None) -> SimReport:
    """Terminal assemblies of the slider system map exactly onto those of the pyramid system."""
    from .slider import map_slider_assembly, pyramid_explore, slider_seed, slider_simulate

    sq = pyramid.system
    ex = pyramid_explore(pyramid, max_tiles)
    run = slider_simulate(slider, slider_seed(pyramid, slider),
                          None if max_tiles is None else max_tiles)
    counts = {"squareStates": len(ex.states), "sliderStates": len(run.states)}
    u0, v0 = pyramid.anchor
    want = {frozenset((p, sq.tiles[t].name) for p, t in st) for st in ex.terminal()}
    got = set()
    for st in run.terminal():
        m = map_slider_assembly(st, slider)
        if m is None:
            return _fail(max_tiles or 0, counts, st, "terminal slider assembly has no defined mapping")
        got.add(frozenset(((u + u0, v + v0), n) for (u, v), n in m.items()))
    counts["terminal"] = len(got)
    if got != want:
        return _fail(max_tiles or 0, counts, next(iter(got ^ want)), "terminal sets differ")
    return SimReport(_verdict(ex.truncated or run.truncated), max_tiles or 0, counts)
