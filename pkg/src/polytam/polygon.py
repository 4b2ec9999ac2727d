"""Compile a hexagonal system into one rotatable, flippable n-gon tile.

Orientation (rot, flip) places side i at boundary position (-i if flip else i)
+ rot (mod n), counting counterclockwise from the top.  Position m*c faces the
m-th hex direction in counterclockwise order N, NW, SW, S, SE, NE, where c =
n // 6.  Tile j of the source is represented by (rot=-j, flip=False): its N
glue is side j, its NW glue side j+c, and so on.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from .geometry import CCW, CW, FORBIDDEN, IN, OUT, SideProfile, bond_strength, classify, mirror, side_profile
from .tam import HEX, OPPOSITE, Assembly, Glue, ModelError, TamSystem, TileType, neighbors

HEX_CCW = ("N", "NW", "SW", "S", "SE", "NE")
PAIR = {"N": 1, "S": 1, "NW": 2, "SE": 2, "SW": 3, "NE": 3}
TAU_LABEL = "tau*"


@dataclass(frozen=True, order=True)
class Orientation:
    rot: int
    flip: bool = False


class PolygonTileType:
    def __init__(self, sides, name: str = "p"):
        self.name = name
        self.sides = list(sides)
        self.n = len(self.sides)
        if self.n % 6 and self.n % 4:
            raise ModelError(f"side count {self.n} fits neither lattice")
        self._exposed = {}
        self.by_label = {}
        for i, s in enumerate(self.sides):
            if s.glue is not None and s.glue.strength > 0:
                self.by_label.setdefault(s.glue.label, []).append(i)

    @property
    def c(self) -> int:
        return self.n // 6

    def side_at(self, o: Orientation, pos: int) -> int:
        """Index of the side shown at boundary position pos."""
        return (o.rot - pos) % self.n if o.flip else (pos - o.rot) % self.n

    def exposed(self, i: int, flip: bool) -> SideProfile:
        key = (i, flip)
        p = self._exposed.get(key)
        if p is None:
            p = mirror(self.sides[i]) if flip else self.sides[i]
            self._exposed[key] = p
        return p

    def facing(self, o: Orientation, hexdir: str, positions_per_dir: int | None = None) -> SideProfile:
        c = positions_per_dir or self.c
        return self.exposed(self.side_at(o, HEX_CCW.index(hexdir) * c), o.flip)

    def orientations(self):
        for f in (False, True):
            for r in range(self.n):
                yield Orientation(r, f)


def represent(j: int, n: int, k: int = 0, c: int | None = None) -> Orientation:
    """Orientation showing group j rotated so its side j sits at position k*c."""
    c = c if c is not None else n // 6
    return Orientation((k * c - j) % n)


def valid_orientations(tile: PolygonTileType, tau: int, contacts: dict) -> dict:
    """contacts: hex direction (from the new site) -> exposed neighbor side.

    Returns orientation -> total bond strength for orientations reaching tau
    with no Forbidden contact.
    """
    n, c = tile.n, tile.c
    total = {}
    for d, nb in contacts.items():
        if nb.glue is None or nb.glue.strength <= 0:
            continue
        pos = HEX_CCW.index(d) * c
        for i in tile.by_label.get(nb.glue.label, ()):
            for f in (False, True):
                o = Orientation((i + pos) % n if f else (pos - i) % n, f)
                s = bond_strength(tile.exposed(i, f), nb)
                if s:
                    total[o] = total.get(o, 0) + s
    out = {}
    for o, s in total.items():
        if s < tau:
            continue
        if all(classify(tile.facing(o, d), nb) != FORBIDDEN for d, nb in contacts.items()):
            out[o] = s
    return out


@dataclass
class PolygonCompilation:
    tile: PolygonTileType
    seed: dict                 # hex coord -> Orientation
    omap: dict                 # Orientation -> source tile index
    temperature: int
    source: TamSystem
    group_of: dict = field(default_factory=dict)   # Orientation -> group index
    wedge: int = 0             # sides [0, wedge) form the self-seeding wedge


def _suffix(g: Glue, d: str) -> Glue | None:
    if g.strength <= 0:
        return None
    return Glue(f"{g.label}_{PAIR[d]}", g.strength)


def _placement(d: str) -> str:
    return CCW if HEX_CCW.index(d) < 3 else CW


def compile_htam_to_polygon(src: TamSystem) -> PolygonCompilation:
    if src.lattice != HEX:
        raise ModelError("source must be a hex system")
    tau = src.temperature
    for t in src.tiles:
        for g in t.glues.values():
            if g.strength >= tau:
                raise ModelError(f"tile {t.name} has a strength-{g.strength} glue at temperature {tau}")
    if len(src.seed) != 3:
        raise ModelError("seed must have exactly 3 tiles")
    c = len(src.tiles)
    n = 6 * c
    sides = [None] * n
    for j, t in enumerate(src.tiles):
        for m, d in enumerate(HEX_CCW):
            sides[j + m * c] = side_profile(_suffix(t.glue(d), d), _placement(d))
    tile = PolygonTileType(sides)
    omap = {represent(j, n): j for j in range(c)}
    seed = {p: represent(t, n) for p, t in src.seed.cells.items()}
    return PolygonCompilation(tile, seed, omap, tau, src, {o: j for o, j in omap.items()})


# -- io-hTAM ---------------------------------------------------------------------------

@dataclass
class IoHexSystem:
    system: TamSystem          # hex system over io tiles (seed = 3 extra tiles)
    marks: list                # per tile: dict direction -> IN/OUT
    source_of: list            # per tile: source tile index


def minimal_glue_sets(t: TileType, tau: int) -> list:
    dirs = [d for d in HEX_DIRS_ORDER if t.glue(d).strength > 0]
    out = []
    for r in range(1, len(dirs) + 1):
        for combo in itertools.combinations(dirs, r):
            s = [t.glue(d).strength for d in combo]
            if sum(s) >= tau and sum(s) - min(s) < tau:
                out.append(combo)
    return out


HEX_DIRS_ORDER = ("N", "NE", "SE", "S", "SW", "NW")


def io_transform(src: TamSystem) -> IoHexSystem:
    if src.lattice != HEX:
        raise ModelError("source must be a hex system")
    tau = src.temperature
    if any(g.strength >= tau for t in src.tiles for g in t.glues.values()):
        raise ModelError("strength-tau glue present")
    if len(src.seed) != 3:
        raise ModelError("seed must have exactly 3 tiles")
    tiles, marks, source = [], [], []
    for i, t in enumerate(src.tiles):
        sets = minimal_glue_sets(t, tau)
        if not sets:
            warnings.warn(f"tile {t.name} can never attach; it yields no io tiles")
        for combo in sets:
            tiles.append(TileType(f"{t.name}/{'+'.join(combo)}", t.glues))
            marks.append({d: IN if d in combo else OUT for d in HEX_DIRS_ORDER})
            source.append(i)
    seed_cells = sorted(src.seed.cells.items())
    coords = [p for p, _ in seed_cells]
    seed = {}
    for k, (p, t) in enumerate(seed_cells):
        q = coords[(k + 1) % 3]
        d = _dir_between(p, q)
        tiles.append(TileType(f"{src.tiles[t].name}/seed{k}", src.tiles[t].glues))
        marks.append({x: IN if x == d else OUT for x in HEX_DIRS_ORDER})
        source.append(t)
        seed[p] = len(tiles) - 1
    system = TamSystem(HEX, tiles, tau, Assembly(HEX, seed))
    return IoHexSystem(system, marks, source)


def _dir_between(p, q) -> str:
    for d, r in neighbors(HEX, p):
        if r == q:
            return d
    raise ModelError(f"seed tiles {p} and {q} are not adjacent")


def io_attachments_at(io: IoHexSystem, cells: dict, q) -> list:
    """io-hTAM attachment: every IN side bonds; OUT sides never bond."""
    sys = io.system
    out = []
    nb = {d: (r, cells.get(r)) for d, r in neighbors(HEX, q)}
    for i, t in enumerate(sys.tiles):
        mk = io.marks[i]
        ok, s = True, 0
        for d, (r, u) in nb.items():
            if mk[d] == IN:
                if u is None or io.marks[u][OPPOSITE[d]] != OUT:
                    ok = False
                    break
                g, h = t.glue(d), sys.tiles[u].glue(OPPOSITE[d])
                if not (g.strength > 0 and g.label == h.label):
                    ok = False
                    break
                s += g.strength
            elif u is not None and io.marks[u][OPPOSITE[d]] == IN:
                ok = False
                break
        if ok and s >= sys.temperature:
            out.append(i)
    return out


# -- self-seeding ------------------------------------------------------------------------

def self_seed_compile(src: TamSystem) -> PolygonCompilation:
    io = io_transform(src)
    tau = src.temperature
    body = [i for i in range(len(io.system.tiles)) if i not in set(io.system.seed.cells.values())]
    cells = sorted(src.seed.cells.items())
    at = dict(cells)
    bonds = []
    for (p, t) in cells:
        for d, q in neighbors(HEX, p):
            if q in at and p < q:
                g, h = src.glue(t, d), src.glue(at[q], OPPOSITE[d])
                if g.strength > 0 and g.label == h.label:
                    bonds.append((p, q, d))
    if not bonds:
        raise ModelError("no pair of seed tiles is joined by a bond")
    a, b, dab = min(bonds)
    cnum = len(body) + 2
    n = 6 * cnum
    mid = cnum // 2
    slots = [k for k in range(cnum) if k not in (mid - 1, mid)]
    sides = [None] * n
    omap, groups = {}, {}

    def place_group(j, t: TileType, marks: dict, front: str, special: str | None = None):
        k = HEX_CCW.index(front)
        for m, d in enumerate(HEX_CCW):
            idx = j + ((m - k) % 6) * cnum
            if d == special:
                g, mark = Glue(TAU_LABEL, tau), None
            else:
                g, mark = _suffix(t.glue(d), d), marks[d]
            sides[idx] = side_profile(g, _placement(d), mark)
        o = represent(j, n, k, cnum)
        groups[o] = j
        return o

    for slot, i in zip(slots, body):
        mk = io.marks[i]
        front = next(d for d in HEX_CCW if mk[d] == IN)
        o = place_group(slot, io.system.tiles[i], mk, front)
        omap[o] = io.source_of[i]
    outs = {d: OUT for d in HEX_CCW}
    oa = place_group(mid - 1, src.tiles[at[a]], outs, dab, dab)
    ob = place_group(mid, src.tiles[at[b]], outs, OPPOSITE[dab], OPPOSITE[dab])
    omap[oa], omap[ob] = at[a], at[b]
    tile = PolygonTileType(sides)
    return PolygonCompilation(tile, {a: oa}, omap, tau, src, groups, wedge=cnum)


def compilation_to_json(comp: PolygonCompilation) -> dict:
    from .geometry import profile_to_json
    from .tam import system_to_json
    return {
        "formatVersion": 1,
        "n": comp.tile.n,
        "temperature": comp.temperature,
        "sides": [profile_to_json(s) for s in comp.tile.sides],
        "seed": [{"x": x, "y": y, "rot": o.rot, "flip": o.flip} for (x, y), o in sorted(comp.seed.items())],
        "omap": [{"rot": o.rot, "flip": o.flip, "tile": comp.source.tiles[t].name, "index": t}
                 for o, t in sorted(comp.omap.items())],
        "groups": [{"rot": o.rot, "flip": o.flip, "group": g} for o, g in sorted(comp.group_of.items())],
        "wedge": comp.wedge,
        "source": system_to_json(comp.source),
    }


def compilation_from_json(doc) -> PolygonCompilation:
    from .geometry import profile_from_json
    from .tam import FormatError, system_from_json
    try:
        tile = PolygonTileType([profile_from_json(s) for s in doc["sides"]])
        seed = {(int(s["x"]), int(s["y"])): Orientation(int(s["rot"]), bool(s["flip"])) for s in doc["seed"]}
        omap = {Orientation(int(e["rot"]), bool(e["flip"])): int(e["index"]) for e in doc["omap"]}
        groups = {Orientation(int(e["rot"]), bool(e["flip"])): int(e["group"]) for e in doc.get("groups", [])}
        return PolygonCompilation(tile, seed, omap, int(doc["temperature"]), system_from_json(doc["source"]),
                                  groups, int(doc.get("wedge", 0)))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelError) and not isinstance(e, FormatError):
            raise
        raise FormatError(f"malformed polygon document: {e!r}") from e
