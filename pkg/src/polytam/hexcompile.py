"""Compile a square aTAM system into a hexagonal hTAM system at scale 3.

Block layout (axial offsets from the block center, block (bx, by) is centered
at (3bx, 3by)):

    KNW(-1,1)  RN(0,1)   RNE(1,1)
    RNW(-1,0)  C(0,0)    RSE(1,0)
    RSW(-1,-1) RS(0,-1)  KSE(1,-1)

The six R* cells form a ring around the center, listed clockwise as RN, RNE,
RSE, RS, RSW, RNW.  Input from a neighbor block in direction D arrives as an
arm tile at the primary cell of D (N: RN, E: RSE, S: RS, W: RNW); strength-tau
inputs add a second arm tile at the shared cell (RNE for N/E, RSW for S/W).
Output toward D is exposed by the primary cell of D together with a corner
(KNW for N/W, KSE for S/E).  The NE edge of RNE and the SW edge of RSW are
never glued.

Once the center is placed, the remaining ring cells fill clockwise, each
bound to the center and to its counterclockwise predecessor; corners then bind
to their two ring neighbors.
"""
from __future__ import annotations

from dataclasses import dataclass

from .tam import (HEX, HEX_DIRS, OFFSETS, OPPOSITE, SQUARE, SQUARE_DIRS, Assembly, Glue, ModelError,
                  TamSystem, TileType, hex_distance)

POS = {
    "C": (0, 0), "RN": (0, 1), "RNE": (1, 1), "RSE": (1, 0), "RS": (0, -1),
    "RSW": (-1, -1), "RNW": (-1, 0), "KNW": (-1, 1), "KSE": (1, -1),
}
AT = {v: k for k, v in POS.items()}
RING = ("RN", "RNE", "RSE", "RS", "RSW", "RNW")
NEXT = {p: RING[(i + 1) % 6] for i, p in enumerate(RING)}
PREV = {v: k for k, v in NEXT.items()}
PRIMARY = {"N": "RN", "E": "RSE", "S": "RS", "W": "RNW"}
SHARED = {"N": "RNE", "E": "RNE", "S": "RSW", "W": "RSW"}
CORNER = {"N": "KNW", "W": "KNW", "E": "KSE", "S": "KSE"}
PAIRS = {"RNE": ("N", "E"), "RSW": ("S", "W")}
BLOCK = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
AXIS = {"N": "NS", "S": "NS", "E": "EW", "W": "EW"}
ROLE = {
    "C": "Center", "RN": "Side:N", "RSE": "Side:E", "RS": "Side:S", "RNW": "Side:W",
    "RNE": "Shared:NE", "RSW": "Shared:SW", "KNW": "Corner:NW", "KSE": "Corner:SE",
}
C = 3


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def hexdir(p, q) -> str:
    d = (q[0] - p[0], q[1] - p[1])
    for k, v in OFFSETS[HEX].items():
        if v == d:
            return k
    raise ValueError(f"{p} and {q} are not adjacent")


def _far(pos: str, d: str):
    """Cell `pos` of the neighbor block in direction d, in our block's frame."""
    b = BLOCK[d]
    return _add(POS[pos], (C * b[0], C * b[1]))


def block_of(h) -> tuple:
    x, y = h
    bx, by = (x + 1) // C, (y + 1) // C
    return (bx, by), ROLE[AT[(x - C * bx, y - C * by)]]


def block_center(b) -> tuple:
    return (C * b[0], C * b[1])


# Side geometry of the interface for output toward D, all computed from POS.
def _interface(d: str) -> dict:
    arm = _far(PRIMARY[OPPOSITE[d]], d)
    shared = _far(SHARED[OPPOSITE[d]], d)
    p, k = POS[PRIMARY[d]], POS[CORNER[d]]
    return {"a": hexdir(p, arm), "b": hexdir(k, arm), "c": hexdir(k, shared)}


INTERFACE = {d: _interface(d) for d in SQUARE_DIRS}


def _sides_between(a: str, b: str) -> str:
    return hexdir(POS[a], POS[b])


@dataclass
class HexRepresentationMap:
    phi: dict          # hex tile name -> square tile name
    c: int = C

    def to_json(self) -> dict:
        return {"formatVersion": 1, "scale": self.c, "phi": dict(sorted(self.phi.items())),
                "layout": {k: list(v) for k, v in POS.items()}}

    @classmethod
    def from_json(cls, doc) -> "HexRepresentationMap":
        return cls(dict(doc["phi"]), int(doc.get("scale", C)))


class _Builder:
    def __init__(self, src: TamSystem):
        self.src = src
        self.tau = src.temperature
        self.g = (self.tau + 1) // 2
        self.tiles = {}
        self.strength = {}

    def label(self, name: str, s: int | None = None) -> Glue:
        s = self.g if s is None else s
        if self.strength.setdefault(name, s) != s:
            raise AssertionError(f"label {name} reused with another strength")
        return Glue(name, s)

    def in_label(self, d: str, g: Glue) -> Glue:
        return self.label(f"in:{d}:{g.label}", g.strength if g.strength < self.tau else self.g)

    def tile(self, name: str, sides: dict):
        t = TileType(name, {d: sides.get(d, Glue("", 0)) for d in HEX_DIRS})
        if name in self.tiles:
            if self.tiles[name] != t:
                raise AssertionError(f"conflicting definitions of {name}")
            return
        self.tiles[name] = t


def _glues_on(src: TamSystem, d: str) -> list:
    out = {}
    for t in src.tiles:
        g = t.glue(d)
        if g.strength > 0:
            out[g.label] = g
    return [out[k] for k in sorted(out)]


def compile_atam_to_htam(src: TamSystem):
    """Return (hex system, representation map)."""
    if src.lattice != SQUARE:
        raise ModelError("source must be a square system")
    if src.temperature < 2:
        raise ModelError("unsupported: temperature below 2 needs no cooperation")
    if src.temperature > 3:
        raise ModelError("unsupported: temperatures above 3 are not handled by this block design")
    B = _Builder(src)
    tau = B.tau
    L = B.label
    glues = {d: _glues_on(src, d) for d in SQUARE_DIRS}
    strong = {d: [x for x in glues[d] if x.strength >= tau] for d in SQUARE_DIRS}
    phi = {}

    def center_labels(t: TileType, claims: dict) -> dict:
        lab = {}
        for d in SQUARE_DIRS:
            gl = t.glue(d)
            lab[PRIMARY[d]] = B.in_label(d, gl) if gl.strength > 0 else L(f"out:{PRIMARY[d]}")
        for pos, d in claims.items():
            lab[pos] = L(f"in2:{d}:{t.glue(d).label}") if d else L(f"out:{pos}")
        return lab

    # centers
    for t in src.tiles:
        opts = {}
        for pos, pair in PAIRS.items():
            opts[pos] = [d for d in pair if t.glue(d).strength >= tau] or [None]
        for cne in opts["RNE"]:
            for csw in opts["RSW"]:
                lab = center_labels(t, {"RNE": cne, "RSW": csw})
                name = f"C[{t.name}|{cne or '-'}|{csw or '-'}]"
                B.tile(name, {_sides_between("C", p): lab[p] for p in RING})
                phi[name] = t.name

    # input arms
    for d in SQUARE_DIRS:
        out_dir = OPPOSITE[d]               # the neighbor outputs toward us
        iface = INTERFACE[out_dir]
        for gl in glues[d]:
            if gl not in glues[out_dir]:
                continue
            p = PRIMARY[d]
            sides = {
                OPPOSITE[iface["a"]]: L(f"a:{AXIS[d]}:{gl.label}"),
                OPPOSITE[iface["b"]]: L(f"b:{out_dir}:{gl.label}"),
                _sides_between(p, "C"): B.in_label(d, gl),
                _sides_between(p, NEXT[p]): L(f"ch:{NEXT[p]}"),
                _sides_between(p, CORNER[d]): L(f"ca:{d}"),
            }
            if gl.strength >= tau:
                sides[_sides_between(p, SHARED[d])] = L(f"lk:{d}:{gl.label}")
            B.tile(f"A[{d}|{gl.label}]", sides)
            if gl.strength >= tau:
                s = SHARED[d]
                sides = {
                    OPPOSITE[iface["c"]]: L(f"c:{out_dir}:{gl.label}"),
                    _sides_between(s, "C"): L(f"in2:{d}:{gl.label}"),
                    _sides_between(s, NEXT[s]): L(f"ch:{NEXT[s]}"),
                    _sides_between(s, p): L(f"lk:{d}:{gl.label}"),
                }
                B.tile(f"A2[{d}|{gl.label}]", sides)

    # output ring tiles, one per (cell, center label, predecessor label)
    for pos in RING:
        if pos in PAIRS:
            centers = [L(f"out:{pos}")] + [L(f"in2:{d}:{x.label}") for d in PAIRS[pos] for x in strong[d]]
            prevs = [L(f"ch:{pos}")]
            for d in PAIRS[pos]:
                if PRIMARY[d] == PREV[pos]:
                    prevs += [L(f"lk:{d}:{x.label}") for x in strong[d]
                              if x in glues[OPPOSITE[d]]]
            for cl in centers:
                for pl in prevs:
                    B.tile(f"O[{pos}|{cl.label}|{pl.label}]", {
                        _sides_between(pos, "C"): cl,
                        _sides_between(pos, PREV[pos]): pl,
                        _sides_between(pos, NEXT[pos]): L(f"ch:{NEXT[pos]}"),
                    })
        else:
            d = next(k for k, v in PRIMARY.items() if v == pos)
            for gl in [None] + glues[d]:
                sides = {
                    _sides_between(pos, PREV[pos]): L(f"ch:{pos}"),
                    _sides_between(pos, NEXT[pos]): L(f"ch:{NEXT[pos]}"),
                }
                if gl is None:
                    sides[_sides_between(pos, "C")] = L(f"out:{pos}")
                    sides[_sides_between(pos, CORNER[d])] = L(f"ci:{d}:-")
                else:
                    sides[_sides_between(pos, "C")] = B.in_label(d, gl)
                    sides[_sides_between(pos, CORNER[d])] = L(f"ci:{d}:{gl.label}")
                    sides[INTERFACE[d]["a"]] = L(f"a:{AXIS[d]}:{gl.label}")
                B.tile(f"O[{pos}|{gl.label if gl else '-'}]", sides)

    # corners
    for k in ("KNW", "KSE"):
        ds = [d for d in SQUARE_DIRS if CORNER[d] == k]
        infos = {}
        for d in ds:
            infos[d] = [("arm", None), ("out", None)] + [("out", x) for x in glues[d]]
        for i0 in infos[ds[0]]:
            for i1 in infos[ds[1]]:
                sides = {}
                for d, (kind, gl) in zip(ds, (i0, i1)):
                    toward = _sides_between(k, PRIMARY[d])
                    if kind == "arm":
                        sides[toward] = L(f"ca:{d}")
                    elif gl is None:
                        sides[toward] = L(f"ci:{d}:-")
                    else:
                        sides[toward] = L(f"ci:{d}:{gl.label}")
                        sides[INTERFACE[d]["b"]] = L(f"b:{d}:{gl.label}")
                        sides[INTERFACE[d]["c"]] = L(f"c:{d}:{gl.label}")
                tag = "|".join(f"{d}:{kind}:{gl.label if gl else '-'}" for d, (kind, gl) in zip(ds, (i0, i1)))
                B.tile(f"K[{k}|{tag}]", sides)

    seed_cells = _compile_seed(B, phi)
    tiles = list(B.tiles.values())
    index = {t.name: i for i, t in enumerate(tiles)}
    seed = Assembly(HEX, {p: index[n] for p, n in seed_cells.items()})
    return TamSystem(HEX, tiles, tau, seed), HexRepresentationMap(phi)


def _output_sides(B: _Builder, t: TileType, pos: str) -> dict:
    """External labels a finished block of tile t exposes at cell pos."""
    sides = {}
    for d in SQUARE_DIRS:
        gl = t.glue(d)
        if gl.strength <= 0:
            continue
        if pos == PRIMARY[d]:
            sides[INTERFACE[d]["a"]] = B.label(f"a:{AXIS[d]}:{gl.label}")
        if pos == CORNER[d]:
            sides[INTERFACE[d]["b"]] = B.label(f"b:{d}:{gl.label}")
            sides[INTERFACE[d]["c"]] = B.label(f"c:{d}:{gl.label}")
    return sides


def _compile_seed(B: _Builder, phi: dict) -> dict:
    src = B.src
    cells = sorted(src.seed.cells.items())
    single = len(cells) == 1
    at = dict(cells)
    out = {}
    # bonded pairs of seed squares get unique labels on every shared hex edge
    cross = {}
    for (p, t) in cells:
        for d in ("N", "E"):
            q = _add(p, BLOCK[d])
            if q in at:
                a, b = src.glue(t, d), src.glue(at[q], OPPOSITE[d])
                if a.strength > 0 and a.label == b.label:
                    cross[(p, q)] = True
    for i, (p, t) in enumerate(cells):
        tt = src.tiles[t]
        base = block_center(p)
        for pos, off in POS.items():
            sides = _output_sides(B, tt, pos)
            for d, q in OFFSETS[HEX].items():
                nb = _add(off, q)
                if nb in AT:
                    a, b = sorted((pos, AT[nb]))
                    sides[d] = B.label(f"sd{i}:{a}:{b}")
            h = _add(base, off)
            for d, q in OFFSETS[HEX].items():
                nh = _add(h, q)
                nb, _ = block_of(nh)
                for key in ((p, nb), (nb, p)):
                    if key in cross:
                        e = tuple(sorted((h, nh)))
                        sides[d] = B.label(f"sx:{e[0][0]},{e[0][1]}:{e[1][0]},{e[1][1]}")
            name = f"S{i}[{pos}]"
            B.tile(name, sides)
            if pos == "C":
                phi[name] = tt.name
            if not single or pos in ("C", "RSW", "RS"):
                out[h] = name
    return out


def hex_to_square_assembly(a: Assembly, system: TamSystem, m: HexRepresentationMap, src: TamSystem):
    """Square assembly represented by a, or None when a is not representable."""
    centers = {}
    for h, t in a.cells.items():
        name = system.tiles[t].name
        if name in m.phi:
            b, role = block_of(h)
            if role != "Center" or m.phi[name] not in src.index:
                return None
            centers[b] = src.index[m.phi[name]]
    if not centers:
        return None
    cpos = [block_center(b) for b in centers]
    for h in a.cells:
        if min(hex_distance(h, c) for c in cpos) > m.c:
            return None
    return Assembly(SQUARE, centers)


def glue_audit(system: TamSystem) -> list:
    """Violations of: no glue >= tau, and non-center-adjacent glues equal ceil(tau/2)."""
    tau = system.temperature
    g = (tau + 1) // 2
    bad = []
    for t in system.tiles:
        for d, gl in t.glues.items():
            if gl.strength >= tau:
                bad.append((t.name, d, gl, "strength >= tau"))
            elif gl.strength > 0 and gl.strength != g and not _borders_center(gl.label):
                bad.append((t.name, d, gl, "non-center glue strength"))
    return bad


def _borders_center(label: str) -> bool:
    return label.startswith(("in:", "in2:", "out:"))
