"""Plane tiling systems on the square and hex lattices, conversion to a single
polygon tile, finite patch search and patch-set comparison."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .tam import ModelError

SQUARE_DIRS = ((0, 1), (-1, 0), (0, -1), (1, 0))                   # N W S E, counterclockwise
HEX_DIRS = ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, 0), (1, 1))    # N NW SW S SE NE
DIRS = {"square": SQUARE_DIRS, "hex": HEX_DIRS}
ROTATE, REFLECT = "rotate", "reflect"
MATCH, COMPLEMENT = "match", "complement"


class Timeout:
    """Search budget exhausted (distinct from None, which means no patch exists)."""

    def __bool__(self):
        return False

    def __repr__(self):
        return "Timeout"


TIMEOUT = Timeout()


@dataclass
class PlaneTilingSystem:
    lattice: str
    tiles: list                   # tuple of side colors per tile, counterclockwise from N
    transforms: frozenset = frozenset()
    constraint: str = MATCH
    complement: dict = field(default_factory=dict)
    mirror: dict = field(default_factory=dict)   # color seen on a reflected tile
    step: int = 1                 # sides per lattice direction (>1 for converted tiles)

    def __post_init__(self):
        if self.lattice not in DIRS:
            raise ModelError(f"unsupported lattice {self.lattice!r}")
        self.tiles = [tuple(t) for t in self.tiles]
        self.transforms = frozenset(self.transforms)
        if not self.transforms <= {ROTATE, REFLECT}:
            raise ModelError(f"unknown transforms {sorted(self.transforms - {ROTATE, REFLECT})}")
        if self.constraint not in (MATCH, COMPLEMENT):
            raise ModelError(f"unknown constraint {self.constraint!r}")
        n = self.k * self.step
        if not self.tiles or any(len(t) != n for t in self.tiles):
            raise ModelError(f"every tile needs {n} sides")
        if self.constraint == COMPLEMENT:
            for c in self.colors():
                if c not in self.complement or self.complement.get(self.complement[c]) != c:
                    raise ModelError(f"complement is not an involution on {c!r}")

    @property
    def k(self) -> int:
        return len(DIRS[self.lattice])

    def colors(self) -> set:
        return {c for t in self.tiles for c in t}

    def partner(self, c):
        return self.complement[c] if self.constraint == COMPLEMENT else c

    def orientations(self) -> list:
        n = self.k * self.step
        rots = range(n) if ROTATE in self.transforms else range(0, n, self.k * self.step)
        flips = (False, True) if REFLECT in self.transforms else (False,)
        return [(r, f) for r in rots for f in flips]

    def placements(self) -> list:
        return [(i, r, f) for i in range(len(self.tiles)) for r, f in self.orientations()]

    def appearance(self, placement) -> tuple:
        return tuple(self.shown(placement, p) for p in range(self.k))

    def representatives(self) -> dict:
        """appearance -> first placement showing it; placements that look alike
        are one choice for patch counting."""
        out = {}
        for a in self.placements():
            out.setdefault(self.appearance(a), a)
        return out

    def shown(self, placement, pos: int):
        """Color of the side facing lattice direction pos."""
        i, r, f = placement
        n = self.k * self.step
        s = (r - pos * self.step) % n if f else (r + pos * self.step) % n
        c = self.tiles[i][s]
        return self.mirror.get(c, c) if f else c

    def fits(self, a, b, pos: int) -> bool:
        """b sits next to a in direction pos."""
        return self.shown(b, (pos + self.k // 2) % self.k) == self.partner(self.shown(a, pos))

    def to_json(self) -> dict:
        doc = {"lattice": self.lattice, "tiles": [list(t) for t in self.tiles],
               "transforms": sorted(self.transforms), "constraint": self.constraint}
        for key, m in (("complement", self.complement), ("mirror", self.mirror)):
            if m:
                items = sorted(m.items())
                doc[key] = dict(items) if all(isinstance(k, str) for k in m) else [list(kv) for kv in items]
        if self.step != 1:
            doc["step"] = self.step
        return doc

    @classmethod
    def from_json(cls, doc) -> "PlaneTilingSystem":
        def color(c):
            return tuple(c) if isinstance(c, list) else c

        def cmap(m):
            return {color(k): color(v) for k, v in m} if isinstance(m, list) else {k: color(v) for k, v in m.items()}
        return cls(doc["lattice"], [tuple(color(c) for c in t) for t in doc["tiles"]],
                   frozenset(doc.get("transforms", ())), doc.get("constraint", MATCH),
                   cmap(doc.get("complement", {})), cmap(doc.get("mirror", {})), int(doc.get("step", 1)))


# -- conversion --------------------------------------------------------------------------

@dataclass
class MonotileSystem:
    system: PlaneTilingSystem       # one tile, rotate+reflect, complement
    source: PlaneTilingSystem

    @property
    def n(self) -> int:
        return len(self.system.tiles[0])

    def encode(self, placement):
        """Source placement (tile, rot, flip) -> monotile placement."""
        i, r, f = placement
        return (0, (i + r * len(self.source.tiles)) % self.n, f)

    def decode(self, placement):
        _, rot, f = placement
        c = len(self.source.tiles)
        return (rot % c, rot // c, f)


def convert_to_monotile(src: PlaneTilingSystem) -> MonotileSystem:
    """One polygon with k*|tiles| sides; side i + p*|tiles| carries side p of tile i.

    Families without transforms add a direction marker and a handedness marker to
    every side so copies can only agree on one global frame; the rotate+reflect
    families need neither.
    """
    if src.step != 1:
        raise ModelError("source must be a plain square or hex tile set")
    if src.transforms not in (frozenset(), frozenset({ROTATE, REFLECT})):
        raise ModelError("family must allow no transforms or both rotation and reflection")
    k, c = src.k, len(src.tiles)
    marked = not src.transforms
    sides = [None] * (k * c)
    for i, t in enumerate(src.tiles):
        for p, col in enumerate(t):
            sides[i + p * c] = (col, p, 0) if marked else col
    colors = src.colors() | set(src.complement) | set(src.mirror)
    comp, mirror = {}, {}
    for col in colors:
        mc = src.mirror.get(col, col)
        pc = src.partner(col)
        if marked:
            for p in range(k):
                for h in (0, 1):
                    comp[(col, p, h)] = (pc, (p + k // 2) % k, h)
                    mirror[(col, p, h)] = (mc, (-p) % k, 1 - h)
        else:
            comp[col] = pc
            if mc != col:
                mirror[col] = mc
    mono = PlaneTilingSystem(src.lattice, [tuple(sides)], frozenset({ROTATE, REFLECT}), COMPLEMENT,
                             comp, mirror, step=c)
    return MonotileSystem(mono, src)


# -- patches -------------------------------------------------------------------------------

def patch_cells(m: int) -> list:
    """Row-major cells of the m x m patch (a rhombus on the hex lattice)."""
    return [(x, y) for y in range(m) for x in range(m)]


def valid_patch(sys: PlaneTilingSystem, patch: dict) -> bool:
    dirs = DIRS[sys.lattice]
    for (x, y), a in patch.items():
        for pos, (dx, dy) in enumerate(dirs):
            b = patch.get((x + dx, y + dy))
            if b is not None and not sys.fits(a, b, pos):
                return False
    return True


def _candidates(sys, cells, patch, cell, opts):
    dirs = DIRS[sys.lattice]
    out = []
    for a in opts:
        ok = True
        for pos, (dx, dy) in enumerate(dirs):
            b = patch.get((cell[0] + dx, cell[1] + dy))
            if b is not None and not sys.fits(a, b, pos):
                ok = False
                break
        if ok:
            out.append(a)
    return out


def patch_tile(sys, m: int, timeout: float = 60.0, seed: int = 0):
    """Backtracking in row-major order; candidates are tried in an order fixed by
    seed, preferring placements that leave the most options to the next cell."""
    if isinstance(sys, MonotileSystem):
        sys = sys.system
    if m < 1:
        raise ModelError("m must be positive")
    cells = patch_cells(m)
    opts = sys.placements()
    random.Random(seed).shuffle(opts)
    deadline = time.monotonic() + timeout
    patch = {}
    stack = [None] * len(cells)
    idx = 0
    while True:
        if idx == len(cells):
            return dict(patch)
        if time.monotonic() > deadline:
            return TIMEOUT
        cell = cells[idx]
        if stack[idx] is None:
            stack[idx] = _candidates(sys, cells, patch, cell, opts)
            if idx + 1 < len(cells):
                nxt = cells[idx + 1]
                stack[idx].sort(key=lambda a: -_lookahead(sys, patch, cell, a, nxt, opts))
        if not stack[idx]:
            stack[idx] = None
            patch.pop(cell, None)
            idx -= 1
            if idx < 0:
                return None
            patch.pop(cells[idx], None)
            continue
        patch[cell] = stack[idx].pop(0)
        idx += 1


def _lookahead(sys, patch, cell, a, nxt, opts) -> int:
    patch[cell] = a
    try:
        return len(_candidates(sys, None, patch, nxt, opts))
    finally:
        del patch[cell]


def enumerate_patches(sys: PlaneTilingSystem, m: int, limit: int = 200000):
    """All valid m x m patches as tuples in row-major order, one placement per
    appearance; returns (patches, complete)."""
    cells = patch_cells(m)
    opts = list(sys.representatives().values())
    out = []
    patch = {}

    def rec(i):
        if len(out) >= limit:
            return False
        if i == len(cells):
            out.append(tuple(patch[c] for c in cells))
            return True
        for a in _candidates(sys, cells, patch, cells[i], opts):
            patch[cells[i]] = a
            if not rec(i + 1):
                del patch[cells[i]]
                return False
            del patch[cells[i]]
        return True

    complete = rec(0)
    return out, complete


@dataclass
class BijectionReport:
    ok: bool
    src_patches: int
    mono_patches: int
    frame_patches: int
    complete: bool = True
    reason: str = ""

    def __bool__(self):
        return self.ok


def _frame(mono: MonotileSystem, patch) -> tuple | None:
    """Common (rot, flip) frame of a source family without transforms."""
    frames = {mono.decode(a)[1:] for a in patch}
    return frames.pop() if len(frames) == 1 else None


def verify_patch_bijection(src: PlaneTilingSystem, mono: MonotileSystem, m: int,
                           limit: int = 200000) -> BijectionReport:
    """Source patches map injectively onto the monotile patches in the standard
    frame, and every monotile patch is a globally transformed image of such a
    patch (for families without transforms) or itself one (otherwise)."""
    sp, c1 = enumerate_patches(src, m, limit)
    mp, c2 = enumerate_patches(mono.system, m, limit)
    if not (c1 and c2):
        return BijectionReport(False, len(sp), len(mp), 0, False, "state space overflow")
    reps = mono.system.representatives()
    image = {tuple(reps[mono.system.appearance(mono.encode(a))] for a in p) for p in sp}
    if len(image) != len(sp):
        return BijectionReport(False, len(sp), len(mp), 0, reason="encoding is not injective")
    mset = set(mp)
    if not image <= mset:
        return BijectionReport(False, len(sp), len(mp), 0, reason="a source patch has no monotile image")
    if src.transforms:
        ok = image == mset
        return BijectionReport(ok, len(sp), len(mp), len(mset), reason="" if ok else "extra monotile patches")
    std = 0
    for p in mp:
        fr = _frame(mono, p)
        if fr is None:
            return BijectionReport(False, len(sp), len(mp), std, reason="monotile patch mixes frames")
        if fr == (0, False):
            std += 1
            if p not in image:
                return BijectionReport(False, len(sp), len(mp), std, reason="standard-frame patch without source")
    ok = std == len(sp)
    return BijectionReport(ok, len(sp), len(mp), std, reason="" if ok else "frame count mismatch")


def drop_color(mono: MonotileSystem, side: int) -> MonotileSystem:
    """Mutant: side `side` takes the color of the next side."""
    t = list(mono.system.tiles[0])
    t[side] = t[(side + 1) % len(t)]
    s = mono.system
    return MonotileSystem(PlaneTilingSystem(s.lattice, [tuple(t)], s.transforms, s.constraint,
                                            s.complement, s.mirror, s.step), mono.source)


# -- corpus ---------------------------------------------------------------------------------

def blank() -> PlaneTilingSystem:
    return PlaneTilingSystem("square", [("0",) * 4], {ROTATE, REFLECT}, MATCH)


def checkerboard() -> PlaneTilingSystem:
    """Two Wang tiles that must alternate in both directions."""
    return PlaneTilingSystem("square", [("a", "b", "a", "b"), ("b", "a", "b", "a")], frozenset(), MATCH)


def hex_complement() -> PlaneTilingSystem:
    """Two hex tiles; lines along the NW axis keep one tile type."""
    comp = {"a": "A", "A": "a", "b": "B", "B": "b"}
    return PlaneTilingSystem("hex", [("a", "b", "a", "A", "B", "A"), ("a", "B", "a", "A", "b", "A")],
                             frozenset(), COMPLEMENT, comp)


def contradictory() -> PlaneTilingSystem:
    return PlaneTilingSystem("square", [("x", "0", "y", "0")], frozenset(), MATCH)


def _arrow_comp(label: str) -> str:
    marks, parity = label.split("|")
    swap = {"+": "-", "-": "+", ".": "."}
    return "".join(swap[ch] for ch in reversed(marks)) + "|" + {"a": "b", "b": "a"}[parity]


def _arrow_mirror(label: str) -> str:
    marks, parity = label.split("|")
    return marks[::-1] + "|" + parity


def robinson() -> PlaneTilingSystem:
    """Ten arrow tiles in the rotate+reflect, complement family: five basic tiles
    (one cross, four arms) in two parity versions.

    A side label is three arrow slots listed counterclockwise along the side
    (near start, middle, near end; + head, - tail, . none) followed by a parity
    mark.  Complementary sides carry reversed, head/tail swapped slots and the
    opposite parity mark.
    """
    # sides N, W, S, E; N runs from the NE corner to the NW corner
    basic = [
        # cross: through arrows east and north, side arrows along N (west) and E (south)
        ("-+.", "+-.", ".-+", ".+."),
        # arms with a northward principal arrow and side arrows near W and/or E
        (".+.", ".--", ".-.", ".+."),
        (".++", "+..", "--.", "..."),
        ("++.", "...", ".--", "..+"),
        ("+++", "..-", "---", "+.."),
    ]
    tiles = []
    for parity in "ab":
        for t in basic:
            tiles.append(tuple(f"{s}|{parity}" for s in t))
    labels = {c for t in tiles for c in t}
    labels |= {_arrow_comp(c) for c in labels}
    labels |= {_arrow_mirror(c) for c in labels}
    labels |= {_arrow_comp(c) for c in labels}
    comp = {c: _arrow_comp(c) for c in labels}
    mirror = {c: _arrow_mirror(c) for c in labels if _arrow_mirror(c) != c}
    return PlaneTilingSystem("square", tiles, {ROTATE, REFLECT}, COMPLEMENT, comp, mirror)


def arrow_sanity(sys: PlaneTilingSystem, patch: dict) -> bool:
    """Every arrow head on a shared side meets a tail on the neighbor."""
    dirs = DIRS[sys.lattice]
    for (x, y), a in patch.items():
        for pos, (dx, dy) in enumerate(dirs):
            b = patch.get((x + dx, y + dy))
            if b is None:
                continue
            mine = sys.shown(a, pos).split("|")[0]
            theirs = sys.shown(b, (pos + 2) % 4).split("|")[0][::-1]
            for u, v in zip(mine, theirs):
                if (u, v) not in (("+", "-"), ("-", "+"), (".", ".")):
                    return False
    return True


CORPUS = {"blank": blank, "checkerboard": checkerboard, "hex-complement": hex_complement}
