"""Translation-only slider tiles that simulate fat-seed pyramid systems.

Square tiles are viewed rotated by 45 degrees: the square N, E, S, W faces
become the slider's NE, SE, SW, NW pads.  A square tile at (u, v) of type t
is a slider at x = w(u + v), y = (v - u) * l/2 - X(t).

Slider outline (integer units, M = X of the last tile, l = 4M, w = 13):
body [0,13) x [0,3M+1) minus a notch (column 6 rows [0,2M+1), column 7 rows
[1,2M+1)), a peg [6,7) x [3M+1,5M+1) and a hook at (7, 4M).  Glues are unit
vertical segments: SW/NW on x = 0, SE/NE on x = 13, the south pad on the
notch wall x = 6 (facing east) and the north pad on the peg's west face.
The hook meets the notch's base cell exactly when the north and south pads
would align perfectly.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import explore
from .tam import SQUARE, Assembly, Glue, ModelError, TamSystem, TileType, attachments

W = 13
NEUTRAL = "a"
DEPTH = 4                      # seed layers 0 .. -DEPTH


# -- Sidon-like sets ---------------------------------------------------------------

def sidon(k: int) -> list:
    """Greedy x_1 < ... < x_k with all 3-element multiset sums distinct."""
    if k < 1:
        raise ModelError("k must be positive")
    xs = [1]
    while len(xs) < k:
        s3 = {a + b + c for a, b, c in itertools.combinations_with_replacement(xs, 3)}
        s2 = {a + b for a, b in itertools.combinations_with_replacement(xs, 2)}
        bad = set()
        for s in s3:
            bad.update(s - t for t in s2)
            bad.update((s - c) // 2 for c in xs if (s - c) % 2 == 0)
            if s % 3 == 0:
                bad.add(s // 3)
        x = xs[-1] + 1
        while x in bad:
            x += 1
        xs.append(x)
    return xs


def three_sums_distinct(xs) -> bool:
    sums = [sum(c) for c in itertools.combinations_with_replacement(xs, 3)]
    return len(sums) == len(set(sums))


# -- pyramid systems -------------------------------------------------------------------

@dataclass
class PyramidSystem:
    system: TamSystem
    width: int
    rules: dict | None = None
    initial: tuple | None = None

    @property
    def anchor(self):
        """Westmost, then southmost, seed position in the slider plane."""
        return min(self.system.seed.cells, key=lambda p: (p[0] + p[1], p[1] - p[0]))


def seed_layout(n: int) -> dict:
    """(u, v) -> depth for the fat seed of width n (5n + 2 cells, min cut 3)."""
    out = {}
    for c in range(-1, 2 * n):
        top = 0 if c % 2 == 0 else 1
        bottom = DEPTH if c % 2 == 0 else DEPTH - 1
        for k in range(top, bottom + 1, 2):
            a = (c + k) // 2
            out[(a, a - k)] = k
    return out


def _lab(v, layer: int, col: int) -> str:
    return f"{v}|{layer % 2}|{col % 2}"


def ca_to_pyramid(rules: dict, initial) -> PyramidSystem:
    """rules: (left, right) -> next value.  Cell a of layer j sits at (a, a + j)."""
    initial = tuple(str(v) for v in initial)
    n = len(initial)
    if n < 1:
        raise ModelError("initial row is empty")
    rules = {(str(l), str(r)): str(o) for (l, r), o in rules.items()}
    alphabet = set(initial) | set(rules.values())
    for l, r in itertools.product(sorted(alphabet), repeat=2):
        if (l, r) not in rules:
            raise ModelError(f"rule table is partial: no entry for ({l}, {r})")
    for v in alphabet:
        if "|" in v or ":" in v:
            raise ModelError(f"state {v!r} contains a reserved character")
    tiles, by_name, cells = [], {}, {}

    def add(name, glues):
        if name not in by_name:
            by_name[name] = len(tiles)
            tiles.append(TileType(name, glues))
        elif tiles[by_name[name]].glues != glues:
            raise ModelError(f"inconsistent seed tile {name}")
        return by_name[name]

    layout = seed_layout(n)
    for (u, v), k in sorted(layout.items()):
        g = {}
        if (u, v + 1) in layout:
            g["N"] = Glue(f"s{k}N", 1)
        if (u, v - 1) in layout:
            g["S"] = Glue(f"s{k + 1}N", 1)
        if (u + 1, v) in layout:
            g["E"] = Glue(f"s{k + 1}W", 1)
        if (u - 1, v) in layout:
            g["W"] = Glue(f"s{k}W", 1)
        if k == 0:
            g["N"] = g["W"] = Glue(_lab(initial[u], 0, u), 1)
            name = f"seed0:{initial[u]}:{u % 2}"
        else:
            name = f"seed{k}:" + "".join(d for d in "NESW" if d in g) + f":{u % 2}"
        cells[(u, v)] = add(name, g)
    for l, r in itertools.product(sorted(alphabet), repeat=2):
        for lp, cp in itertools.product((0, 1), repeat=2):
            o = rules[(l, r)]
            add(f"ca:{l},{r}:{lp}{cp}", {
                "S": Glue(_lab(l, lp + 1, cp), 1), "E": Glue(_lab(r, lp + 1, cp + 1), 1),
                "N": Glue(_lab(o, lp, cp), 1), "W": Glue(_lab(o, lp, cp), 1)})
    sys = TamSystem(SQUARE, tiles, 2, Assembly(SQUARE, cells))
    return PyramidSystem(sys, n, rules, initial)


def ca_trace(rules: dict, initial, steps: int) -> list:
    rows = [tuple(str(v) for v in initial)]
    rules = {(str(l), str(r)): str(o) for (l, r), o in rules.items()}
    for _ in range(steps):
        row = rows[-1]
        rows.append(tuple(rules[(row[i], row[i + 1])] for i in range(len(row) - 1)))
    return rows


def read_layers(cells: dict, system: TamSystem) -> list:
    """Values per layer of a pyramid assembly, read from the N glues."""
    rows = {}
    for (u, v), t in cells.items():
        j = v - u
        if j < 0:
            continue
        g = system.tiles[t].glue("N")
        rows.setdefault(j, {})[u] = g.label.split("|")[0]
    return [tuple(r[a] for a in sorted(r)) for _, r in sorted(rows.items())]


def pyramid_explore(p: PyramidSystem, max_tiles=None):
    s = p.system
    return explore(SQUARE, s.seed.cells, lambda cells, q: _attach(s, cells, q), max_tiles, record_edges=True)


def _attach(s, cells, q):
    from .tam import attachments_at
    return attachments_at(s, cells, q)


def validate_pyramid(p: PyramidSystem, max_tiles=None) -> None:
    """Raise ModelError naming the first violated pyramid-system clause."""
    s = p.system
    if s.lattice != SQUARE or s.temperature != 2:
        raise ModelError("pyramid systems are square systems at temperature 2")
    for t in s.tiles:
        for g in t.glues.values():
            if g.strength not in (0, 1):
                raise ModelError(f"tile {t.name}: glue strength {g.strength} is not 1")
    cells = s.seed.cells
    for (u, v), t in cells.items():
        for d, q in (("N", (u, v + 1)), ("E", (u + 1, v))):
            if q in cells:
                a, b = s.glue(t, d), s.glue(cells[q], "S" if d == "N" else "W")
                if a.strength == 0 or a != b:
                    raise ModelError(f"seed tiles at {(u, v)} and {q} do not share a glue")
    top = max(v - u for u, v in cells)
    ex = pyramid_explore(p, max_tiles)
    for st in ex.states:
        a = Assembly(SQUARE, dict(st))
        for (u, v), t in attachments(s, a):
            if v - u <= top:
                raise ModelError(f"a tile attaches at {(u, v)}, below the top of the seed")
            group = [t] + [a.cells[q] for q in ((u, v - 1), (u + 1, v), (u + 1, v - 1)) if q in a.cells]
            if len(set(group)) != len(group):
                raise ModelError(f"not double-checkerboarded: tile {s.tiles[t].name} at {(u, v)}")


# -- slider tile ------------------------------------------------------------------------

@dataclass
class SliderTile:
    names: list                 # tile names in X order
    xs: list                    # X values
    glues: tuple                # (x, y, facing, label) unit vertical segments
    rects: tuple                # (x0, y0, x1, y1)
    w: int = W
    _pairs: dict | None = field(default=None, repr=False)
    _overlap: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.xs[-1]

    @property
    def ell(self) -> int:
        return 4 * self.m

    def pair_offsets(self) -> dict:
        """Offset of a new slider relative to a placed one -> glue alignments."""
        if self._pairs is None:
            by = {}
            for x, y, f, lab in self.glues:
                by.setdefault((lab, f), []).append((x, y))
            out = Counter()
            for (lab, f), mine in by.items():
                other = by.get((lab, "W" if f == "E" else "E"), ())
                for (x1, y1) in mine:
                    for (x2, y2) in other:
                        out[(x2 - x1, y2 - y1)] += 1
            self._pairs = dict(out)
        return self._pairs

    def overlaps(self, dx: int, dy: int) -> bool:
        """Whether the slider and its copy shifted by (dx, dy) share interior."""
        key = (dx, dy)
        r = self._overlap.get(key)
        if r is None:
            r = any(a[0] < b[2] + dx and b[0] + dx < a[2] and a[1] < b[3] + dy and b[1] + dy < a[3]
                    for a in self.rects for b in self.rects)
            self._overlap[key] = r
        return r

    @property
    def height(self) -> int:
        return max(r[3] for r in self.rects)

    def to_json(self) -> dict:
        return {"formatVersion": 1, "w": self.w, "ell": self.ell, "m": self.m,
                "tiles": [{"name": n, "x": x} for n, x in zip(self.names, self.xs)],
                "rects": [list(r) for r in self.rects],
                "glues": [{"x": x, "y": y, "facing": f, "label": lab} for x, y, f, lab in self.glues]}

    @classmethod
    def from_json(cls, doc) -> "SliderTile":
        return cls([t["name"] for t in doc["tiles"]], [int(t["x"]) for t in doc["tiles"]],
                   tuple((g["x"], g["y"], g["facing"], g["label"]) for g in doc["glues"]),
                   tuple(tuple(r) for r in doc["rects"]), int(doc.get("w", W)))


def slider_rects(m: int) -> tuple:
    return ((0, 0, 6, 3 * m + 1), (8, 0, 13, 3 * m + 1), (6, 2 * m + 1, 8, 3 * m + 1),
            (7, 0, 8, 1), (6, 3 * m + 1, 7, 5 * m + 1), (7, 4 * m, 8, 4 * m + 1))


def build_slider(p: PyramidSystem, check: bool = True) -> SliderTile:
    if check:
        validate_pyramid(p)
    s = p.system
    first = s.seed.cells[p.anchor]
    order = [first] + [i for i in range(len(s.tiles)) if i != first]
    xs = sidon(len(order))
    m = xs[-1]
    glues = []
    for t, x in zip(order, xs):
        g = s.tiles[t].glue
        for d, gx, gy, f, axis in (("S", 0, x, "W", "v"), ("W", 0, 2 * m + x, "W", "h"),
                                   ("E", W, x, "E", "h"), ("N", W, 2 * m + x, "E", "v")):
            if g(d).strength:
                glues.append((gx, gy, f, f"{axis}:{g(d).label}"))
        glues.append((6, x, "E", NEUTRAL))
        glues.append((6, 4 * m + x, "W", NEUTRAL))
    return SliderTile([s.tiles[t].name for t in order], xs, tuple(glues), slider_rects(m))


# -- mapping -----------------------------------------------------------------------------

def slider_position(u: int, v: int, x_t: int, s: SliderTile):
    return (s.w * (u + v), (v - u) * (s.ell // 2) - x_t)


def slider_seed(p: PyramidSystem, s: SliderTile) -> frozenset:
    """Slider placements for the pyramid seed, anchored at (0, -x_1)."""
    names = {n: i for i, n in enumerate(s.names)}
    u0, v0 = p.anchor
    out = set()
    for (u, v), t in p.system.seed.cells.items():
        x, y = slider_position(u - u0, v - v0, s.xs[names[p.system.tiles[t].name]], s)
        out.add((x, y))
    return frozenset(out)


def map_slider_assembly(placements, s: SliderTile, normalize: bool = True) -> dict | None:
    """Square cells {(u, v): tile name} relative to the anchor slider, or None."""
    pts = list(placements)
    if not pts:
        return {}
    if normalize:
        x0, y0 = min(pts, key=lambda p: (p[0], p[1]))
        pts = [(x - x0, y - y0 - s.xs[0]) for x, y in pts]
    w, ell = s.w, s.ell
    xi = {x: i for i, x in enumerate(s.xs)}
    out = {}
    for x, y in pts:
        if x % (2 * w) == 0:
            a, base = x // (2 * w), 0
        elif x % (2 * w) == w:
            a, base = (x - w) // (2 * w), ell // 2
        else:
            return None
        t = (base - y) % ell
        if t not in xi:
            return None
        b = (y + t - base) // ell
        key = (a - b, a + b + (1 if base else 0))
        if key in out:
            return None
        out[key] = s.names[xi[t]]
    return out


# -- simulation ----------------------------------------------------------------------------

TAU = 3


def slider_strengths(s: SliderTile, state) -> Counter:
    """Alignment counts for every translation with at least one glue alignment."""
    cnt = Counter()
    pairs = s.pair_offsets()
    for (px, py) in state:
        for (dx, dy), k in pairs.items():
            cnt[(px + dx, py + dy)] += k
    return cnt


def collides(s: SliderTile, state, t) -> bool:
    h = s.height
    return any(abs(px - t[0]) < s.w and abs(py - t[1]) < h and s.overlaps(t[0] - px, t[1] - py)
               for px, py in state)


def slider_attachments(s: SliderTile, state) -> list:
    out = []
    for t, k in slider_strengths(s, state).items():
        if k >= TAU and t not in state and not collides(s, state, t):
            out.append(t)
    return sorted(out)


def strength_at(s: SliderTile, state, t) -> int:
    """Direct count of glue alignments of a slider at t against the placed ones."""
    index = {}
    for px, py in state:
        for x, y, f, lab in s.glues:
            index.setdefault((px + x, py + y, f), []).append(lab)
    k = 0
    for x, y, f, lab in s.glues:
        k += index.get((t[0] + x, t[1] + y, "W" if f == "E" else "E"), []).count(lab)
    return k


@dataclass
class SliderRun:
    seed: frozenset
    states: set
    edges: dict
    attach: dict
    open_states: set

    @property
    def truncated(self) -> bool:
        return bool(self.open_states)

    def terminal(self) -> list:
        return [st for st in self.states if not self.attach[st] and st not in self.open_states]


def slider_simulate(s: SliderTile, seed, max_tiles: int | None = None) -> SliderRun:
    seed = frozenset(seed)
    run = SliderRun(seed, {seed}, {}, {}, set())
    frontier = [seed]
    while frontier:
        nxt = []
        for st in frontier:
            att = slider_attachments(s, st)
            run.attach[st] = att
            kids = []
            for t in att:
                if max_tiles is not None and len(st) >= max_tiles:
                    run.open_states.add(st)
                    break
                k = st | {t}
                kids.append(k)
                if k not in run.states:
                    run.states.add(k)
                    nxt.append(k)
            run.edges[st] = kids
        frontier = nxt
    return run


def misalignment_scan(s: SliderTile, run: SliderRun, p: PyramidSystem) -> list:
    """Attachments anywhere (every shift with any glue alignment is scored)
    whose result does not map to a one-step extension in the pyramid system."""
    spurious = []
    u0, v0 = p.anchor
    sq = p.system
    names = {t.name: i for i, t in enumerate(sq.tiles)}
    from .tam import attachments_at
    for st in run.states:
        base = map_slider_assembly(st, s)
        if base is None:
            spurious.append((st, None))
            continue
        cells = {(u + u0, v + v0): names[n] for (u, v), n in base.items()}
        for t in run.attach.get(st, ()):
            m = map_slider_assembly(st | {t}, s)
            ok = m is not None and len(m) == len(base) + 1
            if ok:
                (q, n), = [(k, v) for k, v in m.items() if k not in base]
                q = (q[0] + u0, q[1] + v0)
                ok = names[n] in attachments_at(sq, cells, q)
            if not ok:
                spurious.append((st, t))
    return spurious


def shift_scan(s: SliderTile, state, x: int, y0: int, radius: int) -> list:
    """Every y in [y0 - radius, y0 + radius] at column x where a slider would
    attach (>= 3 alignments, no overlap)."""
    pairs = s.pair_offsets()
    cnt = Counter()
    for px, py in state:
        for (dx, dy), k in pairs.items():
            if px + dx == x and abs(py + dy - y0) <= radius:
                cnt[py + dy] += k
    return sorted(y for y, k in cnt.items()
                  if k >= TAU and (x, y) not in state and not collides(s, state, (x, y)))


# -- planarity probe -------------------------------------------------------------------------

DIRECTIONS = ((0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, 1), (1, -1), (-1, -1))


def _open_interval(lo, hi, v):
    """Parameters s with lo < s*v < hi, as (a, b) or None (empty) or 'all'."""
    if v == 0:
        return "all" if lo < 0 < hi else None
    a, b = Fraction(lo, v), Fraction(hi, v)
    return (min(a, b), max(a, b))


def approach_free(s: SliderTile, state, t, d) -> bool:
    """Whether a slider can slide in from infinity along -d to t without overlap."""
    for px, py in state:
        for a in s.rects:
            ax0, ay0, ax1, ay1 = a[0] + t[0], a[1] + t[1], a[2] + t[0], a[3] + t[1]
            for b in s.rects:
                bx0, by0, bx1, by1 = b[0] + px, b[1] + py, b[2] + px, b[3] + py
                ix = _open_interval(bx0 - ax1, bx1 - ax0, d[0])
                iy = _open_interval(by0 - ay1, by1 - ay0, d[1])
                if ix is None or iy is None:
                    continue
                lo, hi = Fraction(0), None
                for iv in (ix, iy):
                    if iv != "all":
                        lo = max(lo, iv[0])
                        hi = iv[1] if hi is None else min(hi, iv[1])
                if hi is None or lo < hi:
                    return False
    return True


def planarity_probe(s: SliderTile, run: SliderRun) -> tuple:
    """(attachments with a straight-line approach, total, blocked examples)."""
    good = total = 0
    blocked = []
    for st, att in run.attach.items():
        for t in att:
            total += 1
            if any(approach_free(s, st, t, d) for d in DIRECTIONS):
                good += 1
            elif len(blocked) < 5:
                blocked.append((st, t))
    return good, total, blocked
