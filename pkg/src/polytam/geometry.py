"""Side profiles: bump/dent height functions, subside glues, classification.

A side of length L is traversed counterclockwise around its tile and described
by a piecewise-constant height function on [0, L]: +k is a bump of k units of
height, -k a dent.  Two sides meet with one of them reversed, so the contact
is measured by h_a(t) + h_b(L - t): identically zero is Matching, never
positive (but not identically zero) is Permitted, positive somewhere is
Forbidden.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache

from .tam import Glue

MATCHING, PERMITTED, FORBIDDEN = "Matching", "Permitted", "Forbidden"
CCW, CW, MID = "CCW", "CW", "Mid"
IN, OUT = "IN", "OUT"

D = F(1, 10)
W = D / 4


@dataclass(frozen=True)
class GeometryParams:
    n: int
    d: F = D
    w: F = W

    @property
    def alpha(self) -> F:
        """Interior angle in degrees."""
        return F(180) * (1 - F(2, self.n))

    @property
    def h(self) -> float:
        """Bump height; irrational in general, used only numerically."""
        return float(self.d) * math.tan(math.radians(180 - float(self.alpha))) / 2


@dataclass(frozen=True)
class SideProfile:
    steps: tuple                 # ((start, height), ...) sorted, starting at 0
    length: F = F(1)
    glue: Glue | None = None
    subsides: tuple = ()         # ((start, end, label, strength), ...)
    placement: str | None = None
    io_mark: str | None = None

    def height_at(self, t) -> int:
        h = 0
        for s, v in self.steps:
            if s <= t:
                h = v
        return h

    def mirrored(self) -> "SideProfile":
        return mirror(self)

    def features(self) -> list:
        out = []
        bounds = [s for s, _ in self.steps] + [self.length]
        for (s, v), e in zip(self.steps, bounds[1:]):
            kind = "Flat" if v == 0 else ("Bump" if v > 0 else "Dent")
            out.append({"kind": kind, "length": e - s, "height": abs(v)})
        return out


def _normalize(segs, length) -> tuple:
    """segs: iterable of (start, end, height) over [0, length]; later wins."""
    cuts = {F(0), F(length)}
    for s, e, _ in segs:
        cuts.update((F(s), F(e)))
    cuts = sorted(c for c in cuts if 0 <= c <= length)
    steps = []
    for a, b in zip(cuts, cuts[1:]):
        m = (a + b) / 2
        v = 0
        for s, e, h in segs:
            if s <= m < e:
                v = h
        if not steps or steps[-1][1] != v:
            steps.append((a, v))
    return tuple(steps)


def profile(segments=(), length=F(1), glue=None, subsides=(), placement=None, io_mark=None) -> SideProfile:
    return SideProfile(_normalize(list(segments), length), F(length), glue, tuple(subsides), placement, io_mark)


def flat(length=F(1), glue=None) -> SideProfile:
    return profile((), length, glue)


def mirror(p: SideProfile) -> SideProfile:
    L = p.length
    segs = []
    bounds = [s for s, _ in p.steps] + [L]
    for (s, v), e in zip(p.steps, bounds[1:]):
        segs.append((L - e, L - s, v))
    subs = tuple(sorted((L - e, L - s, lab, k) for s, e, lab, k in p.subsides))
    return SideProfile(_normalize(segs, L), L, p.glue, subs, p.placement, p.io_mark)


def complement(p: SideProfile) -> SideProfile:
    """The side that meets p with Matching geometry: reversed, bumps and dents swapped."""
    m = mirror(p)
    return SideProfile(tuple((s, -v) for s, v in m.steps), p.length, p.glue, m.subsides,
                       p.placement, p.io_mark)


def _contact(a: SideProfile, b: SideProfile):
    L = a.length
    cuts = {s for s, _ in a.steps} | {L - s for s, _ in b.steps} | {F(0), L}
    cuts = sorted(cuts)
    vals = []
    for x, y in zip(cuts, cuts[1:]):
        m = (x + y) / 2
        vals.append(a.height_at(m) + b.height_at(L - m))
    return vals


@lru_cache(maxsize=None)
def _classify_steps(sa, la, sb, lb) -> str:
    if la != lb:
        return FORBIDDEN
    vals = _contact(SideProfile(sa, la), SideProfile(sb, lb))
    if any(v > 0 for v in vals):
        return FORBIDDEN
    return MATCHING if all(v == 0 for v in vals) else PERMITTED


def classify(a: SideProfile, b: SideProfile) -> str:
    return _classify_steps(a.steps, a.length, b.steps, b.length)


def bond_strength(a: SideProfile, b: SideProfile) -> int:
    if classify(a, b) != MATCHING:
        return 0
    s = 0
    if a.glue is not None and b.glue is not None and a.glue.strength > 0 and a.glue.label == b.glue.label:
        s += a.glue.strength
    if a.subsides and b.subsides:
        L = a.length
        mine = {(L - e, L - st, lab) for st, e, lab, _ in a.subsides}
        for st, e, lab, k in b.subsides:
            if (st, e, lab) in mine:
                s += k
    return s


# -- placement geometry for polygon sides --------------------------------------

def side_profile(glue=None, placement=None, io_mark=None, length=F(1), d=D, w=W) -> SideProfile:
    L = F(length)
    segs = []
    if placement == CCW:
        segs += [(L - d - 2 * w, L - d - w, -1), (L - d - w, L - d, 1)]
    elif placement == CW:
        segs += [(d, d + w, -1), (d + w, d + 2 * w, 1)]
    if io_mark == IN:
        segs.append((L / 2 - w / 2, L / 2 + w / 2, 1))
    elif io_mark == OUT:
        segs.append((L / 2 - w / 2, L / 2 + w / 2, -1))
    return profile(segs, L, glue, (), placement, io_mark)


# -- glue-to-geometry encoding ----------------------------------------------------

SUBSIDE_LABEL = "γ"


@dataclass
class EncodedTile:
    name: str
    sides: dict = field(default_factory=dict)   # side key -> SideProfile


def encode_sides(glues: list, length=F(1)) -> tuple:
    """Return (profile builder, index) for the glue alphabet `glues`.

    Glue i (1-based, by sorted label) of strength k puts floor(k/2) unit
    subsides on the tip of dent i and of bump i, plus one midpoint subside
    when k is odd.  Bumps sit clockwise of the midpoint, dents
    counterclockwise.
    """
    labels = sorted({g.label for g in glues if g.strength > 0})
    index = {lab: i + 1 for i, lab in enumerate(labels)}
    m = len(labels)
    L = F(length)
    u = L / (2 * m + 2) if m else L
    qmax = max([g.strength // 2 for g in glues if g.strength > 0] + [0]) + 1

    def lam(i):
        return u / (qmax * 2 ** i)

    def build(g: Glue | None) -> SideProfile:
        segs = []
        for k in range(1, m + 1):
            segs.append((L / 2 - k * u, L / 2 - (k - 1) * u, 1))
            segs.append((L / 2 + (k - 1) * u, L / 2 + k * u, -1))
        subs = []
        if g is not None and g.strength > 0:
            i = index[g.label]
            q, odd = divmod(g.strength, 2)
            lm = lam(i)
            bump0 = L / 2 - i * u
            dent0 = L / 2 + (i - 1) * u
            for j in range(q):
                o = j * u / qmax
                subs.append((bump0 + o, bump0 + o + lm, SUBSIDE_LABEL, 1))
                subs.append((dent0 + u - o - lm, dent0 + u - o, SUBSIDE_LABEL, 1))
            if odd:
                subs.append((L / 2 - lm / 2, L / 2 + lm / 2, SUBSIDE_LABEL, 1))
        return profile(segs, L, None, sorted(subs))

    return build, index


def encode_glue_geometry(tiles) -> list:
    """tiles: square/hex TileType objects or PolygonTileType objects."""
    from .polygon import PolygonTileType

    glues = []
    for t in tiles:
        if isinstance(t, PolygonTileType):
            glues += [s.glue for s in t.sides if s.glue is not None]
        else:
            glues += list(t.glues.values())
    build, _ = encode_sides(glues)
    out = []
    for t in tiles:
        if isinstance(t, PolygonTileType):
            out.append(EncodedTile(t.name, {i: build(s.glue) for i, s in enumerate(t.sides)}))
        else:
            out.append(EncodedTile(t.name, {d: build(g) for d, g in t.glues.items()}))
    return out


# -- JSON -----------------------------------------------------------------------------

def _q(x: F) -> list:
    return [x.numerator, x.denominator]


def profile_to_json(p: SideProfile) -> dict:
    return {
        "length": _q(p.length),
        "features": [{"kind": f["kind"], "length": _q(f["length"]), "height": f["height"]}
                     for f in p.features()],
        "glue": None if p.glue is None else {"label": p.glue.label, "strength": p.glue.strength},
        "subsides": [{"start": _q(s), "end": _q(e), "label": lab, "strength": k}
                     for s, e, lab, k in p.subsides],
        "placement": p.placement,
        "ioMark": p.io_mark,
    }


def profile_from_json(doc) -> SideProfile:
    L = F(*doc["length"])
    segs, t = [], F(0)
    for f in doc["features"]:
        ln = F(*f["length"])
        sign = {"Flat": 0, "Bump": 1, "Dent": -1}[f["kind"]]
        segs.append((t, t + ln, sign * int(f["height"])))
        t += ln
    if t != L:
        raise ValueError("side features do not tile the side length")
    g = doc.get("glue")
    subs = [(F(*s["start"]), F(*s["end"]), s["label"], int(s["strength"])) for s in doc.get("subsides", [])]
    return profile(segs, L, Glue(g["label"], int(g["strength"])) if g else None, subs,
                   doc.get("placement"), doc.get("ioMark"))
