"""Square and hexagonal tile systems: glues, assemblies, bond graphs, attachment.

Hex coordinates are axial.  The six neighbor offsets are

    N (0, 1)    S (0, -1)
    SE (1, 0)   NW (-1, 0)
    NE (1, 1)   SW (-1, -1)

so N/S, SE/NW and NE/SW are the opposite pairs.  The geometric center of hex
(x, y) with unit spacing between centers is x*(sqrt(3)/2, -1/2) + y*(0, 1).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import networkx as nx

SQUARE = "square"
HEX = "hex"

SQUARE_DIRS = ("N", "E", "S", "W")
HEX_DIRS = ("N", "NE", "SE", "S", "SW", "NW")

OFFSETS = {
    SQUARE: {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)},
    HEX: {"N": (0, 1), "NE": (1, 1), "SE": (1, 0), "S": (0, -1), "SW": (-1, -1), "NW": (-1, 0)},
}
DIRS = {SQUARE: SQUARE_DIRS, HEX: HEX_DIRS}
OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E", "NE": "SW", "SW": "NE", "SE": "NW", "NW": "SE"}

FORMAT_VERSION = 1


class ModelError(ValueError):
    pass


class FormatError(ModelError):
    """Input document does not follow the file format."""


@dataclass(frozen=True)
class Glue:
    label: str
    strength: int

    def __post_init__(self):
        if self.strength < 0:
            raise ModelError(f"negative glue strength {self.strength}")


NULL = Glue("", 0)


def matches(a: Glue, b: Glue) -> int:
    if a.strength > 0 and a.label == b.label and b.strength > 0:
        return a.strength
    return 0


class TileType:
    __slots__ = ("name", "glues")

    def __init__(self, name: str, glues: Mapping[str, Glue]):
        self.name = name
        self.glues = dict(glues)

    def glue(self, d: str) -> Glue:
        return self.glues.get(d, NULL)

    def __repr__(self):
        return f"TileType({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, TileType) and self.name == other.name and self._norm() == other._norm()

    def __hash__(self):
        return hash(self.name)

    def _norm(self):
        return {d: g for d, g in self.glues.items() if g.strength > 0 or g.label}


def neighbors(lattice: str, p):
    x, y = p
    for d in DIRS[lattice]:
        dx, dy = OFFSETS[lattice][d]
        yield d, (x + dx, y + dy)


def hex_distance(p, q) -> int:
    dx, dy = q[0] - p[0], q[1] - p[1]
    if (dx >= 0) == (dy >= 0):
        return max(abs(dx), abs(dy))
    return abs(dx) + abs(dy)


class Assembly:
    """Immutable map from coordinates to tile indices."""

    __slots__ = ("lattice", "cells", "_key")

    def __init__(self, lattice: str, cells: Mapping | Iterable):
        self.lattice = lattice
        self.cells = dict(cells)
        self._key = None

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(self.cells.items())
        return self._key

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        return isinstance(other, Assembly) and self.lattice == other.lattice and self.key == other.key

    def __hash__(self):
        return hash((self.lattice, self.key))

    def __repr__(self):
        return f"Assembly({self.lattice}, {sorted(self.cells.items())})"

    def place(self, p, t) -> "Assembly":
        if p in self.cells:
            raise ModelError(f"{p} already occupied")
        cells = dict(self.cells)
        cells[p] = t
        return Assembly(self.lattice, cells)

    def canonical(self) -> "Assembly":
        return Assembly(self.lattice, canonical_key(self.cells.items()))


def canonical_key(items) -> tuple:
    """Translate so the least occupied coordinate is the origin; sorted tuple."""
    items = sorted(items)
    ox, oy = items[0][0]
    return tuple(((x - ox, y - oy), v) for (x, y), v in items)


class TamSystem:
    def __init__(self, lattice: str, tiles, temperature: int, seed: Assembly):
        if lattice not in DIRS:
            raise ModelError(f"unknown lattice {lattice!r}")
        if temperature < 1:
            raise ModelError("temperature must be >= 1")
        self.lattice = lattice
        self.tiles = list(tiles)
        self.temperature = temperature
        self.seed = seed
        self.index = {t.name: i for i, t in enumerate(self.tiles)}
        if len(self.index) != len(self.tiles):
            raise ModelError("duplicate tile names")
        for t in self.tiles:
            for d in t.glues:
                if d not in OFFSETS[lattice]:
                    raise ModelError(f"tile {t.name}: bad direction {d}")
        strengths = {}
        for t in self.tiles:
            for g in t.glues.values():
                if g.label and strengths.setdefault(g.label, g.strength) != g.strength:
                    raise ModelError(f"glue {g.label!r} used with two strengths")
        for v in seed.cells.values():
            if not 0 <= v < len(self.tiles):
                raise ModelError(f"seed references unknown tile {v}")
        self._by_side = None

    def by_side(self):
        """(direction, label) -> list of (tile index, strength)."""
        if self._by_side is None:
            idx = {}
            for i, t in enumerate(self.tiles):
                for d, g in t.glues.items():
                    if g.strength > 0:
                        idx.setdefault((d, g.label), []).append((i, g.strength))
            self._by_side = idx
        return self._by_side

    def glue(self, t: int, d: str) -> Glue:
        return self.tiles[t].glue(d)


def _check_refs(a: Assembly, system: TamSystem):
    for v in a.cells.values():
        if not 0 <= v < len(system.tiles):
            raise ModelError(f"unknown tile reference {v}")


def bond_graph(a: Assembly, system: TamSystem) -> nx.Graph:
    _check_refs(a, system)
    g = nx.Graph()
    g.add_nodes_from(a.cells)
    for p, t in a.cells.items():
        for d, q in neighbors(a.lattice, p):
            if q in a.cells and p < q:
                s = matches(system.glue(t, d), system.glue(a.cells[q], OPPOSITE[d]))
                if s:
                    g.add_edge(p, q, weight=s)
    return g


def min_cut(g: nx.Graph) -> int:
    if g.number_of_nodes() < 2:
        return float("inf")
    if not nx.is_connected(g):
        return 0
    value, _ = nx.stoer_wagner(g)
    return value


def is_tau_stable(a: Assembly, system: TamSystem) -> bool:
    if len(a) == 0:
        raise ModelError("empty assembly")
    return min_cut(bond_graph(a, system)) >= system.temperature


def brute_min_cut(g: nx.Graph) -> int:
    nodes = list(g.nodes)
    best = float("inf")
    for r in range(1, len(nodes)):
        for part in itertools.combinations(nodes[1:], r - 1):
            side = set(part) | {nodes[0]}
            if len(side) == len(nodes):
                continue
            w = sum(d["weight"] for u, v, d in g.edges(data=True) if (u in side) != (v in side))
            best = min(best, w)
    return best


def attachments_at(system: TamSystem, cells: Mapping, q) -> list:
    """Tile indices attachable at empty cell q."""
    lattice = system.lattice
    by_side = system.by_side()
    total = {}
    for d, p in neighbors(lattice, q):
        t = cells.get(p)
        if t is None:
            continue
        g = system.glue(t, OPPOSITE[d])
        if g.strength <= 0:
            continue
        for i, s in by_side.get((d, g.label), ()):
            total[i] = total.get(i, 0) + s
    return sorted(i for i, s in total.items() if s >= system.temperature)


def frontier(lattice: str, cells: Mapping) -> set:
    out = set()
    for p in cells:
        for _, q in neighbors(lattice, p):
            if q not in cells:
                out.add(q)
    return out


def attachments(system: TamSystem, a: Assembly) -> set:
    out = set()
    for q in frontier(a.lattice, a.cells):
        for t in attachments_at(system, a.cells, q):
            out.add((q, t))
    return out


# -- JSON -------------------------------------------------------------------

def glue_to_json(g: Glue) -> dict:
    return {"label": g.label, "strength": g.strength}


def system_to_json(system: TamSystem) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "lattice": system.lattice,
        "temperature": system.temperature,
        "tiles": [
            {"name": t.name, "glues": {d: glue_to_json(t.glue(d)) for d in DIRS[system.lattice]}}
            for t in system.tiles
        ],
        "seed": assembly_to_json(system.seed, system),
    }


def assembly_to_json(a: Assembly, system: TamSystem) -> list:
    return [
        {"x": x, "y": y, "tile": system.tiles[t].name, "rot": 0, "flip": False}
        for (x, y), t in sorted(a.cells.items())
    ]


def system_from_json(doc: dict) -> TamSystem:
    try:
        if doc.get("formatVersion", FORMAT_VERSION) != FORMAT_VERSION:
            raise FormatError(f"unsupported formatVersion {doc.get('formatVersion')}")
        lattice = doc["lattice"]
        if lattice not in DIRS:
            raise FormatError(f"unknown lattice {lattice!r}")
        tiles = []
        for t in doc["tiles"]:
            glues = {d: Glue(str(g["label"]), int(g["strength"])) for d, g in t["glues"].items()}
            tiles.append(TileType(t["name"], glues))
        index = {t.name: i for i, t in enumerate(tiles)}
        cells = {}
        for s in doc["seed"]:
            if s["tile"] not in index:
                raise ModelError(f"seed references unknown tile {s['tile']!r}")
            cells[(int(s["x"]), int(s["y"]))] = index[s["tile"]]
        return TamSystem(lattice, tiles, int(doc["temperature"]), Assembly(lattice, cells))
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed system document: {e!r}") from e


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True)


def square_tile(name: str, **glues) -> TileType:
    """square_tile("a", N=("x", 2), E=("y", 1))"""
    return TileType(name, {d: Glue(*v) for d, v in glues.items()})
