"""Breadth-first enumeration of producible and terminal assemblies."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .tam import Assembly, ModelError, TamSystem, attachments_at, canonical_key, frontier, neighbors


@dataclass
class ProdSet:
    assemblies: set
    size_bound: int
    truncated: bool

    def __len__(self):
        return len(self.assemblies)

    def __contains__(self, a):
        return a in self.assemblies


@dataclass
class Exploration:
    """Positional state graph. States are frozensets of (coord, value)."""

    seed: frozenset
    states: set
    edges: dict = field(default_factory=dict)
    attach: dict = field(default_factory=dict)
    open_states: set = field(default_factory=set)

    @property
    def truncated(self) -> bool:
        return bool(self.open_states)

    def terminal(self) -> list:
        return [s for s in self.states if not self.attach[s]]


def explore(lattice: str, seed_cells: dict, attach_at: Callable, max_tiles: int | None = None,
            allow: Callable | None = None, record_edges: bool = False) -> Exploration:
    """Explore every state reachable from the seed by single attachments.

    attach_at(cells, q) lists the values attachable at empty cell q.  A move
    rejected by allow(cells, q, v) or exceeding max_tiles is not taken and
    marks its state as open (the bound truncated it).
    """
    seed = frozenset(seed_cells.items())
    cells = dict(seed_cells)
    att = {}
    for q in frontier(lattice, cells):
        vs = attach_at(cells, q)
        if vs:
            att[q] = tuple(vs)
    ex = Exploration(seed=seed, states={seed})
    level = {seed: att}
    while level:
        nxt = {}
        for st, att in level.items():
            ex.attach[st] = bool(att)
            if not att:
                continue
            cells = dict(st)
            full = max_tiles is not None and len(st) >= max_tiles
            kids = []
            for q, vs in att.items():
                for v in vs:
                    if full or (allow is not None and not allow(cells, q, v)):
                        ex.open_states.add(st)
                        continue
                    child = st | {(q, v)}
                    kids.append(child)
                    if child in ex.states:
                        continue
                    ex.states.add(child)
                    cells[q] = v
                    catt = dict(att)
                    del catt[q]
                    for _, r in neighbors(lattice, q):
                        if r in cells:
                            continue
                        rv = attach_at(cells, r)
                        if rv:
                            catt[r] = tuple(rv)
                        else:
                            catt.pop(r, None)
                    del cells[q]
                    nxt[child] = catt
            if record_edges:
                ex.edges[st] = kids
        level = nxt
    return ex


def _system_explore(system: TamSystem, max_tiles, **kw) -> Exploration:
    if max_tiles is not None and max_tiles < len(system.seed):
        raise ModelError(f"bound {max_tiles} smaller than seed size {len(system.seed)}")
    return explore(system.lattice, system.seed.cells,
                   lambda cells, q: attachments_at(system, cells, q), max_tiles, **kw)


def canonical(lattice: str, state) -> Assembly:
    return Assembly(lattice, canonical_key(state))


def enumerate_producible(system: TamSystem, max_tiles: int) -> ProdSet:
    ex = _system_explore(system, max_tiles)
    return ProdSet({canonical(system.lattice, s) for s in ex.states}, max_tiles, ex.truncated)


def terminal_assemblies(system: TamSystem, max_tiles: int):
    ex = _system_explore(system, max_tiles)
    terms = {canonical(system.lattice, s) for s in ex.terminal()}
    return terms, ex.truncated


class Directedness(Enum):
    DIRECTED = "Directed"
    NOT_DIRECTED = "NotDirected"
    UNKNOWN = "Unknown"


def is_directed_within(system: TamSystem, max_tiles: int) -> Directedness:
    terms, truncated = terminal_assemblies(system, max_tiles)
    if len(terms) > 1:
        return Directedness.NOT_DIRECTED
    if truncated:
        return Directedness.UNKNOWN
    return Directedness.DIRECTED if len(terms) == 1 else Directedness.NOT_DIRECTED


def prodset_to_json(ps: ProdSet, system: TamSystem) -> dict:
    names = [t.name for t in system.tiles]
    rows = sorted(sorted(([x, y], names[v]) for (x, y), v in a.cells.items()) for a in ps.assemblies)
    return {
        "formatVersion": 1,
        "lattice": system.lattice,
        "sizeBound": ps.size_bound,
        "truncated": ps.truncated,
        "assemblies": [[{"x": c[0], "y": c[1], "tile": n} for c, n in r] for r in rows],
    }
