from polytam import corpus
from polytam.enumeration import Directedness, enumerate_producible, is_directed_within, terminal_assemblies
from polytam.tam import OFFSETS, OPPOSITE, SQUARE, Assembly, TamSystem, canonical_key, square_tile


def _oracle(system, bound):
    """Breadth-first closure with a direct glue sum, independent of the engine."""
    start = frozenset(system.seed.cells.items())
    seen = {start}
    todo = [start]
    while todo:
        st = todo.pop()
        if len(st) >= bound:
            continue
        cells = dict(st)
        for p in cells:
            for off in OFFSETS[system.lattice].values():
                q = (p[0] + off[0], p[1] + off[1])
                if q in cells:
                    continue
                for i, t in enumerate(system.tiles):
                    total = 0
                    for d, o in OFFSETS[system.lattice].items():
                        r = (q[0] + o[0], q[1] + o[1])
                        if r in cells:
                            a, b = t.glue(d), system.tiles[cells[r]].glue(OPPOSITE[d])
                            if a.strength and a.label == b.label:
                                total += a.strength
                    if total >= system.temperature:
                        nxt = st | {(q, i)}
                        if nxt not in seen:
                            seen.add(nxt)
                            todo.append(nxt)
    return {canonical_key(s) for s in seen}


def test_prodset_matches_oracle():
    for name, f in corpus.CORPUS.items():
        s = f()
        ps = enumerate_producible(s, 6)
        got = {canonical_key(a.cells.items()) for a in ps.assemblies}
        assert got == _oracle(s, 6), name


def test_frozen_counts():
    counts = {name: len(enumerate_producible(f(), 6)) for name, f in corpus.CORPUS.items()}
    assert counts == {"seed_only": 1, "two_tile": 2, "line": 4, "square_builder": 5, "t_junction": 5}


def test_truncation_flag():
    ps = enumerate_producible(corpus.line(), 2)
    assert ps.truncated
    assert not enumerate_producible(corpus.line(), 4).truncated


def test_terminal_and_directed():
    terms, truncated = terminal_assemblies(corpus.square_builder(), 6)
    assert len(terms) == 1 and not truncated
    assert len(next(iter(terms))) == 4
    assert is_directed_within(corpus.t_junction(), 6) == Directedness.DIRECTED
    assert is_directed_within(corpus.line(), 2) == Directedness.UNKNOWN


def test_competing_tiles_not_directed():
    tiles = [square_tile("s", E=("x", 2)), square_tile("a", W=("x", 2)), square_tile("b", W=("x", 2))]
    s = TamSystem(SQUARE, tiles, 2, Assembly(SQUARE, {(0, 0): 0}))
    assert is_directed_within(s, 3) == Directedness.NOT_DIRECTED
    assert _oracle(s, 3) == {canonical_key(a.cells.items()) for a in enumerate_producible(s, 3).assemblies}
