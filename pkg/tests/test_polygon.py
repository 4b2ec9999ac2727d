import pytest

from polytam import corpus
from polytam.equiv import bad_orientations, check_bad_orientations, check_orientation_sim, \
    check_production_dynamics, check_self_seed
from polytam.geometry import FORBIDDEN, IN, OUT, classify
from polytam.hexcompile import compile_atam_to_htam
from polytam.pfbtam import PolySystem, contacts, poly_bond_edges
from polytam.polygon import (HEX_CCW, TAU_LABEL, Orientation, compilation_from_json, compilation_to_json,
                             compile_htam_to_polygon, io_transform, minimal_glue_sets, represent,
                             self_seed_compile, valid_orientations)
from polytam.tam import HEX, OPPOSITE, Assembly, FormatError, Glue, ModelError, TamSystem, TileType, neighbors

NAMES = sorted(corpus.CORPUS)


def compiled(name):
    src = corpus.CORPUS[name]()
    h, m = compile_atam_to_htam(src)
    return src, h, m, compile_htam_to_polygon(h)


def test_side_count_is_six_per_tile():
    _, h, _, comp = compiled("two_tile")
    assert comp.tile.n == 6 * len(h.tiles)


def test_represented_orientation_shows_tile_glues():
    _, h, _, comp = compiled("line")
    for j, t in enumerate(h.tiles[:20]):
        o = represent(j, comp.tile.n)
        for d in HEX_CCW:
            g = comp.tile.facing(o, d).glue
            if t.glue(d).strength:
                assert g.label.startswith(t.glue(d).label) and g.strength == t.glue(d).strength
            else:
                assert g is None


def test_bad_orientation_values():
    assert bad_orientations(2, 12) == (Orientation(4), Orientation(2, True), Orientation(8, True))


@pytest.mark.parametrize("name", NAMES)
def test_bad_orientations_never_attach(name):
    _, _, _, comp = compiled(name)
    r = check_bad_orientations(PolySystem.from_compilation(comp), 8)
    assert r.ok, r.reason
    assert r.counts["contexts"] > 30


def test_half_turn_meets_forbidden_geometry():
    # same glue facing the neighbor, but the placement tab lands on the wrong end
    _, _, _, comp = compiled("two_tile")
    tile, n = comp.tile, comp.tile.n
    o = represent(0, n)
    for d in HEX_CCW:
        nb = tile.facing(o, d)
        turned = Orientation((o.rot + n // 2) % n)
        assert classify(tile.facing(turned, OPPOSITE[d]), nb) == FORBIDDEN or nb.glue is None


@pytest.mark.parametrize("name", NAMES)
def test_orientation_sim(name):
    _, h, _, comp = compiled(name)
    r = check_orientation_sim(PolySystem.from_compilation(comp), h, comp.omap, 10)
    assert r.ok, r.reason
    assert r.counts["polyStates"] == r.counts["hexStates"]


@pytest.mark.parametrize("name", NAMES)
def test_production_dynamics(name):
    src, h, m, comp = compiled(name)
    r = check_production_dynamics(PolySystem.from_compilation(comp), src, h, m, comp.omap, max_squares=3)
    assert r.ok, r.reason


def test_strength_tau_glue_rejected():
    t = TileType("a", {"N": Glue("x", 2)})
    sys = TamSystem(HEX, [t], 2, Assembly(HEX, {(0, 0): 0, (1, 0): 0, (1, 1): 0}))
    with pytest.raises(ModelError):
        compile_htam_to_polygon(sys)


def test_seed_size_checked():
    t = TileType("a", {"N": Glue("x", 1)})
    with pytest.raises(ModelError):
        compile_htam_to_polygon(TamSystem(HEX, [t], 2, Assembly(HEX, {(0, 0): 0})))


def test_minimal_glue_sets():
    t = TileType("a", {"N": Glue("x", 1), "S": Glue("y", 1), "SE": Glue("z", 2)})
    got = {tuple(sorted(c)) for c in minimal_glue_sets(t, 2)}
    assert got == {("N", "S"), ("SE",)}


def test_io_marks_and_seed_tiles():
    _, h, _, _ = compiled("two_tile")
    io = io_transform(h)
    assert len(io.system.seed) == 3
    for mk in io.marks:
        assert set(mk.values()) <= {IN, OUT}
        assert IN in mk.values()


@pytest.mark.parametrize("name", NAMES)
def test_self_seed_tau_bond_and_wedge(name):
    _, h, _, _ = compiled(name)
    comp = self_seed_compile(h)
    assert len(comp.seed) == 1
    tau_sides = [i for i, s in enumerate(comp.tile.sides) if s.glue is not None and s.glue.label == TAU_LABEL]
    assert len(tau_sides) == 2 and all(i < comp.wedge for i in tau_sides)
    r = check_self_seed(comp, 6)
    assert r.ok, r.reason


def test_self_seed_first_attachment_uses_tau_glue():
    _, h, _, _ = compiled("seed_only")
    comp = self_seed_compile(h)
    ps = PolySystem.from_compilation(comp)
    (p, o), = comp.seed.items()
    firsts = []
    for _, q in neighbors(HEX, p):
        for v in valid_orientations(ps.tile, ps.temperature, contacts(ps, comp.seed, q)):
            firsts.append((q, v))
    assert len(firsts) == 1
    q, v = firsts[0]
    assert list(poly_bond_edges(ps, {p: o, q: v}).values()) == [h.temperature]


@pytest.mark.parametrize("self_seed", [False, True])
def test_compilation_json_roundtrip(self_seed):
    _, h, _, comp = compiled("line")
    if self_seed:
        comp = self_seed_compile(h)
    back = compilation_from_json(compilation_to_json(comp))
    assert back.tile.sides == comp.tile.sides
    assert back.seed == comp.seed and back.omap == comp.omap and back.wedge == comp.wedge
    assert compilation_to_json(back) == compilation_to_json(comp)


def test_compilation_json_malformed():
    _, _, _, comp = compiled("two_tile")
    doc = compilation_to_json(comp)
    del doc["sides"]
    with pytest.raises(FormatError):
        compilation_from_json(doc)
