import json

import pytest

from polytam import corpus
from polytam.equiv import (FAIL, PASS, check_block_sim, check_orientation_sim, check_production_dynamics,
                           check_terminal_sim, clean_violation)
from polytam.hexcompile import compile_atam_to_htam
from polytam.pfbtam import PolySystem
from polytam.polygon import Orientation, compile_htam_to_polygon
from polytam.slider import build_slider, ca_to_pyramid

XOR = {(a, b): str(int(a) ^ int(b)) for a in "01" for b in "01"}


@pytest.fixture(scope="module")
def line():
    src = corpus.line()
    h, m = compile_atam_to_htam(src)
    return src, h, m, compile_htam_to_polygon(h)


@pytest.mark.parametrize("name", sorted(corpus.CORPUS))
def test_block_sim_four_squares(name):
    src = corpus.CORPUS[name]()
    h, m = compile_atam_to_htam(src)
    r = check_block_sim(h, src, m, max_squares=4)
    assert r.ok, r.reason


def test_report_json(line):
    src, h, m, _ = line
    doc = check_block_sim(h, src, m, max_squares=2).to_json()
    assert json.loads(json.dumps(doc))["verdict"] in (PASS, "Bounded-Pass")


def test_orientation_sim_rejects_wrong_map(line):
    _, h, _, comp = line
    bad = dict(comp.omap)
    a, b = sorted(bad)[:2]
    bad[a], bad[b] = bad[b], bad[a]
    r = check_orientation_sim(PolySystem.from_compilation(comp), h, bad, 6)
    assert r.verdict == FAIL


def test_orientation_sim_rejects_partial_map(line):
    _, h, _, comp = line
    seed_o = set(comp.seed.values())
    bad = {o: t for o, t in comp.omap.items() if o in seed_o}
    r = check_orientation_sim(PolySystem.from_compilation(comp), h, bad, 6)
    assert r.verdict == FAIL and "outside" in r.reason


def test_production_against_wrong_square_system(line):
    _, h, m, comp = line
    r = check_production_dynamics(PolySystem.from_compilation(comp), corpus.two_tile(), h, m, comp.omap,
                                  max_squares=2)
    assert r.verdict == FAIL


def test_clean_violation_isolated_block(line):
    _, h, m, _ = line
    cells = dict(h.seed.cells)
    stray = next(i for i, t in enumerate(h.tiles) if t.name not in m.phi)
    cells[(30, 30)] = stray
    assert clean_violation(cells, h, m) is not None
    assert clean_violation(dict(h.seed.cells), h, m) is None


def test_terminal_sim_detects_foreign_slider():
    p = ca_to_pyramid(XOR, "101")
    other = build_slider(ca_to_pyramid({k: "0" for k in XOR}, "101"))
    r = check_terminal_sim(p, other)
    assert r.verdict == FAIL


def test_orientation_type():
    assert Orientation(3) < Orientation(3, True) < Orientation(4)
