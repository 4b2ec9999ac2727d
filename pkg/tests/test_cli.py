import json
import subprocess
import sys

import pytest

from polytam import corpus
from polytam.cli import main
from polytam.growth import handcrafted
from polytam.plane import checkerboard, contradictory
from polytam.tam import system_to_json


def run(*args):
    return main([str(a) for a in args])


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def pipeline(tmp_path):
    sq = write(tmp_path / "sq.json", system_to_json(corpus.two_tile()))
    hx, hmap = tmp_path / "hex.json", tmp_path / "map.json"
    assert run("compile-hex", "--in", sq, "--out", hx, "--map", hmap) == 0
    poly = tmp_path / "poly.json"
    assert run("compile-polygon", "--in", hx, "--out", poly) == 0
    return tmp_path, sq, hx, hmap, poly


def test_sidon(capsys):
    assert run("sidon", "-k", 3) == 0
    assert capsys.readouterr().out.strip() == "1 2 5"
    assert run("sidon", "-k", 0) == 1


def test_enumerate(tmp_path):
    sq = write(tmp_path / "sq.json", system_to_json(corpus.line()))
    out = tmp_path / "ps.json"
    assert run("enumerate", "--system", sq, "--max-tiles", 3, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert len(doc["assemblies"]) == 3 and doc["truncated"] is True
    assert run("enumerate", "--system", sq, "--max-tiles", 6, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert len(doc["assemblies"]) == 4 and doc["truncated"] is False


def test_pipeline_checks(pipeline):
    d, sq, hx, hmap, poly = pipeline
    rep = d / "rep.json"
    assert run("check-sim", "--kind", "block", "--a", hx, "--b", sq, "--map", hmap, "--report", rep) == 0
    assert json.loads(rep.read_text())["verdict"] == "Pass"
    assert run("check-sim", "--kind", "orient", "--a", poly, "--bound", 3, "--report", rep) == 0
    assert run("check-sim", "--kind", "pipeline", "--a", poly, "--b", sq, "--map", hmap, "--report", rep) == 0


def test_failing_check_exits_one(pipeline):
    d, _, hx, hmap, _ = pipeline
    other = write(d / "other.json", system_to_json(corpus.line()))
    assert run("check-sim", "--kind", "block", "--a", hx, "--b", other, "--map", hmap, "--report", d / "r.json") == 1


def test_simulate_and_render(pipeline):
    d, _, hx, _, poly = pipeline
    out, svg = d / "sim.json", d / "sim.svg"
    assert run("simulate", "--system", poly, "--max-tiles", 5, "--out", out, "--render", svg) == 0
    assert json.loads(out.read_text())["assemblies"]
    assert svg.read_text().startswith("<svg")
    for src in (poly, hx):
        assert run("render", "--in", src, "--out", d / "r.svg") == 0


def test_self_seed_compile(pipeline):
    d, _, hx, _, _ = pipeline
    out = d / "ss.json"
    assert run("compile-polygon", "--in", hx, "--self-seed", "--out", out) == 0
    assert len(json.loads(out.read_text())["seed"]) == 1


def test_slider_commands(tmp_path):
    ca = write(tmp_path / "ca.json", {"rules": [[a, b, str(int(a) ^ int(b))] for a in "01" for b in "01"],
                                      "initial": ["1", "0", "1"]})
    sl = tmp_path / "slider.json"
    assert run("slider-gen", "--ca", ca, "--width", 3, "--out", sl) == 0
    out = tmp_path / "sim.json"
    assert run("slider-sim", "--slider", sl, "--out", out) == 0
    (term,) = json.loads(out.read_text())["terminal"]
    assert term["layers"] == [["1", "0", "1"], ["1", "1"], ["0"]]
    assert run("check-sim", "--kind", "terminal", "--a", sl, "--report", tmp_path / "r.json") == 0
    assert run("slider-gen", "--ca", ca, "--width", 4) == 1


def test_growth_classify(tmp_path, capsys):
    t, seed, tau = handcrafted()["coop-triangle"]
    tile = write(tmp_path / "t.json", t.to_json())
    s = write(tmp_path / "s.json", {"temperature": tau, "translations": [[str(x), str(y)] for x, y in seed]})
    assert run("growth-classify", "--tile", tile, "--seed", s) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "Unbounded"
    single = write(tmp_path / "one.json", {"temperature": 2, "translations": [[0, 0]]})
    assert run("growth-classify", "--tile", tile, "--seed", single) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "SeedOnly"


def test_plane_commands(tmp_path):
    src = write(tmp_path / "cb.json", checkerboard().to_json())
    mono = tmp_path / "mono.json"
    assert run("convert-monotile", "--in", src, "--out", mono) == 0
    assert json.loads(mono.read_text())["n"] == 8
    out, svg = tmp_path / "patch.json", tmp_path / "patch.svg"
    assert run("tile-plane", "--system", mono, "--m", 3, "--out", out, "--render", svg) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "found" and len(doc["patch"]) == 9
    assert run("render", "--in", out, "--out", tmp_path / "p.svg") == 0
    bad = write(tmp_path / "bad.json", contradictory().to_json())
    assert run("tile-plane", "--system", bad, "--m", 2, "--out", out) == 0
    assert json.loads(out.read_text())["status"] == "none"


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("enumerate", "--system", bad, "--max-tiles", 3) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "format"
    assert run("enumerate", "--system", tmp_path / "missing.json", "--max-tiles", 3) == 2
    wrong = write(tmp_path / "wrong.json", {"formatVersion": 99})
    assert run("compile-hex", "--in", wrong) == 2


def test_domain_errors(tmp_path):
    sq = write(tmp_path / "sq.json", system_to_json(corpus.two_tile()))
    assert run("compile-polygon", "--in", sq) == 1      # square input to the polygon compiler


def test_output_is_deterministic(tmp_path):
    sq = write(tmp_path / "sq.json", system_to_json(corpus.t_junction()))
    outs = []
    for k in range(2):
        h, p = tmp_path / f"h{k}.json", tmp_path / f"p{k}.json"
        assert run("compile-hex", "--in", sq, "--out", h) == 0
        assert run("compile-polygon", "--in", h, "--out", p) == 0
        outs.append((h.read_bytes(), p.read_bytes()))
    assert outs[0] == outs[1]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "polytam.cli", "--threads", "4", "sidon", "-k", "4"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.split() == ["1", "2", "5", "14"]
