"""Command line entry point.  Exit codes: 0 success, 1 domain rejection or a
failing check, 2 unreadable or malformed input."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .tam import FormatError, ModelError, dumps, system_from_json, system_to_json


class _Fail(Exception):
    """A check ran and failed; the report is already written."""


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def _emit(doc, path: str | None):
    text = dumps(doc) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(text: str, path: str):
    with open(path, "w") as fh:
        fh.write(text)


def _field(doc, key, kind=None):
    try:
        v = doc[key]
    except (KeyError, TypeError) as e:
        raise FormatError(f"missing field {key!r}") from e
    if kind is not None and not isinstance(v, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return v


# -- square / hex / polygon pipeline ------------------------------------------------------

def cmd_enumerate(a):
    from .enumeration import enumerate_producible, prodset_to_json
    sysm = system_from_json(_load(a.system))
    _emit(prodset_to_json(enumerate_producible(sysm, a.max_tiles), sysm), a.out)


def cmd_compile_hex(a):
    from .hexcompile import compile_atam_to_htam
    hex_sys, m = compile_atam_to_htam(system_from_json(_load(a.input)))
    _emit(system_to_json(hex_sys), a.out)
    if a.map:
        _emit(m.to_json(), a.map)


def cmd_compile_polygon(a):
    from .polygon import compilation_to_json, compile_htam_to_polygon, self_seed_compile
    src = system_from_json(_load(a.input))
    comp = self_seed_compile(src) if a.self_seed else compile_htam_to_polygon(src)
    doc = compilation_to_json(comp)
    _emit(doc, a.out)
    if a.map:
        _emit({"formatVersion": 1, "omap": doc["omap"]}, a.map)


def _poly(path):
    from .pfbtam import PolySystem
    from .polygon import compilation_from_json
    comp = compilation_from_json(_load(path))
    return comp, PolySystem.from_compilation(comp)


def _state_json(st):
    return [{"x": x, "y": y, "rot": o.rot, "flip": o.flip} for (x, y), o in sorted(st)]


def cmd_simulate(a):
    from .pfbtam import poly_explore, render_poly_svg
    _, ps = _poly(a.system)
    ex = poly_explore(ps, a.max_tiles)
    states = sorted((sorted(st) for st in ex.states), key=lambda s: (len(s), repr(s)))
    terms = {frozenset(s) for s in ex.terminal()}
    doc = {"formatVersion": 1, "sizeBound": a.max_tiles, "truncated": ex.truncated,
           "assemblies": [_state_json(s) for s in states],
           "terminal": [_state_json(sorted(s)) for s in sorted(terms, key=lambda s: (len(s), repr(sorted(s))))]}
    _emit(doc, a.out)
    if a.render:
        _write_text(render_poly_svg(ps, dict(states[-1])), a.render)


def cmd_check_sim(a):
    from .equiv import check_block_sim, check_orientation_sim, check_production_dynamics, check_terminal_sim
    from .hexcompile import HexRepresentationMap
    if a.kind == "block":
        rep = check_block_sim(system_from_json(_load(a.a)), system_from_json(_load(a.b)),
                              HexRepresentationMap.from_json(_load(_need(a.map, "--map"))), max_squares=a.bound or 3)
    elif a.kind == "orient":
        comp, ps = _poly(a.a)
        hex_sys = system_from_json(_load(a.b)) if a.b else comp.source
        rep = check_orientation_sim(ps, hex_sys, comp.omap, a.bound or 4)
    elif a.kind == "pipeline":
        comp, ps = _poly(a.a)
        rep = check_production_dynamics(ps, system_from_json(_load(_need(a.b, "--b"))), comp.source,
                                        HexRepresentationMap.from_json(_load(_need(a.map, "--map"))), comp.omap,
                                        max_squares=a.bound or 2)
    else:
        pyramid, slider = _slider_doc(_load(a.a))
        rep = check_terminal_sim(pyramid, slider, a.bound)
    _emit(rep.to_json(), a.report)
    if not rep.ok:
        raise _Fail(rep.reason)


def _need(v, flag):
    if v is None:
        raise ModelError(f"{flag} is required for this kind")
    return v


# -- slider / growth ----------------------------------------------------------------------

def cmd_sidon(a):
    from .slider import sidon
    if a.k < 1:
        raise ModelError("k must be positive")
    print(" ".join(map(str, sidon(a.k))))


def _ca_from_doc(doc, width=None):
    rows = _field(doc, "rules", list)
    try:
        rules = {(str(l), str(r)): str(o) for l, r, o in rows}
    except (TypeError, ValueError) as e:
        raise FormatError("rules must be [left, right, out] triples") from e
    initial = doc.get("initial")
    if initial is None:
        if width is None:
            raise FormatError("initial row missing and no --width given")
        alphabet = sorted({s for k in rules for s in k})
        initial = [alphabet[i % len(alphabet)] for i in range(width)]
    initial = [str(s) for s in initial]
    if width is not None and width != len(initial):
        raise ModelError(f"--width {width} does not match the initial row of length {len(initial)}")
    return rules, initial


def _slider_doc(doc):
    from .slider import SliderTile, ca_to_pyramid
    ca = _field(doc, "ca", dict)
    rules, initial = _ca_from_doc(ca)
    try:
        slider = SliderTile.from_json(_field(doc, "slider", dict))
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed slider document: {e!r}") from e
    return ca_to_pyramid(rules, initial), slider


def cmd_slider_gen(a):
    from .slider import build_slider, ca_to_pyramid
    rules, initial = _ca_from_doc(_load(a.ca), a.width)
    s = build_slider(ca_to_pyramid(rules, initial))
    _emit({"formatVersion": 1, "ca": {"rules": sorted([l, r, o] for (l, r), o in rules.items()),
                                      "initial": initial},
           "slider": s.to_json()}, a.out)


def cmd_slider_sim(a):
    from .slider import map_slider_assembly, read_layers, slider_seed, slider_simulate
    pyramid, slider = _slider_doc(_load(a.slider))
    run = slider_simulate(slider, slider_seed(pyramid, slider), a.max_tiles)
    u0, v0 = pyramid.anchor
    index = {t.name: i for i, t in enumerate(pyramid.system.tiles)}
    terms = []
    for st in sorted(run.terminal(), key=sorted):
        m = map_slider_assembly(st, slider)
        cells = None if m is None else {(u + u0, v + v0): index[n] for (u, v), n in m.items()}
        terms.append({"sliders": [{"x": x, "y": y} for x, y in sorted(st)],
                      "square": None if cells is None else
                      [{"u": u, "v": v, "tile": pyramid.system.tiles[t].name} for (u, v), t in sorted(cells.items())],
                      "layers": None if cells is None else read_layers(cells, pyramid.system)})
    _emit({"formatVersion": 1, "states": len(run.states), "truncated": run.truncated, "terminal": terms}, a.out)


def cmd_growth_classify(a):
    from .growth import PolyTile, growth_classify
    tdoc, sdoc = _load(a.tile), _load(a.seed)
    try:
        tile = PolyTile.from_json(tdoc)
        seed = [(Fraction(str(x)), Fraction(str(y))) for x, y in _field(sdoc, "translations", list)]
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelError):
            raise
        raise FormatError(f"malformed tile or seed document: {e!r}") from e
    tau = a.tau if a.tau is not None else sdoc.get("temperature", tdoc.get("temperature"))
    if tau is None:
        raise FormatError("temperature missing (give --tau or a temperature field)")
    _emit({"formatVersion": 1, "verdict": growth_classify(tile, seed, int(tau)), "temperature": int(tau)}, a.out)


# -- plane tilings ------------------------------------------------------------------------------

def _plane(doc):
    from .plane import PlaneTilingSystem
    try:
        if "system" in doc and "source" in doc:
            return PlaneTilingSystem.from_json(doc["system"])
        return PlaneTilingSystem.from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelError):
            raise
        raise FormatError(f"malformed plane tiling document: {e!r}") from e


def cmd_convert_monotile(a):
    from .plane import convert_to_monotile
    src = _plane(_load(a.input))
    mono = convert_to_monotile(src)
    _emit({"formatVersion": 1, "n": mono.n, "system": mono.system.to_json(), "source": src.to_json()}, a.out)


def cmd_tile_plane(a):
    from .pfbtam import render_lattice_svg
    from .plane import TIMEOUT, patch_tile
    sysm = _plane(_load(a.system))
    patch = patch_tile(sysm, a.m, a.timeout, a.seed)
    status = "timeout" if patch is TIMEOUT else "none" if patch is None else "found"
    doc = {"formatVersion": 1, "m": a.m, "status": status, "lattice": sysm.lattice}
    if status == "found":
        doc["patch"] = [{"x": x, "y": y, "tile": i, "rot": r, "flip": f} for (x, y), (i, r, f) in sorted(patch.items())]
        if a.render:
            _write_text(render_lattice_svg(sysm.lattice, patch), a.render)
    _emit(doc, a.out)


def cmd_render(a):
    from .pfbtam import render_lattice_svg, render_poly_svg
    doc = _load(a.input)
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object")
    if "sides" in doc:
        comp, ps = _poly(a.input)
        svg = render_poly_svg(ps, comp.seed)
    elif "patch" in doc:
        cells = {(int(e["x"]), int(e["y"])): (e["tile"], e["rot"], e["flip"]) for e in doc["patch"]}
        svg = render_lattice_svg(doc.get("lattice", "square"), cells)
    elif "assemblies" in doc:
        rows = doc["assemblies"]
        if not rows:
            raise ModelError("no assemblies to render")
        row = rows[a.index]
        cells = {(int(e["x"]), int(e["y"])): e.get("tile", (e.get("rot"), e.get("flip"))) for e in row}
        svg = render_lattice_svg(doc.get("lattice", "hex"), cells)
    else:
        sysm = system_from_json(doc)
        names = [t.name for t in sysm.tiles]
        svg = render_lattice_svg(sysm.lattice, sysm.seed.cells, names)
    _write_text(svg, a.out)


# -- wiring ---------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polytam", description="Tile self-assembly compilers and simulators.")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work runs in one thread")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("enumerate", help="producible assemblies up to a size bound")
    s.add_argument("--system", required=True)
    s.add_argument("--max-tiles", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("compile-hex", help="square aTAM system -> hex hTAM system")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.add_argument("--map", help="write the block representation map here")
    s.set_defaults(fn=cmd_compile_hex)

    s = sub.add_parser("compile-polygon", help="hex hTAM system -> single polygon tile")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--self-seed", action="store_true", help="seed with one polygon copy")
    s.add_argument("--out")
    s.add_argument("--map", help="write the orientation map here")
    s.set_defaults(fn=cmd_compile_polygon)

    s = sub.add_parser("simulate", help="enumerate a polygon system")
    s.add_argument("--system", required=True)
    s.add_argument("--max-tiles", type=int, required=True)
    s.add_argument("--render")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("check-sim", help="bounded simulation checks")
    s.add_argument("--kind", choices=("block", "orient", "pipeline", "terminal"), required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--b")
    s.add_argument("--map")
    s.add_argument("--bound", type=int)
    s.add_argument("--report")
    s.set_defaults(fn=cmd_check_sim)

    s = sub.add_parser("sidon", help="greedy set with distinct 3-sums")
    s.add_argument("-k", type=int, required=True)
    s.set_defaults(fn=cmd_sidon)

    s = sub.add_parser("slider-gen", help="blocked CA rules -> slider tile")
    s.add_argument("--ca", required=True)
    s.add_argument("--width", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_slider_gen)

    s = sub.add_parser("slider-sim", help="run a slider system from its seed")
    s.add_argument("--slider", required=True)
    s.add_argument("--max-tiles", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_slider_sim)

    s = sub.add_parser("growth-classify", help="seed-only or unbounded growth of one polygon tile")
    s.add_argument("--tile", required=True)
    s.add_argument("--seed", required=True)
    s.add_argument("--tau", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_growth_classify)

    s = sub.add_parser("convert-monotile", help="plane tiling system -> one-tile system")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_convert_monotile)

    s = sub.add_parser("tile-plane", help="search for an m x m patch")
    s.add_argument("--system", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--timeout", type=float, default=60.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--render")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_tile_plane)

    s = sub.add_parser("render", help="SVG of a system seed, polygon seed, patch or enumerated assembly")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_render)
    return p


def _error(kind: str, msg: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": msg}, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.fn(args)
    except _Fail as e:
        return _error("check-failed", str(e), 1)
    except FormatError as e:
        return _error("format", str(e), 2)
    except ModelError as e:
        return _error("domain", str(e), 1)
    except OSError as e:
        return _error("io", f"{e.filename}: {e.strerror}", 2)
    except IndexError as e:
        return _error("domain", str(e), 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
