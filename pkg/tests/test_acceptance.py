"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""
import itertools
import random
import time

import pytest

from polytam import corpus
from polytam.enumeration import explore
from polytam.equiv import (check_bad_orientations, check_block_sim, check_orientation_sim,
                           check_production_dynamics, check_self_seed, check_terminal_sim, hex_bond_edges)
from polytam.geometry import bond_strength as side_bond, encode_glue_geometry
from polytam.growth import (SEED_ONLY, UNBOUNDED, chain_check, grow, growth_classify, handcrafted,
                            random_feasible_vector, random_star_polygon)
from polytam.hexcompile import block_of, compile_atam_to_htam, glue_audit
from polytam.pfbtam import PolySystem, numeric_validate, poly_explore
from polytam.plane import (arrow_sanity, blank, checkerboard, convert_to_monotile, hex_complement,
                           patch_tile, robinson, valid_patch, verify_patch_bijection)
from polytam.polygon import compile_htam_to_polygon, self_seed_compile
from polytam.slider import (build_slider, ca_to_pyramid, misalignment_scan, shift_scan, sidon,
                            slider_attachments, slider_seed, slider_simulate, three_sums_distinct)
from polytam.tam import HEX, NULL, SQUARE_DIRS, Glue, TileType, attachments_at, matches

NAMES = sorted(corpus.CORPUS)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        assert ok, detail
    return emit


def compiled(name):
    src = corpus.CORPUS[name]()
    h, m = compile_atam_to_htam(src)
    return src, h, m


def test_1_hex_block_simulation(report):
    worst, rows = 0.0, []
    for name in NAMES:
        src, h, m = compiled(name)
        for k in (3, 4):
            t = time.monotonic()
            r = check_block_sim(h, src, m, max_squares=k)
            worst = max(worst, time.monotonic() - t)
            rows.append(r.ok)
    report(1, all(rows) and worst < 60, f"block simulation on {len(NAMES)} systems at 3 and 4 squares, slowest {worst:.1f}s")


def test_2_glue_audit(report):
    t = time.monotonic()
    systems = [f() for f in corpus.CORPUS.values()] + [corpus.cooperative_tau3()]
    label_bad = positional_bad = checked = 0
    for src in systems:
        h, _ = compile_atam_to_htam(src)
        tau = h.temperature
        label_bad += len(glue_audit(h))
        label_bad += sum(g.strength >= tau for tt in h.tiles for g in tt.glues.values())
        # positional audit: bonds away from block centers carry exactly ceil(tau/2)
        ex = explore(HEX, h.seed.cells, lambda cl, q, h=h: attachments_at(h, cl, q), 20)
        for st in ex.states:
            for (p, q), k in hex_bond_edges(h, dict(st)).items():
                if block_of(p)[1] != "Center" and block_of(q)[1] != "Center":
                    checked += 1
                    positional_bad += k != (tau + 1) // 2
    dt = time.monotonic() - t
    ok = label_bad == 0 and positional_bad == 0
    report(2, ok, f"{len(systems)} compiled tile sets (tau 2 and 3), {checked} non-center bonds, "
                  f"{label_bad + positional_bad} violations, {dt:.1f}s")


def test_3_polygon_pipeline(report):
    t = time.monotonic()
    ok, contexts = True, 0
    for name in NAMES:
        src, h, m = compiled(name)
        comp = compile_htam_to_polygon(h)
        ps = PolySystem.from_compilation(comp)
        ok &= check_orientation_sim(ps, h, comp.omap, 12).ok
        for k in (2, 3):
            ok &= check_production_dynamics(ps, src, h, m, comp.omap, max_squares=k).ok
        bad = check_bad_orientations(ps, 8)
        ok &= bad.ok
        contexts += bad.counts.get("contexts", 0)
    dt = time.monotonic() - t
    report(3, ok and dt < 300, f"orientation and production checks on {len(NAMES)} systems, "
                               f"bad orientations rejected in {contexts} contexts, {dt:.1f}s")


def test_4_self_seeding(report):
    t = time.monotonic()
    results = []
    for name in NAMES:
        _, h, _ = compiled(name)
        results.append(check_self_seed(self_seed_compile(h), 6))
    dt = time.monotonic() - t
    ok = all(r.ok for r in results) and dt < 300
    states = sum(r.counts["states"] for r in results)
    report(4, ok, f"one tau-bond per assembly and wedge invariant over {states} assemblies, {dt:.1f}s")


def _random_tiles(rng):
    alphabet = [Glue(f"g{i}", rng.randint(1, 5)) for i in range(rng.randint(1, 6))]
    return [TileType(f"t{j}", {d: rng.choice(alphabet + [NULL]) for d in SQUARE_DIRS}) for j in range(4)]


def test_5_glue_geometry_encoding(report):
    t = time.monotonic()
    rng = random.Random(2024)
    same = 0
    for _ in range(3):
        tiles = _random_tiles(rng)
        enc = encode_glue_geometry(tiles)
        sides = [(i, d) for i in range(len(tiles)) for d in SQUARE_DIRS]
        before = [matches(tiles[a].glue(x), tiles[b].glue(y)) for (a, x), (b, y) in itertools.product(sides, sides)]
        after = [side_bond(enc[a].sides[x], enc[b].sides[y]) for (a, x), (b, y) in itertools.product(sides, sides)]
        same += before == after
    dt = time.monotonic() - t
    report(5, same == 3 and dt < 10, f"{same}/3 random tile sets keep their bond matrix, {dt:.2f}s")


def test_6_sidon(report):
    t = time.monotonic()
    ok = all(three_sums_distinct(xs) and xs[-1] <= 3 * k ** 5 for k in range(1, 21) for xs in [sidon(k)])
    dt = time.monotonic() - t
    report(6, ok and dt < 30, f"k = 1..20 distinct 3-sums within 3k^5 (x_20 = {sidon(20)[-1]}), {dt:.2f}s")


def test_7_slider_terminal_simulation(report):
    t = time.monotonic()
    ident = {(a, b): a for a in "01" for b in "01"}
    xor = {(a, b): str(int(a) ^ int(b)) for a in "01" for b in "01"}
    ok, spurious, runs = True, 0, 0
    for rules in (ident, xor):
        for init in ("110", "10110"):
            p = ca_to_pyramid(rules, init)
            s = build_slider(p)
            ok &= check_terminal_sim(p, s).verdict == "Pass"
            run = slider_simulate(s, slider_seed(p, s))
            spurious += len(misalignment_scan(s, run, p))
            for st in run.states:
                att = slider_attachments(s, st)
                for x, y in att:
                    extra = set(shift_scan(s, st, x, y, s.m)) - {b for a, b in att if a == x}
                    spurious += len(extra)
            runs += 1
    dt = time.monotonic() - t
    report(7, ok and spurious == 0 and dt < 600,
           f"{runs} pyramid systems (widths 3, 5; identity, XOR) simulated, {spurious} spurious attachments, {dt:.1f}s")


def test_8_growth_dichotomy(report):
    t = time.monotonic()
    systems = handcrafted()
    agree, kinds, sizes = 0, set(), set()
    for name, (tile, seed, tau) in systems.items():
        verdict = growth_classify(tile, seed, tau)
        n = len(grow(tile, seed, tau, max_tiles=50))
        agree += (verdict == UNBOUNDED and n == 50) or (verdict == SEED_ONLY and n == len(seed))
        kinds.add(verdict)
        sizes.add(len(seed))
    rng = random.Random(11)
    chains = 0
    for _ in range(1000):
        poly = random_star_polygon(rng)
        chains += chain_check(poly, random_feasible_vector(rng, poly), 10)
    dt = time.monotonic() - t
    ok = agree == len(systems) >= 10 and kinds == {SEED_ONLY, UNBOUNDED} and sizes == {1, 3} \
        and chains == 1000 and dt < 300
    report(8, ok, f"{agree}/{len(systems)} systems agree with 50-tile growth, {chains}/1000 chain trials, {dt:.1f}s")


def test_9_plane_tiling(report):
    t = time.monotonic()
    results = []
    for make in (blank, checkerboard, hex_complement):
        src = make()
        mono = convert_to_monotile(src)
        for m in (2, 3):
            results.append(verify_patch_bijection(src, mono, m).ok)
    src = robinson()
    mono = convert_to_monotile(src)
    patch = patch_tile(mono, 8, timeout=500)
    rob = isinstance(patch, dict) and valid_patch(mono.system, patch)
    if rob:
        back = {c: mono.decode(a) for c, a in patch.items()}
        rob = valid_patch(src, back) and arrow_sanity(src, back)
    dt = time.monotonic() - t
    report(9, all(results) and rob and dt < 600,
           f"{sum(results)}/6 patch bijections, Robinson monotile 8x8 patch {'found' if rob else 'missing'}, {dt:.1f}s")


def test_10_numeric_soundness(report):
    t = time.monotonic()
    total = bad = 0
    worst = 0.0
    for name in NAMES:
        _, h, _ = compiled(name)
        for comp in (compile_htam_to_polygon(h), self_seed_compile(h)):
            ps = PolySystem.from_compilation(comp)
            for st in poly_explore(ps, 6).states:
                r = numeric_validate(ps, dict(st))
                total += 1
                bad += not r.ok
                worst = max(worst, r.max_width)
    dt = time.monotonic() - t
    report(10, bad == 0 and worst < 1e-9 and dt < 300,
           f"{total - bad}/{total} assemblies certified, widest interval {worst:.1e}, {dt:.1f}s")
