import itertools

import pytest

from polytam.plane import (COMPLEMENT, REFLECT, ROTATE, TIMEOUT, PlaneTilingSystem, arrow_sanity, blank,
                           checkerboard, contradictory, convert_to_monotile, drop_color, enumerate_patches,
                           hex_complement, patch_cells, patch_tile, robinson, valid_patch,
                           verify_patch_bijection)
from polytam.tam import ModelError

SOURCES = {"blank": blank, "checkerboard": checkerboard, "hex-complement": hex_complement}

# (source, monotile) patch counts, one placement per appearance
COUNTS = {
    ("blank", 2): (1, 1), ("blank", 3): (1, 1),
    ("checkerboard", 2): (2, 16), ("checkerboard", 3): (2, 16),
    ("hex-complement", 2): (4, 64), ("hex-complement", 3): (8, 192),
}


def brute_count(sys, m):
    cells = patch_cells(m)
    reps = list(sys.representatives().values())
    return sum(valid_patch(sys, dict(zip(cells, combo))) for combo in itertools.product(reps, repeat=len(cells)))


@pytest.mark.parametrize("name", sorted(SOURCES))
def test_counts_match_brute_force_at_2(name):
    src = SOURCES[name]()
    mono = convert_to_monotile(src)
    assert (brute_count(src, 2), brute_count(mono.system, 2)) == COUNTS[(name, 2)]


@pytest.mark.parametrize("name,m", sorted(COUNTS))
def test_bijection(name, m):
    src = SOURCES[name]()
    r = verify_patch_bijection(src, convert_to_monotile(src), m)
    assert r.ok, r.reason
    assert (r.src_patches, r.mono_patches) == COUNTS[(name, m)]


def test_monotile_shape():
    mono = convert_to_monotile(hex_complement())
    assert mono.n == 12 and mono.system.step == 2
    assert mono.system.transforms == {ROTATE, REFLECT} and mono.system.constraint == COMPLEMENT
    for c, d in mono.system.complement.items():
        assert mono.system.complement[d] == c


def test_encode_decode():
    src = checkerboard()
    mono = convert_to_monotile(src)
    for a in src.placements():
        assert mono.decode(mono.encode(a)) == a
        # the encoded placement shows the same base colors
        shown = [mono.system.shown(mono.encode(a), p)[0] for p in range(4)]
        assert shown == [src.shown(a, p) for p in range(4)]


@pytest.mark.parametrize("side", range(8))
def test_mutants_fail(side):
    src = checkerboard()
    assert not verify_patch_bijection(src, drop_color(convert_to_monotile(src), side), 2).ok


def test_contradictory_has_no_patch():
    assert patch_tile(contradictory(), 2) is None
    patches, complete = enumerate_patches(contradictory(), 2)
    assert patches == [] and complete


def test_blank_tiles_large_patch():
    p = patch_tile(blank(), 4)
    assert len(p) == 16 and valid_patch(blank(), p)


def test_timeout_is_distinct_from_none():
    assert patch_tile(robinson(), 30, timeout=0.0) is TIMEOUT
    assert not TIMEOUT and TIMEOUT is not None


def test_robinson_source_tiles():
    sys = robinson()
    p = patch_tile(sys, 8, timeout=120)
    assert isinstance(p, dict) and len(p) == 64
    assert valid_patch(sys, p) and arrow_sanity(sys, p)


def test_robinson_monotile_tiles():
    src = robinson()
    mono = convert_to_monotile(src)
    assert mono.n == 40
    p = patch_tile(mono, 8, timeout=300)
    assert isinstance(p, dict) and valid_patch(mono.system, p)
    back = {c: mono.decode(a) for c, a in p.items()}
    assert valid_patch(src, back) and arrow_sanity(src, back)


def test_robinson_complement_involution():
    sys = robinson()
    assert all(sys.complement[sys.complement[c]] == c for c in sys.colors())


def test_unsupported_family():
    src = PlaneTilingSystem("square", [("a", "a", "a", "a")], {ROTATE})
    with pytest.raises(ModelError):
        convert_to_monotile(src)


def test_bad_systems_rejected():
    with pytest.raises(ModelError):
        PlaneTilingSystem("tri", [("a",) * 3])
    with pytest.raises(ModelError):
        PlaneTilingSystem("square", [("a", "b", "a")])
    with pytest.raises(ModelError):
        PlaneTilingSystem("square", [("a",) * 4], constraint=COMPLEMENT, complement={"a": "b"})


@pytest.mark.parametrize("make", [checkerboard, hex_complement, robinson])
def test_json_roundtrip(make):
    src = make()
    mono = convert_to_monotile(src).system
    for s in (src, mono):
        back = PlaneTilingSystem.from_json(s.to_json())
        assert back == s
