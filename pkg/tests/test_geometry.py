import random
from fractions import Fraction as F

import pytest

from polytam.geometry import (CCW, CW, FORBIDDEN, IN, MATCHING, OUT, PERMITTED, GeometryParams, bond_strength,
                              classify, complement, encode_glue_geometry, flat, mirror, profile,
                              profile_from_json, profile_to_json, side_profile)
from polytam.tam import NULL, SQUARE_DIRS, Glue, TileType, matches


def random_tile_set(rng, n_glues=6, max_strength=5, n_tiles=4):
    alphabet = [Glue(f"g{i}", rng.randint(1, max_strength)) for i in range(n_glues)]
    tiles = []
    for t in range(n_tiles):
        glues = {d: rng.choice(alphabet + [NULL]) for d in SQUARE_DIRS}
        tiles.append(TileType(f"t{t}", glues))
    return tiles


def bond_matrices(tiles):
    enc = encode_glue_geometry(tiles)
    sides = [(i, d) for i in range(len(tiles)) for d in SQUARE_DIRS]
    before = {(a, b): matches(tiles[a[0]].glue(a[1]), tiles[b[0]].glue(b[1])) for a in sides for b in sides}
    after = {(a, b): bond_strength(enc[a[0]].sides[a[1]], enc[b[0]].sides[b[1]]) for a in sides for b in sides}
    return before, after


def test_flat_sides_match():
    assert classify(flat(), flat()) == MATCHING


def test_bump_against_flat_forbidden():
    b = profile([(F(1, 4), F(1, 2), 1)])
    assert classify(b, flat()) == FORBIDDEN
    assert classify(flat(), b) == FORBIDDEN


def test_dent_against_flat_permitted():
    d = profile([(F(1, 4), F(1, 2), -1)])
    assert classify(d, flat()) == PERMITTED


def test_complement_matches_and_is_involution():
    p = profile([(F(0), F(1, 3), 1), (F(1, 2), F(3, 4), -2)])
    assert classify(p, complement(p)) == MATCHING
    assert complement(complement(p)).steps == p.steps
    assert mirror(mirror(p)).steps == p.steps


def test_unequal_lengths_forbidden():
    assert classify(flat(F(1)), flat(F(2))) == FORBIDDEN


def test_glue_needs_matching_geometry():
    g = Glue("x", 2)
    assert bond_strength(flat(glue=g), flat(glue=g)) == 2
    bumpy = profile([(F(1, 4), F(1, 2), -1)], glue=g)
    assert bond_strength(bumpy, flat(glue=g)) == 0


def test_placement_tabs_interlock_only_with_opposite():
    a, b = side_profile(placement=CCW), side_profile(placement=CW)
    assert classify(a, b) != FORBIDDEN
    assert classify(a, a) == FORBIDDEN


def test_io_marks():
    assert classify(side_profile(io_mark=IN), side_profile(io_mark=OUT)) == MATCHING
    assert classify(side_profile(io_mark=OUT), side_profile(io_mark=OUT)) == PERMITTED
    assert classify(side_profile(io_mark=IN), side_profile(io_mark=IN)) == FORBIDDEN


def test_interior_angle():
    assert GeometryParams(6).alpha == 120
    assert GeometryParams(18).alpha == 160
    assert GeometryParams(18).h > 0


@pytest.mark.parametrize("seed", range(10))
def test_encoding_preserves_bond_matrix(seed):
    before, after = bond_matrices(random_tile_set(random.Random(seed)))
    assert before == after


def test_encoded_sides_all_match_geometrically():
    tiles = random_tile_set(random.Random(99))
    enc = encode_glue_geometry(tiles)
    ps = [p for t in enc for p in t.sides.values()]
    assert all(classify(a, b) == MATCHING for a in ps for b in ps)


def test_profile_json_roundtrip():
    p = profile([(F(1, 5), F(2, 5), 1), (F(3, 5), F(4, 5), -1)], glue=Glue("a", 3),
                subsides=[(F(1, 5), F(1, 4), "γ", 1)], placement=CW, io_mark=IN)
    q = profile_from_json(profile_to_json(p))
    assert q == p


def test_profile_json_bad_lengths():
    doc = profile_to_json(flat())
    doc["length"] = [2, 1]
    with pytest.raises(ValueError):
        profile_from_json(doc)
