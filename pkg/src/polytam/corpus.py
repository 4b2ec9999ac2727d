"""Small square systems used as a regression corpus; CORPUS holds the tau=2 ones."""
from __future__ import annotations

from .tam import SQUARE, Assembly, TamSystem, square_tile


def _system(tiles, seed=None, tau=2):
    seed = seed or {(0, 0): 0}
    return TamSystem(SQUARE, tiles, tau, Assembly(SQUARE, seed))


def seed_only():
    return _system([square_tile("s")])


def two_tile():
    return _system([square_tile("s", N=("x", 2)), square_tile("b", S=("x", 2))])


def line():
    """Seed plus three tiles to the east; the last one has no east glue."""
    return _system([
        square_tile("s", E=("x", 2)),
        square_tile("a", W=("x", 2), E=("y", 2)),
        square_tile("b", W=("y", 2), E=("z", 2)),
        square_tile("t", W=("z", 2)),
    ])


def square_builder():
    """2x2 square; the last tile cooperates on its S and W sides."""
    return _system([
        square_tile("s", N=("u", 2), E=("r", 2)),
        square_tile("e", W=("r", 2), N=("p", 1)),
        square_tile("n", S=("u", 2), E=("q", 1)),
        square_tile("x", S=("p", 1), W=("q", 1)),
    ])


def t_junction():
    """Arms grow north and west of the seed; a tile cooperates on S and E."""
    return _system([
        square_tile("s", N=("u", 2), W=("l", 2)),
        square_tile("n", S=("u", 2), W=("k", 1)),
        square_tile("w", E=("l", 2), N=("j", 1)),
        square_tile("x", S=("j", 1), E=("k", 1)),
    ])


def staircase():
    return _system([
        square_tile("s", E=("x", 2)),
        square_tile("a", W=("x", 2), N=("y", 2)),
        square_tile("b", S=("y", 2)),
    ])


CORPUS = {
    "seed_only": seed_only,
    "two_tile": two_tile,
    "line": line,
    "square_builder": square_builder,
    "t_junction": t_junction,
}


def cooperative_tau3():
    """Temperature 3: a strength-3 arm each way, then a 2 + 1 cooperative corner."""
    return _system([
        square_tile("s", E=("x", 3), N=("y", 3)),
        square_tile("a", W=("x", 3), N=("z", 1)),
        square_tile("b", S=("y", 3), E=("w", 2)),
        square_tile("c", W=("w", 2), S=("z", 1)),
    ], tau=3)
