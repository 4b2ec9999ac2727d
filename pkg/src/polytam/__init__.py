"""Tile self-assembly compilers: square aTAM to hexagonal hTAM to single polygon tiles."""
