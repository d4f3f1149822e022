"""Independent references: characteristic roots and brute-force monodromy matrices."""

from oracles.bruteforce import monodromy_bruteforce
from oracles.roots import RootSearchRegion, char_roots
