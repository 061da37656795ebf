"""unitlab: exact group arithmetic, GF(2) group rings, and SAT searches
for nontrivial units and unique-product failures in two torsion-free
groups: a crystallographic group P inside the cube of the infinite
dihedral group, and the Fibonacci group F(3, 4)."""

__version__ = "0.1.0"
