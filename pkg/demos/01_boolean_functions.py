import numpy as np

from satdist.boolfn import cube, enumerate_satisfying, parse_function, sample_satisfying, serialize_function

# Three ways to write down a Boolean function on {-1,+1}^n.
# DIMACS CNF: (x1 or x2) and (not x3)
cnf = parse_function("p cnf 3 2\n1 2 0\n-3 0\n", "dimacs-cnf")

# Truth table as hex: bit i of the number is f at cube index i,
# where index 0 = (-1,...,-1) and x1 is the most significant position.
and2 = parse_function("8", "truthtable-hex")

# Linear threshold: satisfied when <w,x> >= theta (ties count).
majority = parse_function("1 1 1 ; 0.5", "ltf-text")

for name, f in [("cnf", cnf), ("and2", and2), ("majority", majority)]:
    sat = enumerate_satisfying(f)
    print(f"{name}: n={f.n}, |f^-1(1)| = {len(sat)}")
    print("  satisfying indices:", sat.indices.tolist())

# Every representation converts to a truth table; the hex form round-trips.
print("cnf as hex:", serialize_function(cnf, "truthtable-hex"))

# Sampling: enumeration-backed (exact) or rejection (uniform by symmetry).
rng = np.random.default_rng(0)
draws = sample_satisfying(cnf, rng, size=30000, method="rejection")
points, counts = np.unique(draws, axis=0, return_counts=True)
for p, c in zip(points, counts):
    print(f"  {p.tolist()}  {c / len(draws):.4f}")
print("expected frequency", 1 / len(enumerate_satisfying(cnf)))

# The cube itself, in index order
print(cube(2))
