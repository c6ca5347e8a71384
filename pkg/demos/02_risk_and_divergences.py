import math

import numpy as np

from satdist.boolfn import enumerate_satisfying, parse_function
from satdist.metrics import best_in_ball, exact_kl, l1_distance, pinsker_bound, risk_decomposition
from satdist.model import DistributionTable, exact_distribution

# Target: uniform distribution on the satisfying assignments of a small CNF
f = parse_function("p cnf 4 2\n1 2 0\n-3 4 0\n", "dimacs-cnf")
sat = enumerate_satisfying(f)
target = DistributionTable.uniform_over(sat.indices, f.n)

# Expected log-loss of any w splits into KL(target || P_w) plus the target's
# entropy, which does not depend on w.  Minimizing risk therefore minimizes KL.
for w in [np.zeros(4), np.array([0.3, 0.3, -0.2, 0.2]), np.array([0.5, 0.5, -0.5, 0.5])]:
    r = risk_decomposition(target, w)
    print(f"w={w}: risk={r.risk:.4f} = KL {r.kl:.4f} + H {r.entropy:.4f}  (resid {r.residual:.1e})")

# The product family cannot represent this target exactly; the best it can do
# inside the unit ball is found by solving the KKT conditions.
best = best_in_ball(target, radius=1.0)
P_best = exact_distribution(best.w)
kl = exact_kl(target, P_best)
print("best-in-ball w:", np.round(best.w, 4), " KL:", round(kl, 4))

# Pinsker: l1 <= sqrt(2 KL)
print(f"l1 = {l1_distance(target, P_best):.4f} <= sqrt(2 KL) = {pinsker_bound(kl):.4f}")
print("in bits, KL =", kl / math.log(2))
