import math

import numpy as np

from satdist.metrics import exact_kl
from satdist.model import exact_distribution, sample_model, subgradient_logloss
from satdist.sgd import SgdConfig, iteration_budget, run_sgd

# A target the model can represent exactly: P_{w*} with ||w*|| = 0.5
n = 6
w_star = np.random.default_rng(1).normal(size=n)
w_star *= 0.5 / np.linalg.norm(w_star)
target = exact_distribution(w_star)

# The log-loss gradient tanh(w) - x has norm at most 2 sqrt(n).
rho = 2 * math.sqrt(n)

# Tighter accuracy targets need quadratically more steps.
for eps in [0.4, 0.2, 0.1, 0.05]:
    T = iteration_budget(1.0, rho, eps)
    kls = []
    for seed in range(20):
        cfg = SgdConfig.from_budget(1.0, rho, eps, seed=seed)
        trace = run_sgd(subgradient_logloss, lambda r: sample_model(w_star, r), cfg)
        kls.append(exact_kl(target, exact_distribution(trace.wbar)))
    print(f"eps={eps:<5} T={T:<6} mean KL={np.mean(kls):.5f}  max KL={np.max(kls):.5f}")
