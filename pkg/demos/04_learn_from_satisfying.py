import numpy as np

from satdist.boolfn import random_ltf
from satdist.experiment import ExperimentConfig, run_experiment

# Draw a random linear threshold function and learn from 2000 of its
# satisfying assignments.  delta = 0.01 means ceil(ln 100) = 5 independent
# SGD trials; the one with the lowest held-out log-loss is kept.
f = random_ltf(8, np.random.default_rng(4))
cfg = ExperimentConfig(None, epsilon=0.2, delta=0.01, samples=2000, seed=0, surrogate="softplus")
report = run_experiment(cfg, f=f)

print(f"n={report.n}  |f^-1(1)|={report.num_satisfying}  T={report.T}  trials={report.num_trials}")
for t in report.trials:
    mark = "*" if t.trial == report.selected else " "
    print(f"{mark} trial {t.trial}: val risk {t.validation_risk:.4f}  KL {t.kl:.4f}  "
          f"excess KL {t.excess_kl:.4f}  l1 {t.l1:.4f} <= {t.pinsker:.4f}")

# The membership heuristic: accept x when g(<w,x>) is within eps1 of the mean
# level b over satisfying points.  Its accuracy is measured, not guaranteed.
print("confusion of selected trial:", report.best.confusion)

# The same thing from the shell:
#   satdist gen ltf --n 8 --seed 4 --out f.ltf
#   satdist learn --function f.ltf --format ltf --epsilon 0.2 --delta 0.01 --out run/
