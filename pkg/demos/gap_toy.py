"""Two labeled points and two unlabeled clusters on a line.

The labeled-only least-squares rule puts its threshold halfway between the
two labels, which cuts into the right-hand cluster. A small unlabeled
margin weight pulls the threshold into the empty gap. The DC iteration is a
local method: with a large margin weight it stalls near its starting rule.
"""

import numpy as np

from s3lda import Dataset, SolverConfig, dc_fit

x_l = np.array([[3.0], [-0.6]])
x_u = np.concatenate([np.linspace(0.5, 3.0, 15), np.linspace(-3.0, -0.5, 15)])[:, None]
data = Dataset(x_l, [1, -1], x_u)

for C1, C2 in ((1.0, 0.0), (0.05, 0.1), (1.0, 10.0)):
    fit = dc_fit(data, SolverConfig(C1=C1, C2=C2, c=0.0))
    m = fit.model
    wrong = np.sum(m.predict(x_u) != np.sign(x_u[:, 0]))
    print(f"C1={C1:g} C2={C2:g}: threshold {-m.b / m.omega[0]:+.3f}, "
          f"unlabeled points on the wrong side {wrong}, DC steps {fit.outer_iters}")
