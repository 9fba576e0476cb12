"""Numerical tolerances shared by both kernel backends."""

# Quadratic roots accepted slightly outside [0, 1] and clamped, so that
# knot intersections are not dropped by floating-point loss.
ROOT_TOL = 1e-12

# Below this magnitude the quadratic coefficient of a ray equation is
# treated as zero and the linear equation is solved instead.
LINEAR_TOL = 1e-14

# Tiny negative discriminants (tangency jitter) are clamped to zero.
DISC_TOL = 1e-13

# Regularized incomplete gamma: series / continued-fraction convergence.
GAMMA_EPS = 1e-15
GAMMA_ITMAX = 500

# Survivor probabilities below this underflow guard reject the state.
SURVIVOR_FLOOR = 1e-300

# Slack used when testing cone membership of measure candidates.
CONE_TOL = 1e-12
