"""Physical constants (CODATA 2018) used by the default parameter sets."""

ELECTRON_MASS = 9.1093837015e-31  # kg
HBAR = 1.054571817e-34  # J s
