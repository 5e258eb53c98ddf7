"""Exception types shared across the package."""


class PairslitError(Exception):
    """Base class for all package-specific failures."""


class NodeProximityError(PairslitError):
    """Velocity or density requested too close to a wavefunction node."""


class RegionViolationError(PairslitError):
    """Configuration lies outside the spatial region a formula is valid in."""


class RejectionStallError(PairslitError):
    """Rejection sampler acceptance rate collapsed below a usable level."""


class StepUnderflowError(PairslitError):
    """Adaptive integrator would need a step below h_min; likely a node."""


class ConfigError(PairslitError):
    """Scenario configuration failed validation.

    Carries one human-readable diagnostic per offending field.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
