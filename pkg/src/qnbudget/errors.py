"""Exception and warning types used throughout the package."""


class ConfigError(ValueError):
    """Invalid configuration document or parameter set."""


class DegeneracyError(ArithmeticError):
    """A numerical degeneracy prevents evaluation at this point."""


class LasingThresholdError(DegeneracyError):
    """Round-trip gain of the recycling loop reached unity."""


class BlindQuadratureError(DegeneracyError):
    """Requested readout quadrature carries no signal."""


class RegimeWarning(UserWarning):
    """A closed-form result is being used outside its validity regime."""
