"""Physical constants shared across the package (SI units)."""

C_LIGHT = 299792458.0    # speed of light [m/s]
HBAR = 1.054571817e-34   # reduced Planck constant [J s]
