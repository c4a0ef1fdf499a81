"""Physical constants shared across the package."""

#: Speed of light in vacuum, exact SI value (m/s).
C = 299_792_458.0

#: Same value as an int, for exact rational arithmetic in the timing simulator.
C_EXACT = 299_792_458
