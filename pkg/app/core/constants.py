"""Global constants for the exact simulator and the rewinding transform."""

from typing import Final

# Report format
SCHEMA_VERSION: Final[str] = "1"
"""Version tag written into every JSON report"""

APPROX_DIGITS: Final[int] = 12
"""Digits shown in the "approx" decimal column"""

# Witness and protocol limits
MAX_WITNESS_BITS: Final[int] = 16
"""Largest witness length the brute-force oracle will enumerate"""

MAX_DEFERRED_LABELS: Final[int] = 12
"""Largest number of measurement labels a deferred acceptance formula may use"""

# Register encoding
S_REGISTER_ENDIANNESS: Final[str] = "big"
"""S bit string b1..bl (b1 most significant) encodes int(b) + 1 in {1, ..., 2^l}"""

# Analysis defaults
DEFAULT_GRID_EXP: Final[int] = 10
"""Monotonicity check grid: {i / 2^e} over [0, 1/2]"""

FLOAT_CROSSCHECK_TOL: Final[float] = 1e-12
"""Float sanity tolerance; exactness is the contract, floats are only a cross-check"""

# Exit codes
EXIT_OK: Final[int] = 0
"""All applicable certificates passed"""

EXIT_USAGE: Final[int] = 1
"""Usage, validation or parse error"""

EXIT_FAILURE: Final[int] = 2
"""Promise violation or certificate failure"""

# Logging
LOG_BUFFER_SIZE: Final[int] = 200
"""Ring buffer capacity for in-memory log entries"""

# Transform defaults
DEFAULT_L_MODE: Final[str] = "hadamard"
"""S-register width convention when none is given (see LMode)"""
