"""Project-wide constants."""

PACKAGE_VERSION = "0.1.0"
MODEL_FORMAT_VERSION = 1
MODEL_MAGIC = b"RDAPPROX"

DEFAULT_DELTA = 1e-8
DEFAULT_MAX_ITERATIONS = 60
RANK_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-10
PSD_SLACK = 1e-9
ALPHA_FLOOR = 1e-12

MODE_ADAPTIVE = "ar"
MODE_FIXED = "fixed"
MODES = (MODE_ADAPTIVE, MODE_FIXED)

VARIANT_EXACT = "R"
VARIANT_R0 = "R0"
VARIANT_R1 = "R1"
VARIANT_ALPHA_STAR = "Ralpha_star"
VARIANTS = (VARIANT_EXACT, VARIANT_R0, VARIANT_R1, VARIANT_ALPHA_STAR)
