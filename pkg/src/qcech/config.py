"""Resource caps, overridable through environment variables."""

import os


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


# maximum number of elements accepted by validate_quantale / constructions
SIZE_CAP = _env_int("QCECH_SIZE_CAP", 64)
# maximum |down(u)| for which all covers of u are enumerated
COVER_CAP = _env_int("QCECH_COVER_CAP", 16)
# maximum ring order for table-based ideal enumeration
RING_CAP = _env_int("QCECH_RING_CAP", 64)
# maximum number of refinement witnesses enumerated per cover pair
WITNESS_CAP = _env_int("QCECH_WITNESS_CAP", 512)
