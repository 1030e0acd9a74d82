"""Error taxonomy shared by all modules.

The CLI maps these onto process exit codes: configuration problems exit
with 2, model/regime violations with 3, numeric failures with 4.
"""


class BilliardError(Exception):
    """Base class for all library errors."""


class ConfigError(BilliardError):
    """Malformed input: bad word string, bad itinerary text, bad flags."""


class ModelError(BilliardError):
    """Parameters outside the supported regime (radius bounds, mixed radii)."""


class GeometryError(BilliardError):
    """Geometric precondition violated (point inside an obstacle, non-unit ray)."""


class TangencyError(GeometryError):
    """Grazing incidence where the reflection law is ill-conditioned."""


class DegenerateOrbitError(BilliardError):
    """Orbit whose word coding is ill-defined (trivial bouncing, line hits
    coinciding with collisions)."""


class InadmissibleItineraryError(BilliardError):
    """Itinerary rejected by the admissibility gate."""


class ConvergenceError(BilliardError):
    """Iterative solver exhausted its budget without meeting tolerance."""


class ConstructionError(BilliardError):
    """Internal failure of the word-to-itinerary construction; indicates a
    bug in the connector tables rather than bad user input."""


class InsertionError(BilliardError):
    """No admissible idle-sequence insertion at the requested position."""


class OracleIncompleteError(BilliardError):
    """Brute-force oracle exceeded its search budget."""
