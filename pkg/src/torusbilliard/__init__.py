"""Billiard flow on the 2-torus with one round obstacle.

Simulates the lifted flow among unit-lattice disks, codes trajectories as
reduced words in the rank-2 free group, synthesizes orbits with prescribed
words by constrained length minimization, and measures the escape-speed
and entropy bounds of the model.
"""

from .admissibility import (
    AdmissibilityReport,
    Itinerary,
    edge_allowed,
    is_admissible,
    is_strongly_admissible,
)
from .compiler import (
    BlockWord,
    CompiledWord,
    SymbolicCode,
    compile_detailed,
    compile_word,
    dilute,
    enumerate_codes,
)
from .entropy import (
    growth_exponent,
    htop_upper_constant,
    htop_upper_limit,
    label,
    pi_itinerary,
    visit_bound_check,
    word_growth,
)
from .errors import BilliardError
from .flow import (
    CollisionEvent,
    CrossingEvent,
    PhaseState,
    TrajectorySegment,
    boundary_state,
    next_collision,
    random_state,
    simulate,
    word_of,
)
from .freegroup import (
    ConePoint,
    EndPrefix,
    Word,
    ball_count,
    cayley_distance,
    concat,
    enumerate_words,
    longest_common_prefix,
    reduce,
)
from .geometry import (
    MAX_RADIUS,
    STRONG_RADIUS,
    Disk,
    LatticePoint,
    Segment,
    Vec2,
    dist_point_segment,
    hull_intersects_disk,
    ray_disk_first_hit,
    reflect,
)
from .realize import (
    BrokenLine,
    RealizedOrbit,
    minimize_length,
    minimize_periodic,
    oracle_chain_length,
    validate_orbit,
)
from .rotation import (
    CorridorOrbit,
    RotationEstimate,
    achievable_point,
    commutator_ceiling,
    corridor_family,
    corridor_orbit,
    corridor_period,
    periodic_achievable,
    rotation_series,
    winding_length_oracle,
)

__version__ = "0.1.0"
