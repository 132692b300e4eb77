"""Period-4 billiards in triangular pyramids.

Straight-line (exact, dual rational/float backend) and gravity billiards:
cycle construction and certification, foot-point classification maps,
special-case structure checks, and parabolic closure families.
"""

__version__ = "0.1.0"

from .cycle_map import (
    CycleMapGrid,
    HeightClassification,
    OverlayConstruction,
    a_profile,
    build_map,
    cycle_exists,
    height_scan,
    overlay,
)
from .cycles import (
    CANONICAL_ORDERS,
    BilliardTrajectory,
    FourCycle,
    UnfoldedChain,
    certify_cycle,
    cycle_rotation_matrix,
    find_cycle_for_order,
    find_cycles,
    order_from_index,
    rotation_axis,
    simulate_billiard,
    starting_point,
    unfold,
    unfolded_endpoint,
)
from .errors import (
    BilliardError,
    DegenerateGeometryError,
    IdentityRotationError,
    IntersectingLinesError,
    NotCornerPyramidError,
    NotSymmetricError,
    OffPlaneError,
    OverlayError,
    ParallelLinesError,
    StartSystemDegenerateError,
    UnclassifiableScanError,
    UsageError,
)
from .geometry import (
    Barycentric,
    Line3,
    Plane,
    Tetrahedron,
    barycentric_of,
    common_perpendicular,
    dihedral_angles,
    obtuse_dihedral_count,
    plane_from_points,
    point_from_barycentric,
    point_in_triangle_strict,
    reflection_matrix,
)
from .physics import (
    FamilyScan,
    PhysState,
    PhysicalSolution,
    UnknownVector,
    bounce,
    energy,
    flight,
    forward_check,
    physical_simulate,
    residual,
    scan_family,
    solve_at_t,
)
from .regions import RegionConfig, load_demo_regions
from .special_cases import (
    CornerReport,
    ObtuseBoundReport,
    SymmetricPyramid,
    check_corner_pyramid,
    commuting_reflections_check,
    obtuse_bound_report,
    obtuse_bound_reports,
    orthogonal_face_pairs,
    symmetric_cycle_direct,
)
