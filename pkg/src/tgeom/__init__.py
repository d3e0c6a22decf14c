"""World-function geometry kernel.

A geometry is specified by its world function sigma(P, Q) alone; every
geometric notion is written once in terms of sigma and re-evaluated under
any other world function.
"""

from .calculus import (
    AngleResult,
    GramReport,
    collinearity_residual,
    cosine_angle,
    gram_report,
    is_parallel,
    is_right_angle,
    magnitude,
    orientation,
    parallel_cosine,
    scalar_product,
    scalar_product_general,
    squared_magnitude,
)
from .core import (
    Coordinate,
    Discrete,
    DomainError,
    GeometryError,
    NegativeSigmaError,
    SigmaMatrix,
    VectorPQ,
    as_point,
    build_sigma_matrix,
    vector,
)
from .deformation import (
    PredicateRegistry,
    RegistryError,
    SigmaPredicate,
    default_registry,
    evaluate,
    register,
)
from .explorer import (
    CounterexampleReport,
    TubeGrid,
    TubeReport,
    TubeSample,
    convexity_demo,
    find_intransitivity,
    sample_tube,
)
from .region import RegionSpec
from .world_functions import (
    ConfigError,
    DistortionParams,
    WorldFunction,
    distorted_sigma,
    euclidean_sigma,
    load_geometry,
    polygon_region_sigma,
    read_sigma_csv,
    sphere_sigma,
    tabulated_sigma,
    write_sigma_csv,
)

__version__ = "0.1.0"
