"""Direct sampling inversion from multi-frequency sparse backscattering
far-field data in 2D, with the forward solvers needed to synthesize it."""

__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, CoincidenceError, DegeneratePairError,
                     DomainError, Dsm2dError, MissingMirrorError, ResolutionError,
                     SolverError, UnresolvedOscillationError)
from .geometry import (DirectionPairSet, ParametricBoundary, SamplingGrid, Strip,
                       boundary_sample, illuminated_partition, make_direction_pairs,
                       strip_hull, unit_directions)
from .specfun import CylinderFunctionValue, bessel_jy, bessel_jy_all, fundamental_solution
from .forward_weak import (MediumContrast, PointScattererSet, RasterSpec, born_far_field,
                           foldy_far_field, lippmann_schwinger_solve)
from .forward_bie import (BoundaryCondition, BoundarySolution, ObstacleOperator,
                          far_field_from_traces, mie_far_field_circle,
                          mie_far_field_penetrable_circle, solve_obstacle)
from .forward_kirchhoff import (KirchhoffConfig, bojarski_rhs, go_normalization,
                                kirchhoff_far_field, majda_leading_far_field)
from .indicators import (FarFieldDataset, IndicatorField, MediumComponent, ObstacleComponent,
                         PointsComponent, Scene, assemble_dataset, indicator_i1, indicator_i2,
                         indicator_profile, merge_datasets, perturb_noise)
