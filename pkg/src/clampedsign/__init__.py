"""Discrete sign-preserving checks for clamped fourth-order operators.

The package assembles second-order finite-difference discretizations of
clamped problems on an interval, a ball (radial) and an annulus, and
checks positivity of their Green matrices.  On top of that sit a
principal-eigenpair solver, a monotone iteration for MEMS-type semilinear
problems, a Newton solver for a Willmore-type graph equation and the
Moreau decomposition in the clamped energy inner product.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BracketFailure,
    ClampedSignError,
    DegenerateInput,
    InvalidInput,
    NoConvergence,
    NumericalFailure,
    NumericalGuard,
    OutOfRange,
    PositivityFailure,
    SingularSystem,
)
from .grid import Grid, Profile  # noqa: E402
from .banded import BandedMatrix  # noqa: E402
from .operators import (  # noqa: E402
    FactorPair,
    FourthOrderCoeffs,
    SecondOrderCoeffs,
    auto_factor,
    compose,
    factor_anti_diffusive,
    theorem_lambda_max,
    trivial_factor,
)
from .fd import (  # noqa: E402
    assemble_1d,
    assemble_radial,
    boundary_second_derivatives,
    clamped_operator,
    green_matrix,
    solve,
)
from .sign import (  # noqa: E402
    GammaReport,
    RegionCell,
    SignReport,
    Verdict,
    check_sign_preserving,
    gamma_structure,
    in_theorem_region,
    region_map,
)
from .spectral import EigenPair, principal_eigenpair  # noqa: E402
from .semilinear import (  # noqa: E402
    BranchPoint,
    SemilinearProblem,
    WillmoreProblem,
    branch_sweep,
    euler_substitution_residual,
    lambda_star_bound,
    lambda_star_bracket,
    mems_g,
    monotone_solve,
    willmore_solve,
)
from .cone import EnergyInnerProduct, MoreauSplit, project_cone  # noqa: E402
