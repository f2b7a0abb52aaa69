"""A-stable wave solvers of order 2P built on fast recursive convolution.

The pieces, bottom up:

- ``params``: coefficients A_p(beta), the stability sum, beta_max, amplification factors.
- ``conv1d``: O(N) boundary-corrected inverse of the modified Helmholtz operator on lines.
- ``highorder1d``: the 1D scheme with inverse Lax-Wendroff boundary values.
- ``geometry``: embedded boundaries cut out of a Cartesian grid.
- ``adi``: split operators C and D_adi, the stage-reuse table, periodic 3D operators.
- ``scheme2d``: the 2D scheme, sourced updates and the start-up step.
- ``metrics`` / ``harness``: error norms, energy, anisotropy, configs, studies, CLI.
"""

from .adi import ADIOperators, PeriodicOperators3D, StageTable, apply_C, apply_D_adi, apply_Lgamma_inv, build_stage_table
from .conv1d import BoundarySpec, ConvWorkspace, LineGrid, apply_D, apply_Linv, dense_convolve, fast_convolve
from .errors import (
    ConfigurationError,
    FixedPointError,
    InstabilityError,
    MoltError,
    NumericalError,
    RefinementError,
)
from .geometry import Domain2D, EmbeddedLine, Grid2D, ImplicitCurve, build_embedded_lines
from .highorder1d import (
    DirichletData,
    Wave1D,
    WaveState1D,
    boundary_values_ILW,
    initial_step,
    step_1d,
)
from .metrics import anisotropy_metric, energy_functional, l2_error
from .params import (
    SchemeCoefficients,
    SolverParams,
    amplification_factor,
    beta_max,
    coefficient_A,
    stability_sum,
)
from .scheme2d import SourceSpec, Wave2D, WaveState2D, initial_step_2d, step_2d, step_2d_sourced4

__version__ = "0.1.0"
