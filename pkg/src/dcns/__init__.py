"""Numerical laboratory for 1-D compressible Navier-Stokes flow with
temperature-degenerate viscosity and far-field vacuum, solved in
entropy-weighted variables by a linearize / regularize / iterate scheme."""

from .errors import (CFLViolation, ConfigError, ConstraintViolation, DcnsError,
                     InadmissibleKappa, LegFailed, NoContraction,
                     NonpositiveCoefficient, NonpositiveDensity,
                     NonpositiveField, ShapeMismatch, SingularTridiagonal,
                     SupportTooWide)
from .fields import Grid, ScalarField
from .initial_data import CompatReport, InitSpec, check_compatibility, gen_initial
from .linearized_solver import FrozenCoeffs, StepParams, advance
from .params import DerivedConsts, ModelParams, validate_params
from .picard import (ContinuationPlan, IterationReport, PicardResult, RunSetup,
                     Trajectory, continuation_run, gamma_metric, picard_solve,
                     solve_with_halving)
from .reformulation import (PhysState, ReformState, from_reformulated,
                            to_reformulated)

__version__ = "0.1.0"
