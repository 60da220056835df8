"""Radial solutions of -Delta u = lam f(u) on the unit ball, their Morse
indices, integral diagnostics and the solution curve lam(a).

Set ``GELFAND_MORSE_NO_JIT=1`` before import to run the pure-numpy path.
"""

from . import _jit
from ._jit import JIT_ENABLED
from .continuation import (
    BifurcationCurve,
    IndexJump,
    IndexMonotonicityError,
    SweepAborted,
    SweepOptions,
    TurningPoint,
    bounded_index_region,
    compute_point,
    sweep,
)
from .diagnostics import (
    CriticalFamilyReport,
    critical_blowup_ladder,
    critical_family,
    diagnose,
    energy_residual,
    fit_decay_exponent,
    fmass_vs_L1,
    fprime_mass_scaling,
    grad_mass,
    pohozaev_residual,
    verify_critical_family,
)
from .nonlinearity import (
    GrowthCertificate,
    InconsistentCertificateError,
    Nonlinearity,
    check_superlinearity,
    constant,
    derive_lower_bound,
    exponential,
    from_table,
    load_table,
    shifted_power,
)
from .radial_solver import (
    NoZeroCrossing,
    ShootingError,
    SolutionPoint,
    SolverOptions,
    StepSizeUnderflow,
    rescale_to_unit_ball,
    residual,
    shoot,
    solve_point,
)
from .spectrum import MorseIndexResult, UnconvergedPointError, harmonic_multiplicity, morse_index

__version__ = "0.1.0"

__all__ = sorted(
    name for name, obj in globals().items()
    if not name.startswith("_") and not isinstance(obj, type(_jit))
)
