"""Ground states and the best Gagliardo–Nirenberg constant for -Δu + (-Δ)^s u = |u|^{p-2}u."""
from .errors import DegenerateInputError, FieldFormatError, ParameterError
from .field import (
    Field,
    GridSpec,
    Spectrum,
    apply_K,
    apply_K_inverse,
    dilate,
    from_spectrum,
    lp_norm,
    norm_triple,
    rearrange_radial,
    seminorm_d12,
    seminorm_ds2,
    synth_gaussian,
    to_spectrum,
)
from .fieldio import load_field, save_field
from .functionals import *  # noqa: F401,F403
from .functionals import __all__ as _functionals_all
from .solver import (
    SolverConfig,
    SolveReport,
    build_Q,
    fibering_root,
    nehari_project,
    petviashvili_solve,
    pohozaev_project,
)
from .verify import (
    check_identities,
    derivative_checks,
    equation_residual,
    gaussian_oracle,
    gn_sample,
    holder_check,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError", "FieldFormatError", "ParameterError",
    "Field", "GridSpec", "Spectrum", "apply_K", "apply_K_inverse", "dilate", "from_spectrum",
    "lp_norm", "norm_triple", "rearrange_radial", "seminorm_d12", "seminorm_ds2",
    "synth_gaussian", "to_spectrum", "load_field", "save_field",
    "SolverConfig", "SolveReport", "build_Q", "fibering_root", "nehari_project",
    "petviashvili_solve", "pohozaev_project",
    "check_identities", "derivative_checks", "equation_residual", "gaussian_oracle",
    "gn_sample", "holder_check",
    *_functionals_all,
]
