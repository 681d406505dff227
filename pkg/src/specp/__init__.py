"""Special p-groups of class 2: multipliers, exterior and tensor squares, capability."""

from .abelian import (
    AbelianStructure,
    PresentedAbelianGroup,
    multiplier_abelian,
    smith_normal_form,
    structure_of_subquotient,
)
from .families import (
    abelian,
    exp_p2_family,
    extraspecial,
    free_special,
    non_capable_witness,
    rank_deficient,
    trivial,
)
from .fp import fp_span_dim
from .hall import enumerate_basic, rank_crosscheck, witt_chi
from .multiplier import (
    formula_suite,
    ker_beta,
    multiplier_order,
    power_tensor_subgroup,
    psi2,
    psi2_image,
)
from .oracle import oracle_square
from .pcgroup import (
    GroupElement,
    PcPresentation,
    center,
    commutator,
    derived_subgroup,
    inverse,
    multiply,
    power,
    quotient_by_central,
    structure_report,
)
from .presentation_io import emit_presentation, parse_presentation
from .report import run, run_grid
from .wedge import FormalSum, capability_report, exterior_center, j2_and_nabla, square

__version__ = "0.1.0"
