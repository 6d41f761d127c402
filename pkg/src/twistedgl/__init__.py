"""Exact geometric invariants of twisted general linear spaces over p-adic fields."""

from .localfield import (
    Prime, LocalFieldDescriptor, SquareClass, FieldElement, QP, Solubility,
    valuation, square_class, square_class_table, hilbert_qp, hilbert_tame,
    is_local_norm, solubility_oracle, solubility_budget,
)
from .qform import (
    QuadForm, FormInvariants, WittClass, quad_form, diag_form, alternating_form,
    bilinear_form, diagonalize, invariants, is_isotropic, witt_decompose,
    equivalent, witt_equivalent, direct_sum, scale, hyperbolic, norm_form,
    represents,
)
from .weil import Mu8, AdditiveCharacter, weil_rank1, weil_index, gauss_oracle, epsilon_half
from .etale import (
    FactorTower, EtaleAlgebraWithInvolution, AlgebraElement, make_algebra,
    trace_form_bilinear, trace_form_quadratic, trace_form_fixed,
)
from .classes import (
    ClassParameter, ClassInvariant, build_tGL_even, build_tGL_odd,
    build_SO_even, build_SO_odd, build_Sp, twist_invariant, corresponds,
    is_elliptic, weyl_discriminant,
)
from .gsnorm import (
    AmbientSpace, GSConfiguration, make_ambient, xy_condition, random_config,
    u_of_xy, rigidify, gs_norm, gs_section, gs_param_check,
)
from .endoscopy import (
    EndoscopicDatum, ThetaSpace, enumerate_elliptic_data, quasisplit_space,
    regular_nilpotent_sp, eta_sp, regular_nilpotent_so, eta_so,
    transfer_factor, transfer_factor_whittaker, gs_constancy_check,
    separation_check,
)
from .params import (
    FormalConstituent, FormalParameter, is_elliptic_param, classify,
    hypothesis_even_SO, mult_shell,
)

__version__ = "0.1.0"
