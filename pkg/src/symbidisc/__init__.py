"""Numerical geometry of the symmetrized bidisc and Isaev's domain D1.

Every public map accepts Python scalars or numpy arrays of complex values;
array inputs are evaluated elementwise.
"""

from symbidisc.complex_core import (
    BranchCutError,
    DegenerateError,
    DomainError,
    ToleranceConfig,
    Tri,
    margin_to_tri,
    solve_quadratic,
    sqrt_slit,
)
from symbidisc.disc_geometry import BidiscPoint, DiscAutomorphism, mobius_distance
from symbidisc.symmetrized_bidisc import (
    GPoint,
    apply_H,
    leaf_index,
    membership_g,
    membership_gc,
    orbit_path,
    recover_automorphism,
    reindex_a_to_b,
    reindex_b_to_a,
    sample_g,
    sym,
    sym_inverse,
)
from symbidisc.isaev_domains import (
    D1Point,
    ProjPoint3,
    SO21Element,
    eta_index,
    membership_d1,
    membership_d2_1,
    membership_ds_dst,
    membership_omega1,
    so21_act,
    so21_generator,
)
from symbidisc.biholomorphisms import (
    DiagramReport,
    check_diagram,
    map_F,
    map_F_inv,
    map_H,
    map_H_inv,
    map_J,
    map_J_inv,
    sym_d2_1,
    sym_omega1,
)
from symbidisc.levi_analysis import (
    LeviReport,
    cauchy_riemann_residual,
    check_f_submersion,
    g_a,
    grad_g_a,
    jacobian_sym_det,
    levi_matrix,
    levi_value,
)

__version__ = "0.1.0"
