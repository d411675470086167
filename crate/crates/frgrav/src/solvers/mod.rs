//! Exact-solution families of the reduced equations, the psi solver and the
//! Levi-Civita selector.

mod families;
mod lc;
mod psi;

pub use families::{
    aux_quantities, family_a, family_b, family_c, family_d, family_d_with_aux, solve_family_c_h4,
    varsigma_upsilon, AuxQuantities, Branch, GeneratingData,
};
pub use lc::{select_levi_civita, FamilyTag, LcSelection};
pub use psi::{fractional_exp, solve_psi, PsiBoundary, PSI_MAX_UNKNOWNS};
