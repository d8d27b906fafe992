//! Certified complex analysis for the elliptic-unit machinery: lattices of
//! ideals, Klein/Siegel/Robert special values, Hecke L-derivatives at 0 by
//! an incomplete-gamma route, the Kronecker limit identity check, and
//! logarithmic embeddings.

pub mod epstein;
pub mod lattice;
pub mod lfun;
pub mod logemb;
pub mod theta;

pub use epstein::{eisenstein_g, shifted_zeta_at_int, shifted_zeta_at_zero};
pub use lattice::{embed_elt, KLattice};
pub use lfun::{
    dirichlet_factorization, hecke_l_at_zero, l_deriv0_via_dirichlet, siegel_invariant,
    stark_log_norm, verify_kronecker, zeta_k_at_0, zeta_k_at_0_lattice, KroneckerReport, LAtZero,
};
pub use logemb::{log_embedding, regulator_rank1, LogVector};
pub use theta::{klein_form, robert_psi_value, theta_value, LatticeEval};
