//! Sparse polynomial arithmetic over GF(2) and the scripted derivations that
//! rebuild the curve coefficients and the splitting obstructions.

mod derive;
mod monomial;
mod poly;
mod resultant;

pub use monomial::{Monomial, Var, MAX_EXPONENT, NVARS};
pub use poly::MultiPoly;
pub use resultant::{
    det_bareiss, det_cofactor, eliminate, resultant, resultant_with, sylvester_matrix,
    ResultantMethod, MAX_COFACTOR_SIZE,
};
pub use derive::{
    assemble, cleared_cross_difference, coefficients2, curve_reference, derive_curve,
    derive_curve_poly, divide_by_linear, gamma_reference, reduce_i, CoeffTable, GAMMA_INDICES,
};
pub use chains::{
    verify_case_chains, verify_curve_identity, verify_two_conics_obstruction, DerivationReport,
    DerivationStep, Verdict, CONDITION, H_ABCD,
};

mod chains;

/// Named groups of derivation reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Curve,
    Conics,
    Chains,
    All,
}

pub fn run_suite(suite: Suite) -> Vec<DerivationReport> {
    match suite {
        Suite::Curve => vec![verify_curve_identity()],
        Suite::Conics => vec![verify_two_conics_obstruction()],
        Suite::Chains => verify_case_chains(),
        Suite::All => {
            let mut out = vec![verify_curve_identity(), verify_two_conics_obstruction()];
            out.extend(verify_case_chains());
            out
        }
    }
}
