//! Exact S¹-equivariant cohomology characters on the projective line,
//! the Lerman symplectic cut at level 0, and checks of the gluing formula
//! and Morse-type inequalities relating a space to its cut.
//!
//! Characters are Laurent polynomials in `u = e^{-iθ}`, weight `k` at `u^k`.
//!
//! ```
//! use symcut_core::{verify_morse, CharPoly, Character, EquivBundleCP1};
//!
//! let r = verify_morse(&EquivBundleCP1::line(3, 3));
//! assert!(r.passed);
//! assert_eq!(r.witness, Some(CharPoly::constant(Character::weight_range(0, 2))));
//! ```

pub mod character;
pub mod geometry;
pub mod linalg;
pub mod oracles;
pub mod verifier;

pub use character::{morse_quotient, CharPoly, Character, CharacterError};
pub use geometry::{CohomologyTable, CutDecomposition, EquivBundleCP1, GeometryError, LineWeights};
pub use oracles::{cech_cohomology_nodal, cech_cohomology_p1, localization_index, OracleError};
pub use verifier::{
    cross_validate, equality_region, region_findings, region_rows, sweep, sweep_bundles,
    verify_cut_inequality, verify_gluing, verify_morse, verify_mv_morse, verify_semicontinuity,
    verify_simple, CheckId, CheckResult, CheckTally, GridSpec, H1LimitAudit, IntRange,
    RegionFindings, RegionRow, Residual, SweepOptions, SweepReport, VerifyError,
};
