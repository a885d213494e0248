//! Weierstrass filtrations of the Hodge bundle over Teichmüller curves in
//! strata of abelian differentials, with their exponents and Lyapunov
//! exponent sums in exact rational arithmetic.
//!
//! ```
//! use weierstrass::{low_genus_exponents, validate_stratum, Component, Rational};
//!
//! let s = validate_stratum(4, &[3, 2, 1], Component::Unspecified).unwrap();
//! let f = low_genus_exponents(&s).unwrap();
//! assert_eq!(f.sum(), Rational::new(25, 12));
//! ```

pub mod error;
pub mod filtration;
pub mod lyapunov;
pub mod rational;
pub mod report;
pub mod semigroup;
pub mod stratum;

pub use error::{Error, Result};
pub use filtration::{
    hn_all_exponent_multisets, hn_construct, hyperelliptic_exponents, low_genus_exponents, low_genus_exponents_with,
    one_section_exponents, one_section_exponents_with, Filtration, QuotientStep, StepLabel,
};
pub use lyapunov::{
    cmx_bound, cmx_bound_via_kappa, denominator_divides, ekz_sum, onesum_from_weight, onesum_max, sum_exponents,
    upper_bound_bruteforce, upper_bound_bruteforce_detail, upper_bound_closed, BruteForceBound, Subject, SumReport,
};
pub use rational::Rational;
pub use report::{genus_table, render_table, run_cli, OutputFormat, RowStatus, TableRow};
pub use semigroup::{
    gaps_one_point, gaps_one_point_with, members, rank_table_hyperelliptic, rank_table_one_point, weight,
    weight_bound_holds, GapSet, RankTable, TupleIndex,
};
pub use stratum::{
    derived_stratum, derived_zeros, hyperelliptic_signature, kappa_mu, validate_hyperelliptic_locus, validate_stratum,
    Component, LiftedZero, QuadraticSignature, Stratum,
};
