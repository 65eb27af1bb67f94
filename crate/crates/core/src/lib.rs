//! Exact-arithmetic certificates for hyperbolic small knots.
//!
//! The library mechanizes one construction: filling one component of the
//! 2-bridge links `C(2, 2k, -2)` produces knots in lens spaces and in the
//! spherical manifolds of type T, O, and I, and both hyperbolicity and
//! smallness of those knots reduce to finitely many exact checks
//! (continued-fraction identities, 2-bridge non-equivalence, and
//! membership of slope pairs in a classified table). Each module owns one
//! layer:
//!
//! * [`rational`]: fractions, extended slopes, fractional-linear maps,
//!   closed parameter intervals;
//! * [`cfrac`]: continued fractions, simple forms, Schubert normalization
//!   and equivalence, the odd-form exclusion check;
//! * [`slope_table`]: the nine boundary-slope-pair families and exact
//!   membership/exclusion deciders;
//! * [`cert`]: manifold descriptors, certificate composition, replay, and
//!   range sweeps;
//! * [`parse`]: the shared textual grammars.
//!
//! All values are immutable and all operations pure, so everything can be
//! shared freely across threads; sweeps parallelize internally.

pub mod cert;
pub mod cfrac;
pub mod error;
pub mod parse;
pub mod rational;
pub mod slope_table;

pub use cert::{
    admissible_k, certify_lens, certify_spherical, certify_spherical_with, replay, sweep_verify,
    sweep_verify_with, ExceptionalSlopes, LensSpace, SmallKnotCertificate, SphericalTOI,
    SweepConfig, SweepReport, Verdict,
};
pub use cfrac::{
    cf_equivalent, lk_fraction, lk_link, seifert_family_exclusion, ContinuedFraction, SimpleCF,
    TwoBridgeLink,
};
pub use error::{Error, Result};
pub use rational::{ExtendedSlope, Fraction, MobiusMap, ParamInterval, Solutions};
pub use slope_table::{exclusion_check, pair_in_table, table_families, SlopePair};
