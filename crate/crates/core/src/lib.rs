//! Classification of the permutation trinomials a x + b x^q + x^(2q-1) over
//! F_{q^2}, with the supporting machinery: table-based field arithmetic,
//! binomial-sum identities, power sums and their closed forms, the cubic
//! discriminant identities, and a verifier that checks the classification
//! predicates against brute force over every coefficient pair.

pub mod classify;
pub mod combinat;
pub mod cubic;
pub mod error;
pub mod field;
pub mod trinomial;

pub use classify::{
    classify, classify_even, classify_odd, exhaustive_verify, sampled_verify, CaseTag, Mismatch,
    Report, Verdict, EXHAUSTIVE_LIMIT,
};
pub use combinat::{binom_sum, check_identity, gen_binom, Identity, IdentityCheck};
pub use cubic::{
    build_g, check_disc_identities, coords_from_instance, count_roots_fq, disc_cubic, theta,
    uniqueness_property, Cubic, CubicParams, DiscIdentities, Uniqueness,
};
pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, TABLE_BUDGET};
pub use trinomial::{power_sum_exponent, Trinomial};
