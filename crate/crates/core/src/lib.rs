//! Exact computation of the genus-2 modular forms with diagonal divisor.
//!
//! The crate provides a truncated three-variable series ring over the exact
//! rationals, SL2 combinatorics for Hecke congruence subgroups (cusps, widths,
//! eta multiplier, characters, Eisenstein series), the theta/xi calculus for
//! weak Jacobi forms of weight zero, the arithmetic lift to Siegel forms, the
//! corresponding automorphic products with their Weyl data, and the Diophantine
//! classification of candidate weights.

pub mod arith;
pub mod borcherds;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod hecke;
pub mod modular;
pub mod numeric;
pub mod registry;
pub mod series;
pub mod theta;

pub use borcherds::{BorcherdsInput, WeylData};
pub use classify::Candidate;
pub use cyclotomic::{CycQ, Phase};
pub use error::{Error, Result};
pub use hecke::{LiftInput, SiegelForm};
pub use modular::{CharacterId, Cusp, CuspSet, EtaProduct, Mat2};
pub use series::{Coeff, ExponentKey, TriSeries, TruncationPolicy};
pub use theta::{JacobiForm, WeightZeroForm, XiProduct, XiSymbol};
