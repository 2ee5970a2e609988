//! Exact jet calculus for formal diffeomorphisms, vector fields and
//! meromorphic one-forms at `(ℂⁿ, 0)`, with group-level certification.
//!
//! Everything is truncated at a jet order `N` and computed over a [`Scalar`]
//! field, by default [`Qi`] (the Gaussian rationals). "Equal" always means
//! equal as order-`N` jets.

pub mod dicritic;
pub mod diffeo;
pub mod error;
pub mod field;
pub mod forms;
pub mod groups;
pub mod jet;
pub mod linalg;
pub mod mero;
pub mod normal;
pub mod poly;
pub mod sample;
pub mod scalar;

pub use diffeo::{Diffeo, TangencyOrder};
pub use error::{Error, Result};
pub use field::VectorField;
pub use forms::{MeroField, OneForm};
pub use groups::{Certificate, GroupSpec, Verdict, Word};
pub use jet::{Jet, MultiIndex};
pub use linalg::Matrix;
pub use mero::{MeroJet, PJet};
pub use scalar::{Qi, Scalar};

use num_rational::BigRational;

pub type RationalJet = Jet<BigRational>;
pub type RationalField = VectorField<BigRational>;
pub type RationalDiffeo = Diffeo<BigRational>;
pub type FloatJet = Jet<f64>;
pub type FloatField = VectorField<f64>;
pub type FloatDiffeo = Diffeo<f64>;
