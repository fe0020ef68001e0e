//! Exact-arithmetic construction and classification of non-toric,
//! Q-factorial, Gorenstein Fano threefolds of Picard number one with a
//! K*-action whose maximal orbit quotient is the projective plane.
//!
//! The library builds the combinatorial data of such varieties (generator
//! matrices, class-group gradings, defining-relation templates), evaluates
//! the Fano, Gorenstein and non-toricity criteria in exact arithmetic, and
//! re-enumerates the full classification with its numerical invariants.

pub mod abelian;
pub mod criteria;
pub mod enumerate;
pub mod error;
pub mod export;
pub mod family;
pub mod invariants;
pub mod matrix;
pub mod reference;
pub mod unit_fractions;

pub use abelian::{AbelElem, AbelGroup};
pub use error::KfanoError;
pub use family::{FamilyInput, FamilyType, GeneratorMatrix, Grading, VarLabel};
pub use matrix::{cokernel, snf, IntMat, SnfResult};
