//! Symbolic dynamics and kneading theory for odd discontinuous bimodal maps
//! of the interval.
//!
//! The pipeline runs from a periodic kneading sequence to its kneading
//! determinant, lap-number series and growth number, and from the same
//! sequence to the Markov partition, the transition matrix and the orbit
//! endomorphism whose characteristic polynomial ties the two together.

pub mod cli;
pub mod homology;
pub mod kneading;
pub mod maps;
pub mod markov;
pub mod poly;
pub mod symbolic;
