//! Exact enumeration of labeled rooted trees, normalized binary trees and
//! Stirling permutations, with the descent-type statistics whose generating
//! polynomials expand the tree Eulerian polynomial in the γ-basis.

pub mod binary_trees;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod poly;
pub mod rooted_trees;
pub mod stirling;
pub mod symfunc;
pub mod verify;

pub use enumerate::{Config, Tally};
pub use error::{Error, Result};
pub use poly::{GammaVector, IntPolynomial};
