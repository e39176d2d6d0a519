//! Word maps on finite groups: exact and sampled distributions, lower
//! central series, `G(S_n)` residuals, and checkers for the nilpotency
//! results those objects satisfy.

pub mod corpus;
pub mod error;
pub mod group;
mod par;
pub mod prob;
pub mod rational;
pub mod spectrum;
pub mod theorems;
pub mod word;

pub use error::{Error, GroupError, Result, WordError};
pub use group::{Elem, FiniteGroup, SubgroupSet};
pub use word::Word;
