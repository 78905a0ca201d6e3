//! Tableau decision procedures for K and S4, bounded countermodel search
//! over frame classes, and maximal consistent sets over finite closures.
//!
//! There is no decision procedure for S4.2; its validity claims rest on
//! kernel certificates and exhaustive [`SearchResult::NoneUpTo`] bounds.

mod mcs;
mod search;
mod tableau;

pub use mcs::{consistent, enumerate_mcs, extend_mcs, finite_closure, FiniteMcs, McsError, MAX_CLOSURE};
pub use search::{
    bounded_countermodel, bounded_countermodel_with, SearchError, SearchResult, MAX_SEARCH_VARS, MAX_SEARCH_WORLDS,
};
pub use tableau::{
    decide_valid, tableau_sat, tableau_sat_with, Logic, TableauError, TableauResult, Validity, MAX_TABLEAU_SIZE,
};
