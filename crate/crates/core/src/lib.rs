//! Executable metatheory for multi-agent epistemic logic.
//!
//! Formulas over knowledge modalities `K_i` are evaluated on finite Kripke
//! and topological models, proved in Hilbert systems K, S4, K+.2, S4.2 and
//! the interior-operator axiomatization of S4, decided by tableau for K and
//! S4, and probed for countermodels over small frame classes.

pub mod decision;
pub mod formula;
pub mod gen;
pub mod hilbert;
pub mod kripke;
pub mod par;
pub mod suite;
pub mod topospace;
pub mod toposys;

pub use formula::{parse, render, Agent, Formula, SchemaName};
pub use par::Exec;
