//! Model checking and semantics tooling for a belief-preference-intention
//! extension of CTL.
//!
//! - [`kernel`]: formulas, models, state sets, relation closures.
//! - [`textio`]: the `.bpi` formula and `.bpm` model formats.
//! - [`oracle`]: direct fixpoint semantics, used as a reference.
//! - [`checker`]: the labelling model checker.
//! - [`frames`]: frame-condition validation of models.
//! - [`soundness`]: schema instantiation and validity suites.
//! - [`satbound`]: bounded satisfiability search.
//! - [`cli`]: the `bpictl` command-line driver.
//! - [`random`]: seeded model and formula generators for testing.

pub mod checker;
pub mod cli;
pub mod frames;
pub mod kernel;
pub mod oracle;
pub mod random;
pub mod satbound;
pub mod soundness;
pub mod textio;
