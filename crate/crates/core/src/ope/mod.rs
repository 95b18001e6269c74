//! Operator product expansions and the normal-ordering engine.

mod axioms;
mod engine;
mod table;

pub use axioms::{AxiomReport, AxiomSample};
pub use engine::{max_weight_from_env, Engine, EngineError, DEFAULT_MAX_WEIGHT};
pub use table::{OpeTable, Preset};
