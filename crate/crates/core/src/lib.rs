//! Typed first-order rule mining over numeric time series.

pub mod backtest;
pub mod encode;
pub mod error;
pub mod eval;
pub mod foil;
pub mod focl;
pub mod formula;
pub mod knowledge;
pub mod mmdr;
pub mod parse;
pub mod series;
pub mod store;
pub mod syntax;
pub mod synthetic;
pub mod types;
pub mod value;

pub use error::{BacktestError, DataError, LearnError, LogicError, MmdrError};
pub use eval::{clause_covers, evaluate_literal, rule_covers, Evaluator};
pub use store::{FactStore, InterArgConstraint, TypedSignature};
pub use syntax::{Binding, HornClause, Literal, Rule, Term, Variable};
pub use types::{cyclic_distance, DataType, ScaleKind};
pub use value::{Constant, Value};
