//! Rewriting in the quantum double: exchange table, Gröbner rules, canonical forms.

pub mod double;
pub mod exchange;
pub mod rules;

pub use double::{DoubleAlgebra, Strategy};
pub use exchange::{check_round_trip, derive_exchange, ExchangeEntry, ExchangeTable};
pub use rules::{
    complete, derive_dd_rules, derive_re_rules, echelon, DegreeLog, Reducer, Rule, RuleSet,
    DEFAULT_RULE_CAP,
};
