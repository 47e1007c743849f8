//! Canonical text form, parser and JSON rendering.

mod format;
pub mod json;
mod parse;
mod print;

pub use format::{format_cq, format_cq_factor};
pub use parse::{
    eval_observable, parse_diffop, parse_expr, parse_in, parse_observable, parse_rational, parse_series, Context,
    Expr, Pos,
};
pub use print::{format_diffop, format_observable, format_operator, format_part, format_series, format_values};
