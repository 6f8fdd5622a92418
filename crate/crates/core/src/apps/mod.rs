//! Demonstration applications built only on the public engine API.

pub mod analyser;
pub mod calculator;
pub mod expr;
pub mod labyrinth;

pub use analyser::{sample_function, FunctionDef, PlotBinding};
pub use calculator::Calculator;
pub use expr::{eval_expression, format_value};
pub use labyrinth::constrained_spot_move;
