//! Problem input layer: scalar expressions in `t`, matrix-valued functions
//! built from them, and the JSON problem document.

pub mod expr;
pub mod matrix_fn;

pub use expr::{diff_expr, eval_expr, parse_expr, print_expr, BinOp, Expr, Func};
pub use matrix_fn::{
    load_matrix_file, load_matrix_str, load_problem_file, load_problem_str, problem_to_json,
    ComplexEntry, HamiltonianProblem, MatrixFunction,
};
