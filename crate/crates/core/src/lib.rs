//! Feasibility solver for the market split problem: find `x` in `{0,1}^n`
//! with `A x = d` for a non-negative integer matrix `A`.
//!
//! The solver enumerates every solution of the first row with a four-list
//! heap enumerator ([`enumerate1d`]) and checks each equal-weight batch of
//! candidates against all rows at once ([`validate`]). [`solver`] glues the
//! two into a producer/consumer pipeline; [`oracle`] holds the exhaustive
//! reference solvers the tests compare against.

pub mod enumerate1d;
pub mod instances;
pub mod oracle;
pub mod solver;
pub mod validate;

pub use enumerate1d::{build_quarter_tables, CandidateBatch, Enumerator, QuarterTable, QuarterTables};
pub use instances::{
    generate_instance, parse_instance, surrogate_reduce, verify_solution, write_instance,
    InstanceError, MspInstance, SolutionVector,
};
pub use oracle::{brute_force_all, two_list_all};
pub use solver::{solve, Backend, SolveError, SolveMode, SolveResult, SolverConfig, Verdict};
pub use validate::{encode_vector, hash_two, ExecMode, Validator};
