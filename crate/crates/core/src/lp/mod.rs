//! Exact rational linear programming and the relaxations of the assignment problem.

pub mod blossom;
pub mod builders;
pub mod program;
pub mod simplex;

pub use blossom::{
    enumerate_blossom_cuts, separate, solve_with_blossom_closure, BidirectedSystem, BlossomCut, BlossomError,
    ClosureError, ClosureResult, EnumerationLimits,
};
pub use builders::{
    build_lp1, build_lp1_star, build_lp3, maximal_laminar_category_unions, Lp1Star, Lp1StarInfo, Lp3Error, Lp3Model,
};
pub use program::{Column, Direction, LinearProgram, Row, Sense};
pub use simplex::{simplex_solve, LpSolution, LpStatus};
