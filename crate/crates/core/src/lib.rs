//! Wait-free solvability of colorless tasks through the closure operator.

pub mod closure;
pub mod complex;
pub mod covering;
pub mod flp;
pub mod solver;
pub mod task;
