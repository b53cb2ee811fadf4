//! Independent reference solvers used to check the PIPG solver: a dense KKT
//! solve, an ADMM splitting solver and Dykstra's projection onto intersections.

mod admm;
mod dykstra;
mod kkt;

pub use admm::{splitting_reference_solve, ReferenceSolution};
pub use dykstra::{dykstra_project, DYKSTRA_MAX_CYCLES};
pub use kkt::{kkt_direct_solve, MAX_DENSE_KKT};
