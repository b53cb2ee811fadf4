//! Euclidean projections onto the sets that make up the constraint set `D`
//! and onto their Cartesian product.

mod product;
mod sets;

pub use product::{Block, ProductSet};
pub use sets::{
    project_ball, project_ball_cap_cone, project_box, project_halfspace, project_soc, SetDescriptor,
};

/// Blockwise projection of `z` onto `d`.
pub fn project_product(z: &[f64], d: &ProductSet) -> crate::Result<Vec<f64>> {
    d.project(z)
}
