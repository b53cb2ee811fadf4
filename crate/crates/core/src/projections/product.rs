use serde::{Deserialize, Serialize};

use super::SetDescriptor;
use crate::error::{check_len, Error, Result};

/// One factor of a product set, acting on `z[start..end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    #[serde(flatten)]
    pub set: SetDescriptor,
    /// Half-open, zero-based `[start, end)`.
    pub range: [usize; 2],
}

impl Block {
    pub fn len(&self) -> usize {
        self.range[1] - self.range[0]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Cartesian product of sets over contiguous, disjoint, covering blocks of `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Block>", into = "Vec<Block>")]
pub struct ProductSet {
    blocks: Vec<Block>,
    dim: usize,
}

impl ProductSet {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let mut next = 0;
        for b in &blocks {
            if b.range[0] != next || b.range[1] <= b.range[0] {
                return Err(Error::InvalidArgument(format!(
                    "product set blocks must be contiguous and non-empty; block {:?} after index {next}",
                    b.range
                )));
            }
            b.set.validate()?;
            b.set.check_block_len(b.len())?;
            next = b.range[1];
        }
        Ok(Self { blocks, dim: next })
    }

    /// Builds the product from sets laid out back to back. Sets without a fixed
    /// dimension take the paired length.
    pub fn from_sets(sets: impl IntoIterator<Item = (SetDescriptor, usize)>) -> Result<Self> {
        let mut start = 0;
        let blocks = sets
            .into_iter()
            .map(|(set, len)| {
                let b = Block {
                    set,
                    range: [start, start + len],
                };
                start += len;
                b
            })
            .collect();
        Self::new(blocks)
    }

    pub fn full_space(dim: usize) -> Self {
        if dim == 0 {
            return Self {
                blocks: Vec::new(),
                dim: 0,
            };
        }
        Self {
            blocks: vec![Block {
                set: SetDescriptor::FullSpace { dim },
                range: [0, dim],
            }],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_full_space(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| matches!(b.set, SetDescriptor::FullSpace { .. }))
    }

    pub fn project_in_place(&self, z: &mut [f64]) {
        debug_assert_eq!(z.len(), self.dim);
        for b in &self.blocks {
            b.set.project_in_place(&mut z[b.range[0]..b.range[1]]);
        }
    }

    /// Blockwise projection. Fails when `z` does not match the covered dimension.
    pub fn project(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_len("project_product", self.dim, z.len())?;
        let mut out = z.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        z.len() == self.dim
            && self
                .blocks
                .iter()
                .all(|b| b.set.contains(&z[b.range[0]..b.range[1]], tol))
    }
}

impl TryFrom<Vec<Block>> for ProductSet {
    type Error = Error;

    fn try_from(blocks: Vec<Block>) -> Result<Self> {
        Self::new(blocks)
    }
}

impl From<ProductSet> for Vec<Block> {
    fn from(p: ProductSet) -> Self {
        p.blocks
    }
}
