//! Partitions of the index set `{0, .., k-1}`.

use crate::error::{Error, Result};

/// Guard for [`enumerate_set_partitions`]; Bell(8) = 4140 is the most
/// any caller here ever walks.
pub const MAX_PARTITION_GROUND: usize = 8;

/// A partition of `{0, .., ground-1}` into nonempty blocks. Blocks are
/// sorted internally and listed by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition after checking disjointness and coverage.
    pub fn new(ground: usize, blocks: Vec<Vec<usize>>) -> Result<SetPartition> {
        let mut seen = vec![false; ground];
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            block.sort_unstable();
            for &v in &block {
                if v >= ground {
                    return Err(Error::InvalidArgument(format!(
                        "element {v} outside ground set of size {ground}"
                    )));
                }
                if seen[v] {
                    return Err(Error::InvalidArgument(format!("element {v} repeated")));
                }
                seen[v] = true;
            }
            norm.push(block);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidArgument("blocks do not cover the ground set".into()));
        }
        norm.sort_by_key(|b| b[0]);
        Ok(SetPartition {
            ground,
            blocks: norm,
        })
    }

    /// The partition into singletons.
    pub fn discrete(ground: usize) -> SetPartition {
        SetPartition {
            ground,
            blocks: (0..ground).map(|v| vec![v]).collect(),
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.ground
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn is_refinement(&self, other: &SetPartition) -> bool {
        if self.ground != other.ground {
            return false;
        }
        let mut owner = vec![usize::MAX; other.ground];
        for (i, block) in other.blocks.iter().enumerate() {
            for &v in block {
                owner[v] = i;
            }
        }
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&v| owner[v] == owner[block[0]]))
    }

    /// The blocks contained in `subset`, provided `subset` is exactly a
    /// union of blocks; anything else is an error.
    pub fn blocks_over(&self, subset: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut wanted = vec![false; self.ground];
        for &v in subset {
            if v >= self.ground {
                return Err(Error::InvalidArgument(format!(
                    "element {v} outside ground set of size {}",
                    self.ground
                )));
            }
            wanted[v] = true;
        }
        let mut chosen = Vec::new();
        let mut covered = 0usize;
        for block in &self.blocks {
            if block.iter().all(|&v| wanted[v]) {
                covered += block.len();
                chosen.push(block.clone());
            }
        }
        if covered != wanted.iter().filter(|&&w| w).count() {
            return Err(Error::InvalidArgument(
                "subset is not a union of blocks".into(),
            ));
        }
        Ok(chosen)
    }
}

/// Every partition of `{0, .., k-1}`, in restricted-growth-string
/// order. The discrete partition appears exactly once, as does the
/// single-block partition for `k >= 1`.
pub fn enumerate_set_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if k > MAX_PARTITION_GROUND {
        return Err(Error::TooLarge {
            what: "partition ground set",
            limit: MAX_PARTITION_GROUND,
            actual: k,
        });
    }
    if k == 0 {
        return Ok(vec![SetPartition {
            ground: 0,
            blocks: Vec::new(),
        }]);
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    loop {
        let block_count = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); block_count];
        for (v, &b) in rgs.iter().enumerate() {
            blocks[b].push(v);
        }
        out.push(SetPartition { ground: k, blocks });

        // next restricted growth string
        let mut i = k;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for x in rgs[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}
