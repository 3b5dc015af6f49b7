//! The alternating-block partition for dependent data: a length-n sequence
//! splits into b_n odd blocks S_j and b_n even blocks S'_j of a_n indices
//! each, so odd blocks can be swapped for independent copies at a cost of
//! 2 b_n beta(a_n) in total variation.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};

/// One block of consecutive 1-based indices, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub first: usize,
    pub last: usize,
}

impl Block {
    /// 0-based half-open range for slicing.
    pub fn zero_based(&self) -> std::ops::Range<usize> {
        (self.first - 1)..self.last
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The partition of {1..n} into 2 b_n alternating blocks of length a_n:
/// S_j = {2(j-1)a_n + 1, ..., (2j-1)a_n}, S'_j = {(2j-1)a_n + 1, ..., 2j a_n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub n: usize,
    pub a_n: usize,
    pub b_n: usize,
}

impl BlockPartition {
    /// Odd block S_j for 1-based j in 1..=b_n.
    pub fn odd_block(&self, j: usize) -> Block {
        debug_assert!(j >= 1 && j <= self.b_n);
        Block {
            first: 2 * (j - 1) * self.a_n + 1,
            last: (2 * j - 1) * self.a_n,
        }
    }

    /// Even block S'_j for 1-based j in 1..=b_n.
    pub fn even_block(&self, j: usize) -> Block {
        debug_assert!(j >= 1 && j <= self.b_n);
        Block {
            first: (2 * j - 1) * self.a_n + 1,
            last: 2 * j * self.a_n,
        }
    }

    pub fn odd_blocks(&self) -> impl Iterator<Item = Block> + '_ {
        (1..=self.b_n).map(|j| self.odd_block(j))
    }

    pub fn even_blocks(&self) -> impl Iterator<Item = Block> + '_ {
        (1..=self.b_n).map(|j| self.even_block(j))
    }
}

/// Build the partition; requires 2 a_n to divide n.
pub fn blocking(n: usize, a_n: usize) -> Result<BlockPartition> {
    if n == 0 || a_n == 0 {
        return param_err("n", "n and a_n must be >= 1");
    }
    if n % (2 * a_n) != 0 {
        return Err(Error::Divisibility { n, twice_a: 2 * a_n });
    }
    Ok(BlockPartition {
        n,
        a_n,
        b_n: n / (2 * a_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_by_two_partition() {
        let p = blocking(8, 2).unwrap();
        assert_eq!(p.b_n, 2);
        assert_eq!(p.odd_block(1), Block { first: 1, last: 2 });
        assert_eq!(p.even_block(1), Block { first: 3, last: 4 });
        assert_eq!(p.odd_block(2), Block { first: 5, last: 6 });
        assert_eq!(p.even_block(2), Block { first: 7, last: 8 });
    }

    #[test]
    fn unit_blocks_alternate_singletons() {
        let p = blocking(6, 1).unwrap();
        let odd: Vec<usize> = p.odd_blocks().map(|b| b.first).collect();
        let even: Vec<usize> = p.even_blocks().map(|b| b.first).collect();
        assert_eq!(odd, vec![1, 3, 5]);
        assert_eq!(even, vec![2, 4, 6]);
        assert!(p.odd_blocks().all(|b| b.len() == 1));
    }

    #[test]
    fn blocks_partition_the_index_set() {
        for (n, a) in [(8usize, 2usize), (24, 3), (60, 5), (6, 1)] {
            let p = blocking(n, a).unwrap();
            let mut seen = vec![false; n + 1];
            for b in p.odd_blocks().chain(p.even_blocks()) {
                assert_eq!(b.len(), a);
                for i in b.first..=b.last {
                    assert!(!seen[i], "index {i} covered twice");
                    seen[i] = true;
                }
            }
            assert!(seen[1..].iter().all(|&s| s), "not all of 1..={n} covered");
        }
    }

    #[test]
    fn zero_based_ranges_slice_correctly() {
        let p = blocking(8, 2).unwrap();
        let data: Vec<usize> = (1..=8).collect();
        assert_eq!(&data[p.odd_block(2).zero_based()], &[5, 6]);
    }

    #[test]
    fn divisibility_is_enforced() {
        assert!(matches!(
            blocking(10, 3),
            Err(Error::Divisibility { .. })
        ));
        assert!(blocking(0, 1).is_err());
    }
}
