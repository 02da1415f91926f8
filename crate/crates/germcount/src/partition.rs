//! Partitions P = (r_1 >= ... >= r_l) of k, their block structure, and the
//! stabilizer order N(P).

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition must have at least one part")]
    Empty,
    #[error("partition parts must be positive integers, got {0:?}")]
    BadPart(String),
}

impl Partition {
    /// Canonicalizes: parts are sorted non-increasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if parts.iter().any(|&r| r == 0) {
            return Err(PartitionError::BadPart("0".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Comma-separated user input, e.g. "2,1" or "1,2" (both become (2,1)).
    pub fn parse(s: &str) -> Result<Self, PartitionError> {
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let piece = piece.trim();
            let r: u32 = piece
                .parse()
                .map_err(|_| PartitionError::BadPart(piece.to_string()))?;
            if r == 0 {
                return Err(PartitionError::BadPart(piece.to_string()));
            }
            parts.push(r);
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// k, the number being partitioned.
    pub fn k(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// l, the number of parts.
    pub fn ell(&self) -> usize {
        self.parts.len()
    }

    /// Expected dimension of the stable type for source/target dimensions
    /// (n, p): p - k(p-n+1) + l.
    pub fn dimension(&self, n: usize, p: usize) -> i64 {
        assert!(n < p);
        let k = self.k() as i64;
        p as i64 - k * (p as i64 - n as i64 + 1) + self.ell() as i64
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.parts.iter().all(|&r| r == 1)
    }

    /// Starting index (0-based, into z_1..z_k) of block i.
    pub fn block_start(&self, i: usize) -> usize {
        self.parts[..i].iter().map(|&r| r as usize).sum()
    }

    /// Order of the subgroup of S_l fixing the partition: the product of
    /// factorials of part multiplicities.
    pub fn stabilizer_order(&self) -> u64 {
        let mut total: u64 = 1;
        let mut run: u64 = 0;
        let mut prev: Option<u32> = None;
        for &r in &self.parts {
            if Some(r) == prev {
                run += 1;
            } else {
                run = 1;
                prev = Some(r);
            }
            total = total.checked_mul(run).expect("stabilizer order overflow");
        }
        total
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of k in descending lexicographic order:
/// (k), (k-1,1), ..., (1,...,1).
pub fn partitions_of(k: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for r in (1..=remaining.min(max_part)).rev() {
            prefix.push(r);
            rec(remaining - r, r, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}
