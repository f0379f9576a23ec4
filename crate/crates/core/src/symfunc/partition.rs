use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition: a finite nonincreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Rejects increasing
    /// sequences and interior zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not nonincreasing")));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of parts, |λ|.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `λ_i` with 1-based indexing; zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Transposed Young diagram λ′.
    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|col| self.parts.iter().filter(|&&p| p >= col).count())
            .collect();
        Self { parts }
    }

    /// Cells `(row, col)` of the Young diagram, 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// Partition containment λ ⊇ μ of Young diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// The hook `(a|b)` if this partition is hook-shaped.
    pub fn as_hook(&self) -> Option<Hook> {
        match self.parts.split_first() {
            Some((&first, rest)) if rest.iter().all(|&p| p == 1) => {
                Some(Hook::new(first - 1, rest.len()))
            }
            _ => None,
        }
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Hook partition `(a|b) = (a+1, 1^b)` in Frobenius notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hook {
    /// Arm: cells to the right of the corner.
    pub a: usize,
    /// Leg: cells below the corner.
    pub b: usize,
}

impl Hook {
    pub const fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    /// Number of cells, `a + b + 1`.
    pub const fn degree(&self) -> usize {
        self.a + self.b + 1
    }

    pub const fn conjugate(&self) -> Self {
        Self { a: self.b, b: self.a }
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = vec![self.a + 1];
        parts.extend(std::iter::repeat(1).take(self.b));
        Partition { parts }
    }
}

impl fmt::Display for Hook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.a, self.b)
    }
}

/// All partitions of `d`, in reverse lexicographic order.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![3, 1, 0, 0]).unwrap().parts(), &[3, 1]);
    }

    #[test]
    fn conjugate_of_4331() {
        let p = Partition::new(vec![4, 3, 3, 1]).unwrap();
        assert_eq!(p.conjugate().parts(), &[4, 3, 3, 1]);
        let q = Partition::new(vec![5, 2]).unwrap();
        assert_eq!(q.conjugate().parts(), &[2, 2, 1, 1, 1]);
        assert_eq!(q.conjugate().conjugate(), q);
    }

    #[test]
    fn hook_roundtrip() {
        let h = Hook::new(3, 2);
        let p = h.to_partition();
        assert_eq!(p.parts(), &[4, 1, 1]);
        assert_eq!(p.as_hook(), Some(h));
        assert_eq!(p.conjugate().as_hook(), Some(h.conjugate()));
        assert_eq!(Partition::new(vec![2, 2]).unwrap().as_hook(), None);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|d| partitions_of(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }
}
