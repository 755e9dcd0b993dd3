//! The projective graph G_{n,m}: adjacency matrix, Gram matrix, bitset
//! neighborhoods and unique-neighbor checks. A point and a hyperplane are
//! adjacent exactly when their dot product vanishes; with the shared point
//! and hyperplane ordering the adjacency matrix is symmetric.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::projective::{theta, ProjectiveSpace};
use crate::ring::dot;

/// Fixed-width bitset over point indices; unions and intersections are the
/// hot path of the searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &Self) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

/// Outcome of a unique-neighbor-property check. When the property holds the
/// witness map assigns each point one private neighbor; otherwise the first
/// point without one is named.
#[derive(Debug, Clone)]
pub struct UnpOutcome {
    pub satisfied: bool,
    pub witnesses: BTreeMap<usize, usize>,
    pub violator: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncidenceSummary {
    pub n: u32,
    pub m: u64,
    pub ell: usize,
    pub degree: u64,
    pub diagonal_check: bool,
}

/// Adjacency and Gram matrices of G_{n,m} over a fixed projective space.
/// Immutable after construction; queries are read-only.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    space: ProjectiveSpace,
    adjacency: IntMatrix,
    gram: IntMatrix,
    neighbor_bits: Vec<BitSet>,
    degree: u64,
}

impl IncidenceStructure {
    /// Populates the adjacency matrix from dot products and squares it into
    /// the Gram matrix, all exactly.
    pub fn build(space: ProjectiveSpace) -> Result<Self> {
        let ell = space.len();
        let mut adjacency = IntMatrix::zeros(ell, ell);
        for i in 0..ell {
            for j in i..ell {
                let orthogonal = dot(&space.points()[i], &space.points()[j])? == 0;
                if orthogonal {
                    adjacency[(i, j)] = 1;
                    adjacency[(j, i)] = 1;
                }
            }
        }
        let gram = adjacency.mul(&adjacency.transpose());
        let mut neighbor_bits = Vec::with_capacity(ell);
        for i in 0..ell {
            let mut bits = BitSet::new(ell);
            for (j, &a) in adjacency.row(i).iter().enumerate() {
                if a == 1 {
                    bits.insert(j);
                }
            }
            neighbor_bits.push(bits);
        }
        let degree = theta(space.dimension() - 1, space.modulus().value());
        Ok(Self {
            space,
            adjacency,
            gram,
            neighbor_bits,
            degree,
        })
    }

    pub fn space(&self) -> &ProjectiveSpace {
        &self.space
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adjacency
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Common degree theta_{n-1,m}.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn neighbors(&self, index: usize) -> Result<&BitSet> {
        self.neighbor_bits.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.len(),
        })
    }

    fn check_indices(&self, set: &[usize]) -> Result<()> {
        for &i in set {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
        }
        Ok(())
    }

    /// N(X): hyperplane indices adjacent to at least one point of X.
    pub fn neighborhood(&self, x: &[usize]) -> Result<Vec<usize>> {
        Ok(self.neighborhood_bits(x)?.iter().collect())
    }

    pub fn neighborhood_bits(&self, x: &[usize]) -> Result<BitSet> {
        self.check_indices(x)?;
        let mut acc = BitSet::new(self.len());
        for &i in x {
            acc.union_with(&self.neighbor_bits[i]);
        }
        Ok(acc)
    }

    /// Checks the unique neighbor property of `u_set`: every member needs a
    /// hyperplane adjacent to it and to no other member. Witnesses pick the
    /// lowest-index private neighbor, preferring one different from the
    /// point itself (a self-orthogonal point is its own neighbor), so the
    /// outcome is deterministic.
    pub fn unp_check(&self, u_set: &[usize]) -> Result<UnpOutcome> {
        self.check_indices(u_set)?;
        let mut witnesses = BTreeMap::new();
        for &u in u_set {
            let mut others = BitSet::new(self.len());
            for &w in u_set {
                if w != u {
                    others.union_with(&self.neighbor_bits[w]);
                }
            }
            let private = self
                .neighbor_bits[u]
                .iter()
                .filter(|&v| !others.contains(v))
                .min_by_key(|&v| (v == u, v));
            match private {
                Some(v) => {
                    witnesses.insert(u, v);
                }
                None => {
                    return Ok(UnpOutcome {
                        satisfied: false,
                        witnesses: BTreeMap::new(),
                        violator: Some(u),
                    });
                }
            }
        }
        Ok(UnpOutcome {
            satisfied: true,
            witnesses,
            violator: None,
        })
    }

    /// chi^t B chi = sum over hyperplanes of |N(v) cap X|^2, computed from
    /// the neighbor counts psi(v).
    pub fn gram_quadratic(&self, x: &[usize]) -> Result<u64> {
        Ok(self
            .psi_counts(x)?
            .into_iter()
            .map(|c| (c * c) as u64)
            .sum())
    }

    /// psi(v) = |N(v) cap X| for every hyperplane v.
    pub fn psi_counts(&self, x: &[usize]) -> Result<Vec<usize>> {
        self.check_indices(x)?;
        let mut x_bits = BitSet::new(self.len());
        for &i in x {
            x_bits.insert(i);
        }
        Ok(self
            .neighbor_bits
            .iter()
            .map(|row| row.intersection_count(&x_bits))
            .collect())
    }

    pub fn summary(&self) -> IncidenceSummary {
        let ell = self.len();
        let diagonal_check = (0..ell).all(|i| self.gram[(i, i)] == self.degree as i64);
        IncidenceSummary {
            n: self.space.dimension(),
            m: self.space.modulus().value(),
            ell,
            degree: self.degree,
            diagonal_check,
        }
    }
}
