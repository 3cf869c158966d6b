//! Synthetic matrices with a known Jordan structure.
//!
//! `A = V J V^{-1}` where `J` holds Jordan blocks for one eigenvalue plus
//! well-separated simple eigenvalues and `V = I + coupling * G / sqrt(n)` is a
//! seeded, well-conditioned basis.

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::mapping::PencilParameters;
use crate::matrix::{ComplexMatrix, C64, ONE};
use crate::random::ComplexNormal;

#[derive(Clone, Debug)]
pub struct PlantedJordan {
    pub a: ComplexMatrix,
    pub lambda: C64,
    /// Jordan block sizes of `lambda`, non-increasing.
    pub blocks: Vec<usize>,
    pub v: ComplexMatrix,
    pub v_inv: ComplexMatrix,
    /// Other (simple) eigenvalues.
    pub others: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct PlantedBuilder {
    n: usize,
    lambda: C64,
    blocks: Vec<usize>,
    seed: u64,
    coupling: f64,
    separation: f64,
}

impl PlantedJordan {
    pub fn builder(n: usize) -> PlantedBuilder {
        PlantedBuilder {
            n,
            lambda: C64::new(1.0, 0.0),
            blocks: vec![2],
            seed: 0,
            coupling: 0.3,
            separation: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Geometric multiplicity.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// Segre anchor (smallest block).
    pub fn k(&self) -> usize {
        *self.blocks.last().expect("at least one block")
    }

    /// Column offsets of each block in `V`.
    fn block_offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, &b| {
                let start = *acc;
                *acc += b;
                Some(start)
            })
            .collect()
    }

    /// Parameters `(C, S)` and `X` with `g(A, lambda, X) = 0` exactly (up to
    /// the rounding in forming `A`), using the chain of the smallest block and
    /// `S = J_k(0)`. `m` may not exceed the number of blocks.
    pub fn exact_parameters(&self, m: usize) -> Result<(PencilParameters, ComplexMatrix)> {
        if m == 0 || m > self.blocks.len() {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= m <= {} blocks, got {m}",
                self.blocks.len()
            )));
        }
        let k = self.k();
        let offsets = self.block_offsets();
        let chain_block = self.blocks.len() - 1;
        let start = offsets[chain_block];
        let x = self.v.submatrix(0, self.n(), start, start + k);

        let mut c = ComplexMatrix::zeros(self.n(), m);
        let mut rows = vec![start];
        rows.extend(offsets.iter().copied().filter(|&o| o != start).take(m - 1));
        for (col, &r) in rows.iter().enumerate() {
            for i in 0..self.n() {
                c[(i, col)] = self.v_inv[(r, i)].conj();
            }
        }
        let mut s = ComplexMatrix::zeros(k, k);
        for i in 0..k.saturating_sub(1) {
            s[(i, i + 1)] = ONE;
        }
        Ok((PencilParameters::new(c, s)?, x))
    }

    /// `A + delta * E` with a seeded `E` of unit Frobenius norm.
    pub fn perturbed(&self, delta: f64, seed: u64) -> ComplexMatrix {
        let e = ComplexNormal::seeded(seed ^ 0x9e37_79b9_7f4a_7c15).matrix(self.n(), self.n());
        let e = e.scale(C64::new(delta / e.frobenius_norm(), 0.0));
        &self.a + &e
    }
}

impl PlantedBuilder {
    pub fn eigenvalue(mut self, lambda: C64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Jordan block sizes for the planted eigenvalue.
    pub fn blocks(mut self, sizes: &[usize]) -> Self {
        self.blocks = sizes.to_vec();
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Off-identity weight of the basis `V`.
    pub fn coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    /// Minimum distance from the planted eigenvalue to the others.
    pub fn separation(mut self, separation: f64) -> Self {
        self.separation = separation;
        self
    }

    pub fn build(self) -> Result<PlantedJordan> {
        let mut blocks = self.blocks.clone();
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let total: usize = blocks.iter().sum();
        if blocks.is_empty() || blocks.contains(&0) || total > self.n {
            return Err(Error::InvalidArgument(format!(
                "blocks {:?} do not fit in order {}",
                self.blocks, self.n
            )));
        }
        let n = self.n;
        let others: Vec<C64> = (0..n - total)
            .map(|j| {
                let radius = self.separation * (1.0 + 0.35 * j as f64);
                let angle = 0.7 + 2.1 * j as f64;
                self.lambda + C64::from_polar(radius, angle)
            })
            .collect();

        let mut j = ComplexMatrix::zeros(n, n);
        let mut pos = 0;
        for &b in &blocks {
            for i in 0..b {
                j[(pos + i, pos + i)] = self.lambda;
                if i + 1 < b {
                    j[(pos + i, pos + i + 1)] = ONE;
                }
            }
            pos += b;
        }
        for (i, &mu) in others.iter().enumerate() {
            j[(total + i, total + i)] = mu;
        }

        let mut g = ComplexNormal::seeded(self.seed);
        let mut v = g
            .matrix(n, n)
            .scale(C64::new(self.coupling / (n as f64).sqrt(), 0.0));
        for i in 0..n {
            v[(i, i)] += ONE;
        }
        let v_inv = least_squares(&v, &ComplexMatrix::identity(n))?;
        let a = &(&v * &j) * &v_inv;
        Ok(PlantedJordan {
            a,
            lambda: self.lambda,
            blocks,
            v,
            v_inv,
            others,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;

    #[test]
    fn planted_structure_has_expected_nullities() {
        let p = PlantedJordan::builder(9).blocks(&[3, 2, 2]).seed(4).build().unwrap();
        assert_eq!((p.m(), p.k()), (3, 2));
        let nmat = p.a.shift_diagonal(p.lambda);
        let sv = singular_values(&nmat);
        let tiny = sv.iter().filter(|&&s| s < 1e-10).count();
        assert_eq!(tiny, 3);
    }

    #[test]
    fn rejects_oversized_blocks() {
        assert!(PlantedJordan::builder(3).blocks(&[2, 2]).build().is_err());
        assert!(PlantedJordan::builder(3).blocks(&[0]).build().is_err());
    }
}
