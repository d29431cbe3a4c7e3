//! Dense rational matrices and exact rank by fraction-free elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Q> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Q) {
        self.data[i * self.cols + j] = value;
    }

    pub fn add_at(&mut self, i: usize, j: usize, value: &Q) {
        self.data[i * self.cols + j] += value;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, factor: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(Q::zero(), |acc, x| acc + x)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut echelon = RowEchelon::new();
        for i in 0..self.rows {
            let row: BTreeMap<usize, Q> = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect();
            echelon.insert(row);
        }
        echelon.rank()
    }
}

/// Incremental row echelon form over the integers.
///
/// Rows are cleared of denominators on entry and kept primitive (content 1),
/// so elimination never leaves Z.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl RowEchelon {
    pub fn new() -> RowEchelon {
        RowEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts a sparse vector; returns `true` when it raised the rank.
    pub fn insert(&mut self, vector: BTreeMap<usize, Q>) -> bool {
        let mut row = integral_row(vector);
        loop {
            let Some((&lead, _)) = row.iter().next() else {
                return false;
            };
            let Some(pivot) = self.pivots.get(&lead) else {
                make_primitive(&mut row);
                self.pivots.insert(lead, row);
                return true;
            };
            let p = pivot[&lead].clone();
            let r = row[&lead].clone();
            // row := p·row − r·pivot, exact in Z
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&j, v) in &row {
                next.insert(j, v * &p);
            }
            for (&j, v) in pivot {
                let entry = next.entry(j).or_insert_with(BigInt::zero);
                *entry -= v * &r;
            }
            next.retain(|_, v| !v.is_zero());
            make_primitive(&mut next);
            row = next;
        }
    }
}

fn integral_row(vector: BTreeMap<usize, Q>) -> BTreeMap<usize, BigInt> {
    let lcm = vector
        .values()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    vector
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| {
            let scaled = v * Q::from_integer(lcm.clone());
            (j, scaled.to_integer())
        })
        .collect()
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.values_mut() {
        *v = &*v / &g;
    }
}

/// Rank of a family of sparse vectors.
pub fn exact_rank(vectors: impl IntoIterator<Item = BTreeMap<usize, Q>>) -> usize {
    let mut echelon = RowEchelon::new();
    for v in vectors {
        echelon.insert(v);
    }
    echelon.rank()
}
