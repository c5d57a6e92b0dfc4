//! Integer matrices and their Smith normal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::BigInt;
use crate::par::{self, ExecMode};

/// Dense row-major integer matrix. A map `Z^cols -> Z^rows` acting on columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_rows(rows).ok_or_else(|| D::Error::custom("ragged matrix rows"))
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_rank`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    /// Rank of the kernel of a map out of `Z^cols`.
    pub fn kernel_rank(&self, cols: usize) -> usize {
        cols - self.rank
    }

    /// Cokernel of a map into `Z^rows`: free rank and the nontrivial cyclic orders.
    pub fn cokernel(&self, rows: usize) -> (usize, Vec<BigInt>) {
        let torsion = self
            .invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        (rows - self.rank, torsion)
    }

    pub fn is_unimodular(&self, rows: usize, cols: usize) -> bool {
        rows == cols && self.rank == rows && self.invariant_factors.iter().all(One::is_one)
    }
}

fn smallest_nonzero(a: &[Vec<BigInt>], from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(from) {
        for (j, v) in row.iter().enumerate().skip(from) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by unimodular row and column operations, pivoting on
/// the entry of smallest absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let pivot = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                let (top, rest) = a.split_at_mut(i);
                for (dst, src) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                    *dst -= &q * src;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot survived; move it into place
                let (bi, bj) = smallest_nonzero_in_cross(&a, t);
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            // pivot must divide the rest of the block
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (dst, src) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                        *dst += src;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    SnfResult {
        rank: invariant_factors.len(),
        invariant_factors,
    }
}

fn smallest_nonzero_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = a[t][t].abs();
    let mut consider = |i: usize, j: usize, v: &BigInt| {
        if !v.is_zero() && v.abs() < best_abs {
            best_abs = v.abs();
            best = (i, j);
        }
    };
    for (i, row) in a.iter().enumerate().skip(t + 1) {
        consider(i, t, &row[t]);
    }
    for (j, v) in a[t].iter().enumerate().skip(t + 1) {
        consider(t, j, v);
    }
    best
}

pub fn smith_normal_form_batch(ms: &[IntMatrix], mode: ExecMode) -> Vec<SnfResult> {
    par::map(mode, ms, smith_normal_form)
}
