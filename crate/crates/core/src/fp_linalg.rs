//! Dense linear algebra over a prime field F_p.
//!
//! Subspaces are stored by their reduced row-echelon basis, so two equal
//! subspaces compare equal bit for bit and can be used as map keys.

use std::cmp::Ordering;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A vector over F_p, entries in `[0, p)`.
pub type CoordVector = Vec<u64>;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from row vectors, reducing every entry mod `p`.
    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % p));
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Canonical reduced row-echelon form with zero rows removed.
    pub fn rref(&self) -> FpMatrix {
        self.rref_with_pivots().0
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = inv_mod_p(m.get(r, c), p);
            for j in c..m.cols {
                let v = mul_mod(m.get(r, j), inv, p);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let sub = mul_mod(factor, m.get(r, j), p);
                    let cur = m.get(i, j);
                    m.data[i * m.cols + j] = (cur + p - sub) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn null_space(&self) -> Vec<CoordVector> {
        let p = self.p;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(i, fc)) % p;
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[u64]) -> Option<CoordVector> {
        if b.len() != self.rows {
            return None;
        }
        let p = self.p;
        let mut aug = FpMatrix::zeros(p, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, bi);
        }
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64]) -> CoordVector {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, self.p)) % self.p)
            })
            .collect()
    }
}

/// A subspace of F_p^d held by its canonical reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_dim, self.dim(), &self.basis.data).cmp(&(
            other.ambient_dim,
            other.dim(),
            &other.basis.data,
        ))
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl Subspace {
    pub fn zero(p: u64, ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: FpMatrix::zeros(p, 0, ambient_dim),
        }
    }

    pub fn full(p: u64, ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: FpMatrix::identity(p, ambient_dim),
        }
    }

    pub fn span(vectors: &[CoordVector], ambient_dim: usize, p: u64) -> Result<Self> {
        let m = FpMatrix::from_rows(p, ambient_dim, vectors)?;
        Ok(Self {
            ambient_dim,
            basis: m.rref(),
        })
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(
        p: u64,
        ambient_dim: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let vecs: Vec<CoordVector> = indices
            .into_iter()
            .map(|i| {
                let mut v = vec![0; ambient_dim];
                v[i] = 1;
                v
            })
            .collect();
        Self::span(&vecs, ambient_dim, p).expect("coordinate vectors have the ambient length")
    }

    pub fn p(&self) -> u64 {
        self.basis.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn rows(&self) -> Vec<CoordVector> {
        self.basis.to_rows()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim || self.p() != other.p() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.rows();
        rows.extend(other.rows());
        Subspace::span(&rows, self.ambient_dim, self.p())
    }

    /// The orthogonal complement under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        let ns = self.basis.null_space();
        Subspace::span(&ns, self.ambient_dim, self.p())
            .expect("null space vectors have ambient length")
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut rows = self.rows();
        rows.push(v.to_vec());
        Ok(FpMatrix::from_rows(self.p(), self.ambient_dim, &rows)?.rank() == self.dim())
    }

    /// Whether `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for r in 0..self.dim() {
            if !other.contains(self.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear combination of the basis rows with the given coefficients.
    fn combine(&self, coeffs: &[u64]) -> CoordVector {
        let p = self.p();
        let mut v = vec![0u64; self.ambient_dim];
        for (r, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, x) in self.basis.row(r).iter().enumerate() {
                v[j] = (v[j] + mul_mod(c, *x, p)) % p;
            }
        }
        v
    }

    /// Every vector of the subspace, in no particular order.
    pub fn elements(&self) -> Vec<CoordVector> {
        let p = self.p();
        let k = self.dim();
        let mut out = Vec::new();
        let mut coeffs = vec![0u64; k];
        loop {
            out.push(self.combine(&coeffs));
            if !increment(&mut coeffs, p) {
                break;
            }
        }
        out
    }

    /// One representative per line, normalized so the first nonzero entry
    /// is 1, sorted lexicographically.
    pub fn enumerate_lines(&self) -> Vec<CoordVector> {
        let p = self.p();
        let k = self.dim();
        let mut out = Vec::new();
        for lead in 0..k {
            // coefficient vectors whose first nonzero entry is a 1 at `lead`
            let tail = k - lead - 1;
            let mut rest = vec![0u64; tail];
            loop {
                let mut coeffs = vec![0u64; k];
                coeffs[lead] = 1;
                coeffs[lead + 1..].copy_from_slice(&rest);
                out.push(self.combine(&coeffs));
                if !increment(&mut rest, p) {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    /// All codimension-1 subspaces of the ambient space containing `self`,
    /// sorted by canonical basis.
    pub fn enumerate_hyperplanes_above(&self) -> Result<Vec<Subspace>> {
        if self.dim() == self.ambient_dim {
            return Err(Error::NoHyperplane);
        }
        // hyperplanes above n correspond to lines of its annihilator
        let dual = self.annihilator();
        let mut out: Vec<Subspace> = dual
            .enumerate_lines()
            .into_iter()
            .map(|l| {
                Subspace::span(&[l], self.ambient_dim, self.p())
                    .expect("line has ambient length")
                    .annihilator()
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Every subspace of F_p^d of the given dimension, sorted.
    pub fn enumerate_all(p: u64, ambient_dim: usize, dim: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if dim > ambient_dim {
            return out;
        }
        for pivots in combinations(ambient_dim, dim) {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    (pc + 1..ambient_dim)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let mut vals = vec![0u64; slots.len()];
            loop {
                let mut m = FpMatrix::zeros(p, dim, ambient_dim);
                for (r, &pc) in pivots.iter().enumerate() {
                    m.set(r, pc, 1);
                }
                for (&(r, c), &v) in slots.iter().zip(&vals) {
                    m.set(r, c, v);
                }
                out.push(Subspace {
                    ambient_dim,
                    basis: m,
                });
                if !increment(&mut vals, p) {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

/// Odometer increment over `[0, p)^n`; false once it wraps to all zeros.
pub(crate) fn increment(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
