//! Arithmetic in the residue field F_q = F_p[y]/(g mod p).

use serde::Serialize;

use crate::fp_linalg::{increment, inv_mod_p, mul_mod, FpMatrix};

/// An element of F_q as `f` coefficients in `[0, p)`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ResidueElement(pub Vec<u64>);

impl ResidueElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: usize,
    /// Monic modulus of degree `f`, coefficients mod p, constant first.
    modulus: Vec<u64>,
}

impl ResidueField {
    pub(crate) fn new(p: u64, modulus: Vec<u64>) -> Self {
        let f = modulus.len() - 1;
        Self { p, f, modulus }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    /// Field size `p^f`; `None` if it overflows `u64`.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.f as u32)
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement(vec![0; self.f])
    }

    pub fn one(&self) -> ResidueElement {
        self.from_int(1)
    }

    pub fn from_int(&self, a: u64) -> ResidueElement {
        let mut v = vec![0; self.f];
        v[0] = a % self.p;
        ResidueElement(v)
    }

    /// Reduces an arbitrary coefficient list modulo `g mod p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> ResidueElement {
        let p = self.p;
        let mut r: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        if r.len() < self.f {
            r.resize(self.f, 0);
        }
        for k in (self.f..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for j in 0..self.f {
                let sub = mul_mod(c, self.modulus[j], p);
                r[k - self.f + j] = (r[k - self.f + j] + p - sub) % p;
            }
            r[k] = 0;
        }
        r.truncate(self.f);
        ResidueElement(r)
    }

    /// The `i`-th element in the fixed enumeration: `i = Σ c_j p^j`.
    pub fn from_index(&self, mut i: u64) -> ResidueElement {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        ResidueElement(v)
    }

    pub fn index_of(&self, a: &ResidueElement) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> Vec<ResidueElement> {
        let mut out = Vec::new();
        let mut v = vec![0u64; self.f];
        loop {
            // increment runs big-endian; reverse so index order is preserved
            let mut e = v.clone();
            e.reverse();
            out.push(ResidueElement(e));
            if !increment(&mut v, self.p) {
                break;
            }
        }
        out
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        ResidueElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        ResidueElement(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, lambda: u64, a: &ResidueElement) -> ResidueElement {
        ResidueElement(
            a.0.iter()
                .map(|x| mul_mod(lambda % self.p, *x, self.p))
                .collect(),
        )
    }

    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.f - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: &ResidueElement, mut exp: u128) -> ResidueElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &ResidueElement) -> Option<ResidueElement> {
        if a.is_zero() {
            return None;
        }
        if self.f == 1 {
            return Some(self.from_int(inv_mod_p(a.0[0], self.p)));
        }
        let q = (self.p as u128).pow(self.f as u32);
        Some(self.pow(a, q - 2))
    }

    pub fn frobenius(&self, a: &ResidueElement) -> ResidueElement {
        self.pow(a, self.p as u128)
    }

    /// Inverse of Frobenius, `c ↦ c^(p^(f-1))`.
    pub fn frobenius_inv(&self, a: &ResidueElement) -> ResidueElement {
        let mut c = a.clone();
        for _ in 1..self.f {
            c = self.frobenius(&c);
        }
        c
    }

    /// Matrix (columns = images of `1, y, …, y^(f-1)`) of an F_p-linear map.
    pub fn linear_map_matrix(&self, map: impl Fn(&ResidueElement) -> ResidueElement) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.f, self.f);
        for j in 0..self.f {
            let mut basis = vec![0; self.f];
            basis[j] = 1;
            let img = map(&ResidueElement(basis));
            for i in 0..self.f {
                m.set(i, j, img.0[i]);
            }
        }
        m
    }
}
