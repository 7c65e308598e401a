//! The base field K/Q_p and exact arithmetic in O_K / π^N.
//!
//! K is presented as W[x]/(E) where W = Z_p[y]/(g) is the unramified part of
//! degree `f` and `E` is an Eisenstein polynomial of degree `e` over W. An
//! element of O_K is stored as a polynomial of degree `< e` in the uniformizer
//! π = x with coefficients in W, each coefficient itself `f` integers mod p^M.
//! This makes O_K/π^(eM) = (W/p^M)[x]/(E) exactly, with no carries to track.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_linalg::mul_mod;
use crate::residue::{ResidueElement, ResidueField};

/// JSON form of a field description.
///
/// `g` lists the coefficients of the unramified polynomial (constant first,
/// monic); each entry of `E` is a coefficient of the Eisenstein polynomial
/// given as a polynomial in the unramified generator `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecFile {
    pub p: u64,
    pub g: Vec<i64>,
    #[serde(rename = "E")]
    pub eisenstein: Vec<Vec<i64>>,
    #[serde(default)]
    pub precision: u32,
}

/// Element input: either a rational integer or a list of W-coefficients of
/// the powers of π (each a list of y-coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Int(i64),
    Poly(Vec<Vec<i64>>),
}

#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    f: usize,
    e: usize,
    digits: u32,
    pm: u64,
    p_pows: Vec<u64>,
    q: u64,
    /// g mod p^M, monic, length f + 1.
    g: Vec<u64>,
    /// Eisenstein coefficients in W, length e + 1, last one is 1.
    eis: Vec<Vec<u64>>,
    residue_field: ResidueField,
    theta: ResidueElement,
    levels: Vec<u32>,
    zeta: bool,
    c_star: Option<ResidueElement>,
    source: FieldSpecFile,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_signed(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

// Polynomials over F_p, constant first, used for the irreducibility test.
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = fp_trim(b.to_vec());
    let mut r = fp_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = crate::fp_linalg::inv_mod_p(b[db], p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        for j in 0..=db {
            let sub = mul_mod(c, b[j], p);
            r[dr - db + j] = (r[dr - db + j] + p - sub) % p;
        }
        r = fp_trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !fp_is_zero(&b) {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a monic `g` over F_p: gcd(x^(p^k) − x, g) = 1 for all k < deg g.
fn is_irreducible_mod_p(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    if f <= 1 {
        return true;
    }
    let mut xpk = vec![0, 1];
    for _ in 1..f {
        // xpk <- xpk^p mod g
        let mut acc = vec![1u64];
        let mut base = xpk.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = fp_mulmod(&acc, &base, g, p);
            }
            base = fp_mulmod(&base, &base, g, p);
            exp >>= 1;
        }
        xpk = acc;
        let mut diff = xpk.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let d = fp_gcd(&diff, g, p);
        if d.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// Builds K from `(p, g, E, M)`; `M = 0` selects the default precision.
    pub fn new(
        p: u64,
        g: &[i64],
        eisenstein: &[Vec<i64>],
        precision: u32,
    ) -> Result<Arc<FieldSpec>> {
        Self::from_file(&FieldSpecFile {
            p,
            g: g.to_vec(),
            eisenstein: eisenstein.to_vec(),
            precision,
        })
    }

    pub fn from_json(text: &str) -> Result<Arc<FieldSpec>> {
        let file: FieldSpecFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &FieldSpecFile) -> Result<Arc<FieldSpec>> {
        let p = file.p;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if file.g.len() < 2 || *file.g.last().unwrap() != 1 {
            return Err(Error::InvalidSpec("g must be monic of degree >= 1".into()));
        }
        if file.eisenstein.len() < 2 {
            return Err(Error::NotEisenstein("degree must be at least 1".into()));
        }
        let f = file.g.len() - 1;
        let e = file.eisenstein.len() - 1;

        let crit_ceil = (p as usize * e).div_ceil(p as usize - 1) as u32;
        let needed = crit_ceil + e as u32 + 2;
        let digits = if file.precision == 0 {
            needed.div_ceil(e as u32) + 1
        } else {
            file.precision
        };
        if (e as u32) * digits < needed {
            return Err(Error::PrecisionTooSmall {
                needed,
                got: e as u32 * digits,
            });
        }
        let pm = p
            .checked_pow(digits)
            .filter(|&m| m < (1u64 << 62))
            .ok_or(Error::ModulusOverflow { p, m: digits })?;
        let q = p
            .checked_pow(f as u32)
            .ok_or(Error::Overflow("residue field size"))?;
        let p_pows: Vec<u64> = (0..=digits).map(|k| p.pow(k)).collect();

        let g: Vec<u64> = file.g.iter().map(|&c| reduce_signed(c, pm)).collect();
        let g_mod_p: Vec<u64> = g.iter().map(|c| c % p).collect();
        if !is_irreducible_mod_p(&g_mod_p, p) {
            return Err(Error::NotIrreducible(format!("{:?}", file.g)));
        }
        let residue_field = ResidueField::new(p, g_mod_p);

        // Eisenstein coefficients, reduced into W = (Z/p^M)[y]/(g)
        let reduce_w = |poly: &[i64]| -> Vec<u64> {
            let mut r: Vec<u64> = poly.iter().map(|&c| reduce_signed(c, pm)).collect();
            if r.len() < f {
                r.resize(f, 0);
            }
            for k in (f..r.len()).rev() {
                let c = r[k];
                for j in 0..f {
                    let sub = mul_mod(c, g[j], pm);
                    r[k - f + j] = (r[k - f + j] + pm - sub) % pm;
                }
                r[k] = 0;
            }
            r.truncate(f);
            r
        };
        let eis: Vec<Vec<u64>> = file.eisenstein.iter().map(|c| reduce_w(c)).collect();
        let mut one_w = vec![0u64; f];
        one_w[0] = 1;
        if eis[e] != one_w {
            return Err(Error::NotEisenstein("leading coefficient must be 1".into()));
        }
        for (i, c) in eis[..e].iter().enumerate() {
            if c.iter().any(|&x| x % p != 0) {
                return Err(Error::NotEisenstein(format!(
                    "coefficient of x^{i} is not divisible by p"
                )));
            }
        }
        let u0 = residue_field.from_coeffs(&eis[0].iter().map(|&x| x / p).collect::<Vec<_>>());
        if u0.is_zero() {
            return Err(Error::NotEisenstein(
                "constant term has valuation > 1".into(),
            ));
        }
        // π^e ≡ −p·u0 mod π^(e+1), so p·π^(−e) ≡ −1/u0
        let theta = residue_field.neg(&residue_field.inv(&u0).expect("u0 is nonzero"));

        let levels: Vec<u32> = (1..crit_ceil)
            .filter(|&i| (i as u64) * (p - 1) < p * e as u64 && !(i as u64).is_multiple_of(p))
            .collect();
        assert_eq!(levels.len(), e, "|I| must equal e");

        let zeta = (e as u64).is_multiple_of(p - 1) && {
            let minus_theta = residue_field.neg(&theta);
            residue_field.pow(&minus_theta, ((q - 1) / (p - 1)) as u128) == residue_field.one()
        };

        let mut field = FieldSpec {
            p,
            f,
            e,
            digits,
            pm,
            p_pows,
            q,
            g,
            eis,
            residue_field,
            theta,
            levels,
            zeta,
            c_star: None,
            source: FieldSpecFile {
                precision: digits,
                ..file.clone()
            },
        };
        if let Some(ci) = field.crit_int() {
            assert!(
                (ci as u64).is_multiple_of(p) && !field.levels.contains(&ci),
                "critical level never lies in I"
            );
        }
        if zeta {
            field.c_star = Some(field.first_outside_critical_image());
        }
        let field = Arc::new(field);
        field.check_critical_expansion()?;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Inertial degree.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Ramification index.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Absolute degree `n = e·f`.
    pub fn n(&self) -> usize {
        self.e * self.f
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficient precision M (coefficients are kept mod p^M).
    pub fn precision_digits(&self) -> u32 {
        self.digits
    }

    /// π-adic precision N = e·M.
    pub fn precision(&self) -> u32 {
        self.e as u32 * self.digits
    }

    pub fn source(&self) -> &FieldSpecFile {
        &self.source
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue_field
    }

    /// The critical level `p·e/(p−1)` as `(numerator, denominator)`.
    pub fn crit(&self) -> (u64, u64) {
        (self.p * self.e as u64, self.p - 1)
    }

    pub fn crit_int(&self) -> Option<u32> {
        let (num, den) = self.crit();
        (num % den == 0).then(|| (num / den) as u32)
    }

    pub fn crit_floor(&self) -> u32 {
        let (num, den) = self.crit();
        (num / den) as u32
    }

    pub fn crit_ceil(&self) -> u32 {
        let (num, den) = self.crit();
        num.div_ceil(den) as u32
    }

    /// `l < p·e/(p−1)`, compared exactly.
    pub fn below_crit(&self, l: u32) -> bool {
        let (num, den) = self.crit();
        (l as u64) * den < num
    }

    pub fn above_crit(&self, l: u32) -> bool {
        let (num, den) = self.crit();
        (l as u64) * den > num
    }

    /// The levels I = {1 ≤ i < pe/(p−1) : p ∤ i}, ascending.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn zeta_p(&self) -> bool {
        self.zeta
    }

    /// Residue of `p·π^(−e)`.
    pub fn p_unit_residue(&self) -> &ResidueElement {
        &self.theta
    }

    pub(crate) fn c_star(&self) -> Option<&ResidueElement> {
        self.c_star.as_ref()
    }

    /// `c ↦ c^p + θ·c` on F_q.
    pub(crate) fn critical_map(&self, c: &ResidueElement) -> ResidueElement {
        let k = &self.residue_field;
        k.add(&k.frobenius(c), &k.mul(&self.theta, c))
    }

    fn first_outside_critical_image(&self) -> ResidueElement {
        let k = &self.residue_field;
        let m = k.linear_map_matrix(|c| self.critical_map(c));
        (1..self.q)
            .map(|i| k.from_index(i))
            .find(|c| m.solve(c.coeffs()).is_none())
            .expect("critical map has a cokernel when zeta_p lies in K")
    }

    /// Checks `(1 + cπ^s)^p ≡ 1 + φ(c)π^crit mod π^(crit+1)` in the ring.
    fn check_critical_expansion(self: &Arc<Self>) -> Result<()> {
        let Some(crit) = self.crit_int() else {
            return Ok(());
        };
        let s = crit - self.e as u32;
        let k = &self.residue_field;
        let samples: Vec<ResidueElement> = if self.q <= 27 {
            k.elements()
        } else {
            (0..self.f)
                .map(|j| k.from_index(self.p.pow(j as u32)))
                .collect()
        };
        let pi_s = RingElement::pi(self).pow(s as u128);
        for c in samples {
            let base = RingElement::one(self)
                .add_elem(&RingElement::from_residue(self, &c).mul_elem(&pi_s));
            let lhs = base.pow(self.p as u128);
            let phi = self.critical_map(&c);
            let rhs = RingElement::one(self).add_elem(
                &RingElement::from_residue(self, &phi)
                    .mul_elem(&RingElement::pi(self).pow(crit as u128)),
            );
            let diff = lhs.sub_elem(&rhs);
            if diff.valuation().is_some_and(|v| v <= crit) {
                return Err(Error::InvalidSpec(format!(
                    "critical-level expansion check failed for c = {:?}",
                    c.coeffs()
                )));
            }
        }
        Ok(())
    }

    fn w_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (f, pm) = (self.f, self.pm);
        let mut r = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, pm)) % pm;
            }
        }
        for k in (f..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for j in 0..f {
                let sub = mul_mod(c, self.g[j], pm);
                r[k - f + j] = (r[k - f + j] + pm - sub) % pm;
            }
        }
        r.truncate(f);
        r
    }

    /// Number of p-adic digits kept in the coefficient of π^i at π-precision `prec`.
    fn digits_for_term(&self, i: usize, prec: u32) -> u32 {
        let i = i as u32;
        if prec <= i {
            0
        } else {
            (prec - i).div_ceil(self.e as u32)
        }
    }

    /// Every element of O_K/π^prec, listed by π-adic digits.
    pub fn quotient_elements(self: &Arc<Self>, prec: u32) -> Vec<RingElement> {
        let digit_count: Vec<u32> = (0..self.e).map(|i| self.digits_for_term(i, prec)).collect();
        let total_slots: usize = digit_count.iter().map(|&d| d as usize * self.f).sum();
        let mut out = Vec::new();
        let mut slots = vec![0u64; total_slots];
        loop {
            let mut coeffs = vec![0u64; self.e * self.f];
            let mut s = 0;
            for (i, &d) in digit_count.iter().enumerate() {
                for k in 0..d {
                    for j in 0..self.f {
                        coeffs[i * self.f + j] += slots[s] * self.p_pows[k as usize];
                        s += 1;
                    }
                }
            }
            out.push(RingElement::from_raw(self, coeffs, prec));
            if !crate::fp_linalg::increment(&mut slots, self.p) {
                break;
            }
        }
        out
    }
}

/// An element of O_K known modulo π^prec.
#[derive(Clone)]
pub struct RingElement {
    field: Arc<FieldSpec>,
    /// `e` blocks of `f` coefficients mod p^M: block i is the W-coefficient of π^i.
    coeffs: Vec<u64>,
    prec: u32,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field)
            && self.prec == other.prec
            && self.coeffs == other.coeffs
    }
}

impl Eq for RingElement {}

impl std::hash::Hash for RingElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
        self.prec.hash(state);
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({:?} mod π^{})", self.to_repr(), self.prec)
    }
}

impl RingElement {
    fn from_raw(field: &Arc<FieldSpec>, coeffs: Vec<u64>, prec: u32) -> Self {
        let mut r = Self {
            field: field.clone(),
            coeffs,
            prec: prec.min(field.precision()),
        };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        let fs = &self.field;
        for i in 0..fs.e {
            let m = fs.p_pows[fs.digits_for_term(i, self.prec) as usize];
            for j in 0..fs.f {
                self.coeffs[i * fs.f + j] %= m;
            }
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn zero(field: &Arc<FieldSpec>) -> Self {
        Self::from_raw(field, vec![0; field.e * field.f], field.precision())
    }

    pub fn one(field: &Arc<FieldSpec>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<FieldSpec>, a: i64) -> Self {
        let mut c = vec![0; field.e * field.f];
        c[0] = reduce_signed(a, field.pm);
        Self::from_raw(field, c, field.precision())
    }

    /// The uniformizer, i.e. the class of the Eisenstein root.
    pub fn pi(field: &Arc<FieldSpec>) -> Self {
        if field.e == 1 {
            // x = −E_0 when E = x + E_0
            let c = field.eis[0]
                .iter()
                .map(|&v| (field.pm - v) % field.pm)
                .collect();
            return Self::from_raw(field, c, field.precision());
        }
        let mut c = vec![0; field.e * field.f];
        c[field.f] = 1;
        Self::from_raw(field, c, field.precision())
    }

    /// Lift of a residue with coefficients in `[0, p)`.
    pub fn from_residue(field: &Arc<FieldSpec>, r: &ResidueElement) -> Self {
        let mut c = vec![0; field.e * field.f];
        c[..field.f].copy_from_slice(r.coeffs());
        Self::from_raw(field, c, field.precision())
    }

    pub fn from_repr(field: &Arc<FieldSpec>, repr: &ElementRepr) -> Result<Self> {
        match repr {
            ElementRepr::Int(a) => Ok(Self::from_int(field, *a)),
            ElementRepr::Poly(terms) => {
                let pi = Self::pi(field);
                let mut acc = Self::zero(field);
                let mut pi_pow = Self::one(field);
                for w in terms {
                    let mut c = vec![0; field.e * field.f];
                    // reduce the y-polynomial modulo g
                    let mut r: Vec<u64> = w.iter().map(|&x| reduce_signed(x, field.pm)).collect();
                    if r.len() < field.f {
                        r.resize(field.f, 0);
                    }
                    for k in (field.f..r.len()).rev() {
                        let ck = r[k];
                        for j in 0..field.f {
                            let sub = mul_mod(ck, field.g[j], field.pm);
                            r[k - field.f + j] = (r[k - field.f + j] + field.pm - sub) % field.pm;
                        }
                    }
                    c[..field.f].copy_from_slice(&r[..field.f]);
                    let term = Self::from_raw(field, c, field.precision());
                    acc = acc.add_elem(&term.mul_elem(&pi_pow));
                    pi_pow = pi_pow.mul_elem(&pi);
                }
                Ok(acc)
            }
        }
    }

    /// Canonical serialization: `e` lists of `f` residues mod p^M.
    pub fn to_repr(&self) -> Vec<Vec<u64>> {
        self.coeffs
            .chunks(self.field.f)
            .map(|c| c.to_vec())
            .collect()
    }

    /// Reduces to a lower π-adic precision.
    pub fn truncate(&self, prec: u32) -> Self {
        Self::from_raw(&self.field, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_elem(&self, other: &Self) -> Self {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field));
        let pm = self.field.pm;
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % pm)
            .collect();
        Self::from_raw(&self.field, c, self.prec.min(other.prec))
    }

    pub fn neg_elem(&self) -> Self {
        let pm = self.field.pm;
        let c = self.coeffs.iter().map(|a| (pm - a) % pm).collect();
        Self::from_raw(&self.field, c, self.prec)
    }

    pub fn sub_elem(&self, other: &Self) -> Self {
        self.add_elem(&other.neg_elem())
    }

    pub fn mul_elem(&self, other: &Self) -> Self {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field));
        let fs = &self.field;
        let (e, f, pm) = (fs.e, fs.f, fs.pm);
        let mut prod = vec![vec![0u64; f]; 2 * e - 1];
        for i in 0..e {
            let a = &self.coeffs[i * f..(i + 1) * f];
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let b = &other.coeffs[j * f..(j + 1) * f];
                if b.iter().all(|&x| x == 0) {
                    continue;
                }
                let ab = fs.w_mul(a, b);
                for (t, v) in prod[i + j].iter_mut().zip(ab) {
                    *t = (*t + v) % pm;
                }
            }
        }
        // x^e = −Σ E_i x^i
        for k in (e..prod.len()).rev() {
            let top = std::mem::replace(&mut prod[k], vec![0; f]);
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            for i in 0..e {
                let sub = fs.w_mul(&top, &fs.eis[i]);
                for (t, s) in prod[k - e + i].iter_mut().zip(sub) {
                    *t = (*t + pm - s) % pm;
                }
            }
        }
        let c = prod.into_iter().take(e).flatten().collect();
        Self::from_raw(fs, c, self.prec.min(other.prec))
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut acc = Self::one(&self.field).truncate(self.prec);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_elem(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_elem(&base);
            }
        }
        acc
    }

    /// Valuation, or `None` when the element vanishes at its precision.
    pub fn valuation(&self) -> Option<u32> {
        let fs = &self.field;
        let mut best: Option<u32> = None;
        for i in 0..fs.e {
            let block = &self.coeffs[i * fs.f..(i + 1) * fs.f];
            let vp = block
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| vp_u64(c, fs.p))
                .min();
            if let Some(vp) = vp {
                let v = fs.e as u32 * vp + i as u32;
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        best
    }

    /// Residue class in F_q.
    pub fn residue(&self) -> ResidueElement {
        let fs = &self.field;
        if self.prec == 0 {
            return fs.residue_field.zero();
        }
        fs.residue_field.from_coeffs(&self.coeffs[..fs.f])
    }

    /// `(v, residue of x·π^(−v))` for a nonzero element.
    pub fn leading_residue(&self) -> Result<(u32, ResidueElement)> {
        let v = self.valuation().ok_or(Error::ZeroInput)?;
        let fs = &self.field;
        let e = fs.e as u32;
        let (i, k) = ((v % e) as usize, v / e);
        let pk = fs.p_pows[k as usize];
        let block: Vec<u64> = self.coeffs[i * fs.f..(i + 1) * fs.f]
            .iter()
            .map(|&c| c / pk)
            .collect();
        let k_field = &fs.residue_field;
        // p = (p·π^(−e))·π^e, so each factor p contributes θ
        let r = k_field.mul(
            &k_field.from_coeffs(&block),
            &k_field.pow(&fs.theta, k as u128),
        );
        Ok((v, r))
    }

    pub fn unit_inverse(&self) -> Result<Self> {
        let fs = &self.field;
        let r = self.residue();
        let r_inv = fs.residue_field.inv(&r).ok_or(Error::NonUnit)?;
        let one = Self::one(fs);
        let two = Self::from_int(fs, 2);
        let mut y = Self::from_residue(fs, &r_inv).truncate(self.prec);
        for _ in 0..64 {
            let xy = self.mul_elem(&y);
            if xy == one.truncate(self.prec) {
                return Ok(y);
            }
            y = y.mul_elem(&two.sub_elem(&xy));
        }
        unreachable!("Newton iteration converges quadratically")
    }

    /// Exact division by π^v; requires `valuation ≥ v`. Loses up to `e − 1`
    /// further levels of precision when `v` is not a multiple of `e`.
    pub fn div_pi_pow(&self, v: u32) -> Result<Self> {
        if v == 0 {
            return Ok(self.clone());
        }
        if self.valuation().is_some_and(|val| val < v) {
            return Err(Error::NotDivisible {
                value: v as i64,
                divisor: self.field.p,
            });
        }
        let fs = &self.field;
        let e = fs.e as u32;
        let (a, b) = (v / e, v % e);
        let pa = fs.p_pows[a as usize];
        let mut x = Self::from_raw(
            fs,
            self.coeffs.iter().map(|&c| c / pa).collect(),
            self.prec.saturating_sub(a * e),
        );
        // π^(−e) = ε/p with ε = p·π^(−e) a unit
        let eps = fs.eps_unit();
        if a > 0 {
            x = x.mul_elem(&eps.pow(a as u128));
        }
        if b > 0 {
            // π^(−b) = π^(e−b)·ε/p
            let shifted = x
                .mul_elem(&Self::pi(fs).pow((e - b) as u128))
                .mul_elem(&eps);
            let prec = (x.prec + e - b).min(fs.precision()).saturating_sub(e);
            x = Self::from_raw(fs, shifted.coeffs.iter().map(|&c| c / fs.p).collect(), prec);
        }
        Ok(x)
    }
}

impl FieldSpec {
    /// The unit ε = p·π^(−e), as the inverse of π^e/p = −Σ (E_i/p)·π^i.
    fn eps_unit(self: &Arc<Self>) -> RingElement {
        let mut c = Vec::with_capacity(self.e * self.f);
        for i in 0..self.e {
            c.extend(
                self.eis[i]
                    .iter()
                    .map(|&v| (self.pm - v / self.p) % self.pm),
            );
        }
        RingElement::from_raw(self, c, self.precision())
            .unit_inverse()
            .expect("π^e/p is a unit")
    }
}

fn vp_u64(mut c: u64, p: u64) -> u32 {
    let mut v = 0;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: Self) -> RingElement {
        self.add_elem(rhs)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: Self) -> RingElement {
        self.sub_elem(rhs)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: Self) -> RingElement {
        self.mul_elem(rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_elem()
    }
}
