//! Principal units: the filtration U^i = 1 + π^i O_K, the decomposition of a
//! principal unit over the generators η_(x,y) = 1 + c_y π^x and ω_*, and the
//! p-th power test built on it.
//!
//! The decomposition strips the leading term of `u − 1` one level at a time.
//! At a level `l` coprime to p below the critical level it divides by a
//! product of η's; at a level divisible by p it divides by a p-th power; at
//! the critical level it solves `d = φ(c) + a·c_*` where
//! `φ(c) = c^p + θc` describes p-th powering there; above the critical level
//! every unit is a p-th power. Exponents are produced modulo p^k.

use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp_linalg::FpMatrix;
use crate::padic::{FieldSpec, RingElement};
use crate::residue::ResidueElement;

/// `v(u − 1)` for a principal unit, or `None` when `u ≡ 1` at its precision.
pub fn level(u: &RingElement) -> Result<Option<u32>> {
    let k = u.field();
    if u.residue() != k.residue_field().one() {
        return Err(Error::NotPrincipalUnit);
    }
    Ok(u.sub_elem(&RingElement::one(k)).valuation())
}

/// θ = residue of p·π^(−e), defined when (p−1) | e.
pub fn artin_schreier_theta(k: &FieldSpec) -> Result<ResidueElement> {
    if k.crit_int().is_none() {
        return Err(Error::NotApplicable("(p-1) does not divide e"));
    }
    Ok(k.p_unit_residue().clone())
}

/// φ(c) = c^p + θ·c on the residue field.
pub fn critical_map(k: &FieldSpec, c: &ResidueElement) -> ResidueElement {
    k.critical_map(c)
}

/// Whether ζ_p ∈ K, decided by the kernel of φ.
pub fn zeta_p_in_k(k: &FieldSpec) -> bool {
    if k.crit_int().is_none() {
        return false;
    }
    let m = k.residue_field().linear_map_matrix(|c| k.critical_map(c));
    m.rank() < k.f()
}

/// The distinguished non-p-th power at the critical level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaStar {
    pub element: RingElement,
    pub c_star: ResidueElement,
}

pub fn find_omega_star(k: &Arc<FieldSpec>) -> Result<OmegaStar> {
    let (Some(c_star), Some(crit)) = (k.c_star(), k.crit_int()) else {
        return Err(Error::NotApplicable("zeta_p is not in K"));
    };
    let element = RingElement::one(k).add_elem(
        &RingElement::from_residue(k, c_star).mul_elem(&RingElement::pi(k).pow(crit as u128)),
    );
    Ok(OmegaStar {
        element,
        c_star: c_star.clone(),
    })
}

/// η_(x,y) = 1 + c_y π^x with c_y = y^(y−1) (so `y` is 1-based).
pub fn eta(k: &Arc<FieldSpec>, x: u32, y: usize) -> RingElement {
    let c = k.residue_field().from_index(k.p().pow(y as u32 - 1));
    one_plus(k, &c, x)
}

fn one_plus(k: &Arc<FieldSpec>, c: &ResidueElement, level: u32) -> RingElement {
    RingElement::one(k)
        .add_elem(&RingElement::from_residue(k, c).mul_elem(&RingElement::pi(k).pow(level as u128)))
}

/// Exponents of a principal unit on `{η_(x,y)} ∪ {ω_*}`, modulo p^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub k: u32,
    /// `((x, y), exponent)` for every x ∈ I and y ∈ 1..=f, in basis order.
    pub eta_exp: Vec<((u32, usize), u64)>,
    /// Present only when ζ_p ∈ K.
    pub omega_exp: Option<u64>,
    /// The residual cofactor lies in U^certified_level, a group of p^k-th powers.
    pub certified_level: u32,
}

impl UnitDecomposition {
    fn zero(k: &FieldSpec, exp_prec: u32) -> Self {
        let eta_exp = k
            .levels()
            .iter()
            .flat_map(|&x| (1..=k.f()).map(move |y| ((x, y), 0)))
            .collect();
        Self {
            k: exp_prec,
            eta_exp,
            omega_exp: k.zeta_p().then_some(0),
            certified_level: 0,
        }
    }

    fn slot(&self, x: u32, y: usize) -> usize {
        self.eta_exp
            .iter()
            .position(|&((a, b), _)| a == x && b == y)
            .expect("η index is in the basis")
    }

    pub fn eta(&self, x: u32, y: usize) -> u64 {
        self.eta_exp[self.slot(x, y)].1
    }

    /// Exponents as a flat vector in basis order (η's, then ω when present).
    pub fn exponents(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.eta_exp.iter().map(|&(_, a)| a).collect();
        v.extend(self.omega_exp);
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents().iter().all(|&a| a == 0)
    }

    /// `self + scale·other`, exponents mod p^k.
    fn accumulate(&mut self, other: &UnitDecomposition, scale: u64, modulus: u64) {
        for (slot, (_, a)) in self.eta_exp.iter_mut().zip(&other.eta_exp) {
            slot.1 = (slot.1 + scale * a) % modulus;
        }
        if let (Some(o), Some(a)) = (self.omega_exp.as_mut(), other.omega_exp) {
            *o = (*o + scale * a) % modulus;
        }
    }
}

impl Serialize for UnitDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let eta: Vec<(u32, usize, u64)> =
            self.eta_exp.iter().map(|&((x, y), a)| (x, y, a)).collect();
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("eta", &eta)?;
        m.serialize_entry("omega", &self.omega_exp.unwrap_or(0))?;
        m.serialize_entry("k", &self.k)?;
        m.end()
    }
}

/// Decomposes a principal unit with exponents modulo p^`exp_prec`.
pub fn decompose(u: &RingElement, exp_prec: u32) -> Result<UnitDecomposition> {
    let k = u.field().clone();
    let mut out = UnitDecomposition::zero(&k, exp_prec);
    if exp_prec == 0 {
        level(u)?;
        return Ok(out);
    }
    let p = k.p();
    let modulus = p
        .checked_pow(exp_prec)
        .ok_or(Error::Overflow("exponent modulus"))?;
    let rf = k.residue_field();
    let e = k.e() as u32;
    // units of level ≥ target are p^k-th powers
    let target = k.crit_floor() + (exp_prec - 1) * e + 1;

    let mut cur = u.clone();
    let mut last_level = 0;
    loop {
        let Some(l) = level(&cur)? else {
            if cur.prec() >= target {
                out.certified_level = cur.prec();
                return Ok(out);
            }
            return Err(Error::PrecisionExhausted {
                level: cur.prec(),
                needed: target,
            });
        };
        assert!(l > last_level, "level must increase on every pass");
        last_level = l;
        if l >= target {
            out.certified_level = l;
            return Ok(out);
        }
        let (_, d) = cur.sub_elem(&RingElement::one(&k)).leading_residue()?;

        let strip = if k.below_crit(l) && !(l as u64).is_multiple_of(p) {
            // η_(l,j)^(b_j) with d = Σ b_j c_j
            let mut factor = RingElement::one(&k);
            for (j, &b) in d.coeffs().iter().enumerate() {
                if b == 0 {
                    continue;
                }
                factor = factor.mul_elem(&eta(&k, l, j + 1).pow(b as u128));
                let slot = out.slot(l, j + 1);
                out.eta_exp[slot].1 = (out.eta_exp[slot].1 + b) % modulus;
            }
            factor
        } else if k.below_crit(l) {
            // (1 + d^(1/p) π^(l/p))^p
            let w = one_plus(&k, &rf.frobenius_inv(&d), l / p as u32);
            let sub = decompose(&w, exp_prec - 1)?;
            out.accumulate(&sub, p, modulus);
            w.pow(p as u128)
        } else if Some(l) == k.crit_int() {
            // d = φ(c) + a·c_*
            let mut cols: Vec<ResidueElement> = (0..k.f())
                .map(|j| k.critical_map(&rf.from_index(p.pow(j as u32))))
                .collect();
            if let Some(cs) = k.c_star() {
                cols.push(cs.clone());
            }
            let mut m = FpMatrix::zeros(p, k.f(), cols.len());
            for (j, col) in cols.iter().enumerate() {
                for (i, &v) in col.coeffs().iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            let sol = m.solve(d.coeffs()).expect("φ together with c_* spans F_q");
            let c = ResidueElement(sol[..k.f()].to_vec());
            let w = one_plus(&k, &c, l - e);
            let mut factor = w.pow(p as u128);
            let sub = decompose(&w, exp_prec - 1)?;
            out.accumulate(&sub, p, modulus);
            if let (Some(&a), Some(omega)) = (sol.get(k.f()), out.omega_exp.as_mut()) {
                *omega = (*omega + a) % modulus;
                factor = factor.mul_elem(&find_omega_star(&k)?.element.pow(a as u128));
            }
            factor
        } else {
            // above the critical level: (1 + (d/θ) π^(l−e))^p
            let theta_inv = rf.inv(k.p_unit_residue()).expect("θ is a unit");
            let w = one_plus(&k, &rf.mul(&d, &theta_inv), l - e);
            let sub = decompose(&w, exp_prec - 1)?;
            out.accumulate(&sub, p, modulus);
            w.pow(p as u128)
        };
        cur = cur.mul_elem(&strip.unit_inverse()?);
    }
}

/// `Π η^exp · ω_*^exp` for a decomposition.
pub fn recompose(k: &Arc<FieldSpec>, dec: &UnitDecomposition) -> Result<RingElement> {
    let mut acc = RingElement::one(k);
    for &((x, y), a) in &dec.eta_exp {
        if a != 0 {
            acc = acc.mul_elem(&eta(k, x, y).pow(a as u128));
        }
    }
    if let Some(a) = dec.omega_exp.filter(|&a| a != 0) {
        acc = acc.mul_elem(&find_omega_star(k)?.element.pow(a as u128));
    }
    Ok(acc)
}

/// Whether `a ∈ (K^×)^p`, given `v_known = v(a)`.
pub fn is_pth_power(a: &RingElement, v_known: u32) -> Result<bool> {
    let v = a.valuation().ok_or(Error::ZeroInput)?;
    debug_assert_eq!(v, v_known);
    let k = a.field();
    if !(v_known as u64).is_multiple_of(k.p()) {
        return Ok(false);
    }
    let u = a.div_pi_pow(v_known)?;
    // u^(q−1) is principal and has the same p-th power status since p ∤ q−1
    let principal = u.pow(k.q() as u128 - 1);
    Ok(decompose(&principal, 1)?.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::*;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    fn int(k: &Arc<FieldSpec>, a: i64) -> RingElement {
        RingElement::from_int(k, a)
    }

    #[test]
    fn level_examples() {
        let k = q2();
        assert_eq!(level(&int(&k, 1)).unwrap(), None);
        assert_eq!(level(&int(&k, 3)).unwrap(), Some(1));
        assert_eq!(level(&int(&k, 5)).unwrap(), Some(2));
        assert_eq!(level(&int(&k, 2)), Err(Error::NotPrincipalUnit));
        let k = q3_zeta3();
        let u = int(&k, 1).add_elem(&int(&k, 3).mul_elem(&RingElement::pi(&k)));
        assert_eq!(level(&u).unwrap(), Some(3));
    }

    #[test]
    fn theta_examples() {
        let k = q2();
        assert_eq!(artin_schreier_theta(&k).unwrap(), k.residue_field().one());
        let k = q3_zeta3();
        assert_eq!(
            artin_schreier_theta(&k).unwrap(),
            k.residue_field().from_int(2)
        );
        assert!(matches!(
            artin_schreier_theta(&q3()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn theta_matches_expansion_exhaustively() {
        // (1 + cπ^s)^p ≡ 1 + φ(c)π^crit mod π^(crit+1), for every residue c
        let k = q3_zeta3();
        let crit = k.crit_int().unwrap();
        for c in k.residue_field().elements() {
            let lhs = one_plus(&k, &c, 1).pow(3);
            let diff = lhs.sub_elem(&one_plus(&k, &critical_map(&k, &c), crit));
            assert!(diff.valuation().is_none_or(|v| v > crit));
        }
    }

    #[test]
    fn critical_map_is_linear() {
        for k in [q2(), q3_zeta3(), q4(), q3_sqrt3(), q2_sqrt2()] {
            let rf = k.residue_field();
            for a in rf.elements() {
                for b in rf.elements() {
                    assert_eq!(
                        critical_map(&k, &rf.add(&a, &b)),
                        rf.add(&critical_map(&k, &a), &critical_map(&k, &b))
                    );
                }
                for lambda in 0..k.p() {
                    assert_eq!(
                        critical_map(&k, &rf.scale(lambda, &a)),
                        rf.scale(lambda, &critical_map(&k, &a))
                    );
                }
            }
        }
    }

    /// Φ_p(z) ≡ 0 mod π^N has a solution in O_K/π^N.
    fn cyclotomic_root_oracle(k: &Arc<FieldSpec>) -> bool {
        k.quotient_elements(k.precision()).iter().any(|z| {
            let mut acc = RingElement::zero(k);
            for _ in 0..k.p() - 1 {
                acc = acc.add_elem(&RingElement::one(k)).mul_elem(z);
            }
            acc.add_elem(&RingElement::one(k)).is_zero()
        })
    }

    #[test]
    fn zeta_examples_and_oracle() {
        assert!(zeta_p_in_k(&q2()));
        assert!(!zeta_p_in_k(&q3()));
        assert!(zeta_p_in_k(&q3_zeta3()));
        for k in all_fields() {
            assert_eq!(zeta_p_in_k(&k), k.zeta_p());
            if k.q().pow(k.precision()) <= 60_000 {
                assert_eq!(cyclotomic_root_oracle(&k), k.zeta_p(), "{:?}", k.source());
            }
        }
    }

    fn pth_powers(k: &Arc<FieldSpec>, prec: u32) -> HashSet<RingElement> {
        k.quotient_elements(prec)
            .iter()
            .filter(|x| x.valuation() == Some(0))
            .map(|x| x.pow(k.p() as u128))
            .collect()
    }

    #[test]
    fn omega_star_examples() {
        let k = q2();
        let w = find_omega_star(&k).unwrap();
        assert_eq!(w.element, int(&k, 5));
        assert!(!pth_powers(&k, k.precision()).contains(&w.element));

        let k = q3_zeta3();
        let w = find_omega_star(&k).unwrap();
        assert_eq!(w.c_star, k.residue_field().one());
        assert_eq!(level(&w.element).unwrap(), Some(3));
        assert!(!pth_powers(&k, 7).contains(&w.element.truncate(7)));

        assert!(matches!(
            find_omega_star(&q3()),
            Err(Error::NotApplicable(_))
        ));
        assert!(matches!(
            find_omega_star(&q3_sqrt3()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let k = q2();
        let d = decompose(&int(&k, 3), 1).unwrap();
        assert_eq!((d.eta(1, 1), d.omega_exp), (1, Some(0)));
        let d = decompose(&int(&k, 7), 1).unwrap();
        assert_eq!((d.eta(1, 1), d.omega_exp), (1, Some(1)));
        // 7·3⁻¹·5⁻¹ is a square mod 2^M
        let rest = int(&k, 7)
            .mul_elem(&int(&k, 3).unit_inverse().unwrap())
            .mul_elem(&int(&k, 5).unit_inverse().unwrap());
        assert!(pth_powers(&k, k.precision()).contains(&rest));
        let d = decompose(&int(&k, 17), 1).unwrap();
        assert!(d.is_trivial());
        assert!(pth_powers(&k, k.precision()).contains(&int(&k, 17)));
        assert_eq!(decompose(&int(&k, 2), 1), Err(Error::NotPrincipalUnit));
        assert_eq!(
            serde_json::to_string(&decompose(&int(&k, 7), 1).unwrap()).unwrap(),
            r#"{"eta":[[1,1,1]],"omega":1,"k":1}"#
        );
    }

    #[test]
    fn decompose_reports_exhausted_precision() {
        let k = q2();
        let u = int(&k, 1).truncate(2);
        assert!(matches!(
            decompose(&u, 1),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn is_pth_power_examples() {
        let k = q2();
        assert!(is_pth_power(&int(&k, 1), 0).unwrap());
        assert!(!is_pth_power(&int(&k, 2), 1).unwrap());
        assert!(!is_pth_power(&int(&k, 5), 0).unwrap());
        assert!(is_pth_power(&int(&k, 17), 0).unwrap());
        assert!(is_pth_power(&int(&k, 4), 2).unwrap());
        assert!(!is_pth_power(&int(&k, 20), 2).unwrap());
        assert_eq!(
            is_pth_power(&RingElement::zero(&k), 0),
            Err(Error::ZeroInput)
        );
    }

    fn random_principal_unit(k: &Arc<FieldSpec>, rng: &mut impl Rng) -> RingElement {
        let terms: Vec<Vec<i64>> = (0..k.e())
            .map(|_| (0..k.f()).map(|_| rng.gen_range(0..1_000_000)).collect())
            .collect();
        let x = RingElement::from_repr(k, &crate::padic::ElementRepr::Poly(terms)).unwrap();
        RingElement::one(k).add_elem(&x.mul_elem(&RingElement::pi(k)))
    }

    #[test]
    fn recomposition_leaves_a_pth_power() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for k in all_fields() {
            for _ in 0..50 {
                let u = random_principal_unit(&k, &mut rng);
                let dec = decompose(&u, 1).unwrap();
                let residual = u.mul_elem(&recompose(&k, &dec).unwrap().unit_inverse().unwrap());
                assert!(is_pth_power(&residual, 0).unwrap());
                assert!(k.above_crit(dec.certified_level));
            }
        }
    }

    #[test]
    fn higher_exponent_precision_refines() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for k in [q2(), q3(), q3_zeta3(), q2_sqrt2(), q4()] {
            let e = k.e() as u32;
            for _ in 0..20 {
                let u = random_principal_unit(&k, &mut rng);
                let d1 = decompose(&u, 1).unwrap();
                let d2 = decompose(&u, 2).unwrap();
                let reduced: Vec<u64> = d2.exponents().iter().map(|a| a % k.p()).collect();
                assert_eq!(reduced, d1.exponents());
                assert!(d2.certified_level > k.crit_floor() + e);
                let residual = u.mul_elem(&recompose(&k, &d2).unwrap().unit_inverse().unwrap());
                assert!(
                    decompose(&residual, 2).unwrap().is_trivial(),
                    "{:?}",
                    k.source()
                );
            }
        }
    }

    #[test]
    fn q2_minus_one_to_second_order() {
        // exponents mod 4 must leave a 4th power, checked against brute force
        let k = q2();
        let d = decompose(&int(&k, -1), 2).unwrap();
        let residual = int(&k, -1).mul_elem(&recompose(&k, &d).unwrap().unit_inverse().unwrap());
        let fourth: HashSet<_> = k
            .quotient_elements(k.precision())
            .iter()
            .filter(|x| x.valuation() == Some(0))
            .map(|x| x.pow(4))
            .collect();
        assert!(fourth.contains(&residual));
    }
}
