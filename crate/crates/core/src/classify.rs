//! Which jump sequences occur, the size of C_K(p) and its filtration.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::FieldSpec;
use crate::ramification::JumpSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    /// `t` is neither −1, a level below the critical one, nor the critical level.
    TRange,
    /// `t` lies below the critical level but is divisible by p.
    TDivisible,
    MRange,
    Neg1NotFirst,
    CritNotLast,
    CritWithoutZeta,
    /// Cyclic checks: the successor of `t^i` is not allowed.
    Successor,
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReasonCode::TRange => "T_RANGE",
            ReasonCode::TDivisible => "T_DIVISIBLE",
            ReasonCode::MRange => "M_RANGE",
            ReasonCode::Neg1NotFirst => "NEG1_NOT_FIRST",
            ReasonCode::CritNotLast => "CRIT_NOT_LAST",
            ReasonCode::CritWithoutZeta => "CRIT_WITHOUT_ZETA",
            ReasonCode::Successor => "SUCCESSOR",
        };
        f.write_str(s)
    }
}

/// Outcome of a decision procedure: on failure, which condition and where.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub admissible: bool,
    pub reason: Option<ReasonCode>,
    pub index: Option<usize>,
    /// `log_p` of the degree of a realizing extension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_log: Option<u32>,
}

impl Verdict {
    fn yes(degree_log: Option<u32>) -> Self {
        Self {
            admissible: true,
            reason: None,
            index: None,
            degree_log,
        }
    }

    fn no(reason: ReasonCode, index: usize) -> Self {
        Self {
            admissible: false,
            reason: Some(reason),
            index: Some(index),
            degree_log: None,
        }
    }

    /// Degree `p^(Σ m)` of a realizing extension, if it fits.
    pub fn degree(&self, p: u64) -> Option<u128> {
        self.degree_log.and_then(|d| (p as u128).checked_pow(d))
    }
}

/// Whether some elementary abelian p-extension of `k` has exactly these
/// upper jumps and sizes.
pub fn is_admissible(k: &FieldSpec, s: &[(i64, i64)]) -> Result<Verdict> {
    if s.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::NotSorted);
    }
    let (num, den) = k.crit();
    let f = k.f() as i64;
    let p = k.p() as i64;
    for (i, &(t, m)) in s.iter().enumerate() {
        if t == -1 {
            if i != 0 {
                return Ok(Verdict::no(ReasonCode::Neg1NotFirst, i));
            }
            if m != 1 {
                return Ok(Verdict::no(ReasonCode::MRange, i));
            }
        } else if t >= 1 && (t as i128) * (den as i128) < num as i128 {
            if t % p == 0 {
                return Ok(Verdict::no(ReasonCode::TDivisible, i));
            }
            if !(1..=f).contains(&m) {
                return Ok(Verdict::no(ReasonCode::MRange, i));
            }
        } else if k.crit_int().map(|c| c as i64) == Some(t) {
            if !k.zeta_p() {
                return Ok(Verdict::no(ReasonCode::CritWithoutZeta, i));
            }
            if i + 1 != s.len() {
                return Ok(Verdict::no(ReasonCode::CritNotLast, i));
            }
            if m != 1 {
                return Ok(Verdict::no(ReasonCode::MRange, i));
            }
        } else {
            return Ok(Verdict::no(ReasonCode::TRange, i));
        }
    }
    Ok(Verdict::yes(Some(s.iter().map(|&(_, m)| m as u32).sum())))
}

pub fn is_admissible_seq(k: &FieldSpec, s: &JumpSequence) -> Result<Verdict> {
    let raw: Vec<(i64, i64)> = s.pairs().iter().map(|&(t, m)| (t, m as i64)).collect();
    is_admissible(k, &raw)
}

/// Every admissible sequence for `k`, the empty one first, in a fixed order.
pub fn admissible_sequences(k: &FieldSpec) -> Vec<JumpSequence> {
    let mut slots: Vec<(i64, u32)> = vec![(-1, 1)];
    slots.extend(k.levels().iter().map(|&t| (t as i64, k.f() as u32)));
    if k.zeta_p() {
        slots.push((k.crit_int().unwrap() as i64, 1));
    }
    let mut out = vec![Vec::new()];
    for &(t, max_m) in &slots {
        let mut next = Vec::new();
        for prefix in &out {
            next.push(prefix.clone());
            for m in 1..=max_m {
                let mut s: Vec<(i64, u32)> = prefix.clone();
                s.push((t, m));
                next.push(s);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|s| JumpSequence::new(s).expect("slots are increasing"))
        .collect()
}

/// Whether `jumps` can be the upper jumps of a cyclic extension of degree
/// `p^len` (only when ζ_p ∉ K).
pub fn cyclic_check(k: &FieldSpec, jumps: &[i64]) -> Result<Verdict> {
    if k.zeta_p() {
        return Err(Error::ZetaInK);
    }
    if jumps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotSorted);
    }
    let p = k.p() as i128;
    let e = k.e() as i128;
    // bounds pe/(p−1) and e/(p−1), compared after clearing the denominator
    let below_crit = |t: i128| t * (p - 1) < p * e;
    let below_half = |t: i128| t * (p - 1) < e;
    let Some(&first) = jumps.first() else {
        return Ok(Verdict::yes(Some(0)));
    };
    let first = first as i128;
    if first < 1 || !below_crit(first) {
        return Ok(Verdict::no(ReasonCode::TRange, 0));
    }
    if first % p == 0 {
        return Ok(Verdict::no(ReasonCode::TDivisible, 0));
    }
    for (i, w) in jumps.windows(2).enumerate() {
        let (t, next) = (w[0] as i128, w[1] as i128);
        let ok = if below_half(t) {
            next == p * t || (p * t < next && below_crit(next) && next % p != 0)
        } else {
            next == t + e
        };
        if !ok {
            return Ok(Verdict::no(ReasonCode::Successor, i + 1));
        }
    }
    Ok(Verdict::yes(Some(jumps.len() as u32)))
}

/// `log_p [C_K(p) : K]`.
pub fn ckp_degree_log(k: &FieldSpec) -> usize {
    k.n() + if k.zeta_p() { 2 } else { 1 }
}

pub fn ckp_degree(k: &FieldSpec) -> Option<u128> {
    (k.p() as u128).checked_pow(ckp_degree_log(k) as u32)
}

/// Jumps of C_K(p): −1 once, each level of I with size f, and the critical
/// level once when ζ_p ∈ K.
pub fn ckp_filtration(k: &FieldSpec) -> JumpSequence {
    let mut pairs = vec![(-1, 1)];
    pairs.extend(k.levels().iter().map(|&t| (t as i64, k.f() as u32)));
    if k.zeta_p() {
        pairs.push((k.crit_int().unwrap() as i64, 1));
    }
    JumpSequence::new(pairs).expect("closed form is increasing")
}
