//! Upper ramification jumps of elementary abelian p-extensions.
//!
//! On the norm side an extension is a subspace `n ⊆ V`; its degree-p
//! subextensions are the hyperplanes above `n`, and the jump of each
//! hyperplane is read off the unit filtration. The upper groups are then
//! `G^ν = (⋂ {H ⊇ n : jump(H) < ν}) / n`. On the Kummer side (ζ_p ∈ K) an
//! extension is a subspace `A ⊆ V` of radicands and the degree-p
//! subextensions are the lines of `A`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp_linalg::Subspace;
use crate::mult_group::{BasisLabel, KModP};

/// Upper jumps `t` with sizes `m` (`|G^t/G^(t+1)| = p^m`), `t` increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JumpSequence {
    pairs: Vec<(i64, u32)>,
}

impl Serialize for JumpSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs.serialize(s)
    }
}

/// One constant stretch of the upper filtration: `G^ν` has order
/// `p^log_order` for `from ≤ ν ≤ to` (`to = None` means unbounded).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSegment {
    pub from: i64,
    pub to: Option<i64>,
    pub log_order: usize,
}

impl JumpSequence {
    pub fn new(pairs: Vec<(i64, u32)>) -> Result<Self> {
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::NotSorted);
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(i64, u32)] {
        &self.pairs
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.pairs.iter().map(|&(t, _)| t).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Σ m_i, the log_p of the degree.
    pub fn total_size(&self) -> u32 {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// The filtration as constant stretches, starting at ν = −1.
    pub fn chain(&self) -> Vec<ChainSegment> {
        let mut out = Vec::new();
        let mut order = self.total_size() as usize;
        let mut start = -1;
        for &(t, m) in &self.pairs {
            out.push(ChainSegment {
                from: start,
                to: Some(t),
                log_order: order,
            });
            order -= m as usize;
            start = t + 1;
        }
        out.push(ChainSegment {
            from: start,
            to: None,
            log_order: order,
        });
        out
    }

    /// Human-readable chain, one line per stretch.
    pub fn render_chain(&self, p: u64) -> Vec<String> {
        self.chain()
            .iter()
            .map(|s| {
                let group = if s.log_order == 0 {
                    "{e}".to_string()
                } else {
                    format!("(Z/{p}Z)^{}", s.log_order)
                };
                match s.to {
                    Some(to) if to == s.from => format!("G^v = {group} for v = {to}"),
                    Some(to) => format!("G^v = {group} for {} <= v <= {to}", s.from),
                    None => format!("G^v = {group} for v >= {}", s.from),
                }
            })
            .collect()
    }
}

impl fmt::Display for JumpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(t, m)| format!("({t},{m})"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// ψ of a degree-p extension with jump `t`: ν for ν ≤ t, t + p(ν − t) beyond.
pub fn herbrand_psi_degree_p(p: u64, t: i64, nu: i64) -> i64 {
    if nu <= t {
        nu
    } else {
        t + p as i64 * (nu - t)
    }
}

/// Discriminant exponent `(p − 1)(t + 1)` of a degree-p extension with jump `t`.
pub fn jump_discriminant(p: u64, t: i64) -> i64 {
    (p as i64 - 1) * (t + 1)
}

pub fn disc_to_jump(p: u64, d: i64) -> Result<i64> {
    let pm1 = p as i64 - 1;
    if d % pm1 != 0 {
        return Err(Error::NotDivisible {
            value: d,
            divisor: p - 1,
        });
    }
    Ok(d / pm1 - 1)
}

/// The possible jumps: −1, then I, then the critical level when ζ_p ∈ K.
pub fn candidate_grid(v: &KModP) -> Vec<i64> {
    let k = v.field();
    let mut grid = vec![-1];
    grid.extend(k.levels().iter().map(|&i| i as i64));
    if k.zeta_p() {
        grid.push(
            k.crit_int()
                .expect("ζ_p ∈ K forces an integral critical level") as i64,
        );
    }
    grid
}

/// Jump of the degree-p extension with normic hyperplane `n`: −1 if every
/// unit is a norm, otherwise the least `j` with `U^(j+1)` inside `n`.
pub fn jump_of_hyperplane(v: &KModP, n: &Subspace) -> Result<i64> {
    if n.ambient_dim() != v.dim() {
        return Err(Error::AmbientMismatch);
    }
    if n.codim() != 1 {
        return Err(Error::NotHyperplane(n.codim()));
    }
    if v.unit_level_image(0).is_subspace_of(n)? {
        return Ok(-1);
    }
    let top = v.field().crit_ceil() + 1;
    for j in 0..=top {
        if v.unit_level_image(j + 1).is_subspace_of(n)? {
            return Ok(j as i64);
        }
    }
    unreachable!("deep units are p-th powers")
}

/// Hyperplanes above `n` together with their jumps.
fn hyperplane_jumps(v: &KModP, n: &Subspace) -> Result<Vec<(Subspace, i64)>> {
    n.enumerate_hyperplanes_above()?
        .into_iter()
        .map(|h| {
            let t = jump_of_hyperplane(v, &h)?;
            Ok((h, t))
        })
        .collect()
}

fn intersect_all<'a>(v: &KModP, mut hs: impl Iterator<Item = &'a Subspace>) -> Result<Subspace> {
    hs.try_fold(v.full(), |acc, h| acc.intersect(h))
}

/// `log_p |G^ν|` for the extension cut out by `n`, for each requested ν,
/// from the intersection of the hyperplanes above `n` with jump below ν.
pub fn upper_group_log_orders(v: &KModP, n: &Subspace, nus: &[i64]) -> Result<Vec<usize>> {
    if n.ambient_dim() != v.dim() {
        return Err(Error::AmbientMismatch);
    }
    if n.codim() == 0 {
        return Ok(vec![0; nus.len()]);
    }
    let hs = hyperplane_jumps(v, n)?;
    nus.iter()
        .map(|&nu| {
            let meet = intersect_all(v, hs.iter().filter(|(_, t)| *t < nu).map(|(h, _)| h))?;
            Ok(meet.dim() - n.dim())
        })
        .collect()
}

fn pairs_from_orders(grid: &[i64], at: impl Fn(usize) -> (usize, usize)) -> Result<JumpSequence> {
    let mut pairs = Vec::new();
    for (i, &t) in grid.iter().enumerate() {
        let (here, after) = at(i);
        if here > after {
            pairs.push((t, (here - after) as u32));
        }
    }
    JumpSequence::new(pairs)
}

/// Upper ramification jumps of the extension with normic subspace `n`.
pub fn filtration(v: &KModP, n: &Subspace) -> Result<JumpSequence> {
    if n.ambient_dim() != v.dim() {
        return Err(Error::AmbientMismatch);
    }
    if n.codim() == 0 {
        return Ok(JumpSequence::empty());
    }
    let grid = candidate_grid(v);
    let hs = hyperplane_jumps(v, n)?;
    let orders = |pred: &dyn Fn(i64) -> bool| -> Result<usize> {
        Ok(intersect_all(v, hs.iter().filter(|(_, t)| pred(*t)).map(|(h, _)| h))?.dim() - n.dim())
    };
    // |G^t| uses jumps < t, |G^(t+1)| uses jumps ≤ t
    let mut table = Vec::with_capacity(grid.len());
    for &t in &grid {
        table.push((orders(&|s| s < t)?, orders(&|s| s <= t)?));
    }
    let seq = pairs_from_orders(&grid, |i| table[i])?;
    debug_assert_eq!(seq.total_size() as usize, n.codim());
    Ok(seq)
}

/// The same filtration through `G^ν = (n + image of U^ν) / n`.
pub fn filtration_via_unit_images(v: &KModP, n: &Subspace) -> Result<JumpSequence> {
    let grid = candidate_grid(v);
    let log_order = |nu: i64| -> Result<usize> {
        if nu < 0 {
            return Ok(n.codim());
        }
        Ok(n.sum(&v.unit_level_image(nu as u32))?.dim() - n.dim())
    };
    let mut table = Vec::with_capacity(grid.len());
    for &t in &grid {
        table.push((log_order(t)?, log_order(t + 1)?));
    }
    pairs_from_orders(&grid, |i| table[i])
}

fn require_zeta(v: &KModP) -> Result<i64> {
    let k = v.field();
    match (k.zeta_p(), k.crit_int()) {
        (true, Some(c)) => Ok(c as i64),
        _ => Err(Error::NotApplicable("Kummer theory needs zeta_p in K")),
    }
}

/// Jump of `K(a^(1/p))` from the coordinates of the class of `a`.
pub fn kummer_jump(v: &KModP, a: &[u64]) -> Result<i64> {
    let crit = require_zeta(v)?;
    if a.len() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: a.len(),
        });
    }
    if a.iter().all(|&c| c == 0) {
        return Err(Error::ZeroClass);
    }
    let mut min_level: Option<u32> = None;
    for (label, &c) in v.labels().iter().zip(a) {
        if c == 0 {
            continue;
        }
        match *label {
            BasisLabel::Pi => return Ok(crit),
            BasisLabel::Eta { level, .. } => {
                min_level = Some(min_level.map_or(level, |m| m.min(level)));
            }
            BasisLabel::OmegaStar => {}
        }
    }
    Ok(min_level.map_or(-1, |l| crit - l as i64))
}

/// Upper jumps of `K(A^(1/p))` for `A` spanned by the given classes.
pub fn kummer_filtration(v: &KModP, gens: &[Vec<u64>]) -> Result<JumpSequence> {
    require_zeta(v)?;
    let a = Subspace::span(gens, v.dim(), v.p())?;
    if a.dim() == 0 {
        return Ok(JumpSequence::empty());
    }
    let lines: Vec<(Vec<u64>, i64)> = a
        .enumerate_lines()
        .into_iter()
        .map(|l| {
            let t = kummer_jump(v, &l)?;
            Ok((l, t))
        })
        .collect::<Result<_>>()?;
    let span_below = |pred: &dyn Fn(i64) -> bool| -> Result<usize> {
        let vecs: Vec<Vec<u64>> = lines
            .iter()
            .filter(|(_, t)| pred(*t))
            .map(|(l, _)| l.clone())
            .collect();
        Ok(Subspace::span(&vecs, v.dim(), v.p())?.dim())
    };
    // |G^ν| = p^(h − dim A_{<ν})
    let grid = candidate_grid(v);
    let h = a.dim();
    let mut table = Vec::with_capacity(grid.len());
    for &t in &grid {
        table.push((h - span_below(&|s| s < t)?, h - span_below(&|s| s <= t)?));
    }
    pairs_from_orders(&grid, |i| table[i])
}

/// Multiset of jumps over all degree-p extensions, norm side.
pub fn hyperplane_jump_multiset(v: &KModP) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for (_, t) in hyperplane_jumps(v, &v.zero())? {
        *out.entry(t).or_insert(0) += 1;
    }
    Ok(out)
}

/// Multiset of jumps over all degree-p extensions, Kummer side.
pub fn line_jump_multiset(v: &KModP) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for l in v.full().enumerate_lines() {
        *out.entry(kummer_jump(v, &l)?).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::*;
    use crate::padic::RingElement;
    use std::collections::BTreeSet;

    const PI: BasisLabel = BasisLabel::Pi;
    const OM: BasisLabel = BasisLabel::OmegaStar;
    const ETA1: BasisLabel = BasisLabel::Eta { level: 1, index: 1 };

    fn seq(pairs: &[(i64, u32)]) -> JumpSequence {
        JumpSequence::new(pairs.to_vec()).unwrap()
    }

    fn all_subspaces(v: &KModP) -> Vec<Subspace> {
        (0..=v.dim())
            .flat_map(|d| Subspace::enumerate_all(v.p(), v.dim(), d))
            .collect()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(herbrand_psi_degree_p(2, 1, 1), 1);
        assert_eq!(herbrand_psi_degree_p(2, 1, 3), 5);
        assert_eq!(herbrand_psi_degree_p(3, 0, 0), 0);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(jump_discriminant(2, 1), 2);
        assert_eq!(jump_discriminant(3, 2), 6);
        assert_eq!(disc_to_jump(2, 0).unwrap(), -1);
        assert_eq!(
            disc_to_jump(3, 5),
            Err(Error::NotDivisible {
                value: 5,
                divisor: 2
            })
        );
        for p in [2u64, 3, 5, 7] {
            for t in -1..20 {
                assert_eq!(disc_to_jump(p, jump_discriminant(p, t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn eisenstein_radical_different_matches_critical_jump() {
        // K(π^(1/p)): different of z^p − π is p·z^(p−1), of L-valuation pe + (p−1)
        for k in all_fields().into_iter().filter(|k| k.zeta_p()) {
            let (p, e) = (k.p() as i64, k.e() as i64);
            let different = p * e + (p - 1);
            assert_eq!(
                different,
                jump_discriminant(k.p(), k.crit_int().unwrap() as i64)
            );
        }
    }

    #[test]
    fn hyperplane_jump_examples() {
        let v = KModP::new(&q2());
        assert_eq!(jump_of_hyperplane(&v, &v.span_labels([PI, OM])).unwrap(), 1);
        assert_eq!(
            jump_of_hyperplane(&v, &v.span_labels([ETA1, OM])).unwrap(),
            -1
        );
        assert_eq!(
            jump_of_hyperplane(&v, &v.span_labels([PI, ETA1])).unwrap(),
            2
        );
        assert_eq!(
            jump_of_hyperplane(&v, &v.span_labels([PI])),
            Err(Error::NotHyperplane(2))
        );
    }

    #[test]
    fn filtration_examples() {
        let v = KModP::new(&q2());
        assert_eq!(
            filtration(&v, &v.zero()).unwrap(),
            seq(&[(-1, 1), (1, 1), (2, 1)])
        );
        assert_eq!(
            filtration(&v, &v.span_labels([ETA1])).unwrap(),
            seq(&[(-1, 1), (2, 1)])
        );
        assert_eq!(filtration(&v, &v.full()).unwrap(), JumpSequence::empty());
        for k in all_fields() {
            let v = KModP::new(&k);
            for h in v.zero().enumerate_hyperplanes_above().unwrap() {
                let t = jump_of_hyperplane(&v, &h).unwrap();
                assert_eq!(filtration(&v, &h).unwrap(), seq(&[(t, 1)]));
            }
        }
    }

    #[test]
    fn q2_span_eta_by_hand() {
        // the three hyperplanes above ⟨η⟩
        let v = KModP::new(&q2());
        let n = v.span_labels([ETA1]);
        let hs = n.enumerate_hyperplanes_above().unwrap();
        let mut jumps: Vec<i64> = hs
            .iter()
            .map(|h| jump_of_hyperplane(&v, h).unwrap())
            .collect();
        jumps.sort();
        assert_eq!(jumps, vec![-1, 2, 2]);
    }

    #[test]
    fn kummer_jump_examples() {
        let k = q2();
        let v = KModP::new(&k);
        let c = |a: i64| v.coordinates(&RingElement::from_int(&k, a)).unwrap();
        assert_eq!(kummer_jump(&v, &c(2)).unwrap(), 2);
        assert_eq!(kummer_jump(&v, &c(-1)).unwrap(), 1);
        assert_eq!(kummer_jump(&v, &c(5)).unwrap(), -1);
        assert_eq!(kummer_jump(&v, &c(3)).unwrap(), 1);
        assert_eq!(kummer_jump(&v, &[0, 0, 0]), Err(Error::ZeroClass));
        let w = KModP::new(&q3());
        assert!(matches!(
            kummer_jump(&w, &[1, 0]),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn kummer_filtration_examples() {
        let k = q2();
        let v = KModP::new(&k);
        let c = |a: i64| v.coordinates(&RingElement::from_int(&k, a)).unwrap();
        assert_eq!(
            kummer_filtration(&v, &[c(5), c(2)]).unwrap(),
            seq(&[(-1, 1), (2, 1)])
        );
        assert_eq!(
            kummer_filtration(&v, &v.full().rows()).unwrap(),
            seq(&[(-1, 1), (1, 1), (2, 1)])
        );
        for l in v.full().enumerate_lines() {
            let t = kummer_jump(&v, &l).unwrap();
            assert_eq!(kummer_filtration(&v, &[l]).unwrap(), seq(&[(t, 1)]));
        }
        assert_eq!(kummer_filtration(&v, &[]).unwrap(), JumpSequence::empty());
    }

    #[test]
    fn line_and_hyperplane_multisets_agree() {
        for k in all_fields().into_iter().filter(|k| k.zeta_p()) {
            let v = KModP::new(&k);
            assert_eq!(
                line_jump_multiset(&v).unwrap(),
                hyperplane_jump_multiset(&v).unwrap()
            );
        }
        let v = KModP::new(&q2());
        let expected: BTreeMap<i64, usize> = [(-1, 1), (1, 2), (2, 4)].into_iter().collect();
        assert_eq!(hyperplane_jump_multiset(&v).unwrap(), expected);
    }

    #[test]
    fn jumps_are_those_of_degree_p_subextensions() {
        for k in [q2(), q3(), q5(), q3_zeta3(), q4(), q2_sqrt2(), q3_sqrt3()] {
            let v = KModP::new(&k);
            for n in all_subspaces(&v).iter().filter(|n| n.codim() > 0) {
                let seq = filtration(&v, n).unwrap();
                let from_seq: BTreeSet<i64> = seq.jumps().into_iter().collect();
                let from_hyperplanes: BTreeSet<i64> = n
                    .enumerate_hyperplanes_above()
                    .unwrap()
                    .iter()
                    .map(|h| jump_of_hyperplane(&v, h).unwrap())
                    .collect();
                assert_eq!(from_seq, from_hyperplanes);
                assert_eq!(seq.total_size() as usize, n.codim());
                assert_eq!(seq, filtration_via_unit_images(&v, n).unwrap());
            }
        }
    }

    #[test]
    fn quotients_only_lose_jumps() {
        for k in [q2(), q3_zeta3(), q4()] {
            let v = KModP::new(&k);
            let subs = all_subspaces(&v);
            for a in subs.iter().step_by(2) {
                for b in subs.iter().step_by(3) {
                    if a.is_subspace_of(b).unwrap() {
                        let ja: BTreeSet<i64> =
                            filtration(&v, a).unwrap().jumps().into_iter().collect();
                        let jb: BTreeSet<i64> =
                            filtration(&v, b).unwrap().jumps().into_iter().collect();
                        assert!(jb.is_subset(&ja));
                    }
                }
            }
        }
    }

    #[test]
    fn filtration_only_changes_on_the_grid() {
        for k in [q2(), q3(), q3_zeta3(), q5(), q4(), q2_sqrt2(), q3_sqrt3()] {
            let v = KModP::new(&k);
            let grid: BTreeSet<i64> = candidate_grid(&v).into_iter().collect();
            let top = k.crit_ceil() as i64 + 1;
            let nus: Vec<i64> = (-1..=top + 1).collect();
            for n in all_subspaces(&v).iter().filter(|n| n.codim() > 0) {
                let orders = upper_group_log_orders(&v, n, &nus).unwrap();
                assert_eq!(orders[0], n.codim());
                assert_eq!(*orders.last().unwrap(), 0);
                for w in 0..nus.len() - 1 {
                    if orders[w] != orders[w + 1] {
                        assert!(
                            grid.contains(&nus[w]),
                            "{:?}: change after {}",
                            k.source(),
                            nus[w]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn chain_rendering() {
        let s = seq(&[(-1, 1), (1, 1), (2, 1)]);
        assert_eq!(
            s.render_chain(2),
            vec![
                "G^v = (Z/2Z)^3 for v = -1",
                "G^v = (Z/2Z)^2 for 0 <= v <= 1",
                "G^v = (Z/2Z)^1 for v = 2",
                "G^v = {e} for v >= 3",
            ]
        );
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[-1,1],[1,1],[2,1]]");
        assert_eq!(
            JumpSequence::new(vec![(2, 1), (1, 1)]),
            Err(Error::NotSorted)
        );
    }
}
