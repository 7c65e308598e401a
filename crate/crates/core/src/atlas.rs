//! Field summaries and the exhaustive atlas of degree-p extensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{ckp_degree_log, ckp_filtration, is_admissible_seq};
use crate::error::Result;
use crate::fp_linalg::{CoordVector, Subspace};
use crate::mult_group::{BasisLabel, KModP};
use crate::padic::{FieldSpec, RingElement};
use crate::ramification::{filtration, jump_of_hyperplane, line_jump_multiset, JumpSequence};

/// `a` as an integer when K = Q_p, otherwise the nested coefficient list.
pub fn render_element(a: &RingElement) -> String {
    let repr = a.to_repr();
    let k = a.field();
    if k.e() == 1 && k.f() == 1 {
        return repr[0][0].to_string();
    }
    serde_json::to_string(&repr).expect("plain integers serialize")
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldSummary {
    pub p: u64,
    pub e: usize,
    pub f: usize,
    pub n: usize,
    pub q: u64,
    pub precision_digits: u32,
    /// `pe/(p−1)` as `[numerator, denominator]`.
    pub crit: (u64, u64),
    pub crit_int: Option<u32>,
    pub levels: Vec<u32>,
    pub zeta_p: bool,
    pub dim_v: usize,
    pub basis: Vec<String>,
    pub omega_star: Option<String>,
}

pub fn describe_field(k: &Arc<FieldSpec>) -> Result<FieldSummary> {
    let v = KModP::new(k);
    let omega_star = if k.zeta_p() {
        Some(render_element(&v.basis_element(BasisLabel::OmegaStar)?))
    } else {
        None
    };
    Ok(FieldSummary {
        p: k.p(),
        e: k.e(),
        f: k.f(),
        n: k.n(),
        q: k.q(),
        precision_digits: k.precision_digits(),
        crit: k.crit(),
        crit_int: k.crit_int(),
        levels: k.levels().to_vec(),
        zeta_p: k.zeta_p(),
        dim_v: v.dim(),
        basis: v.label_strings(),
        omega_star,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneEntry {
    /// The functional whose kernel is the hyperplane.
    pub normal: CoordVector,
    pub jump: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityFailure {
    pub basis: Vec<CoordVector>,
    pub filtration: JumpSequence,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasReport {
    pub hyperplanes: Vec<HyperplaneEntry>,
    pub multiset: BTreeMap<i64, usize>,
    pub kummer_multiset: Option<BTreeMap<i64, usize>>,
    pub multiset_agreement: Option<bool>,
    pub ckp_closed_form: JumpSequence,
    pub ckp_computed: JumpSequence,
    pub ckp_agreement: bool,
    pub max_codim: usize,
    pub subspaces_checked: usize,
    pub inadmissible: Vec<AdmissibilityFailure>,
    pub passed: bool,
}

/// Every degree-p extension with its jump, plus the consistency checks.
pub fn atlas(k: &Arc<FieldSpec>, max_codim: usize) -> Result<AtlasReport> {
    let v = KModP::new(k);
    let hyperplanes: Vec<HyperplaneEntry> = v
        .zero()
        .enumerate_hyperplanes_above()?
        .par_iter()
        .map(|h| {
            Ok(HyperplaneEntry {
                normal: h.annihilator().rows().remove(0),
                jump: jump_of_hyperplane(&v, h)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut multiset = BTreeMap::new();
    for h in &hyperplanes {
        *multiset.entry(h.jump).or_insert(0) += 1;
    }

    let kummer_multiset = if k.zeta_p() {
        Some(line_jump_multiset(&v)?)
    } else {
        None
    };
    let multiset_agreement = kummer_multiset.as_ref().map(|m| *m == multiset);

    let ckp_closed_form = ckp_filtration(k);
    let ckp_computed = filtration(&v, &v.zero())?;
    let ckp_agreement = ckp_closed_form == ckp_computed
        && ckp_closed_form.total_size() as usize == ckp_degree_log(k);

    let d = v.dim();
    let subspaces: Vec<Subspace> = (d.saturating_sub(max_codim)..=d)
        .flat_map(|dim| Subspace::enumerate_all(v.p(), d, dim))
        .collect();
    let checked: Vec<Option<AdmissibilityFailure>> = subspaces
        .par_iter()
        .map(|n| {
            let s = filtration(&v, n)?;
            let ok = is_admissible_seq(k, &s)?.admissible && s.total_size() as usize == n.codim();
            Ok((!ok).then(|| AdmissibilityFailure {
                basis: n.rows(),
                filtration: s,
            }))
        })
        .collect::<Result<_>>()?;
    let inadmissible: Vec<AdmissibilityFailure> = checked.into_iter().flatten().collect();

    let passed = multiset_agreement != Some(false) && ckp_agreement && inadmissible.is_empty();
    Ok(AtlasReport {
        hyperplanes,
        multiset,
        kummer_multiset,
        multiset_agreement,
        ckp_closed_form,
        ckp_computed,
        ckp_agreement,
        max_codim,
        subspaces_checked: subspaces.len(),
        inadmissible,
        passed,
    })
}
