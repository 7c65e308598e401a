//! Explicit extensions realizing an admissible jump sequence: the normic
//! subspace always, Kummer radicands as well when ζ_p ∈ K.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::classify::{is_admissible, is_admissible_seq, Verdict};
use crate::error::{Error, Result};
use crate::fp_linalg::{CoordVector, Subspace};
use crate::mult_group::{BasisLabel, KModP};
use crate::padic::RingElement;
use crate::ramification::{filtration, kummer_filtration, JumpSequence};

/// A radicand together with its class in V.
#[derive(Clone, Debug, PartialEq)]
pub struct KummerGenerator {
    pub label: BasisLabel,
    pub element: RingElement,
    pub coords: CoordVector,
}

impl Serialize for KummerGenerator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KummerGenerator", 3)?;
        st.serialize_field("label", &self.label.to_string())?;
        st.serialize_field("element", &self.element.to_repr())?;
        st.serialize_field("coords", &self.coords)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub normic: Subspace,
    pub kummer: Option<Vec<KummerGenerator>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionWitness {
    pub claimed: JumpSequence,
    pub normic: Subspace,
    pub kummer: Option<Vec<KummerGenerator>>,
}

impl Serialize for ExtensionWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtensionWitness", 3)?;
        st.serialize_field("claimed", &self.claimed)?;
        st.serialize_field("normic", &self.normic)?;
        st.serialize_field("kummer", &self.kummer)?;
        st.end()
    }
}

fn reject(v: Verdict) -> Error {
    let reason = v.reason.map(|r| r.to_string()).unwrap_or_default();
    Error::NotAdmissible(match v.index {
        Some(i) => format!("{reason} at index {i}"),
        None => reason,
    })
}

fn generator(v: &KModP, label: BasisLabel) -> Result<KummerGenerator> {
    let element = v.basis_element(label)?;
    let coords = v.coordinates(&element)?;
    Ok(KummerGenerator {
        label,
        element,
        coords,
    })
}

/// The extension with the single jump `t` of size `m`.
pub fn single_jump_block(v: &KModP, t: i64, m: u32) -> Result<Block> {
    let k = v.field();
    let verdict = is_admissible(k, &[(t, m as i64)])?;
    if !verdict.admissible {
        return Err(reject(verdict));
    }
    let zeta = k.zeta_p();
    let (excluded, radicands): (Vec<BasisLabel>, Vec<BasisLabel>) = if t == -1 {
        (vec![BasisLabel::Pi], vec![BasisLabel::OmegaStar])
    } else if Some(t) == k.crit_int().map(|c| c as i64) {
        (vec![BasisLabel::OmegaStar], vec![BasisLabel::Pi])
    } else {
        let level = t as u32;
        let dual = k.crit_int().map(|c| c - level);
        let chosen = 1..=m as usize;
        (
            chosen
                .clone()
                .map(|y| BasisLabel::Eta { level, index: y })
                .collect(),
            match dual {
                Some(l) if zeta => chosen
                    .map(|y| BasisLabel::Eta { level: l, index: y })
                    .collect(),
                _ => Vec::new(),
            },
        )
    };
    let kept = v.labels().iter().copied().filter(|l| !excluded.contains(l));
    let normic = v.span_labels(kept);
    let kummer = if zeta {
        Some(
            radicands
                .into_iter()
                .map(|l| generator(v, l))
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    Ok(Block { normic, kummer })
}

/// Compositum of the single-jump blocks, checked by recomputing its jumps.
pub fn construct_extension(v: &KModP, s: &JumpSequence) -> Result<ExtensionWitness> {
    let k = v.field();
    let verdict = is_admissible_seq(k, s)?;
    if !verdict.admissible {
        return Err(reject(verdict));
    }
    let mut normic = v.full();
    let mut kummer = k.zeta_p().then(Vec::new);
    for &(t, m) in s.pairs() {
        let block = single_jump_block(v, t, m)?;
        normic = normic.intersect(&block.normic)?;
        if let (Some(all), Some(more)) = (kummer.as_mut(), block.kummer) {
            all.extend(more);
        }
    }
    let witness = ExtensionWitness {
        claimed: s.clone(),
        normic,
        kummer,
    };
    verify(v, &witness)?;
    Ok(witness)
}

fn verify(v: &KModP, w: &ExtensionWitness) -> Result<()> {
    let fail = |what: String| Err(Error::SelfVerificationFailed(what));
    let size = w.claimed.total_size() as usize;
    if v.cfc_degree_log(&w.normic)? != size {
        return fail(format!(
            "normic subspace has codimension {}",
            w.normic.codim()
        ));
    }
    let got = filtration(v, &w.normic)?;
    if got != w.claimed {
        return fail(format!(
            "normic filtration {got} differs from {}",
            w.claimed
        ));
    }
    if let Some(gens) = &w.kummer {
        let coords: Vec<CoordVector> = gens.iter().map(|g| g.coords.clone()).collect();
        if Subspace::span(&coords, v.dim(), v.p())?.dim() != size {
            return fail("Kummer generators are dependent".into());
        }
        let got = kummer_filtration(v, &coords)?;
        if got != w.claimed {
            return fail(format!(
                "Kummer filtration {got} differs from {}",
                w.claimed
            ));
        }
    }
    Ok(())
}

fn label_name(l: BasisLabel) -> String {
    match l {
        BasisLabel::Pi => "π".into(),
        BasisLabel::Eta { level, index } => format!("1+c_{index}π^{level}"),
        BasisLabel::OmegaStar => "ω_*".into(),
    }
}

/// Readable generators of a subgroup containing the p-th powers, e.g.
/// `N = ⟨K^×p, π, 1+c_1π^3⟩`.
pub fn describe_subgroup(v: &KModP, n: &Subspace) -> String {
    let mut parts = vec!["K^×p".to_string()];
    for row in n.rows() {
        let factors: Vec<String> = v
            .labels()
            .iter()
            .zip(&row)
            .filter(|(_, &c)| c != 0)
            .map(|(&l, &c)| {
                let name = label_name(l);
                match (c, name.contains('+')) {
                    (1, _) => name,
                    (_, true) => format!("({name})^{c}"),
                    (_, false) => format!("{name}^{c}"),
                }
            })
            .collect();
        parts.push(factors.join("·"));
    }
    format!("N = ⟨{}⟩", parts.join(", "))
}
