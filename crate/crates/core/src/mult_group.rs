//! The F_p-vector space V = K^×/(K^×)^p in the basis
//! `[π; η_(x,y) for x ∈ I, y = 1..f; ω_* when ζ_p ∈ K]`, and the lattice of
//! subgroups of K^× containing (K^×)^p as subspaces of V.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fp_linalg::{inv_mod_p, CoordVector, Subspace};
use crate::padic::{FieldSpec, RingElement};
use crate::units::{decompose, eta, find_omega_star};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    Pi,
    Eta { level: u32, index: usize },
    OmegaStar,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Pi => write!(f, "pi"),
            BasisLabel::Eta { level, index } => write!(f, "eta:{level}:{index}"),
            BasisLabel::OmegaStar => write!(f, "omega"),
        }
    }
}

/// K^×/(K^×)^p with its distinguished basis.
#[derive(Clone, Debug)]
pub struct KModP {
    field: Arc<FieldSpec>,
    labels: Vec<BasisLabel>,
}

impl KModP {
    pub fn new(field: &Arc<FieldSpec>) -> Self {
        let mut labels = vec![BasisLabel::Pi];
        for &x in field.levels() {
            labels.extend((1..=field.f()).map(|y| BasisLabel::Eta { level: x, index: y }));
        }
        if field.zeta_p() {
            labels.push(BasisLabel::OmegaStar);
        }
        Self {
            field: field.clone(),
            labels,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.to_string()).collect()
    }

    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.p(), self.dim())
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.p(), self.dim())
    }

    pub fn basis_vector(&self, label: BasisLabel) -> CoordVector {
        let mut v = vec![0; self.dim()];
        v[self.index_of(label).expect("label is in the basis")] = 1;
        v
    }

    /// The field element behind a basis label.
    pub fn basis_element(&self, label: BasisLabel) -> Result<RingElement> {
        match label {
            BasisLabel::Pi => Ok(RingElement::pi(&self.field)),
            BasisLabel::Eta { level, index } => Ok(eta(&self.field, level, index)),
            BasisLabel::OmegaStar => Ok(find_omega_star(&self.field)?.element),
        }
    }

    /// Coordinates of the class of `a ≠ 0`.
    pub fn coordinates(&self, a: &RingElement) -> Result<CoordVector> {
        let k = &self.field;
        let p = k.p();
        let v = a.valuation().ok_or(Error::ZeroInput)?;
        let unit = a.div_pi_pow(v)?;
        // the Teichmüller part dies under the (q−1)-th power; q−1 is a unit mod p
        let principal = unit.pow(k.q() as u128 - 1);
        let dec = decompose(&principal, 1)?;
        let scale = inv_mod_p((k.q() - 1) % p, p);
        let mut out = Vec::with_capacity(self.dim());
        out.push(v as u64 % p);
        out.extend(dec.exponents().iter().map(|&x| x * scale % p));
        Ok(out)
    }

    /// Image of U^j in V, with U^0 the full unit group.
    pub fn unit_level_image(&self, j: u32) -> Subspace {
        let k = &self.field;
        if j > 0 && k.above_crit(j) {
            return self.zero();
        }
        let j = j.max(1);
        let idx = self.labels.iter().enumerate().filter_map(|(i, l)| match l {
            BasisLabel::Eta { level, .. } if *level >= j => Some(i),
            BasisLabel::OmegaStar => Some(i),
            _ => None,
        });
        Subspace::coordinate(self.p(), self.dim(), idx)
    }

    /// Subspace spanned by the classes of the generators.
    pub fn norm_subgroup_from_generators(&self, gens: &[RingElement]) -> Result<Subspace> {
        let coords = gens
            .iter()
            .map(|g| self.coordinates(g))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&coords, self.dim(), self.p())
    }

    /// Span of the given basis vectors.
    pub fn span_labels(&self, labels: impl IntoIterator<Item = BasisLabel>) -> Subspace {
        let idx: Vec<usize> = labels
            .into_iter()
            .map(|l| self.index_of(l).expect("label is in the basis"))
            .collect();
        Subspace::coordinate(self.p(), self.dim(), idx)
    }

    /// log_p of the degree of the abelian extension cut out by `n`.
    pub fn cfc_degree_log(&self, n: &Subspace) -> Result<usize> {
        if n.ambient_dim() != self.dim() || n.p() != self.p() {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.dim() - n.dim())
    }

    /// `[L : K] = |K^×/N| = p^(dim V − dim N)`.
    pub fn cfc_degree(&self, n: &Subspace) -> Result<u128> {
        let log = self.cfc_degree_log(n)?;
        (self.p() as u128)
            .checked_pow(log as u32)
            .ok_or(Error::Overflow("extension degree"))
    }
}
