//! Steenrod-square certificates of W-triviality.
//!
//! Over `Σ^k X`, the first nonzero Stiefel-Whitney class of any bundle sits
//! in some degree `2^s` and, desuspended, is a class `a ∈ H^{2^s-k}(X)` with
//! `Sq^i a = 0` for `0 < i < 2^{s-1}`. If for every admissible `s` the only
//! such class (after the available filters) is zero, no bundle can have a
//! nonzero Stiefel-Whitney class and `Σ^k X` is W-trivial.
//!
//! Each `s` is tested under the standing hypothesis that all lower classes
//! vanish; nothing else is carried between different values of `s`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cohomology::{basis, restrict_fiber, restrict_subdold_m, CohomologyClass, SpaceModel};
use crate::error::{Error, Result};
use crate::gf2::{intersect, kernel, Ambient, BitMatrix, Subspace};
use crate::knowledge::KnowledgeBase;
use crate::steenrod::sq_matrix;

/// Citation id attached to the fibre-restriction filter.
pub const FIBER_FILTER_CITATION: &str = "fiber-restriction";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FilterTag {
    /// Pull back along the fibre `CP^n -> D(m,n)`; usable once `Σ^k CP^n`
    /// is known to be W-trivial.
    #[serde(rename = "fiber-cp")]
    FiberCP,
}

impl FilterTag {
    pub const ALL: [FilterTag; 1] = [FilterTag::FiberCP];
}

impl FromStr for FilterTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fiber-cp" | "FiberCP" => Ok(FilterTag::FiberCP),
            other => Err(Error::UnknownFilter(other.to_string())),
        }
    }
}

impl fmt::Display for FilterTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterTag::FiberCP => write!(f, "fiber-cp"),
        }
    }
}

/// How a hypothesis about an auxiliary space was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "via", rename_all = "snake_case")]
pub enum Support {
    Fact { fact_id: String, citation_id: String },
    EngineCertificate { space: String, k: u32 },
    Verdict { space: String, rules: Vec<String> },
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Fact { fact_id, citation_id } => write!(f, "fact {fact_id} [{citation_id}]"),
            Support::EngineCertificate { space, k } => write!(f, "engine certificate for Σ^{k} {space}"),
            Support::Verdict { space, rules } => write!(f, "verdict on {space} via {}", rules.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppliedFilter {
    pub tag: FilterTag,
    pub citation_id: &'static str,
    pub support: Support,
}

/// The surviving candidates for `w_{2^s}` over `Σ^k X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub s: u32,
    /// `2^s - k`, the degree in the unsuspended space.
    pub degree: u32,
    pub raw_kernel: Subspace,
    pub after_filters: Subspace,
    pub filters_applied: Vec<AppliedFilter>,
}

impl CandidateReport {
    fn classes(&self, space: &Subspace) -> Vec<CohomologyClass> {
        let (model, degree) = space.ambient().group.expect("candidate spaces are tagged");
        space.basis().iter().map(|v| CohomologyClass::from_coordinates(&model, degree, v)).collect()
    }

    pub fn raw_classes(&self) -> Vec<CohomologyClass> {
        self.classes(&self.raw_kernel)
    }

    pub fn filtered_classes(&self) -> Vec<CohomologyClass> {
        self.classes(&self.after_filters)
    }

    pub fn summary(&self) -> ReportSummary {
        let render = |cs: Vec<CohomologyClass>| cs.iter().map(ToString::to_string).collect();
        ReportSummary {
            s: self.s,
            degree: self.degree,
            ambient_dim: self.raw_kernel.ambient().dim,
            raw_basis: render(self.raw_classes()),
            filtered_basis: render(self.filtered_classes()),
            filters: self.filters_applied.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub model: SpaceModel,
    pub k: u32,
    pub outcome: Outcome,
    pub reports: Vec<CandidateReport>,
    /// No power of two lies in the reduced cohomological range.
    pub vacuous: bool,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.outcome == Outcome::Certified
    }

    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            space: self.model.to_string(),
            k: self.k,
            outcome: self.outcome,
            vacuous: self.vacuous,
            reports: self.reports.iter().map(CandidateReport::summary).collect(),
        }
    }
}

/// Serializable rendering of a [`CandidateReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub s: u32,
    pub degree: u32,
    pub ambient_dim: usize,
    pub raw_basis: Vec<String>,
    pub filtered_basis: Vec<String>,
    pub filters: Vec<AppliedFilter>,
}

/// Serializable rendering of a [`Certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub space: String,
    pub k: u32,
    pub outcome: Outcome,
    pub vacuous: bool,
    pub reports: Vec<ReportSummary>,
}

/// All `s` with `k+1 <= 2^s <= k + dim`. Reduced cohomology of a k-fold
/// suspension vanishes through degree `k`.
pub fn admissible_powers(model: &SpaceModel, k: u32) -> Vec<u32> {
    let top = u64::from(k) + u64::from(model.dim());
    (0..63).filter(|&s| (1u64 << s) > u64::from(k) && (1u64 << s) <= top).collect()
}

/// Matrix of a restriction map on one degree, relative to the monomial bases.
fn restriction_matrix(
    source: &SpaceModel,
    target: &SpaceModel,
    degree: u32,
    f: impl Fn(&CohomologyClass, &SpaceModel) -> Result<CohomologyClass>,
) -> Result<BitMatrix> {
    let columns = basis(source, degree)
        .into_iter()
        .map(|x| f(&x.into(), source).map(|img| img.coordinates(target, degree)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BitMatrix::from_columns(basis(target, degree).len(), &columns))
}

/// Why the fibre filter may be used on `Σ^k model`, if it may.
///
/// Recursion only ever drops to the fibre `CP^n` of a model with `m >= 1`;
/// on `CP^n` itself only recorded facts count.
pub fn fiber_filter_support(model: &SpaceModel, k: u32, kb: &KnowledgeBase) -> Option<Support> {
    if model.is_stunted() {
        return None;
    }
    let answer = kb.cp_w_trivial(k, model.n());
    if answer.is_true() {
        let fact = answer.fact.expect("decided answers carry their fact");
        return Some(Support::Fact { fact_id: fact.id.clone(), citation_id: fact.citation_id.clone() });
    }
    if answer.is_false() || model.m() == 0 {
        return None;
    }
    let fiber = SpaceModel::complex_proj(model.n());
    certify_w_trivial(&fiber, k, kb)
        .is_certified()
        .then(|| Support::EngineCertificate { space: fiber.to_string(), k })
}

/// The candidate space for `w_{2^s}` over `Σ^k model`.
pub fn candidate_space(
    model: &SpaceModel,
    k: u32,
    s: u32,
    filters: &[FilterTag],
    kb: &KnowledgeBase,
) -> Result<CandidateReport> {
    if !admissible_powers(model, k).contains(&s) {
        return Err(Error::InvalidSpace(format!("2^{s} is not admissible for Σ^{k} {model}")));
    }
    let degree = (1u32 << s) - k;
    let ambient = Ambient::cohomology(*model, degree);

    let mut raw = Subspace::full(ambient.clone());
    for i in 1..(1u32 << s) / 2 {
        let ker = kernel(&sq_matrix(model, degree, i)).with_ambient(ambient.clone());
        raw = intersect(&raw, &ker)?;
    }

    let mut after = raw.clone();
    let mut applied = Vec::new();
    for &tag in filters {
        match tag {
            FilterTag::FiberCP => {
                let Some(support) = fiber_filter_support(model, k, kb) else { continue };
                let fiber = model.fiber()?;
                let m = restriction_matrix(model, &fiber, degree, restrict_fiber)?;
                after = intersect(&after, &kernel(&m).with_ambient(ambient.clone()))?;
                applied.push(AppliedFilter { tag, citation_id: FIBER_FILTER_CITATION, support });
            }
        }
    }
    Ok(CandidateReport { s, degree, raw_kernel: raw, after_filters: after, filters_applied: applied })
}

/// Certifies `Σ^k model` W-trivial with every available filter.
pub fn certify_w_trivial(model: &SpaceModel, k: u32, kb: &KnowledgeBase) -> Certificate {
    certify_with_filters(model, k, &FilterTag::ALL, kb)
}

pub fn certify_with_filters(model: &SpaceModel, k: u32, filters: &[FilterTag], kb: &KnowledgeBase) -> Certificate {
    let powers = admissible_powers(model, k);
    let reports: Vec<CandidateReport> = powers
        .iter()
        .map(|&s| candidate_space(model, k, s, filters, kb).expect("admissible s on a valid model"))
        .collect();
    let certified = reports.iter().all(|r| r.after_filters.is_zero());
    Certificate {
        model: *model,
        k,
        outcome: if certified { Outcome::Certified } else { Outcome::Inconclusive },
        reports,
        vacuous: powers.is_empty(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// `Σ^k D(m,n)` is W-trivial because `Σ^k D(m-1,n)` is and restriction is
    /// injective in every admissible degree.
    Reduced { downstairs: SpaceModel, support: Support },
    NotApplicable { reason: String },
}

/// Reduction along `D(m-1,n) -> D(m,n)`.
///
/// `downstairs` reports whether `Σ^k D(m-1,n)` is known to be W-trivial; it
/// is only consulted once the injectivity check has passed.
pub fn reduction_step<F>(model: &SpaceModel, k: u32, downstairs: F) -> Result<Reduction>
where
    F: FnOnce(&SpaceModel) -> Result<Option<Support>>,
{
    let sub = model.sub_m()?;
    for s in admissible_powers(model, k) {
        let degree = (1u32 << s) - k;
        let m = restriction_matrix(model, &sub, degree, restrict_subdold_m)?;
        if !kernel(&m).is_zero() {
            return Ok(Reduction::NotApplicable {
                reason: format!("restriction to {sub} is not injective on H^{degree}"),
            });
        }
    }
    Ok(match downstairs(&sub)? {
        Some(support) => Reduction::Reduced { downstairs: sub, support },
        None => Reduction::NotApplicable { reason: format!("Σ^{k} {sub} is not known to be W-trivial") },
    })
}

/// Downstairs lookup using recorded facts only: the fibre facts when `m-1 = 0`,
/// explicit Dold facts otherwise.
pub fn kb_downstairs(kb: &KnowledgeBase, k: u32) -> impl FnOnce(&SpaceModel) -> Result<Option<Support>> + '_ {
    move |sub| {
        let answer = if sub.m() == 0 {
            kb.cp_w_trivial(k, sub.n())
        } else {
            kb.explicit_dold_facts(k, sub.m(), sub.n())
        };
        Ok(answer
            .is_true()
            .then(|| answer.fact.expect("decided"))
            .map(|f| Support::Fact { fact_id: f.id.clone(), citation_id: f.citation_id.clone() }))
    }
}
