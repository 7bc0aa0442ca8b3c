//! The verdict pipeline for `Σ^k D(m,n)`.
//!
//! Every rule is evaluated on every query. Non-triviality rules (`N*`) and
//! triviality rules (`T*`) firing together is a fatal [`Error::Inconsistent`];
//! otherwise whichever side fired decides, and `Unknown` means nothing did.
//!
//! | rule | fires when |
//! |------|------------|
//! | N1 | `Σ^k RP^m` is not W-trivial |
//! | N2 | `Σ^{n+k}(RP^{n+m}/RP^{n-1})` is not W-trivial (`n ≥ 1`) |
//! | N3 | a recorded Dold fact says not W-trivial |
//! | T0 | `k ≥ 9` |
//! | T1 | a recorded Dold fact says W-trivial |
//! | T2 | no power of two lies in `[k+1, k+dim]` |
//! | T3 | `n` even, `KO^{-k}(m,n) = 0` and `Σ^k RP^m` W-trivial |
//! | T4 | `n` even, `KO^{-k}(m-1,n) = 0`, `Σ^k RP^m` and `Σ^{k+m} CP^n` W-trivial |
//! | T5 | the Steenrod engine certifies `Σ^k D(m,n)` |
//! | T6 | restriction to `D(m-1,n)` is injective where it matters and `Σ^k D(m-1,n)` is W-trivial |
//! | T7 | `n` odd, `Σ^k D(m,n+1)` and `Σ^{n+k}(RP^{n+m}/RP^{n-1})` W-trivial |
//!
//! T6 only ever recurses to smaller `m` and T7 only from odd `n` to the even
//! `n+1`, so recursion terminates.
//!
//! # Memoization
//!
//! A [`Classifier`] owns its memo table and takes `&mut self`; a sweep is
//! therefore single-threaded over one table. Callers wanting parallelism
//! partition the domain and give each part its own classifier.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::SpaceModel;
use crate::error::{Error, Result};
use crate::knowledge::{Answer, Fact, KnowledgeBase};
use crate::obstruction::{self, Certificate, CertificateSummary, Reduction, Support};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    WTrivial,
    NotWTrivial,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::WTrivial => "w_trivial",
            Status::NotWTrivial => "not_w_trivial",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    N1,
    N2,
    N3,
    T0,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl RuleId {
    pub fn is_non_triviality(self) -> bool {
        matches!(self, RuleId::N1 | RuleId::N2 | RuleId::N3)
    }

    /// Citation for rules not backed by an individual fact.
    fn citation(self) -> Option<&'static str> {
        Some(match self {
            RuleId::N1 => "projection-section",
            RuleId::N2 => "top-cell-quotient",
            RuleId::T0 => "ah-suspension",
            RuleId::T2 => "dimension-bound",
            RuleId::T3 => "ko-splitting",
            RuleId::T4 => "top-cell-surjection",
            RuleId::T5 => "steenrod-elimination",
            RuleId::T6 => "sub-dold-injective",
            RuleId::T7 => "odd-n-splitting",
            RuleId::N3 | RuleId::T1 => return None,
        })
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One fired rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub citation_id: String,
    pub quote: String,
    /// Facts, sub-verdicts and certificates the rule relied on.
    pub consulted: Vec<String>,
    pub certificate: Option<CertificateSummary>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub steps: Vec<Step>,
}

impl DerivationTrace {
    pub fn rule_ids(&self) -> Vec<RuleId> {
        self.steps.iter().map(|s| s.rule).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The recorded open family an `Unknown` triple belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenFamily {
    pub fact_id: String,
    pub citation_id: String,
    pub quote: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    pub status: Status,
    pub trace: DerivationTrace,
    pub open_family: Option<OpenFamily>,
}

impl Verdict {
    pub fn triple(&self) -> (u32, u32, u32) {
        (self.k, self.m, self.n)
    }

    pub fn rule_ids(&self) -> Vec<RuleId> {
        self.trace.rule_ids()
    }

    /// The structured record emitted by `--format json-lines`.
    pub fn record(&self) -> VerdictRecord {
        VerdictRecord {
            k: self.k,
            m: self.m,
            n: self.n,
            status: self.status,
            rules: self
                .trace
                .steps
                .iter()
                .map(|s| RuleRecord {
                    id: s.rule,
                    citation_id: s.citation_id.clone(),
                    quote: s.quote.clone(),
                    consulted: s.consulted.clone(),
                })
                .collect(),
            engine_reports: self.trace.steps.iter().filter_map(|s| s.certificate.clone()).collect(),
            open_family: self.open_family.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub id: RuleId,
    pub citation_id: String,
    pub quote: String,
    pub consulted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    pub status: Status,
    pub rules: Vec<RuleRecord>,
    pub engine_reports: Vec<CertificateSummary>,
    pub open_family: Option<OpenFamily>,
}

fn fact_note(what: String, answer: &Answer<'_>) -> String {
    match answer.fact {
        Some(f) => format!("{what} = {} [{}]", answer.truth_str(), f.id),
        None => format!("{what} = unknown"),
    }
}

trait TruthStr {
    fn truth_str(&self) -> &'static str;
}

impl TruthStr for Answer<'_> {
    fn truth_str(&self) -> &'static str {
        if self.is_true() {
            "true"
        } else if self.is_false() {
            "false"
        } else {
            "unknown"
        }
    }
}

pub struct Classifier<'kb> {
    kb: &'kb KnowledgeBase,
    memo: Option<HashMap<(u32, u32, u32), Verdict>>,
    certificates: HashMap<(SpaceModel, u32), Certificate>,
}

impl<'kb> Classifier<'kb> {
    pub fn new(kb: &'kb KnowledgeBase) -> Self {
        Classifier { kb, memo: Some(HashMap::new()), certificates: HashMap::new() }
    }

    /// A classifier that recomputes every sub-verdict and certificate.
    pub fn without_memo(kb: &'kb KnowledgeBase) -> Self {
        Classifier { kb, memo: None, certificates: HashMap::new() }
    }

    pub fn knowledge(&self) -> &'kb KnowledgeBase {
        self.kb
    }

    pub fn classify(&mut self, k: u32, m: u32, n: u32) -> Result<Verdict> {
        if m == 0 {
            return Err(Error::InvalidSpace(format!("D(0,{n}) is not a top-level query; m must be positive")));
        }
        if let Some(v) = self.memo.as_ref().and_then(|memo| memo.get(&(k, m, n))) {
            return Ok(v.clone());
        }
        let v = self.evaluate(k, m, n)?;
        if let Some(memo) = self.memo.as_mut() {
            memo.insert((k, m, n), v.clone());
        }
        Ok(v)
    }

    /// Verdicts over the product, ordered by `k`, then `m`, then `n`.
    pub fn table(&mut self, ks: &[u32], ms: &[u32], ns: &[u32]) -> Result<Vec<Verdict>> {
        let mut out = Vec::with_capacity(ks.len() * ms.len() * ns.len());
        for &k in ks {
            for &m in ms {
                for &n in ns {
                    out.push(self.classify(k, m, n)?);
                }
            }
        }
        Ok(out)
    }

    pub fn open_cases(&mut self, ks: &[u32], ms: &[u32], ns: &[u32]) -> Result<Vec<(u32, u32, u32)>> {
        Ok(self
            .table(ks, ms, ns)?
            .into_iter()
            .filter(|v| v.status == Status::Unknown)
            .map(|v| v.triple())
            .collect())
    }

    fn certificate(&mut self, model: SpaceModel, k: u32) -> Certificate {
        if self.memo.is_none() {
            return obstruction::certify_w_trivial(&model, k, self.kb);
        }
        let kb = self.kb;
        self.certificates.entry((model, k)).or_insert_with(|| obstruction::certify_w_trivial(&model, k, kb)).clone()
    }

    /// `Σ^j CP^n` W-trivial, by fact or by engine certificate.
    fn cp_support(&mut self, j: u32, n: u32) -> Option<Support> {
        let answer = self.kb.cp_w_trivial(j, n);
        if let Some(f) = answer.fact {
            return answer
                .is_true()
                .then(|| Support::Fact { fact_id: f.id.clone(), citation_id: f.citation_id.clone() });
        }
        let space = SpaceModel::complex_proj(n);
        self.certificate(space, j)
            .is_certified()
            .then(|| Support::EngineCertificate { space: space.to_string(), k: j })
    }

    fn step(&self, rule: RuleId, consulted: Vec<String>) -> Step {
        let citation_id = rule.citation().expect("rule with a fixed citation");
        let quote = self
            .kb
            .citations()
            .get(citation_id)
            .map(|c| c.quote.clone())
            .unwrap_or_else(|_| String::from("engine certificate"));
        Step { rule, citation_id: citation_id.to_string(), quote, consulted, certificate: None }
    }

    fn fact_step(rule: RuleId, fact: &Fact, what: String) -> Step {
        Step {
            rule,
            citation_id: fact.citation_id.clone(),
            quote: fact.quote.clone(),
            consulted: vec![format!("{what} [{}]", fact.id)],
            certificate: None,
        }
    }

    fn evaluate(&mut self, k: u32, m: u32, n: u32) -> Result<Verdict> {
        let kb = self.kb;
        let model = SpaceModel::dold(m, n);
        let mut fired: Vec<Step> = Vec::new();

        let rp = kb.rp_w_trivial(k, m);
        let rp_note = fact_note(format!("Σ^{k} RP^{m} W-trivial"), &rp);
        let stunted = if n >= 1 { Some(kb.stunted_w_trivial(n + k, n + m, n - 1)?) } else { None };
        let stunted_note =
            stunted.as_ref().map(|a| fact_note(format!("Σ^{} (RP^{}/RP^{}) W-trivial", n + k, n + m, n - 1), a));
        let explicit = kb.explicit_dold_facts(k, m, n);

        // non-triviality
        if rp.is_false() {
            fired.push(self.step(RuleId::N1, vec![rp_note.clone()]));
        }
        if let (Some(a), Some(note)) = (&stunted, &stunted_note) {
            if a.is_false() {
                fired.push(self.step(RuleId::N2, vec![note.clone()]));
            }
        }
        if explicit.is_false() {
            let f = explicit.fact.expect("decided");
            fired.push(Self::fact_step(RuleId::N3, f, format!("Σ^{k} D({m},{n}) not W-trivial")));
        }

        // triviality
        if k >= 9 {
            fired.push(self.step(RuleId::T0, vec![format!("k = {k} ≥ 9")]));
        }
        if explicit.is_true() {
            let f = explicit.fact.expect("decided");
            fired.push(Self::fact_step(RuleId::T1, f, format!("Σ^{k} D({m},{n}) W-trivial")));
        }
        let powers = obstruction::admissible_powers(&model, k);
        if powers.is_empty() {
            fired.push(self.step(RuleId::T2, vec![format!("dim D({m},{n}) = {}", model.dim())]));
        }
        if n.is_multiple_of(2) && rp.is_true() {
            if let Some(ko) = kb.ko_vanishes(k, m) {
                let consulted = vec![format!("KO^-{k}({m},{n}) = 0 [{}]", ko.id), rp_note.clone()];
                fired.push(self.step(RuleId::T3, consulted));
            }
        }
        if n.is_multiple_of(2) && rp.is_true() {
            if let Some(ko) = kb.ko_vanishes(k, m - 1) {
                if let Some(cp) = self.cp_support(k + m, n) {
                    let consulted = vec![
                        format!("KO^-{k}({},{n}) = 0 [{}]", m - 1, ko.id),
                        rp_note.clone(),
                        format!("Σ^{} CP^{n} W-trivial by {cp}", k + m),
                    ];
                    fired.push(self.step(RuleId::T4, consulted));
                }
            }
        }
        let cert = self.certificate(model, k);
        if cert.is_certified() {
            let mut consulted: Vec<String> = cert
                .reports
                .iter()
                .flat_map(|r| r.filters_applied.iter())
                .map(|f| format!("{} filter by {}", f.tag, f.support))
                .collect();
            consulted.dedup();
            consulted.insert(0, String::from("engine certificate"));
            let mut step = self.step(RuleId::T5, consulted);
            step.certificate = Some(cert.summary());
            fired.push(step);
        }
        if let Some(step) = self.reduction(k, &model)? {
            fired.push(step);
        }
        if n % 2 == 1 {
            if let (Some(a), Some(note)) = (&stunted, &stunted_note) {
                if a.is_true() {
                    let up = self.classify(k, m, n + 1)?;
                    if up.status == Status::WTrivial {
                        let sub = format!("Σ^{k} D({m},{}) W-trivial by {}", n + 1, join_rules(&up));
                        fired.push(self.step(RuleId::T7, vec![sub, note.clone()]));
                    }
                }
            }
        }

        let (not_trivial, trivial): (Vec<&Step>, Vec<&Step>) = fired.iter().partition(|s| s.rule.is_non_triviality());
        if !not_trivial.is_empty() && !trivial.is_empty() {
            let name = |s: &&Step| match s.consulted.first() {
                Some(c) if c.contains('[') => format!("{} {}", s.rule, &c[c.rfind('[').unwrap_or(0)..]),
                _ => s.rule.to_string(),
            };
            return Err(Error::Inconsistent {
                k,
                m,
                n,
                not_trivial: not_trivial.iter().map(name).collect(),
                trivial: trivial.iter().map(name).collect(),
            });
        }
        let status = if !not_trivial.is_empty() {
            Status::NotWTrivial
        } else if !trivial.is_empty() {
            Status::WTrivial
        } else {
            Status::Unknown
        };
        let open_family = (status == Status::Unknown)
            .then(|| kb.open_family(k, m, n))
            .flatten()
            .map(|f| OpenFamily { fact_id: f.id.clone(), citation_id: f.citation_id.clone(), quote: f.quote.clone() });
        Ok(Verdict { k, m, n, status, trace: DerivationTrace { steps: fired }, open_family })
    }

    fn reduction(&mut self, k: u32, model: &SpaceModel) -> Result<Option<Step>> {
        let (m, n) = (model.m(), model.n());
        let reduction = obstruction::reduction_step(model, k, |sub| {
            if sub.m() == 0 {
                return Ok(self.cp_support(k, n));
            }
            let v = self.classify(k, m - 1, n)?;
            Ok((v.status == Status::WTrivial)
                .then(|| Support::Verdict { space: sub.to_string(), rules: v.rule_ids().iter().map(ToString::to_string).collect() }))
        })?;
        Ok(match reduction {
            Reduction::Reduced { downstairs, support } => Some(self.step(
                RuleId::T6,
                vec![
                    format!("restriction to {downstairs} injective in every admissible degree"),
                    format!("Σ^{k} {downstairs} W-trivial by {support}"),
                ],
            )),
            Reduction::NotApplicable { .. } => None,
        })
    }
}

fn join_rules(v: &Verdict) -> String {
    v.rule_ids().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}
