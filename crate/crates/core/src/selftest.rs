//! Self-check suites behind `dold-wtriv selftest`.
//!
//! `oracle` compares the closed-form squares with the total-square expansion,
//! `axioms` checks the Steenrod axioms, Cartan and a few Adem relations,
//! `fixtures` runs the classifier against the published theorem lists and
//! the engine against known certificates, and `knowledge` rechecks the fact
//! file.

use std::fmt;

use crate::classifier::{Classifier, Status};
use crate::cohomology::{basis, mul, CohomologyClass, Monomial, SpaceModel};
use crate::error::Result;
use crate::knowledge::KnowledgeBase;
use crate::obstruction::certify_w_trivial;
use crate::steenrod::{sq, total_sq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Axioms,
    Fixtures,
    Knowledge,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Oracle, Suite::Axioms, Suite::Fixtures, Suite::Knowledge];

    /// Suites selected by a `--suite` argument; `steenrod` selects both
    /// square suites.
    pub fn select(name: &str) -> Option<Vec<Suite>> {
        Some(match name {
            "all" => Self::ALL.to_vec(),
            "steenrod" => vec![Suite::Oracle, Suite::Axioms],
            "oracle" => vec![Suite::Oracle],
            "axioms" => vec![Suite::Axioms],
            "fixtures" => vec![Suite::Fixtures],
            "knowledge" => vec![Suite::Knowledge],
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Axioms => "axioms",
            Suite::Fixtures => "fixtures",
            Suite::Knowledge => "knowledge",
        }
    }

    pub fn run(self, kb: &KnowledgeBase) -> Result<SuiteReport> {
        let mut r = SuiteReport { suite: self, checks: 0, failures: Vec::new() };
        match self {
            Suite::Oracle => oracle(&mut r),
            Suite::Axioms => axioms(&mut r),
            Suite::Fixtures => fixtures(&mut r, kb)?,
            Suite::Knowledge => knowledge(&mut r, kb),
        }
        Ok(r)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checks, {} failures", self.suite.name(), self.checks, self.failures.len())
    }
}

fn all_monomials(model: &SpaceModel) -> Vec<Monomial> {
    (0..=model.dim()).flat_map(|d| basis(model, d)).collect()
}

fn oracle(r: &mut SuiteReport) {
    let models = [
        SpaceModel::dold(6, 6),
        SpaceModel::real_proj(9),
        SpaceModel::complex_proj(7),
        SpaceModel::stunted(11, 4).expect("low < m"),
    ];
    for model in models {
        for x in all_monomials(&model) {
            let total = total_sq(&x.into(), &model);
            for i in 0..=model.dim() {
                let got = sq(i, &x.into(), &model);
                r.check(got == total.homogeneous_part(x.degree() + i), || format!("Sq^{i}({x}) in {model}"));
            }
        }
    }
}

fn axioms(r: &mut SuiteReport) {
    let model = SpaceModel::dold(5, 5);
    let s = |i: u32, a: &CohomologyClass| sq(i, a, &model);
    for x in all_monomials(&model) {
        let a = CohomologyClass::from(x);
        let deg = x.degree();
        r.check(s(0, &a) == a, || format!("Sq^0 {x}"));
        r.check((deg + 1..=deg + 3).all(|i| s(i, &a).is_zero()), || format!("unstable vanishing on {x}"));
        r.check(s(deg, &a) == mul(&a, &a, &model).expect("ring"), || format!("Sq^top {x} = square"));
        r.check(s(1, &s(1, &a)).is_zero(), || format!("Sq1Sq1 {x}"));
        r.check(s(1, &s(2, &a)) == s(3, &a), || format!("Sq1Sq2 {x}"));
        r.check(s(2, &s(2, &a)) == s(3, &s(1, &a)), || format!("Sq2Sq2 {x}"));
    }
    let model = SpaceModel::dold(4, 4);
    let monos = all_monomials(&model);
    for &x in &monos {
        for &y in &monos {
            let (a, b) = (CohomologyClass::from(x), CohomologyClass::from(y));
            let prod = mul(&a, &b, &model).expect("ring");
            for k in 0..=12 {
                let mut rhs = CohomologyClass::zero();
                for i in 0..=k {
                    rhs += &mul(&sq(i, &a, &model), &sq(k - i, &b, &model), &model).expect("ring");
                }
                r.check(sq(k, &prod, &model) == rhs, || format!("Cartan Sq^{k}({x} * {y})"));
            }
        }
    }
}

/// The published non-triviality list for general `n`.
pub fn listed_not_trivial(k: u32, m: u32) -> bool {
    k == 0
        || ([1, 2, 4, 8].contains(&k) && m >= k)
        || ([3, 5, 7].contains(&k) && (m + k == 4 || m + k == 8))
        || (k == 6 && (m == 2 || m == 3))
}

/// The published triviality list for even `n`.
pub fn listed_trivial_even(k: u32, m: u32) -> bool {
    match k {
        2 => m == 1,
        3 => m != 5 && m % 8 != 1,
        4 => m == 3,
        5 => m % 8 != 3,
        6 => m != 2 && m != 3 && m % 8 != 4,
        7 => m != 1 && m % 8 != 5,
        8 => [1, 2, 3, 7].contains(&m),
        _ => false,
    }
}

/// The extra hypotheses under which the even-`n` list carries over to odd `n`.
pub fn listed_odd_condition(k: u32, m: u32, n: u32) -> bool {
    let j = n + k;
    ([2, 4, 8].contains(&j) && m < k)
        || ([3, 5, 7].contains(&j) && 2 * n + m + k != 4 && 2 * n + m + k != 8)
        || (j == 6 && m + n != 2 && m + n != 3)
        || j >= 9
}

/// The published non-triviality list for `n = 1`.
pub fn listed_not_trivial_n1(k: u32, m: u32) -> bool {
    ([1, 3, 7].contains(&k) && m >= k) || ([2, 4].contains(&k) && (m + k == 2 || m + k == 6)) || (k == 5 && (m == 1 || m == 2))
}

fn fixtures(r: &mut SuiteReport, kb: &KnowledgeBase) -> Result<()> {
    let mut c = Classifier::new(kb);
    for k in 0..=9 {
        for m in 1..=20 {
            for n in 1..=12 {
                let v = c.classify(k, m, n)?;
                if listed_not_trivial(k, m) || (n == 1 && listed_not_trivial_n1(k, m)) {
                    r.check(v.status == Status::NotWTrivial, || format!("({k},{m},{n}) expected not_w_trivial"));
                }
                if listed_trivial_even(k, m) && (n % 2 == 0 || listed_odd_condition(k, m, n)) {
                    r.check(v.status == Status::WTrivial, || format!("({k},{m},{n}) expected w_trivial"));
                }
            }
        }
    }
    let mut certified = Vec::new();
    for r_ in 1..=4 {
        certified.push((SpaceModel::dold(2, 2 * r_), 8));
        certified.push((SpaceModel::dold(3, 2 * r_), 8));
        certified.push((SpaceModel::dold(7, r_), 8));
    }
    for n in 1..=6 {
        certified.push((SpaceModel::dold(3, n), 4));
    }
    for m in 2..=8 {
        for n in 1..=4 {
            certified.push((SpaceModel::dold(m - 1, n), m));
        }
    }
    certified.push((SpaceModel::dold(1, 1), 4));
    for (model, k) in certified {
        r.check(certify_w_trivial(&model, k, kb).is_certified(), || format!("Σ^{k} {model} should certify"));
    }
    for n in 2..=6 {
        let model = SpaceModel::complex_proj(n);
        r.check(!certify_w_trivial(&model, 4, kb).is_certified(), || format!("Σ^4 {model} must not certify"));
    }
    Ok(())
}

fn knowledge(r: &mut SuiteReport, kb: &KnowledgeBase) {
    r.check(kb.check_consistency().is_ok(), || "fact file has contradictions".into());
    for f in kb.facts() {
        let ok = kb.citations().get(&f.citation_id).is_ok_and(|c| c.quote == f.quote);
        r.check(ok, || format!("{} quote differs from citation {}", f.id, f.citation_id));
    }
    for k in 0..=12 {
        for m in 1..=64 {
            r.check(kb.rp_w_trivial(k, m).fact.is_some(), || format!("Σ^{k} RP^{m} undecided"));
        }
    }
}
