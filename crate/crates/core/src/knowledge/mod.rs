//! Citation-tagged facts about W-triviality and KO-vanishing.
//!
//! Every input that is not computed by the Steenrod engine lives here as a
//! line in a fact file. The bundled file is compiled in; alternative files
//! can be loaded at run time and are checked for contradictions on load.

mod pattern;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use pattern::{Atom, Bindings, Pattern, SideConditions};

use crate::error::{Error, Result};

pub const BUNDLED_FACTS: &str = include_str!("../../data/facts.txt");
pub const BUNDLED_CITATIONS: &str = include_str!("../../data/citations.txt");

/// Bounds of the load-time contradiction scan.
pub const CHECK_MAX_K: u64 = 12;
pub const CHECK_MAX_M: u64 = 64;
pub const CHECK_MAX_N: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FactKind {
    RPTrivial,
    RPNotTrivial,
    CPTrivial,
    CPNotTrivial,
    StuntedTrivial,
    StuntedNotTrivial,
    KOVanishes,
    DoldTrivial,
    DoldNotTrivial,
    /// Marks a family the literature leaves unsettled; never decides anything.
    DoldOpen,
}

impl FactKind {
    const ALL: [FactKind; 10] = [
        FactKind::RPTrivial,
        FactKind::RPNotTrivial,
        FactKind::CPTrivial,
        FactKind::CPNotTrivial,
        FactKind::StuntedTrivial,
        FactKind::StuntedNotTrivial,
        FactKind::KOVanishes,
        FactKind::DoldTrivial,
        FactKind::DoldNotTrivial,
        FactKind::DoldOpen,
    ];

    /// The kind asserting the opposite, if any.
    pub fn opposite(self) -> Option<FactKind> {
        use FactKind::*;
        match self {
            RPTrivial => Some(RPNotTrivial),
            RPNotTrivial => Some(RPTrivial),
            CPTrivial => Some(CPNotTrivial),
            CPNotTrivial => Some(CPTrivial),
            StuntedTrivial => Some(StuntedNotTrivial),
            StuntedNotTrivial => Some(StuntedTrivial),
            DoldTrivial => Some(DoldNotTrivial),
            DoldNotTrivial => Some(DoldTrivial),
            KOVanishes | DoldOpen => None,
        }
    }

    fn is_stunted(self) -> bool {
        matches!(self, FactKind::StuntedTrivial | FactKind::StuntedNotTrivial)
    }

    fn name(self) -> String {
        format!("{self:?}")
    }
}

impl FromStr for FactKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FactKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown fact kind `{s}`"))
    }
}

/// A parameter tuple. `n` doubles as `low` for stunted facts; `None` leaves
/// the third pattern unchecked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tuple {
    pub k: u64,
    pub m: u64,
    pub n: Option<u64>,
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "(k={}, m={}, n={n})", self.k, self.m),
            None => write!(f, "(k={}, m={})", self.k, self.m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub id: String,
    pub kind: FactKind,
    pub k: Pattern,
    pub m: Pattern,
    pub n: Pattern,
    pub side: SideConditions,
    pub citation_id: String,
    pub quote: String,
}

impl Fact {
    pub fn matches(&self, t: Tuple) -> bool {
        let third = if self.kind.is_stunted() { "low" } else { "n" };
        let n_matches = match t.n {
            Some(n) => self.n.matches(n),
            None => vec![None],
        };
        for bk in self.k.matches(t.k) {
            for bm in self.m.matches(t.m) {
                for bn in &n_matches {
                    let mut env = Bindings::new();
                    env.insert("k".into(), t.k as i64);
                    env.insert("m".into(), t.m as i64);
                    if let Some(n) = t.n {
                        env.insert(third.into(), n as i64);
                    }
                    for (var, val) in [bk, bm, *bn].into_iter().flatten() {
                        env.insert(var.to_string(), val);
                    }
                    if self.side.holds(&env) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Renders the record in fact-file syntax.
    pub fn to_line(&self) -> String {
        format!(
            "{} | {} | {} | {} | {} | {} | {}",
            self.kind.name(),
            self.k,
            self.m,
            self.n,
            self.side,
            self.citation_id,
            self.quote
        )
    }

    /// Parses one fact-file record; `id` names it in diagnostics.
    pub fn parse_line(id: impl Into<String>, line: &str) -> Result<Fact, String> {
        let fields: Vec<&str> = line.splitn(7, '|').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(format!("expected 7 `|`-separated fields, found {}", fields.len()));
        }
        let pat = |s: &str| Pattern::parse(s).map_err(|e| e.message);
        let fact = Fact {
            id: id.into(),
            kind: fields[0].parse()?,
            k: pat(fields[1])?,
            m: pat(fields[2])?,
            n: pat(fields[3])?,
            side: SideConditions::parse(fields[4]).map_err(|e| e.message)?,
            citation_id: fields[5].to_string(),
            quote: fields[6].to_string(),
        };
        if fact.citation_id.is_empty() || fact.quote.is_empty() {
            return Err("citation id and quote must be non-empty".into());
        }
        Ok(fact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Citation {
    pub id: String,
    pub source: String,
    pub quote: String,
}

/// Citation id -> source and statement.
#[derive(Clone, Debug, Default)]
pub struct CitationRegistry {
    entries: BTreeMap<String, Citation>,
}

impl CitationRegistry {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CITATIONS).expect("bundled citation registry is well formed")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.splitn(3, '|').map(str::trim).collect();
            if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::FactFile { line: idx + 1, message: "expected `id | source | quote`".into() });
            }
            let c = Citation { id: fields[0].into(), source: fields[1].into(), quote: fields[2].into() };
            entries.insert(c.id.clone(), c);
        }
        Ok(CitationRegistry { entries })
    }

    pub fn get(&self, id: &str) -> Result<&Citation> {
        self.entries.get(id).ok_or_else(|| Error::UnknownCitation(id.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Citation> {
        self.entries.values()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Unknown,
}

/// A lookup result together with the fact that decided it.
#[derive(Clone, Copy, Debug)]
pub struct Answer<'a> {
    pub truth: Truth,
    pub fact: Option<&'a Fact>,
}

impl<'a> Answer<'a> {
    const UNKNOWN: Answer<'static> = Answer { truth: Truth::Unknown, fact: None };

    pub fn is_true(&self) -> bool {
        self.truth == Truth::True
    }

    pub fn is_false(&self) -> bool {
        self.truth == Truth::False
    }
}

/// An immutable snapshot of facts.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    facts: Vec<Fact>,
    citations: CitationRegistry,
}

impl KnowledgeBase {
    /// The compiled-in fact file and citation registry.
    pub fn bundled() -> Self {
        Self::from_fact_text(BUNDLED_FACTS, CitationRegistry::bundled()).expect("bundled facts are consistent")
    }

    /// Parses a fact file and runs the contradiction scan.
    pub fn from_fact_text(text: &str, citations: CitationRegistry) -> Result<Self> {
        let mut facts = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fact =
                Fact::parse_line("", line).map_err(|message| Error::FactFile { line: idx + 1, message })?;
            fact.id = format!("{}@line{}", fact.kind.name(), idx + 1);
            facts.push(fact);
        }
        Self::new(facts, citations)
    }

    /// Fails on a citation id missing from the registry or on contradictions.
    pub fn new(facts: Vec<Fact>, citations: CitationRegistry) -> Result<Self> {
        for f in &facts {
            citations.get(&f.citation_id)?;
        }
        let kb = KnowledgeBase { facts, citations };
        kb.check_consistency()?;
        Ok(kb)
    }

    /// A new snapshot with one more fact; the scan reruns.
    pub fn with_fact(&self, fact: Fact) -> Result<Self> {
        let mut facts = self.facts.clone();
        facts.push(fact);
        Self::new(facts, self.citations.clone())
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn citations(&self) -> &CitationRegistry {
        &self.citations
    }

    /// Fails on the first tuple in the scan box matched by two facts of
    /// opposite kinds.
    pub fn check_consistency(&self) -> Result<()> {
        for (i, a) in self.facts.iter().enumerate() {
            let Some(opp) = a.kind.opposite() else { continue };
            for b in self.facts[i + 1..].iter().filter(|b| b.kind == opp) {
                if let Some(t) = first_common_match(a, b) {
                    return Err(Error::ContradictoryFacts {
                        first: a.id.clone(),
                        second: b.id.clone(),
                        tuple: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn first_match(&self, kind: FactKind, t: Tuple) -> Option<&Fact> {
        self.facts.iter().find(|f| f.kind == kind && f.matches(t))
    }

    fn decide(&self, yes: FactKind, no: FactKind, t: Tuple) -> Answer<'_> {
        if let Some(f) = self.first_match(no, t) {
            return Answer { truth: Truth::False, fact: Some(f) };
        }
        if let Some(f) = self.first_match(yes, t) {
            return Answer { truth: Truth::True, fact: Some(f) };
        }
        Answer::UNKNOWN
    }

    /// Whether `KO^{-k}(m,2r)` is known to vanish. Only sufficient
    /// conditions are recorded, so `None` means "not known".
    pub fn ko_vanishes(&self, k: u32, m: u32) -> Option<&Fact> {
        self.first_match(FactKind::KOVanishes, Tuple { k: k as u64, m: m as u64, n: None })
    }

    /// `Σ^k RP^m`.
    pub fn rp_w_trivial(&self, k: u32, m: u32) -> Answer<'_> {
        self.decide(FactKind::RPTrivial, FactKind::RPNotTrivial, Tuple { k: k as u64, m: m as u64, n: Some(0) })
    }

    /// `Σ^j CP^n`.
    pub fn cp_w_trivial(&self, j: u32, n: u32) -> Answer<'_> {
        self.decide(FactKind::CPTrivial, FactKind::CPNotTrivial, Tuple { k: j as u64, m: 0, n: Some(n as u64) })
    }

    /// `Σ^k (RP^m / RP^low)`, requiring `low < m`.
    pub fn stunted_w_trivial(&self, k: u32, m: u32, low: u32) -> Result<Answer<'_>> {
        if low >= m {
            return Err(Error::InvalidSpace(format!("RP({m}/{low}) needs low < m")));
        }
        Ok(self.decide(
            FactKind::StuntedTrivial,
            FactKind::StuntedNotTrivial,
            Tuple { k: k as u64, m: m as u64, n: Some(low as u64) },
        ))
    }

    /// Statements recorded directly about `Σ^k D(m,n)`.
    pub fn explicit_dold_facts(&self, k: u32, m: u32, n: u32) -> Answer<'_> {
        self.decide(
            FactKind::DoldTrivial,
            FactKind::DoldNotTrivial,
            Tuple { k: k as u64, m: m as u64, n: Some(n as u64) },
        )
    }

    /// The open-family annotation covering `Σ^k D(m,n)`, if any.
    pub fn open_family(&self, k: u32, m: u32, n: u32) -> Option<&Fact> {
        self.first_match(FactKind::DoldOpen, Tuple { k: k as u64, m: m as u64, n: Some(n as u64) })
    }
}

fn first_common_match(a: &Fact, b: &Fact) -> Option<Tuple> {
    let both = |pa: &Pattern, pb: &Pattern, v: u64| !pa.matches(v).is_empty() && !pb.matches(v).is_empty();
    for k in (0..=CHECK_MAX_K).filter(|&k| both(&a.k, &b.k, k)) {
        for m in (0..=CHECK_MAX_M).filter(|&m| both(&a.m, &b.m, m)) {
            for n in 0..=CHECK_MAX_N {
                if a.kind.is_stunted() && n >= m {
                    break;
                }
                let t = Tuple { k, m, n: Some(n) };
                if a.matches(t) && b.matches(t) {
                    return Some(t);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb() -> KnowledgeBase {
        KnowledgeBase::bundled()
    }

    #[test]
    fn ko_vanishing_examples() {
        let kb = kb();
        assert!(kb.ko_vanishes(3, 10).is_some());
        assert!(kb.ko_vanishes(2, 1).is_some());
        assert!(kb.ko_vanishes(2, 2).is_none());
        assert!(kb.ko_vanishes(4, 3).is_none());
        assert!(kb.ko_vanishes(7, 14).is_some());
    }

    #[test]
    fn ko_vanishing_matches_residue_table() {
        let kb = kb();
        for k in 0..10 {
            for m in 1..40 {
                let r = m % 8;
                let expect = (k == 2 && m == 1)
                    || (k == 3 && [2, 3, 4, 6].contains(&r))
                    || (k == 5 && [0, 4, 5, 6].contains(&r))
                    || (k == 6 && [1, 5, 6, 7].contains(&r))
                    || (k == 7 && [0, 2, 6, 7].contains(&r));
                assert_eq!(kb.ko_vanishes(k, m).is_some(), expect, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn rp_examples() {
        let kb = kb();
        assert!(kb.rp_w_trivial(2, 1).is_true());
        assert!(kb.rp_w_trivial(3, 5).is_false());
        assert!(kb.rp_w_trivial(9, 100).is_true());
        assert!(kb.rp_w_trivial(0, 7).is_false());
        assert!(kb.rp_w_trivial(6, 3).is_false());
        assert!(kb.rp_w_trivial(6, 4).is_true());
    }

    #[test]
    fn rp_is_always_decided() {
        let kb = kb();
        for k in 0..=CHECK_MAX_K as u32 {
            for m in 1..=CHECK_MAX_M as u32 {
                assert_ne!(kb.rp_w_trivial(k, m).truth, Truth::Unknown, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn cp_examples() {
        let kb = kb();
        assert!(kb.cp_w_trivial(8, 4).is_true());
        assert!(kb.cp_w_trivial(6, 2).is_true());
        assert!(kb.cp_w_trivial(4, 3).is_false());
        assert!(kb.cp_w_trivial(10, 7).is_true());
        assert_eq!(kb.cp_w_trivial(8, 3).truth, Truth::Unknown);
        assert_eq!(kb.cp_w_trivial(5, 2).truth, Truth::Unknown);
    }

    #[test]
    fn stunted_examples() {
        let kb = kb();
        assert!(kb.stunted_w_trivial(12, 7, 3).unwrap().is_true());
        assert!(kb.stunted_w_trivial(5, 4, 2).unwrap().is_true());
        assert!(kb.stunted_w_trivial(2, 1, 0).unwrap().is_true());
        assert!(kb.stunted_w_trivial(2, 3, 0).unwrap().is_false());
        assert_eq!(kb.stunted_w_trivial(2, 3, 1).unwrap().truth, Truth::Unknown);
        assert!(kb.stunted_w_trivial(2, 3, 3).is_err());
    }

    #[test]
    fn explicit_examples() {
        let kb = kb();
        assert!(kb.explicit_dold_facts(3, 4, 5).is_true());
        assert!(kb.explicit_dold_facts(4, 1, 6).is_false());
        assert_eq!(kb.explicit_dold_facts(4, 1, 3).truth, Truth::Unknown);
        assert_eq!(kb.explicit_dold_facts(4, 1, 1).truth, Truth::Unknown);
        assert!(kb.open_family(4, 1, 7).is_some());
        assert!(kb.open_family(4, 2, 2).is_some());
        assert!(kb.open_family(4, 2, 3).is_none());
    }

    #[test]
    fn fact_quotes_match_registry() {
        let kb = kb();
        for f in kb.facts() {
            let c = kb.citations().get(&f.citation_id).unwrap();
            assert_eq!(c.quote, f.quote, "{}", f.id);
        }
    }

    #[test]
    fn fact_lines_round_trip() {
        for f in kb().facts() {
            assert_eq!(&Fact::parse_line(f.id.clone(), &f.to_line()).unwrap(), f);
        }
    }

    #[test]
    fn contradiction_is_rejected() {
        let bad = Fact::parse_line("injected", "RPTrivial | 1 | 1.. | * | - | ah-suspension | Σ^9 X is W-trivial for every CW-complex X")
            .unwrap();
        match kb().with_fact(bad) {
            Err(Error::ContradictoryFacts { first, second, .. }) => {
                assert!(first.starts_with("RPNotTrivial@line"), "{first}");
                assert_eq!(second, "injected");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines_report_their_line_number() {
        let err = KnowledgeBase::from_fact_text("# c\nRPTrivial | 1 | 1 |\n", CitationRegistry::bundled()).unwrap_err();
        assert!(matches!(err, Error::FactFile { line: 2, .. }));
        let err = KnowledgeBase::from_fact_text("Bogus | 1 | 1 | * | - | x | y\n", CitationRegistry::bundled()).unwrap_err();
        assert!(matches!(err, Error::FactFile { line: 1, .. }));
    }

    #[test]
    fn unknown_citation_is_rejected() {
        let bad = Fact::parse_line("x", "CPTrivial | 7 | * | 3 | - | no-such-source | whatever").unwrap();
        assert!(matches!(kb().with_fact(bad), Err(Error::UnknownCitation(id)) if id == "no-such-source"));
    }
}
