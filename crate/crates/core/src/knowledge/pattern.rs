//! Parameter patterns and side conditions used by fact records.
//!
//! A pattern is `*` or a comma-separated list of alternatives, each one of
//! `7`, `3..9`, `9..` or a residue such as `8t+5` / `2r` (which binds the
//! letter for use in side conditions). Side conditions are `&`-separated
//! comparisons over sums of variables and integers:
//! `m>=k`, `m+k in {4,8}`, `m notin {2,3}`, `t>0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ParseError;

pub type Bindings = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Exact(u64),
    Range { from: u64, to: Option<u64> },
    Residue { modulus: u64, rem: u64, var: char },
}

impl Atom {
    fn matches(&self, v: u64) -> Option<Option<(char, i64)>> {
        match *self {
            Atom::Exact(x) => (x == v).then_some(None),
            Atom::Range { from, to } => (v >= from && to.is_none_or(|t| v <= t)).then_some(None),
            Atom::Residue { modulus, rem, var } => {
                (v >= rem && (v - rem).is_multiple_of(modulus)).then(|| Some((var, ((v - rem) / modulus) as i64)))
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Exact(x) => write!(f, "{x}"),
            Atom::Range { from, to: Some(to) } => write!(f, "{from}..{to}"),
            Atom::Range { from, to: None } => write!(f, "{from}.."),
            Atom::Residue { modulus, rem: 0, var } => write!(f, "{modulus}{var}"),
            Atom::Residue { modulus, rem, var } => write!(f, "{modulus}{var}+{rem}"),
        }
    }
}

/// `None` alternatives means wildcard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    alternatives: Option<Vec<Atom>>,
}

impl Pattern {
    pub const ANY: Pattern = Pattern { alternatives: None };

    /// Every way `v` matches, each with the binding it introduces.
    pub fn matches(&self, v: u64) -> Vec<Option<(char, i64)>> {
        match &self.alternatives {
            None => vec![None],
            Some(atoms) => atoms.iter().filter_map(|a| a.matches(v)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let t = text.trim();
        if t == "*" {
            return Ok(Pattern::ANY);
        }
        let atoms = t
            .split(',')
            .map(|a| parse_atom(a.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pattern { alternatives: Some(atoms) })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alternatives {
            None => write!(f, "*"),
            Some(atoms) => {
                let s: Vec<String> = atoms.iter().map(Atom::to_string).collect();
                write!(f, "{}", s.join(","))
            }
        }
    }
}

fn parse_atom(a: &str) -> Result<Atom, ParseError> {
    let err = |msg: &str| ParseError::new(0, format!("{msg} in pattern `{a}`"));
    let num = |s: &str| s.parse::<u64>().map_err(|_| err("bad number"));
    if let Some((from, to)) = a.split_once("..") {
        let to = if to.is_empty() { None } else { Some(num(to)?) };
        return Ok(Atom::Range { from: num(from)?, to });
    }
    if let Some(pos) = a.find(|c: char| c.is_ascii_alphabetic()) {
        let modulus = num(&a[..pos])?;
        if modulus == 0 {
            return Err(err("zero modulus"));
        }
        let var = a[pos..].chars().next().expect("found above");
        let rest = &a[pos + var.len_utf8()..];
        let rem = match rest.strip_prefix('+') {
            Some(r) => num(r)?,
            None if rest.is_empty() => 0,
            None => return Err(err("expected `+`")),
        };
        if rem >= modulus {
            return Err(err("remainder must be below the modulus"));
        }
        return Ok(Atom::Residue { modulus, rem, var });
    }
    Ok(Atom::Exact(num(a)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Term {
    Var(String),
    Const(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Expr(Vec<Term>);

impl Expr {
    fn eval(&self, env: &Bindings) -> Option<i64> {
        self.0.iter().try_fold(0, |acc, t| match t {
            Term::Const(c) => Some(acc + c),
            Term::Var(v) => env.get(v).map(|x| acc + x),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|t| match t {
                Term::Var(v) => v.clone(),
                Term::Const(c) => c.to_string(),
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    const ALL: [(&'static str, Cmp); 6] =
        [("<=", Cmp::Le), (">=", Cmp::Ge), ("!=", Cmp::Ne), ("=", Cmp::Eq), ("<", Cmp::Lt), (">", Cmp::Gt)];

    fn symbol(self) -> &'static str {
        Self::ALL.iter().find(|(_, c)| *c == self).expect("listed").0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Condition {
    Compare(Expr, Cmp, Expr),
    Member { expr: Expr, set: Vec<i64>, negated: bool },
}

/// A conjunction of side conditions; empty means no constraint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SideConditions(Vec<Condition>);

impl SideConditions {
    /// All conditions hold; a condition over an unbound variable fails.
    pub fn holds(&self, env: &Bindings) -> bool {
        self.0.iter().all(|c| match c {
            Condition::Compare(a, op, b) => match (a.eval(env), b.eval(env)) {
                (Some(x), Some(y)) => match op {
                    Cmp::Eq => x == y,
                    Cmp::Ne => x != y,
                    Cmp::Lt => x < y,
                    Cmp::Le => x <= y,
                    Cmp::Gt => x > y,
                    Cmp::Ge => x >= y,
                },
                _ => false,
            },
            Condition::Member { expr, set, negated } => {
                expr.eval(env).is_some_and(|x| set.contains(&x) != *negated)
            }
        })
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let t = text.trim();
        if t.is_empty() || t == "-" {
            return Ok(SideConditions::default());
        }
        t.split('&').map(|c| parse_condition(c.trim())).collect::<Result<_, _>>().map(SideConditions)
    }
}

impl fmt::Display for SideConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| match c {
                Condition::Compare(a, op, b) => format!("{a}{}{b}", op.symbol()),
                Condition::Member { expr, set, negated } => {
                    let items: Vec<String> = set.iter().map(i64::to_string).collect();
                    format!("{expr} {} {{{}}}", if *negated { "notin" } else { "in" }, items.join(","))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let terms = s
        .split('+')
        .map(|t| {
            let t = t.trim();
            if t.is_empty() {
                Err(ParseError::new(0, format!("empty term in `{s}`")))
            } else if let Ok(c) = t.parse::<i64>() {
                Ok(Term::Const(c))
            } else if t.chars().all(|c| c.is_ascii_alphabetic()) {
                Ok(Term::Var(t.to_string()))
            } else {
                Err(ParseError::new(0, format!("bad term `{t}`")))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(Expr(terms))
}

fn parse_condition(c: &str) -> Result<Condition, ParseError> {
    for (kw, negated) in [(" notin ", true), (" in ", false)] {
        if let Some((lhs, rhs)) = c.split_once(kw) {
            let inner = rhs
                .trim()
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| ParseError::new(0, format!("expected `{{...}}` in `{c}`")))?;
            let set = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| ParseError::new(0, format!("bad set element in `{c}`"))))
                .collect::<Result<_, _>>()?;
            return Ok(Condition::Member { expr: parse_expr(lhs)?, set, negated });
        }
    }
    for (sym, op) in Cmp::ALL {
        if let Some((lhs, rhs)) = c.split_once(sym) {
            return Ok(Condition::Compare(parse_expr(lhs)?, op, parse_expr(rhs)?));
        }
    }
    Err(ParseError::new(0, format!("cannot parse condition `{c}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_bind_their_letter() {
        let p = Pattern::parse("8t+2, 8t+3").unwrap();
        assert_eq!(p.matches(10), vec![Some(('t', 1))]);
        assert_eq!(p.matches(3), vec![Some(('t', 0))]);
        assert!(p.matches(4).is_empty());
        assert_eq!(Pattern::parse("2r").unwrap().matches(0), vec![Some(('r', 0))]);
    }

    #[test]
    fn ranges_and_wildcards() {
        let p = Pattern::parse("9..").unwrap();
        assert!(p.matches(8).is_empty());
        assert_eq!(p.matches(100).len(), 1);
        assert!(Pattern::parse("2..4").unwrap().matches(5).is_empty());
        assert_eq!(Pattern::ANY.matches(17), vec![None]);
    }

    #[test]
    fn display_round_trips() {
        for s in ["*", "1,2,4,8", "8t,8t+4", "9..", "2..5"] {
            assert_eq!(Pattern::parse(s).unwrap().to_string(), s);
        }
        for s in ["m>=k", "m+k in {4,8} & m>=2", "m notin {2,3}", "t>0"] {
            assert_eq!(SideConditions::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn conditions_evaluate() {
        let env: Bindings = [("k".into(), 3), ("m".into(), 5), ("t".into(), 0)].into();
        assert!(SideConditions::parse("m+k in {4,8}").unwrap().holds(&env));
        assert!(!SideConditions::parse("m+k notin {4,8}").unwrap().holds(&env));
        assert!(SideConditions::parse("m>=k & t<1").unwrap().holds(&env));
        assert!(!SideConditions::parse("t>0").unwrap().holds(&env));
        assert!(!SideConditions::parse("r>0").unwrap().holds(&env), "unbound variable never holds");
        assert!(SideConditions::parse("-").unwrap().holds(&env));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(Pattern::parse("8t+9").is_err());
        assert!(Pattern::parse("0t").is_err());
        assert!(Pattern::parse("x").is_err());
        assert!(SideConditions::parse("m ~ k").is_err());
        assert!(SideConditions::parse("m in 4,8").is_err());
    }
}
