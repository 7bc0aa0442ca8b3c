//! Mod-2 cohomology of Dold manifolds and their relatives.
//!
//! `H*(D(m,n); Z/2) = Z/2[c,d] / (c^{m+1}, d^{n+1})` with `|c| = 1` and
//! `|d| = 2`. Real projective space is `D(m,0)`, complex projective space is
//! `D(0,n)`. A stunted projective space `RP^m/RP^low` is modelled as the
//! module spanned by `c^j` for `low < j <= m`; it carries no products.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::gf2::BitVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceKind {
    Dold,
    RealProj,
    ComplexProj,
    StuntedRealProj,
}

/// A truncated-ring description of one of the supported spaces.
///
/// Equality ignores the Dold/RP/CP label: `RP(m)` and `D(m,0)` are the same
/// model, as are `CP(n)` and `D(0,n)`.
#[derive(Clone, Copy, Debug)]
pub struct SpaceModel {
    kind: SpaceKind,
    m: u32,
    n: u32,
    low: u32,
}

impl PartialEq for SpaceModel {
    fn eq(&self, other: &Self) -> bool {
        self.is_stunted() == other.is_stunted()
            && self.m == other.m
            && self.n == other.n
            && self.low == other.low
    }
}

impl Eq for SpaceModel {}

impl Hash for SpaceModel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.is_stunted(), self.m, self.n, self.low).hash(state);
    }
}

impl SpaceModel {
    pub fn dold(m: u32, n: u32) -> Self {
        SpaceModel { kind: SpaceKind::Dold, m, n, low: 0 }
    }

    pub fn real_proj(m: u32) -> Self {
        SpaceModel { kind: SpaceKind::RealProj, m, n: 0, low: 0 }
    }

    pub fn complex_proj(n: u32) -> Self {
        SpaceModel { kind: SpaceKind::ComplexProj, m: 0, n, low: 0 }
    }

    /// `RP^m / RP^low`; requires `low < m`.
    pub fn stunted(m: u32, low: u32) -> Result<Self> {
        if low >= m {
            return Err(Error::InvalidSpace(format!("RP({m}/{low}) needs low < m")));
        }
        Ok(SpaceModel { kind: SpaceKind::StuntedRealProj, m, n: 0, low })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Truncation exponent of `c` (`c^{m+1} = 0`).
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Truncation exponent of `d` (`d^{n+1} = 0`).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn low(&self) -> u32 {
        self.low
    }

    pub fn is_stunted(&self) -> bool {
        self.kind == SpaceKind::StuntedRealProj
    }

    /// Top degree.
    pub fn dim(&self) -> u32 {
        if self.is_stunted() {
            self.m
        } else {
            self.m + 2 * self.n
        }
    }

    pub fn is_valid(&self, mono: Monomial) -> bool {
        if self.is_stunted() {
            mono.d == 0 && mono.c > self.low && mono.c <= self.m
        } else {
            mono.c <= self.m && mono.d <= self.n
        }
    }

    /// The fibre `CP^n` of `D(m,n) -> RP^m`.
    pub fn fiber(&self) -> Result<SpaceModel> {
        self.require_ring("restrict_fiber")?;
        Ok(SpaceModel::complex_proj(self.n))
    }

    /// `D(m-1,n)`, the source of the restriction that kills `c^m`.
    pub fn sub_m(&self) -> Result<SpaceModel> {
        self.require_ring("restrict_subdold_m")?;
        if self.m == 0 {
            return Err(Error::Unsupported { op: "restrict_subdold_m", model: self.to_string() });
        }
        Ok(SpaceModel { m: self.m - 1, ..*self })
    }

    /// `D(m,n-1)`, the source of the restriction that kills `d^n`.
    pub fn sub_n(&self) -> Result<SpaceModel> {
        self.require_ring("restrict_subdold_n")?;
        if self.n == 0 {
            return Err(Error::Unsupported { op: "restrict_subdold_n", model: self.to_string() });
        }
        Ok(SpaceModel { n: self.n - 1, ..*self })
    }

    fn require_ring(&self, op: &'static str) -> Result<()> {
        if self.is_stunted() {
            return Err(Error::Unsupported { op, model: self.to_string() });
        }
        Ok(())
    }
}

impl fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Dold => write!(f, "D({},{})", self.m, self.n),
            SpaceKind::RealProj => write!(f, "RP({})", self.m),
            SpaceKind::ComplexProj => write!(f, "CP({})", self.n),
            SpaceKind::StuntedRealProj => write!(f, "RP({}/{})", self.m, self.low),
        }
    }
}

impl FromStr for SpaceModel {
    type Err = Error;

    /// Accepts `D(m,n)`, `RP(m)`, `CP(n)` and `RP(m/low)`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidSpace(format!("cannot parse space descriptor `{s}`"));
        let open = compact.find('(').ok_or_else(bad)?;
        if !compact.ends_with(')') {
            return Err(bad());
        }
        let head = &compact[..open];
        let args = &compact[open + 1..compact.len() - 1];
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        match head {
            "D" => {
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                Ok(SpaceModel::dold(num(a)?, num(b)?))
            }
            "RP" => match args.split_once('/') {
                Some((a, b)) => SpaceModel::stunted(num(a)?, num(b)?),
                None => Ok(SpaceModel::real_proj(num(args)?)),
            },
            "CP" => Ok(SpaceModel::complex_proj(num(args)?)),
            _ => Err(bad()),
        }
    }
}

/// `c^c d^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub c: u32,
    pub d: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { c: 0, d: 0 };

    pub fn new(c: u32, d: u32) -> Self {
        Monomial { c, d }
    }

    pub fn degree(&self) -> u32 {
        self.c + 2 * self.d
    }
}

// Degree first, then ascending power of c.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.c).cmp(&(other.degree(), other.c))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |name: &str, e: u32| match e {
            0 => None,
            1 => Some(name.to_string()),
            _ => Some(format!("{name}^{e}")),
        };
        let parts: Vec<String> = [factor("c", self.c), factor("d", self.d)].into_iter().flatten().collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A GF(2) combination of monomials; a monomial is present iff its
/// coefficient is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    terms: BTreeSet<Monomial>,
}

impl CohomologyClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Monomial::ONE)
    }

    /// Builds a class, rejecting monomials that do not exist in `model`.
    /// Repeated monomials cancel in pairs.
    pub fn from_monomials(model: &SpaceModel, monos: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut out = Self::zero();
        for m in monos {
            if !model.is_valid(m) {
                return Err(Error::InvalidMonomial { monomial: m.to_string(), model: model.to_string() });
            }
            out.toggle(m);
        }
        Ok(out)
    }

    /// Parses the textual syntax (`"d^4 + c^2*d^3"`, `"1"`, `"0"`) and
    /// checks every monomial against `model`.
    pub fn parse(text: &str, model: &SpaceModel) -> Result<Self> {
        let monos = parse_terms(text)?;
        Self::from_monomials(model, monos)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.contains(&m)
    }

    /// Adds a monomial with coefficient 1 (so an existing copy cancels).
    pub(crate) fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Drops every monomial failing `keep`.
    pub(crate) fn retain(mut self, keep: impl Fn(&Monomial) -> bool) -> Self {
        self.terms.retain(keep);
        self
    }

    pub fn is_valid_in(&self, model: &SpaceModel) -> bool {
        self.terms.iter().all(|&m| model.is_valid(m))
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        self.clone().retain(|m| m.degree() == degree)
    }

    /// Coordinates relative to `basis(model, degree)`. Monomials of other
    /// degrees are ignored.
    pub fn coordinates(&self, model: &SpaceModel, degree: u32) -> BitVec {
        let b = basis(model, degree);
        let mut v = BitVec::zeros(b.len());
        for (i, m) in b.iter().enumerate() {
            if self.terms.contains(m) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_coordinates(model: &SpaceModel, degree: u32, v: &BitVec) -> Self {
        let b = basis(model, degree);
        assert_eq!(b.len(), v.len(), "coordinate vector has the wrong length");
        CohomologyClass { terms: v.ones().map(|i| b[i]).collect() }
    }
}

impl From<Monomial> for CohomologyClass {
    fn from(m: Monomial) -> Self {
        CohomologyClass { terms: BTreeSet::from([m]) }
    }
}

impl AddAssign<&CohomologyClass> for CohomologyClass {
    fn add_assign(&mut self, rhs: &CohomologyClass) {
        for &m in &rhs.terms {
            self.toggle(m);
        }
    }
}

impl Add for CohomologyClass {
    type Output = CohomologyClass;

    fn add(mut self, rhs: CohomologyClass) -> CohomologyClass {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a CohomologyClass> for &'a CohomologyClass {
    type Output = CohomologyClass;

    fn add(self, rhs: &CohomologyClass) -> CohomologyClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(Monomial::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn parse_terms(text: &str) -> Result<Vec<Monomial>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Cursor { chars: &chars, pos: 0 };
    let mut out = Vec::new();
    p.skip_ws();
    if p.peek().is_none() {
        return Err(ParseError::new(0, "empty expression"));
    }
    loop {
        if let Some(m) = p.term()? {
            out.push(m);
        }
        p.skip_ws();
        match p.peek() {
            None => break,
            Some('+') => p.pos += 1,
            Some(c) => return Err(ParseError::new(p.pos, format!("unexpected `{c}`"))),
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| ParseError::new(start, "number too large"))
    }

    /// `None` for the zero term.
    fn term(&mut self) -> Result<Option<Monomial>, ParseError> {
        let mut mono = Monomial::ONE;
        let mut zero = false;
        loop {
            self.skip_ws();
            let at = self.pos;
            match self.peek() {
                Some(v @ ('c' | 'd')) => {
                    self.pos += 1;
                    self.skip_ws();
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.skip_ws();
                        self.number()?
                    } else {
                        1
                    };
                    let slot = if v == 'c' { &mut mono.c } else { &mut mono.d };
                    *slot = slot.checked_add(e).ok_or_else(|| ParseError::new(at, "exponent overflow"))?;
                }
                Some(ch) if ch.is_ascii_digit() => match self.number()? {
                    0 => zero = true,
                    1 => {}
                    _ => return Err(ParseError::new(at, "coefficients must be 0 or 1")),
                },
                Some(ch) => return Err(ParseError::new(at, format!("unexpected `{ch}`"))),
                None => return Err(ParseError::new(at, "unexpected end of input")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(if zero { None } else { Some(mono) })
    }
}

/// The monomials of `degree` in `model`, in ascending power of `c`.
pub fn basis(model: &SpaceModel, degree: u32) -> Vec<Monomial> {
    if model.is_stunted() {
        let m = Monomial::new(degree, 0);
        return if model.is_valid(m) { vec![m] } else { Vec::new() };
    }
    (0..=model.m.min(degree))
        .filter(|c| (degree - c).is_multiple_of(2))
        .map(|c| Monomial::new(c, (degree - c) / 2))
        .filter(|&m| model.is_valid(m))
        .collect()
}

/// Product in the truncated ring; undefined on stunted models.
pub fn mul(a: &CohomologyClass, b: &CohomologyClass, model: &SpaceModel) -> Result<CohomologyClass> {
    model.require_ring("mul")?;
    let mut out = CohomologyClass::zero();
    for x in a.terms() {
        for y in b.terms() {
            let p = Monomial::new(x.c + y.c, x.d + y.d);
            if model.is_valid(p) {
                out.toggle(p);
            }
        }
    }
    Ok(out)
}

/// Pullback along the fibre inclusion `CP^n -> D(m,n)`: `c -> 0`, `d -> d`.
/// The result lives in `model.fiber()`.
pub fn restrict_fiber(a: &CohomologyClass, model: &SpaceModel) -> Result<CohomologyClass> {
    model.fiber()?;
    Ok(a.clone().retain(|m| m.c == 0))
}

/// Pullback along `D(m-1,n) -> D(m,n)`; kills exactly the monomials `c^m d^j`.
pub fn restrict_subdold_m(a: &CohomologyClass, model: &SpaceModel) -> Result<CohomologyClass> {
    let target = model.sub_m()?;
    Ok(a.clone().retain(|&m| target.is_valid(m)))
}

/// Pullback along `D(m,n-1) -> D(m,n)`; kills exactly the monomials `c^i d^n`.
pub fn restrict_subdold_n(a: &CohomologyClass, model: &SpaceModel) -> Result<CohomologyClass> {
    let target = model.sub_n()?;
    Ok(a.clone().retain(|&m| target.is_valid(m)))
}
