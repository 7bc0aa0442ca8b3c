//! Exact linear algebra over GF(2).
//!
//! Vectors are packed bitsets; every subspace is stored as the rows of its
//! reduced row-echelon form, so two subspaces are equal exactly when their
//! stored rows are equal.

use std::fmt;

use crate::cohomology::SpaceModel;
use crate::error::{Error, Result};

const WORD: usize = 64;

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(WORD)] }
    }

    /// The `index`-th standard basis vector.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of length `len` from the low bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD] >> (index % WORD) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD] ^= 1u64 << (index % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).fold(0, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A dense GF(2) matrix stored by rows. Column `j` is the image of the
/// `j`-th source basis vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    /// Builds a matrix from its columns; every column must have length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in col.ones() {
                m.rows[i].set(j, true);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn stack(mut self, other: &BitMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self.rows.clone()).len()
    }
}

/// Reduced row-echelon form: nonzero rows sorted by pivot (lowest set bit),
/// every pivot column cleared in all other rows.
fn rref(mut rows: Vec<BitVec>) -> Vec<BitVec> {
    let mut out: Vec<BitVec> = Vec::new();
    for mut r in rows.drain(..) {
        for o in &out {
            let p = o.leading().expect("stored rows are nonzero");
            if r.get(p) {
                r.xor_assign(o);
            }
        }
        if let Some(p) = r.leading() {
            for o in out.iter_mut() {
                if o.get(p) {
                    o.xor_assign(&r);
                }
            }
            out.push(r);
        }
    }
    out.sort_by_key(|r| r.leading());
    out
}

/// What a subspace lives in: a bare dimension, optionally tagged with the
/// cohomology group it coordinatizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ambient {
    pub dim: usize,
    pub group: Option<(SpaceModel, u32)>,
}

impl Ambient {
    pub fn plain(dim: usize) -> Self {
        Ambient { dim, group: None }
    }

    pub fn cohomology(model: SpaceModel, degree: u32) -> Self {
        let dim = crate::cohomology::basis(&model, degree).len();
        Ambient { dim, group: Some((model, degree)) }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            Some((model, degree)) => write!(f, "H^{degree}({model}) [dim {}]", self.dim),
            None => write!(f, "GF(2)^{}", self.dim),
        }
    }
}

/// A subspace held as its canonical reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: Ambient,
    basis: Vec<BitVec>,
}

impl Subspace {
    pub fn zero(ambient: Ambient) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: Ambient) -> Self {
        let basis = (0..ambient.dim).map(|i| BitVec::unit(ambient.dim, i)).collect();
        Subspace { ambient, basis }
    }

    pub fn span(ambient: Ambient, vectors: impl IntoIterator<Item = BitVec>) -> Result<Self> {
        let vectors: Vec<BitVec> = vectors.into_iter().collect();
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient.dim) {
            return Err(Error::LengthMismatch { expected: ambient.dim, got: v.len() });
        }
        Ok(Subspace { ambient, basis: rref(vectors) })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Retags the subspace with a different ambient of the same dimension.
    pub fn with_ambient(mut self, ambient: Ambient) -> Self {
        assert_eq!(ambient.dim, self.ambient.dim);
        self.ambient = ambient;
        self
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.ambient.dim {
            return Err(Error::LengthMismatch { expected: self.ambient.dim, got: v.len() });
        }
        let mut r = v.clone();
        for b in &self.basis {
            if r.get(b.leading().expect("nonzero basis row")) {
                r.xor_assign(b);
            }
        }
        Ok(r.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        check_ambient(&self.ambient, &other.ambient)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The orthogonal complement under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        let m = BitMatrix::from_rows(self.ambient.dim, self.basis.clone());
        kernel(&m).with_ambient(self.ambient.clone())
    }

    /// Every element of the subspace; only sensible for small dimensions.
    pub fn elements(&self) -> Vec<BitVec> {
        let d = self.dim();
        assert!(d < 24, "refusing to enumerate 2^{d} vectors");
        (0u32..1 << d)
            .map(|mask| {
                let mut v = BitVec::zeros(self.ambient.dim);
                for (i, b) in self.basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(b);
                    }
                }
                v
            })
            .collect()
    }
}

fn check_ambient(a: &Ambient, b: &Ambient) -> Result<()> {
    if a != b {
        return Err(Error::AmbientMismatch { left: a.to_string(), right: b.to_string() });
    }
    Ok(())
}

/// Canonical basis of `{v : Mv = 0}` in an untagged ambient.
pub fn kernel(matrix: &BitMatrix) -> Subspace {
    let n = matrix.cols;
    let reduced = rref(matrix.rows.clone());
    let pivots: Vec<usize> = reduced.iter().map(|r| r.leading().expect("nonzero")).collect();
    let mut vectors = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = BitVec::unit(n, free);
        for (row, &p) in reduced.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        vectors.push(v);
    }
    Subspace { ambient: Ambient::plain(n), basis: rref(vectors) }
}

/// `a ∩ b`, computed as the common kernel of both annihilators.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(&a.ambient, &b.ambient)?;
    let dim = a.ambient.dim;
    let mut rows = a.annihilator().basis;
    rows.extend(b.annihilator().basis);
    Ok(kernel(&BitMatrix::from_rows(dim, rows)).with_ambient(a.ambient.clone()))
}
