//! Steenrod squares on the supported space models.
//!
//! On the ring generators `Sq(c) = c + c^2` and `Sq(d) = d + cd + d^2`; the
//! middle term is the relation `Sq^1 d = cd`. Expanding the Cartan formula
//! gives, for a single monomial,
//!
//! ```text
//! Sq^i(c^a d^b) = Σ_{u+q+2r=i} C(a,u) · b!/((b-q-r)! q! r!) · c^{a+u+q} d^{b+r}
//! ```
//!
//! with every coefficient reduced mod 2 by Lucas' theorem. [`sq`] evaluates
//! this closed form; [`total_sq`] multiplies out the generator formulas
//! directly and serves as the independent cross-check.

use crate::cohomology::{basis, mul, CohomologyClass, Monomial, SpaceModel};
use crate::gf2::BitMatrix;

/// `C(n, k) mod 2`. By Lucas' theorem the binomial is odd iff every binary
/// digit of `k` is at most the matching digit of `n`.
pub fn binomial_odd(n: u32, k: u32) -> bool {
    k & n == k
}

/// `b! / ((b-q-r)! q! r!) mod 2`, i.e. `C(b,q) · C(b-q,r)`.
pub fn multinomial_odd(b: u32, q: u32, r: u32) -> bool {
    q + r <= b && binomial_odd(b, q) && binomial_odd(b - q, r)
}

/// `Sq^i` of a single monomial, truncated to `model`.
pub fn sq_monomial(i: u32, x: Monomial, model: &SpaceModel) -> CohomologyClass {
    let mut out = CohomologyClass::zero();
    if model.is_stunted() {
        let y = Monomial::new(x.c + i, 0);
        if binomial_odd(x.c, i) && model.is_valid(y) {
            out.toggle(y);
        }
        return out;
    }
    for r in 0..=i / 2 {
        for q in 0..=i - 2 * r {
            let u = i - 2 * r - q;
            if binomial_odd(x.c, u) && multinomial_odd(x.d, q, r) {
                let y = Monomial::new(x.c + u + q, x.d + r);
                if model.is_valid(y) {
                    out.toggle(y);
                }
            }
        }
    }
    out
}

/// `Sq^i a`, extended linearly from [`sq_monomial`].
pub fn sq(i: u32, a: &CohomologyClass, model: &SpaceModel) -> CohomologyClass {
    let mut out = CohomologyClass::zero();
    for &x in a.terms() {
        out += &sq_monomial(i, x, model);
    }
    out
}

/// The total square `Sq = Σ_i Sq^i`, computed as the product
/// `(c + c^2)^a (d + cd + d^2)^b` in the truncated ring.
///
/// A stunted space `RP^m/RP^low` injects into `RP^m` in the degrees it has,
/// so the expansion is done in `RP^m` and the low part discarded.
pub fn total_sq(a: &CohomologyClass, model: &SpaceModel) -> CohomologyClass {
    let ring = if model.is_stunted() { SpaceModel::real_proj(model.m()) } else { *model };
    let sq_c = CohomologyClass::from_monomials(&ring, [Monomial::new(1, 0), Monomial::new(2, 0)].into_iter().filter(|&m| ring.is_valid(m)))
        .expect("filtered to valid monomials");
    let sq_d = CohomologyClass::from_monomials(
        &ring,
        [Monomial::new(0, 1), Monomial::new(1, 1), Monomial::new(0, 2)].into_iter().filter(|&m| ring.is_valid(m)),
    )
    .expect("filtered to valid monomials");

    let mut out = CohomologyClass::zero();
    for x in a.terms() {
        let mut term = CohomologyClass::one();
        for _ in 0..x.c {
            term = mul(&term, &sq_c, &ring).expect("ring model");
        }
        for _ in 0..x.d {
            term = mul(&term, &sq_d, &ring).expect("ring model");
        }
        out += &term;
    }
    out.retain(|&m| model.is_valid(m))
}

/// Matrix of `Sq^i : H^degree -> H^{degree+i}` relative to the monomial
/// bases; column `j` is the image of the `j`-th source monomial.
pub fn sq_matrix(model: &SpaceModel, degree: u32, i: u32) -> BitMatrix {
    let target = degree + i;
    let columns: Vec<_> = basis(model, degree)
        .into_iter()
        .map(|x| sq_monomial(i, x, model).coordinates(model, target))
        .collect();
    BitMatrix::from_columns(basis(model, target).len(), &columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(s: &str, model: &SpaceModel) -> CohomologyClass {
        CohomologyClass::parse(s, model).unwrap()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        for n in 0..40u32 {
            for k in 0..=n {
                assert_eq!(binomial_odd(n, k), binomial(n as u64, k as u64) % 2 == 1, "C({n},{k})");
            }
            assert!(!binomial_odd(n, n + 1));
        }
    }

    #[test]
    fn sq1_d_is_cd() {
        for (m, n) in [(1, 1), (1, 2), (4, 3)] {
            let model = SpaceModel::dold(m, n);
            assert_eq!(sq(1, &cls("d", &model), &model), cls("c*d", &model));
        }
    }

    #[test]
    fn sq2_on_d_family() {
        let model = SpaceModel::dold(2, 8);
        assert_eq!(sq(2, &cls("c^2*d^3", &model), &model), cls("c^2*d^4", &model));
        assert!(sq(2, &cls("d^4", &model), &model).is_zero());
    }

    #[test]
    fn small_identities() {
        let model = SpaceModel::dold(3, 3);
        assert!(sq(3, &cls("d", &model), &model).is_zero());
        assert_eq!(sq(1, &cls("c", &model), &model), cls("c^2", &model));
        let m12 = SpaceModel::dold(1, 2);
        assert_eq!(total_sq(&cls("d", &m12), &m12), cls("d + c*d + d^2", &m12));
        assert_eq!(total_sq(&CohomologyClass::one(), &model), CohomologyClass::one());
    }

    #[test]
    fn total_square_is_multiplicative() {
        let model = SpaceModel::dold(2, 2);
        let lhs = total_sq(&cls("c*d", &model), &model);
        let rhs = mul(&total_sq(&cls("c", &model), &model), &total_sq(&cls("d", &model), &model), &model).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn stunted_squares_follow_binomials() {
        let model = SpaceModel::stunted(10, 3).unwrap();
        for j in 4..=10 {
            for i in 0..=10 {
                let got = sq(i, &Monomial::new(j, 0).into(), &model);
                let expect = if binomial_odd(j, i) && j + i <= 10 {
                    CohomologyClass::from(Monomial::new(j + i, 0))
                } else {
                    CohomologyClass::zero()
                };
                assert_eq!(got, expect, "Sq^{i} c^{j}");
                assert_eq!(total_sq(&Monomial::new(j, 0).into(), &model).homogeneous_part(j + i), expect);
            }
        }
    }

    #[test]
    fn sq_matrix_shapes() {
        let model = SpaceModel::dold(2, 8);
        let m = sq_matrix(&model, 8, 2);
        assert_eq!((m.num_rows(), m.num_cols()), (2, 2));
        // column of c^2 d^3 is the coordinate vector of c^2 d^4
        assert_eq!(m.column(1), cls("c^2*d^4", &model).coordinates(&model, 10));
        assert!(m.column(0).is_zero());
        assert_eq!(sq_matrix(&model, 8, 0), BitMatrix::identity(2));
        let top = sq_matrix(&SpaceModel::dold(1, 1), 3, 1);
        assert_eq!(top.num_rows(), 0);
        assert!(top.is_zero());
    }
}
