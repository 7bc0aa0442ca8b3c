use dold_wtriv::classifier::{Classifier, Status};
use dold_wtriv::cohomology::{
    basis, mul, restrict_fiber, restrict_subdold_m, restrict_subdold_n, CohomologyClass, Monomial, SpaceModel,
};
use dold_wtriv::error::Error;
use dold_wtriv::gf2::{intersect, kernel, Ambient, BitMatrix, BitVec, Subspace};
use dold_wtriv::knowledge::{Fact, KnowledgeBase};
use dold_wtriv::steenrod::{sq, total_sq};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = SpaceModel> {
    (0u32..6, 0u32..5).prop_map(|(m, n)| SpaceModel::dold(m, n))
}

fn class_in(model: SpaceModel) -> impl Strategy<Value = CohomologyClass> {
    let monos: Vec<Monomial> = (0..=model.dim()).flat_map(|d| basis(&model, d)).collect();
    let len = monos.len();
    proptest::collection::vec(any::<bool>(), len).prop_map(move |bits| {
        CohomologyClass::from_monomials(&model, monos.iter().zip(bits).filter(|(_, b)| *b).map(|(&m, _)| m))
            .unwrap()
    })
}

fn model_and_two_classes() -> impl Strategy<Value = (SpaceModel, CohomologyClass, CohomologyClass)> {
    model().prop_flat_map(|m| (Just(m), class_in(m), class_in(m)))
}

fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

fn matrix_with(cols: usize) -> impl Strategy<Value = BitMatrix> {
    proptest::collection::vec(bitvec(cols), 0..9).prop_map(move |rows| BitMatrix::from_rows(cols, rows))
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (0usize..9).prop_flat_map(matrix_with)
}

fn matrix_pair() -> impl Strategy<Value = (BitMatrix, BitMatrix)> {
    (0usize..9).prop_flat_map(|c| (matrix_with(c), matrix_with(c)))
}

proptest! {
    #[test]
    fn render_then_parse_is_identity((model, a, _) in model_and_two_classes()) {
        prop_assert_eq!(CohomologyClass::parse(&a.to_string(), &model).unwrap(), a);
    }

    #[test]
    fn multiplication_is_commutative_and_unital((model, a, b) in model_and_two_classes()) {
        prop_assert_eq!(mul(&a, &b, &model).unwrap(), mul(&b, &a, &model).unwrap());
        prop_assert_eq!(mul(&a, &CohomologyClass::one(), &model).unwrap(), a);
    }

    #[test]
    fn total_square_is_a_ring_map((model, a, b) in model_and_two_classes()) {
        let lhs = total_sq(&mul(&a, &b, &model).unwrap(), &model);
        let rhs = mul(&total_sq(&a, &model), &total_sq(&b, &model), &model).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn squares_sum_to_the_total_square((model, a, _) in model_and_two_classes()) {
        let mut sum = CohomologyClass::zero();
        for i in 0..=model.dim() {
            sum += &sq(i, &a, &model);
        }
        prop_assert_eq!(sum, total_sq(&a, &model));
    }

    #[test]
    fn squares_are_additive((model, a, b) in model_and_two_classes(), i in 0u32..8) {
        prop_assert_eq!(sq(i, &(&a + &b), &model), &sq(i, &a, &model) + &sq(i, &b, &model));
    }

    #[test]
    fn restrictions_commute_with_squares((model, a, _) in model_and_two_classes(), i in 0u32..8) {
        if model.m() > 0 {
            let f = model.fiber().unwrap();
            prop_assert_eq!(
                restrict_fiber(&sq(i, &a, &model), &model).unwrap(),
                sq(i, &restrict_fiber(&a, &model).unwrap(), &f)
            );
            let sub = model.sub_m().unwrap();
            prop_assert_eq!(
                restrict_subdold_m(&sq(i, &a, &model), &model).unwrap(),
                sq(i, &restrict_subdold_m(&a, &model).unwrap(), &sub)
            );
        }
        if model.n() > 0 {
            let sub = model.sub_n().unwrap();
            prop_assert_eq!(
                restrict_subdold_n(&sq(i, &a, &model), &model).unwrap(),
                sq(i, &restrict_subdold_n(&a, &model).unwrap(), &sub)
            );
        }
    }

    #[test]
    fn restrictions_are_ring_maps((model, a, b) in model_and_two_classes()) {
        prop_assume!(model.n() > 0);
        let sub = model.sub_n().unwrap();
        let r = |x: &CohomologyClass| restrict_subdold_n(x, &model).unwrap();
        prop_assert_eq!(r(&mul(&a, &b, &model).unwrap()), mul(&r(&a), &r(&b), &sub).unwrap());
    }

    #[test]
    fn coordinates_round_trip((model, a, _) in model_and_two_classes(), deg in 0u32..12) {
        let part = a.homogeneous_part(deg);
        let v = part.coordinates(&model, deg);
        prop_assert_eq!(v.len(), basis(&model, deg).len());
        prop_assert_eq!(CohomologyClass::from_coordinates(&model, deg, &v), part);
    }

    #[test]
    fn kernel_is_annihilated_and_rank_nullity(m in matrix()) {
        let k = kernel(&m);
        for v in k.basis() {
            prop_assert!(m.apply(v).is_zero());
        }
        prop_assert_eq!(k.dim() + m.rank(), m.num_cols());
    }

    #[test]
    fn intersection_lies_in_both((a, b) in matrix_pair()) {
        let (ka, kb) = (kernel(&a), kernel(&b));
        let both = intersect(&ka, &kb).unwrap();
        prop_assert!(both.is_subspace_of(&ka).unwrap());
        prop_assert!(both.is_subspace_of(&kb).unwrap());
        // equals the kernel of the stacked map
        prop_assert_eq!(both, kernel(&a.clone().stack(&b)));
    }

    #[test]
    fn span_is_canonical(vs in proptest::collection::vec(bitvec(7), 0..6), shuffle in any::<u64>()) {
        let amb = Ambient::plain(7);
        let a = Subspace::span(amb.clone(), vs.clone()).unwrap();
        let mut ws = vs.clone();
        if !ws.is_empty() {
            let n = ws.len();
            ws.rotate_left((shuffle as usize) % n);
            // adding one vector to another does not change the span
            let first = ws[0].clone();
            if n > 1 {
                ws[n - 1].xor_assign(&first);
            }
        }
        prop_assert_eq!(a, Subspace::span(amb, ws).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn memo_does_not_change_verdicts(k in 0u32..10, m in 1u32..16, n in 0u32..10) {
        let kb = KnowledgeBase::bundled();
        let a = Classifier::new(&kb).classify(k, m, n).unwrap();
        let b = Classifier::without_memo(&kb).classify(k, m, n).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn contradicting_a_decided_verdict_is_fatal(k in 0u32..10, m in 1u32..16, n in 0u32..10) {
        let kb = KnowledgeBase::bundled();
        let v = Classifier::new(&kb).classify(k, m, n).unwrap();
        prop_assume!(v.status != Status::Unknown);
        let line = match v.status {
            Status::WTrivial => format!(
                "DoldNotTrivial | {k} | {m} | {n} | - | dold-sigma4-m1 | {}",
                kb.citations().get("dold-sigma4-m1").unwrap().quote
            ),
            _ => format!(
                "DoldTrivial | {k} | {m} | {n} | - | dold-sigma3-n5 | {}",
                kb.citations().get("dold-sigma3-n5").unwrap().quote
            ),
        };
        let fact = Fact::parse_line("injected", &line).unwrap();
        match kb.with_fact(fact) {
            Err(e) => prop_assert!(matches!(e, Error::ContradictoryFacts { .. }), "{}", e),
            Ok(bigger) => {
                let err = Classifier::new(&bigger).classify(k, m, n).unwrap_err();
                let is_inconsistent = matches!(err, Error::Inconsistent { .. });
                prop_assert!(is_inconsistent, "{}", err);
            }
        }
    }

    #[test]
    fn adding_an_agreeing_fact_keeps_the_verdict(k in 0u32..10, m in 1u32..16, n in 0u32..10) {
        let kb = KnowledgeBase::bundled();
        let v = Classifier::new(&kb).classify(k, m, n).unwrap();
        prop_assume!(v.status == Status::WTrivial);
        let line = format!(
            "DoldTrivial | {k} | {m} | {n} | - | dold-sigma3-n5 | {}",
            kb.citations().get("dold-sigma3-n5").unwrap().quote
        );
        let bigger = kb.with_fact(Fact::parse_line("agree", &line).unwrap()).unwrap();
        prop_assert_eq!(Classifier::new(&bigger).classify(k, m, n).unwrap().status, Status::WTrivial);
    }
}
