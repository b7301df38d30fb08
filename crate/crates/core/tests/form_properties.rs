use std::collections::HashMap;

use proptest::prelude::*;
use qhred::form::{equal_numeric, normalize, residual, FormExpr, GroupWord, LieConst, Shape, Side};
use qhred::gen::ExprGen;
use qhred::lie::{BackendKind, LieBackend, Mat, Sampler};
use qhred::oracle::{fd_exterior_derivative, symbolic_exterior_derivative};

fn sl2() -> LieBackend {
    LieBackend::new(BackendKind::Sl2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_preserves_values(seed in any::<u64>(), deg in 0usize..=3, scalar in any::<bool>()) {
        let b = sl2();
        let shape = if scalar { Shape::scalar(2, deg) } else { Shape::lie(2, deg) };
        let e = ExprGen::new(seed, 2, b.dim()).expr(shape, 3);
        let n = normalize(&e);
        let v = equal_numeric(&e, &n, &b, 8, 1e-10, seed).unwrap();
        prop_assert!(v.equal, "{} vs {}: {:e}", e.to_sexpr(), n.to_sexpr(), v.worst_residual);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), deg in 0usize..=3) {
        let e = ExprGen::new(seed, 3, 3).scalar(deg, 3);
        let n = normalize(&e);
        prop_assert_eq!(normalize(&n).to_sexpr(), n.to_sexpr());
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), deg in 0usize..=2) {
        let b = sl2();
        let e = ExprGen::new(seed, 2, b.dim()).scalar(deg, 3);
        let dd = e.de_rham().de_rham();
        let z = FormExpr::zero(dd.shape());
        let v = equal_numeric(&dd, &z, &b, 6, 1e-9, seed).unwrap();
        prop_assert!(v.equal, "{}: {:e}", e.to_sexpr(), v.worst_residual);
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>(), deg in 0usize..=2) {
        let b = sl2();
        let mut g = ExprGen::new(seed, 2, b.dim());
        let e = g.scalar(deg, 2);
        let mut wg = ExprGen::new(seed ^ 0xabcdef, 3, b.dim());
        let map = vec![wg.word(), wg.word()];
        let lhs = e.de_rham().pullback(&map).unwrap();
        let rhs = e.pullback(&map).unwrap().de_rham();
        let v = equal_numeric(&lhs, &rhs, &b, 6, 1e-9, seed).unwrap();
        prop_assert!(v.equal, "{}: {:e}", e.to_sexpr(), v.worst_residual);
    }

    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let e = ExprGen::new(seed, 2, b.dim()).scalar(2, 2);
        let mut wg = ExprGen::new(seed.rotate_left(7), 2, b.dim());
        let f = vec![wg.word(), wg.word()];
        let mut wg3 = ExprGen::new(seed.rotate_left(13), 3, b.dim());
        let g = vec![wg3.word(), wg3.word()];
        let composed: Vec<GroupWord> = f.iter().map(|w| w.substitute(&g).unwrap()).collect();
        let lhs = e.pullback(&f).unwrap().pullback(&g).unwrap();
        let rhs = e.pullback(&composed).unwrap();
        let v = equal_numeric(&lhs, &rhs, &b, 6, 1e-9, seed).unwrap();
        prop_assert!(v.equal);
    }

    #[test]
    fn normalize_equal_implies_numeric_equal(seed in any::<u64>()) {
        let b = sl2();
        let mut g = ExprGen::new(seed, 2, b.dim());
        let e = g.scalar(2, 2);
        let w = g.word();
        let x = g.lie(1, 1);
        let y = g.lie(1, 1);
        let a = FormExpr::pair(&FormExpr::ad(&w, &x).unwrap(), &FormExpr::ad(&w, &y).unwrap()).unwrap().add(&e).unwrap();
        let c = FormExpr::pair(&x, &y).unwrap().add(&e).unwrap();
        if normalize(&a) == normalize(&c) {
            prop_assert!(equal_numeric(&a, &c, &b, 6, 1e-9, seed).unwrap().equal);
        }
    }

    #[test]
    fn contraction_commutes_with_projection_pullback(seed in any::<u64>(), side in any::<bool>()) {
        let b = sl2();
        let e = ExprGen::new(seed, 2, b.dim()).scalar(2, 2);
        let side = if side { Side::L } else { Side::R };
        let x = LieConst::Slot("z".into());
        // projection G^3 → G^2 onto factors (2, 0)
        let proj = vec![GroupWord::var(3, 2), GroupWord::var(3, 0)];
        let lhs = e.pullback(&proj).unwrap().contract(2, side, &x).unwrap();
        let rhs = e.contract(0, side, &x).unwrap().pullback(&proj).unwrap();
        let v = equal_numeric(&lhs, &rhs, &b, 6, 1e-9, seed).unwrap();
        prop_assert!(v.equal);
    }
}

#[test]
fn adjoint_rule_matches_finite_differences() {
    let b = sl2();
    let mut s = Sampler::new(77);
    let mut worst = 0.0_f64;
    for i in 0..100u64 {
        let mut g = ExprGen::new(i, 2, b.dim());
        let w = g.word();
        let beta = g.lie(1, 1);
        let e = FormExpr::pair(&FormExpr::ad(&w, &beta).unwrap(), &FormExpr::slot(2, "x")).unwrap();
        let p = s.point(&b, 2);
        let xis: Vec<Vec<Mat>> = (0..2).map(|_| vec![s.lie(&b), s.lie(&b)]).collect();
        let slots = HashMap::from([("x".to_string(), s.lie(&b))]);
        let fd = fd_exterior_derivative(&e, &b, &p, &xis, &slots).unwrap();
        let sy = symbolic_exterior_derivative(&e, &b, &p, &xis, &slots).unwrap();
        worst = worst.max(residual(&fd, &sy));
    }
    assert!(worst < 1e-6, "worst residual {worst:e}");
}

#[test]
fn ad_rule_sign_is_not_free() {
    // flipping the correction term breaks agreement with finite differences
    let b = sl2();
    let mut s = Sampler::new(3);
    let w = GroupWord::from_letters(2, &[(0, 1), (1, -1)]);
    let beta = FormExpr::lmc(2, 1).unwrap();
    let ad = FormExpr::ad(&w, &beta).unwrap();
    let flipped = FormExpr::ad(&w, &beta.de_rham())
        .unwrap()
        .add(&FormExpr::bracket(&qhred::form::word_lmc(&w), &ad).unwrap())
        .unwrap();
    let p = s.point(&b, 2);
    let xis: Vec<Vec<Mat>> = (0..2).map(|_| vec![s.lie(&b), s.lie(&b)]).collect();
    let slots = HashMap::new();
    let e = FormExpr::pair(&ad, &FormExpr::basis(2, 2)).unwrap();
    let fd = fd_exterior_derivative(&e, &b, &p, &xis, &slots).unwrap();
    let bad = FormExpr::pair(&flipped, &FormExpr::basis(2, 2)).unwrap();
    let ctx = qhred::form::EvalContext::new(&b, &p, &slots).unwrap();
    let ts: Vec<_> = xis.iter().map(|x| qhred::lie::Tangent::left_invariant(&p, x)).collect();
    let v = ctx.eval(&bad, &ts).unwrap();
    assert!(residual(&fd, &v) > 1e-4);
}
