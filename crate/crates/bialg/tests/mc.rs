use bialg::bigbracket::Shift;
use bialg::lie::{abelian, heisenberg3, invariants, sl2, sl3, Module};
use bialg::mc::*;
use bialg::qlb::{casimir_to_phi, check_qlb, twist, QuasiLieBialgebra};
use bialg::scalar::Scalar;
use bialg::tensor::SparseTensor;
use proptest::prelude::*;

fn casimir_qlb() -> QuasiLieBialgebra {
    let g = sl2();
    let c = invariants(&g, Module::Sym(2)).unwrap().remove(0);
    let phi = casimir_to_phi(&g, &c).unwrap();
    QuasiLieBialgebra::new(g, SparseTensor::cobracket(3), phi).unwrap()
}

#[test]
fn slices_in_degree_one() {
    let l = pol_bg(&sl2(), Shift::One).unwrap();
    let one: Vec<(usize, usize, usize)> =
        l.slices.iter().filter(|s| s.degree == 1).map(|s| (s.ce_degree, s.weight, s.basis.len())).collect();
    // maps g → ∧²g and ∧³g
    assert_eq!(one, vec![(1, 2, 9), (0, 3, 1)]);
    let l = pol_bg(&sl2(), Shift::Two).unwrap();
    let one: Vec<(usize, usize, usize)> =
        l.slices.iter().filter(|s| s.degree == 1).map(|s| (s.ce_degree, s.weight, s.basis.len())).collect();
    assert_eq!(one, vec![(0, 2, 6)]);
}

#[test]
fn residuals() {
    let l = pol_bg(&sl2(), Shift::One).unwrap();
    assert!(mc_residual(&l, &LElement::default()).unwrap().is_zero());
    let mut phi = SparseTensor::multivector(3, 3);
    phi.add_at(&[0, 1, 2], Scalar::one());
    let q = QuasiLieBialgebra::new(sl2(), SparseTensor::cobracket(3), phi).unwrap();
    assert!(mc_residual(&l, &l.mc_from_qlb(&q).unwrap()).unwrap().is_zero());

    let mut delta = SparseTensor::cobracket(3);
    delta.add_at(&[0, 0, 1], Scalar::one());
    let q = QuasiLieBialgebra::new(sl2(), delta, SparseTensor::multivector(3, 3)).unwrap();
    let r = mc_residual(&l, &l.mc_from_qlb(&q).unwrap()).unwrap();
    let qr = check_qlb(&q);
    assert!(!qr.cocycle.is_zero());
    assert_eq!(r.part(2, 2), Some(&qr.cocycle));

    let wrong = l.element_from_tensor(&SparseTensor::multivector(3, 2)).unwrap();
    assert!(mc_residual(&l, &wrong).unwrap().is_zero());
    let mut lam = SparseTensor::multivector(3, 2);
    lam.add_at(&[0, 1], Scalar::one());
    assert!(mc_residual(&l, &l.element_from_tensor(&lam).unwrap()).is_err());
}

#[test]
fn abelian_differential_vanishes() {
    let l = pol_bg(&abelian(3), Shift::One).unwrap();
    for s in &l.slices {
        if s.ce_degree < 3 {
            assert!(l.differential_matrix(s.ce_degree, s.weight).unwrap().iter().flatten().all(|v| *v == Default::default()));
        }
    }
}

#[test]
fn structure_is_a_dgla() {
    for (g, shift) in [(sl2(), Shift::One), (sl2(), Shift::Two), (heisenberg3(), Shift::One), (heisenberg3(), Shift::Two)] {
        let l = pol_bg(&g, shift).unwrap();
        let c = l.check_structure(200).unwrap();
        assert!(c.pass(), "{} n={}: {c:?}", g.name(), shift.n());
    }
    assert!(pol_bg(&sl3(), Shift::One).unwrap().check_structure(200).is_err());
}

#[test]
fn window_overflow_is_a_size_error() {
    let w = Window { max_degree: 5, max_weight: 4 };
    assert!(matches!(pol_bg_window(&sl2(), Shift::One, w), Err(bialg::Error::Size(_))));
}

#[test]
fn casimir_bracket_vanishes_for_n2() {
    for g in [sl2(), sl3()] {
        let l = pol_bg(&g, Shift::Two).unwrap();
        let c = invariants(&g, Module::Sym(2)).unwrap().remove(0);
        let x = l.element_from_tensor(&c).unwrap();
        assert!(l.bracket(&x, &x).unwrap().is_zero());
        assert!(mc_residual(&l, &x).unwrap().is_zero());
        let mut bad = SparseTensor::symmetric(g.dim(), 2);
        bad.add_at(&[0, 0], Scalar::one());
        assert!(!mc_residual(&l, &l.element_from_tensor(&bad).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn twist_paths() {
    let l = pol_bg(&sl2(), Shift::One).unwrap();
    let q = casimir_qlb();
    let mut lam = SparseTensor::multivector(3, 2);
    lam.add_at(&[0, 1], Scalar::frac(1, 3));
    lam.add_at(&[1, 2], Scalar::from(2));
    let path = twist_path(&l, &q, &lam).unwrap();
    let y = l.mc_from_qlb(&twist(&q, &lam).unwrap()).unwrap();
    let x = l.mc_from_qlb(&q).unwrap();
    let r = gauge_verify(&l, &x, &y, &path).unwrap();
    assert!(r.pass, "{r:?}");

    let mut cut = path.clone();
    cut.alpha.truncate(2);
    let r = gauge_verify(&l, &x, &y, &cut).unwrap();
    assert!(!r.pass && !r.ode);
    assert_eq!(r.failing_order, Some(1));

    let still = GaugePath { lambda: LElement::default(), alpha: vec![x.clone()] };
    assert!(gauge_verify(&l, &x, &x, &still).unwrap().pass);
}

fn entries(max: usize) -> impl Strategy<Value = Vec<(usize, usize, usize, i64)>> {
    prop::collection::vec((0..3usize, 0..3usize, 0..3usize, -2i64..=2), 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mc_residual_agrees_with_qlb_axioms(d in entries(4), p in -2i64..=2, l in entries(3), valid in any::<bool>()) {
        let base = casimir_qlb();
        let mut lam = SparseTensor::multivector(3, 2);
        for &(i, j, _, v) in &l {
            lam.add_at(&[i, j], Scalar::from(v));
        }
        let q = if valid {
            twist(&base, &lam).unwrap()
        } else {
            let mut delta = SparseTensor::cobracket(3);
            for &(k, i, j, v) in &d {
                delta.add_at(&[k, i, j], Scalar::from(v));
            }
            let phi = base.phi.scale(&Scalar::from(p));
            QuasiLieBialgebra::new(sl2(), delta, phi).unwrap()
        };
        let lg = pol_bg(&sl2(), Shift::One).unwrap();
        let r = mc_residual(&lg, &lg.mc_from_qlb(&q).unwrap()).unwrap();
        let qr = check_qlb(&q);
        prop_assert_eq!(r.is_zero(), qr.pass());
        let get = |k, p| r.part(k, p).cloned();
        prop_assert_eq!(get(2, 2), (!qr.cocycle.is_zero()).then(|| qr.cocycle.clone()));
        prop_assert_eq!(get(1, 3), (!qr.jacobi.is_zero()).then(|| qr.jacobi.clone()));
        prop_assert_eq!(get(0, 4), (!qr.compatibility.is_zero()).then(|| qr.compatibility.clone()));
    }

    #[test]
    fn gauge_accepts_twist_paths(l in entries(3)) {
        let lg = pol_bg(&sl2(), Shift::One).unwrap();
        let q = casimir_qlb();
        let mut lam = SparseTensor::multivector(3, 2);
        for &(i, j, _, v) in &l {
            lam.add_at(&[i, j], Scalar::from(v));
        }
        let path = twist_path(&lg, &q, &lam).unwrap();
        let x = lg.mc_from_qlb(&q).unwrap();
        let y = lg.mc_from_qlb(&twist(&q, &lam).unwrap()).unwrap();
        prop_assert!(gauge_verify(&lg, &x, &y, &path).unwrap().pass);
    }
}
