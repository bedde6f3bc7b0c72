use bialg::lie::{sl2, sl3, invariants, LieAlgebra, Module, SplitSubalgebra};
use bialg::qlb::*;
use bialg::scalar::Scalar;
use bialg::tensor::SparseTensor;

fn mv(n: usize, terms: &[(&[usize], Scalar)]) -> SparseTensor {
    let p = terms.first().map(|t| t.0.len()).unwrap_or(2);
    let mut t = SparseTensor::multivector(n, p);
    for (k, v) in terms {
        t.add_at(k, v.clone());
    }
    t
}

fn s(n: i64) -> Scalar {
    Scalar::from(n)
}

// e⊗f + f⊗e + ½ h⊗h
fn sl2_casimir() -> SparseTensor {
    let mut c = SparseTensor::symmetric(3, 2);
    c.add_at(&[0, 1], s(1));
    c.add_at(&[2, 2], Scalar::frac(1, 2));
    c
}

fn bracket_vec(g: &LieAlgebra, a: usize, b: usize) -> Vec<(usize, Scalar)> {
    g.bracket(a, b).to_vec()
}

// [a∧b, c∧d] by the usual expansion, on basis vectors
fn schouten_oracle(g: &LieAlgebra, a: usize, b: usize, c: usize, d: usize) -> SparseTensor {
    let n = g.dim();
    let mut out = SparseTensor::multivector(n, 3);
    let mut term = |x: usize, y: usize, u: usize, v: usize, sign: i64| {
        for (k, f) in bracket_vec(g, x, y) {
            out.add_at(&[k, u, v], &f * &s(sign));
        }
    };
    term(a, c, b, d, 1);
    term(a, d, b, c, -1);
    term(b, c, a, d, -1);
    term(b, d, a, c, 1);
    out
}

#[test]
fn schouten_on_vectors_is_minus_the_bracket() {
    let g = sl2();
    let x = mv(3, &[(&[0], s(1))]);
    let y = mv(3, &[(&[1], s(1))]);
    assert_eq!(schouten(&g, &x, &y).unwrap(), mv(3, &[(&[2], s(-1))]));
}

#[test]
fn schouten_on_bivectors_is_minus_the_expansion() {
    for g in [sl2(), sl3()] {
        let n = g.dim();
        let quads = [(0, 1, 0, 1), (0, 2, 1, 2), (0, n - 1, 1, n - 2), (1, 2, 0, n - 1)];
        for (a, b, c, d) in quads {
            let l = mv(n, &[(&[a, b], s(1))]);
            let r = mv(n, &[(&[c, d], s(1))]);
            let got = schouten(&g, &l, &r).unwrap();
            assert_eq!(got, schouten_oracle(&g, a, b, c, d).scale(&s(-1)), "{a}{b}{c}{d}");
        }
    }
    let g = sl2();
    let ef = mv(3, &[(&[0, 1], s(1))]);
    assert_eq!(schouten(&g, &ef, &ef).unwrap(), mv(3, &[(&[0, 1, 2], s(-2))]));
}

#[test]
fn casimir_associator_on_sl2() {
    let g = sl2();
    let phi = casimir_to_phi(&g, &sl2_casimir()).unwrap();
    assert_eq!(phi, mv(3, &[(&[0, 1, 2], Scalar::frac(-1, 4))]));
    let q = QuasiLieBialgebra::new(g.clone(), SparseTensor::cobracket(3), phi).unwrap();
    assert!(check_qlb(&q).pass());
    let mut bad = SparseTensor::symmetric(3, 2);
    bad.add_at(&[0, 0], s(1));
    assert!(casimir_to_phi(&g, &bad).is_err());
}

#[test]
fn twist_inverse_and_axioms() {
    let g = sl2();
    let q = QuasiLieBialgebra::new(g.clone(), SparseTensor::cobracket(3), casimir_to_phi(&g, &sl2_casimir()).unwrap()).unwrap();
    let l = mv(3, &[(&[0, 1], Scalar::frac(1, 2)), (&[1, 2], s(3))]);
    let t = twist(&q, &l).unwrap();
    assert!(check_qlb(&t).pass());
    let back = twist(&t, &l.scale(&s(-1))).unwrap();
    assert_eq!(back.delta, q.delta);
    assert_eq!(back.phi, q.phi);
}

#[test]
fn induce_with_h_equal_g_matches_casimir_phi() {
    for g in [sl2(), sl3()] {
        let c = invariants(&g, Module::Sym(2)).unwrap().remove(0);
        let labels: Vec<&str> = g.basis().iter().map(|s| s.as_str()).collect();
        let sp = SplitSubalgebra::by_labels(&g, &labels).unwrap();
        let q = induce_from_coisotropic(&sp, &c).unwrap();
        assert!(q.delta.is_zero());
        assert_eq!(q.phi, casimir_to_phi(&g, &c).unwrap());
    }
}

#[test]
fn borel_reduction() {
    let g = sl2();
    let sp = SplitSubalgebra::by_labels(&g, &["e", "h"]).unwrap();
    let c = sl2_casimir();
    assert!(coisotropic_casimir_check(&sp, &c).unwrap().pass);
    let q = induce_from_coisotropic(&sp, &c).unwrap();
    // [e, f] = h with Q^{ef} = 1 gives δ(e) = ½ e∧h by hand
    let mut delta = SparseTensor::cobracket(2);
    delta.add_at(&[0, 0, 1], Scalar::frac(1, 2));
    assert_eq!(q.delta, delta);
    assert!(q.phi.is_zero());
    assert!(check_qlb(&q).pass());
    let r = verify_coisotropic_morphism(&sp, &c).unwrap();
    assert!(r.pass());
    assert_eq!((r.equivalence.rank_identities, r.equivalence.rank_invariance), (4, 4));
}

#[test]
fn sl3_borel_reduction() {
    let g = sl3();
    let c = invariants(&g, Module::Sym(2)).unwrap().remove(0);
    let sp = SplitSubalgebra::by_labels(&g, &["e1", "e2", "e12", "h1", "h2"]).unwrap();
    let q = induce_from_coisotropic(&sp, &c).unwrap();
    assert!(check_qlb(&q).pass());
    let r = verify_coisotropic_morphism(&sp, &c).unwrap();
    assert!(r.pass());
}

#[test]
fn non_invariant_casimir_names_an_identity() {
    let g = sl2();
    let sp = SplitSubalgebra::by_labels(&g, &["e", "h"]).unwrap();
    let mut c = SparseTensor::symmetric(3, 2);
    c.add_at(&[0, 0], s(1));
    assert!(induce_from_coisotropic(&sp, &c).is_err());
    let r = verify_coisotropic_morphism(&sp, &c).unwrap();
    assert!(!r.identities_pass);
    let failing: Vec<&str> = r.identities.iter().filter(|i| !i.nonzero.is_empty()).map(|i| i.name.as_str()).collect();
    assert!(failing.contains(&"casimir-invariance-2"), "{failing:?}");
    assert!(r.equivalence.pass);
}
