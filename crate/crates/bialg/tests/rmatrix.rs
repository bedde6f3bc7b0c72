use bialg::lie::{abelian, invariants, sl2, sl3, LieAlgebra, Module, SplitSubalgebra};
use bialg::qlb::{casimir_to_phi, schouten};
use bialg::rmatrix::*;
use bialg::scalar::{int, parse_scalar, Poly, Scalar};
use bialg::tensor::SparseTensor;

fn s(n: i64) -> Scalar {
    Scalar::from(n)
}

fn plain(n: usize, terms: &[([usize; 2], Scalar)]) -> SparseTensor {
    let mut t = SparseTensor::plain(n, 2);
    for (k, v) in terms {
        t.add_at(k, v.clone());
    }
    t
}

// e⊗f + ¼ h⊗h
fn standard_r() -> SparseTensor {
    plain(3, &[([0, 1], s(1)), ([2, 2], Scalar::frac(1, 4))])
}

// all 27 components of the three brackets, summed naively from a dense r
fn cybe_oracle(g: &LieAlgebra, r: &SparseTensor) -> SparseTensor {
    let n = g.dim();
    let mut out = SparseTensor::plain(n, 3);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let p = &r.get(&[a, b]) * &r.get(&[c, d]);
                    if p.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        out.add_at(&[k, b, d], &p * &g.f(a, c, k));
                        out.add_at(&[a, k, d], &p * &g.f(b, c, k));
                        out.add_at(&[a, c, k], &p * &g.f(b, d, k));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn standard_r_matrix_solves_cybe() {
    let g = sl2();
    assert!(cybe(&g, &standard_r()).unwrap().is_zero());
    assert!(cybe(&abelian(3), &plain(3, &[([0, 1], s(5)), ([2, 0], s(1))])).unwrap().is_zero());
    let ef = plain(3, &[([0, 1], s(1))]);
    let res = cybe(&g, &ef).unwrap();
    assert!(!res.is_zero());
    assert_eq!(res, cybe_oracle(&g, &ef));
}

#[test]
fn split_of_standard_r() {
    let sp = split_r(&sl2(), &standard_r()).unwrap();
    let mut c = SparseTensor::symmetric(3, 2);
    c.add_at(&[0, 1], Scalar::frac(1, 2));
    c.add_at(&[2, 2], Scalar::frac(1, 4));
    assert_eq!(sp.c, c);
    let mut l = SparseTensor::multivector(3, 2);
    l.add_at(&[0, 1], Scalar::frac(1, 4));
    assert_eq!(sp.lambda, l);
    assert!(sp.c_invariant);
}

#[test]
fn quasitriangular_reports() {
    let g = sl2();
    let r = quasitriangular_check(&g, &standard_r()).unwrap();
    assert!(r.pass && r.lambda_form_holds && r.criteria_agree);
    let r = quasitriangular_check(&g, &plain(3, &[([0, 1], s(1))])).unwrap();
    assert!(!r.pass && !r.cybe_residual.is_zero() && r.criteria_agree);
    assert!(quasitriangular_check(&g, &SparseTensor::plain(3, 2)).unwrap().pass);
}

#[test]
fn cybe_against_lambda_form_on_sl2_and_sl3() {
    for g in [sl2(), sl3()] {
        let n = g.dim();
        let c = invariants(&g, Module::Sym(2)).unwrap().remove(0);
        let phi = casimir_to_phi(&g, &c).unwrap();
        for seed in 0..6usize {
            let mut l = SparseTensor::multivector(n, 2);
            l.add_at(&[seed % n, (seed + 1) % n], Scalar::frac(seed as i64 + 1, 3));
            l.add_at(&[(2 * seed + 1) % n, (seed + 3) % n], s(-2));
            let r = l.to_plain().scale(&s(2)).add(&c.to_plain());
            let lhs = cybe(&g, &r).unwrap();
            let rhs = schouten(&g, &l, &l).unwrap().scale(&Scalar::frac(1, 2)).sub(&phi).to_plain();
            assert_eq!(lhs, rhs.scale(&s(CYBE_LAMBDA_FACTOR)));
        }
    }
}

fn cartan_sl2(vars: &[&str]) -> (LieAlgebra, SplitSubalgebra, Vec<String>) {
    let g = sl2();
    let sp = SplitSubalgebra::by_labels(&g, &["h"]).unwrap();
    (g, sp, vars.iter().map(|s| s.to_string()).collect())
}

fn lambda_r(vars: &[String], coeff: &str) -> SparseTensor {
    let gx = parse_scalar(coeff, vars).unwrap();
    // 2λ with λ = g(x) e∧f
    plain(3, &[([0, 1], &gx * &s(2)), ([1, 0], &gx * &s(-2))])
}

#[test]
fn dynamical_one_over_x() {
    let (_, sp, v) = cartan_sl2(&["x"]);
    let d = DynamicalRMatrix::new(sp.clone(), v.clone(), lambda_r(&v, "1/x"), None).unwrap();
    assert_eq!(d.locus.len(), 1);
    let rep = dynamical_check(&d).unwrap();
    assert!(rep.pass(), "{rep:?}");
    let d = DynamicalRMatrix::new(sp, v.clone(), lambda_r(&v, "1/x^2"), None).unwrap();
    let rep = dynamical_check(&d).unwrap();
    assert!(!rep.cdybe.pass && !rep.lambda_form.pass && rep.criteria_agree);
}

#[test]
fn d_dr_and_alt() {
    let v = vec!["x".to_string()];
    let mut f = SparseTensor::plain(3, 1);
    f.add_at(&[0], parse_scalar("x^2", &v).unwrap());
    let d = d_dr(&f, &[2]);
    assert_eq!(d.get(&[2, 0]), parse_scalar("2*x", &v).unwrap());
    // d_dR of (1/x) e∧f, then Alt: −1/x² · 2 e∧f∧h
    let mut l = SparseTensor::multivector(3, 2);
    l.add_at(&[0, 1], parse_scalar("1/x", &v).unwrap());
    let alt = alt_ddr(&d_dr(&l, &[2])).unwrap();
    assert_eq!(alt.get(&[0, 1, 2]), parse_scalar("-2/x^2", &v).unwrap());
    assert_eq!(alt.support(), 1);
}

#[test]
fn constant_dynamical_agrees_with_quasitriangular() {
    let g = sl2();
    let sp = SplitSubalgebra::by_labels(&g, &[]).unwrap();
    for r in [standard_r(), plain(3, &[([0, 1], s(1))])] {
        let d = DynamicalRMatrix::new(sp.clone(), vec![], r.clone(), None).unwrap();
        let rep = dynamical_check(&d).unwrap();
        assert_eq!(rep.pass(), quasitriangular_check(&g, &r).unwrap().pass);
    }
}

#[test]
fn locus_must_cover_denominators() {
    let (_, sp, v) = cartan_sl2(&["x"]);
    let r = lambda_r(&v, "1/x");
    let p = Poly::var(0);
    let q = &p + &Poly::constant(int(1));
    assert!(DynamicalRMatrix::new(sp.clone(), v.clone(), r.clone(), Some(vec![q])).is_err());
    assert!(DynamicalRMatrix::new(sp, v, r, Some(vec![p])).is_ok());
}
