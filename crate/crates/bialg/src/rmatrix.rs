use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, SplitSubalgebra};
use crate::qlb::{casimir_to_phi, invariance_residual, schouten};
use crate::scalar::{Poly, Scalar};
use crate::tensor::{antisymmetrize, symmetric_part, SparseTensor};

/// cybe(2λ + c) = CYBE_LAMBDA_FACTOR · embed(½⟦λ,λ⟧ − φ(c)) for invariant c.
pub const CYBE_LAMBDA_FACTOR: i64 = -4;

fn plain2(r: &SparseTensor, g: &LieAlgebra) -> Result<SparseTensor> {
    if r.arity() != 2 || r.dim() != g.dim() {
        return Err(Error::Input("an r-matrix is a 2-tensor on g".into()));
    }
    Ok(r.to_plain())
}

/// [r₁₂,r₁₃] + [r₁₂,r₂₃] + [r₁₃,r₂₃] as a plain 3-tensor.
pub fn cybe(g: &LieAlgebra, r: &SparseTensor) -> Result<SparseTensor> {
    let r = plain2(r, g)?;
    let mut out = SparseTensor::plain(g.dim(), 3);
    for (k1, v1) in r.entries() {
        for (k2, v2) in r.entries() {
            let (a, b, c, d) = (k1[0], k1[1], k2[0], k2[1]);
            let p = v1 * v2;
            for (k, f) in g.bracket(a, c) {
                out.add_at(&[*k, b, d], &p * f);
            }
            for (k, f) in g.bracket(b, c) {
                out.add_at(&[a, *k, d], &p * f);
            }
            for (k, f) in g.bracket(b, d) {
                out.add_at(&[a, c, *k], &p * f);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SplitR {
    pub lambda: SparseTensor,
    pub c: SparseTensor,
    pub c_invariant: bool,
}

/// r = 2λ + c with c = ½(r + rᵀ).
pub fn split_r(g: &LieAlgebra, r: &SparseTensor) -> Result<SplitR> {
    let r = plain2(r, g)?;
    let c = symmetric_part(&r)?;
    let mut lambda = SparseTensor::multivector(g.dim(), 2);
    // the antisymmetric group folds r_ji into −r_ij and drops the diagonal
    for (k, v) in r.entries() {
        lambda.add_at(k, v * &Scalar::frac(1, 4));
    }
    let c_invariant = invariance_residual(g, &c)?.is_zero();
    Ok(SplitR { lambda, c, c_invariant })
}

#[derive(Clone, Debug)]
pub struct QuasitriangularReport {
    pub pass: bool,
    pub cybe_residual: SparseTensor,
    pub c_invariant: bool,
    pub lambda: SparseTensor,
    pub c: SparseTensor,
    /// ½⟦λ,λ⟧ − φ(c); None when c is not invariant
    pub lambda_form_residual: Option<SparseTensor>,
    pub lambda_form_holds: bool,
    pub criteria_agree: bool,
}

fn half_schouten(g: &LieAlgebra, l: &SparseTensor) -> Result<SparseTensor> {
    Ok(schouten(g, l, l)?.scale(&Scalar::frac(1, 2)))
}

pub fn quasitriangular_check(g: &LieAlgebra, r: &SparseTensor) -> Result<QuasitriangularReport> {
    let res = cybe(g, r)?;
    let sp = split_r(g, r)?;
    let pass = res.is_zero() && sp.c_invariant;
    let lf = if sp.c_invariant {
        Some(half_schouten(g, &sp.lambda)?.sub(&casimir_to_phi(g, &sp.c)?))
    } else {
        None
    };
    let holds = lf.as_ref().is_some_and(|t| t.is_zero());
    Ok(QuasitriangularReport {
        pass,
        cybe_residual: res,
        c_invariant: sp.c_invariant,
        lambda: sp.lambda,
        c: sp.c,
        lambda_form_residual: lf,
        lambda_form_holds: holds,
        criteria_agree: pass == holds,
    })
}

/// Σᵢ hᵢ ⊗ ∂f/∂xᵢ, with xᵢ dual to the ambient basis vector `h[i]`.
pub fn d_dr(f: &SparseTensor, h: &[usize]) -> SparseTensor {
    let plain = f.to_plain();
    let mut out = SparseTensor::plain(f.dim(), f.arity() + 1);
    for (i, &hi) in h.iter().enumerate() {
        for (k, v) in plain.entries() {
            let dv = v.derivative(i);
            if !dv.is_zero() {
                let mut key = vec![hi];
                key.extend_from_slice(k);
                out.add_at(&key, dv);
            }
        }
    }
    out
}

/// Σ_σ sgn(σ) σ(T) with no 1/3!, returned as the 3-vector X with embed(X) = Alt(T).
pub fn alt_ddr(t: &SparseTensor) -> Result<SparseTensor> {
    if t.arity() != 3 {
        return Err(Error::Input("Alt(d_dR r) expects an h⊗g⊗g tensor".into()));
    }
    Ok(antisymmetrize(t))
}

#[derive(Clone, Debug)]
pub struct DynamicalRMatrix {
    pub split: SplitSubalgebra,
    /// x_i dual to split.h[i]
    pub vars: Vec<String>,
    pub r: SparseTensor,
    pub locus: Vec<Poly>,
}

impl DynamicalRMatrix {
    /// With `locus` None the distinct denominators of r are used.
    pub fn new(split: SplitSubalgebra, vars: Vec<String>, r: SparseTensor, locus: Option<Vec<Poly>>) -> Result<Self> {
        if vars.len() != split.h.len() {
            return Err(Error::Input(format!(
                "{} coordinate variables declared for a {}-dimensional base",
                vars.len(),
                split.h.len()
            )));
        }
        let r = plain2(&r, &split.g)?;
        let dens: Vec<Poly> = {
            let d: Vec<Poly> = r.entries().filter_map(|(_, v)| v.denominator().cloned()).collect();
            let mut uniq: Vec<Poly> = Vec::new();
            for p in d {
                if !uniq.contains(&p) {
                    uniq.push(p);
                }
            }
            uniq
        };
        let locus = match locus {
            None => dens,
            Some(l) => {
                let prod = l.iter().fold(Poly::constant(crate::scalar::int(1)), |a, b| &a * b);
                if let Some(d) = dens.iter().find(|d| prod.div_exact(d).is_none()) {
                    return Err(Error::Input(format!(
                        "denominator {} does not divide the declared locus",
                        d.fmt_with(&vars)
                    )));
                }
                l
            }
        };
        Ok(DynamicalRMatrix { split, vars, r, locus })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub pass: bool,
    /// nonzero entries as (labels, value)
    pub residual: Vec<(Vec<String>, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DynamicalReport {
    pub equivariance: CheckLine,
    pub symmetric_part: CheckLine,
    pub cdybe: CheckLine,
    pub lambda_form: CheckLine,
    pub criteria_agree: bool,
}

impl DynamicalReport {
    pub fn pass(&self) -> bool {
        self.equivariance.pass && self.symmetric_part.pass && self.cdybe.pass && self.lambda_form.pass && self.criteria_agree
    }
}

pub fn describe(t: &SparseTensor, g: &LieAlgebra, vars: &[String]) -> Vec<(Vec<String>, String)> {
    t.entries()
        .map(|(k, v)| (k.iter().map(|&i| g.basis()[i].clone()).collect(), v.fmt_with(vars)))
        .collect()
}

fn line(t: &SparseTensor, g: &LieAlgebra, vars: &[String]) -> CheckLine {
    CheckLine { pass: t.is_zero(), residual: describe(t, g, vars) }
}

/// ad_ξ r − Σ_b (ad*_ξ x)(h_b) ∂r/∂x_b for each ξ ∈ h, stacked with ξ in front.
pub fn equivariance_residual(d: &DynamicalRMatrix) -> SparseTensor {
    let s = &d.split;
    let g = &s.g;
    let nh = s.h.len();
    let mut out = SparseTensor::plain(g.dim(), 3);
    for (xi_local, &xi) in s.h.iter().enumerate() {
        let mut t = g.act(xi, &d.r).to_plain();
        for b in 0..nh {
            // (ad*_ξ x)(h_b) = −x([ξ, h_b]) = −Σ_k f^k_{ξ b} x_k
            let flow: Scalar = (0..nh).map(|k| &s.fh[k][xi_local][b] * &Scalar::var(k)).sum();
            if flow.is_zero() {
                continue;
            }
            let dr = d.r.map_values(|v| v.derivative(b));
            t = t.add(&dr.scale(&flow));
        }
        for (k, v) in t.entries() {
            out.add_at(&[xi, k[0], k[1]], v.clone());
        }
    }
    out
}

pub fn dynamical_check(d: &DynamicalRMatrix) -> Result<DynamicalReport> {
    let g = &d.split.g;
    let vars = &d.vars;
    let equivariance = line(&equivariance_residual(d), g, vars);

    let sp = split_r(g, &d.r)?;
    let c_const = sp.c.all_constant();
    let sym_res = if c_const { invariance_residual(g, &sp.c)? } else { sp.c.clone() };
    let symmetric_part = CheckLine {
        pass: c_const && sym_res.is_zero(),
        residual: if c_const { describe(&sym_res, g, vars) } else { vec![(vec!["c".into()], "not constant".into())] },
    };

    let cd = cybe(g, &d.r)?.add(&alt_ddr(&d_dr(&d.r, &d.split.h))?.to_plain());
    let cdybe = line(&cd, g, vars);

    // ½⟦λ,λ⟧ − ½Alt(d_dR λ) − φ(c), which is cdybe / CYBE_LAMBDA_FACTOR
    let lambda_form = if symmetric_part.pass {
        let alt = alt_ddr(&d_dr(&sp.lambda, &d.split.h))?;
        let res = half_schouten(g, &sp.lambda)?
            .sub(&alt.scale(&Scalar::frac(1, 2)))
            .sub(&casimir_to_phi(g, &sp.c)?);
        line(&res, g, vars)
    } else {
        CheckLine { pass: false, residual: vec![(vec!["c".into()], "not a constant invariant".into())] }
    };
    let criteria_agree = !symmetric_part.pass || cdybe.pass == lambda_form.pass;
    Ok(DynamicalReport { equivariance, symmetric_part, cdybe, lambda_form, criteria_agree })
}
