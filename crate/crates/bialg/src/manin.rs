use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{direct_sum, Field, LieAlgebra};
use crate::linalg;
use crate::qlb::{check_qlb, QuasiLieBialgebra};
use crate::scalar::{fmt_rat, Rat, Scalar};
use crate::tensor::SparseTensor;

pub type Matrix = Vec<Vec<Rat>>;

fn rat_of(s: &Scalar) -> Result<Rat> {
    s.as_rat().cloned().ok_or_else(|| Error::Input("Manin data must have rational coefficients".into()))
}

fn require_rational(g: &LieAlgebra) -> Result<()> {
    if g.is_rational() {
        Ok(())
    } else {
        Err(Error::Input(format!("{} has non-constant structure constants", g.name())))
    }
}

/// κ(x, y) = tr(ad x ad y).
pub fn killing_form(g: &LieAlgebra) -> Result<Matrix> {
    require_rational(g)?;
    let n = g.dim();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let mut acc = Scalar::zero();
            for k in 0..n {
                for (l, f) in g.bracket(j, k) {
                    acc = &acc + &(f * &g.f(i, *l, k));
                }
            }
            *v = rat_of(&acc)?;
        }
    }
    Ok(out)
}

/// tr(xy) in the defining representation of sl_n, i.e. κ/(2n).
pub fn trace_form(g: &LieAlgebra) -> Result<Matrix> {
    let n = match g.name() {
        "sl2" => 2,
        "sl3" => 3,
        other => return Err(Error::Input(format!("no defining representation known for {other}"))),
    };
    let k = killing_form(g)?;
    let s = Rat::from_integer((2 * n).into());
    Ok(k.into_iter().map(|r| r.into_iter().map(|x| x / &s).collect()).collect())
}

#[derive(Clone, Debug)]
pub struct QuadraticLieAlgebra {
    pub d: LieAlgebra,
    pub pairing: Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticCheck {
    pub pass: bool,
    pub symmetric: bool,
    pub nondegenerate: bool,
    pub invariant: bool,
    /// labels of the first failing pair or triple
    pub witness: Option<Vec<String>>,
}

fn pair(p: &Matrix, x: &[Rat], y: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                acc += xi * yj * &p[i][j];
            }
        }
    }
    acc
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::from_integer(1.into());
    v
}

fn bracket(g: &LieAlgebra, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let xs: Vec<Scalar> = x.iter().cloned().map(Scalar::from).collect();
    let ys: Vec<Scalar> = y.iter().cloned().map(Scalar::from).collect();
    g.bracket_vec(&xs, &ys).iter().map(|s| s.as_rat().cloned().unwrap_or_default()).collect()
}

pub fn check_quadratic(d: &LieAlgebra, pairing: &Matrix) -> Result<QuadraticCheck> {
    require_rational(d)?;
    let n = d.dim();
    if pairing.len() != n || pairing.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("pairing must be a {n}×{n} matrix")));
    }
    let labels = d.basis();
    let mut witness = None;
    let mut symmetric = true;
    'sym: for i in 0..n {
        for j in i + 1..n {
            if pairing[i][j] != pairing[j][i] {
                symmetric = false;
                witness = Some(vec![labels[i].clone(), labels[j].clone()]);
                break 'sym;
            }
        }
    }
    let nondegenerate = linalg::rank(pairing, n) == n;
    let mut invariant = true;
    'inv: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ex, ey, ez) = (unit(n, x), unit(n, y), unit(n, z));
                let v = pair(pairing, &bracket(d, &ex, &ey), &ez) + pair(pairing, &ey, &bracket(d, &ex, &ez));
                if !v.is_zero() {
                    invariant = false;
                    if witness.is_none() {
                        witness = Some(vec![labels[x].clone(), labels[y].clone(), labels[z].clone()]);
                    }
                    break 'inv;
                }
            }
        }
    }
    Ok(QuadraticCheck { pass: symmetric && nondegenerate && invariant, symmetric, nondegenerate, invariant, witness })
}

impl QuadraticLieAlgebra {
    pub fn new(d: LieAlgebra, pairing: Matrix) -> Result<Self> {
        let c = check_quadratic(&d, &pairing)?;
        if !c.pass {
            return Err(Error::Precondition(format!("pairing is not a nondegenerate invariant form (witness {:?})", c.witness)));
        }
        Ok(QuadraticLieAlgebra { d, pairing })
    }

    pub fn unit_span(&self, idx: &[usize]) -> Result<Vec<Vec<Rat>>> {
        let n = self.d.dim();
        if let Some(i) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::Input(format!("basis index {i} out of range")));
        }
        Ok(idx.iter().map(|&i| unit(n, i)).collect())
    }
}

/// Coordinates of v in the span of `rows`, if it lies there.
fn coords(rows: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    let n = v.len();
    let m: Matrix = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    linalg::solve(&m, v, rows.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub pass: bool,
    pub independent: bool,
    pub subalgebra: bool,
    pub isotropic: bool,
    pub half_dimension: bool,
    pub witness: Option<String>,
}

fn fmt_vec(d: &LieAlgebra, v: &[Rat]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{}*{}", fmt_rat(c), d.basis()[i]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Lagrangian subalgebra test for the span of `rows`.
pub fn manin_pair_check(q: &QuadraticLieAlgebra, rows: &[Vec<Rat>]) -> PairCheck {
    let n = q.d.dim();
    let independent = linalg::rank(rows, n) == rows.len();
    let mut witness = None;
    let mut subalgebra = true;
    'sub: for (a, x) in rows.iter().enumerate() {
        for y in &rows[a + 1..] {
            let z = bracket(&q.d, x, y);
            if coords(rows, &z).is_none() {
                subalgebra = false;
                witness = Some(format!("[{}, {}] leaves the span", fmt_vec(&q.d, x), fmt_vec(&q.d, y)));
                break 'sub;
            }
        }
    }
    let mut isotropic = true;
    'iso: for (a, x) in rows.iter().enumerate() {
        for y in &rows[a..] {
            if !pair(&q.pairing, x, y).is_zero() {
                isotropic = false;
                if witness.is_none() {
                    witness = Some(format!("<{}, {}> ≠ 0", fmt_vec(&q.d, x), fmt_vec(&q.d, y)));
                }
                break 'iso;
            }
        }
    }
    let half_dimension = 2 * rows.len() == n;
    PairCheck { pass: independent && subalgebra && isotropic && half_dimension, independent, subalgebra, isotropic, half_dimension, witness }
}

#[derive(Clone, Debug)]
pub struct ManinTriple {
    pub q: QuadraticLieAlgebra,
    pub g: Vec<Vec<Rat>>,
    pub gstar: Vec<Vec<Rat>>,
    pub g_labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleCheck {
    pub pass: bool,
    pub quadratic: QuadraticCheck,
    pub g: PairCheck,
    pub gstar: PairCheck,
    pub transversal: bool,
}

impl ManinTriple {
    pub fn check(&self) -> Result<TripleCheck> {
        let quadratic = check_quadratic(&self.q.d, &self.q.pairing)?;
        let g = manin_pair_check(&self.q, &self.g);
        let gstar = manin_pair_check(&self.q, &self.gstar);
        let all: Vec<Vec<Rat>> = self.g.iter().chain(&self.gstar).cloned().collect();
        let transversal = linalg::rank(&all, self.q.d.dim()) == self.q.d.dim();
        Ok(TripleCheck { pass: quadratic.pass && g.pass && gstar.pass && transversal, quadratic, g, gstar, transversal })
    }
}

fn add(a: &[Rat], b: &[Rat], s: i64) -> Vec<Rat> {
    let s = Rat::from_integer(s.into());
    a.iter().zip(b).map(|(x, y)| x + y * &s).collect()
}

/// d = g ⊕ g with κ ⊖ κ, Δ(g), and g* = {(x₊, x₋) ∈ b₊ ⊕ b₋ : h-parts add to zero}.
pub fn dual_subalgebra_bplus_bminus(g: &LieAlgebra) -> Result<ManinTriple> {
    let form = trace_form(g).map_err(|_| Error::Input(format!("no Borel data for {}", g.name())))?;
    let n = g.dim();
    let d = direct_sum(g, g)?;
    let mut pairing = vec![vec![Rat::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            pairing[i][j] = form[i][j].clone();
            pairing[n + i][n + j] = -form[i][j].clone();
        }
    }
    let q = QuadraticLieAlgebra::new(d, pairing)?;
    let diag: Vec<Vec<Rat>> = (0..n).map(|i| add(&unit(2 * n, i), &unit(2 * n, n + i), 1)).collect();
    let mut gstar = Vec::new();
    for (i, l) in g.basis().iter().enumerate() {
        match l.chars().next() {
            Some('e') => gstar.push(unit(2 * n, i)),
            Some('f') => gstar.push(unit(2 * n, n + i)),
            Some('h') => gstar.push(add(&unit(2 * n, i), &unit(2 * n, n + i), -1)),
            _ => return Err(Error::Input(format!("no Borel data for {}", g.name()))),
        }
    }
    Ok(ManinTriple { q, g: diag, gstar, g_labels: g.basis().to_vec() })
}

/// g with the bracket restricted from d, and δ dual to the bracket of g*.
pub fn triple_to_bialgebra(t: &ManinTriple) -> Result<QuasiLieBialgebra> {
    let c = t.check()?;
    if !c.pass {
        return Err(Error::Precondition("input is not a Manin triple".into()));
    }
    let n = t.g.len();
    let d = &t.q.d;
    let mut br = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let z = coords(&t.g, &bracket(d, &t.g[i], &t.g[j])).expect("checked subalgebra");
            let v: Vec<(usize, Scalar)> = z.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, Scalar::from(c))).collect();
            if !v.is_empty() {
                br.push((i, j, v));
            }
        }
    }
    let g = LieAlgebra::new("g", t.g_labels.clone(), Field::Rational, br)?;
    // ξ^i ∈ g* with <g_k, ξ^i> = δ
    let m: Matrix = (0..n).map(|k| t.gstar.iter().map(|y| pair(&t.q.pairing, &t.g[k], y)).collect()).collect();
    let mut dual = Vec::new();
    for i in 0..n {
        let a = linalg::solve(&m, &unit(n, i), n).ok_or_else(|| Error::Arithmetic("pairing between g and g* is degenerate".into()))?;
        let mut v = vec![Rat::zero(); d.dim()];
        for (j, aj) in a.iter().enumerate() {
            v = add(&v, &t.gstar[j].iter().map(|x| x * aj).collect::<Vec<_>>(), 1);
        }
        dual.push(v);
    }
    let mut delta = SparseTensor::cobracket(n);
    for i in 0..n {
        for j in i + 1..n {
            let z = bracket(d, &dual[i], &dual[j]);
            for (k, gk) in t.g.iter().enumerate() {
                delta.add_at(&[k, i, j], Scalar::from(pair(&t.q.pairing, gk, &z)));
            }
        }
    }
    QuasiLieBialgebra::new(g, delta, SparseTensor::multivector(n, 3))
}

/// d = g ⊕ g* with <x + ξ, y + η> = ξ(y) + η(x). No axiom check: Jacobi of
/// the result is the test.
pub fn double_algebra(b: &QuasiLieBialgebra) -> Result<QuadraticLieAlgebra> {
    if !b.phi.is_zero() {
        return Err(Error::Precondition("the Drinfeld double needs φ = 0".into()));
    }
    require_rational(&b.g)?;
    let g = &b.g;
    let n = g.dim();
    let mut labels = g.basis().to_vec();
    labels.extend(g.basis().iter().map(|l| format!("{l}*")));
    let mut br = g.upper_brackets();
    // [ξ^i, ξ^j] = δ^{ij}_k ξ^k
    for i in 0..n {
        for j in i + 1..n {
            let v: Vec<(usize, Scalar)> = (0..n).map(|k| (n + k, b.delta.get(&[k, i, j]))).filter(|(_, c)| !c.is_zero()).collect();
            if !v.is_empty() {
                br.push((n + i, n + j, v));
            }
        }
    }
    // [x_i, ξ^j] = −f^j_{ik} ξ^k + δ^{jk}_i x_k
    for i in 0..n {
        for j in 0..n {
            let mut v: Vec<(usize, Scalar)> = Vec::new();
            for k in 0..n {
                let a = -g.f(i, k, j);
                if !a.is_zero() {
                    v.push((n + k, a));
                }
                let c = b.delta.get(&[i, j, k]);
                if !c.is_zero() {
                    v.push((k, c));
                }
            }
            if !v.is_empty() {
                br.push((i, n + j, v));
            }
        }
    }
    let d = LieAlgebra::new(&format!("D({})", g.name()), labels, Field::Rational, br)?;
    let mut pairing = vec![vec![Rat::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        pairing[i][n + i] = Rat::from_integer(1.into());
        pairing[n + i][i] = Rat::from_integer(1.into());
    }
    Ok(QuadraticLieAlgebra { d, pairing })
}

pub fn drinfeld_double(b: &QuasiLieBialgebra) -> Result<ManinTriple> {
    if !b.phi.is_zero() {
        return Err(Error::Precondition("the Drinfeld double needs φ = 0".into()));
    }
    let r = check_qlb(b);
    if !r.pass() {
        return Err(Error::Precondition(format!("input is not a Lie bialgebra (residual supports {:?})", r.supports())));
    }
    let q = double_algebra(b)?;
    let n = b.g.dim();
    let g = q.unit_span(&(0..n).collect::<Vec<_>>())?;
    let gstar = q.unit_span(&(n..2 * n).collect::<Vec<_>>())?;
    Ok(ManinTriple { q, g, gstar, g_labels: b.g.basis().to_vec() })
}
