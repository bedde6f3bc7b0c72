use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bigbracket::{BigBracketElement, Shift};
use crate::error::{Error, Result};
use crate::lie::{ce_differential, cochain_basis, differential_matrix, CECochain, LieAlgebra, Module};
use crate::qlb::QuasiLieBialgebra;
use crate::scalar::{fmt_rat, Rat, Scalar};
use crate::tensor::{Key, SparseTensor};

pub const MAX_WINDOW: usize = 4;
pub const MAX_BASIS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    /// highest CE degree kept
    pub max_degree: usize,
    /// highest weight kept; weights above it are the completion cutoff
    pub max_weight: usize,
}

impl Window {
    pub fn default_for(shift: Shift) -> Window {
        match shift {
            Shift::One => Window { max_degree: 3, max_weight: 4 },
            Shift::Two => Window { max_degree: 2, max_weight: 3 },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Slice {
    pub ce_degree: usize,
    pub weight: usize,
    /// degree after the shift, so MC elements sit in degree 1
    pub degree: i64,
    pub basis: Vec<Key>,
}

/// Pol(Bg, n)^{≥2}[n+1] cut to a finite window: the (k, p) slice is
/// C^k(g, Sym^p(g[-n])) in cochain-component coordinates.
#[derive(Clone, Debug)]
pub struct WeightGradedDGLA {
    pub g: LieAlgebra,
    pub shift: Shift,
    pub window: Window,
    pub slices: Vec<Slice>,
}

/// One component tensor per (CE degree, weight).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LElement {
    pub parts: BTreeMap<(usize, usize), SparseTensor>,
}

pub type MCElement = LElement;

impl LElement {
    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|t| t.is_zero())
    }

    fn insert(&mut self, kp: (usize, usize), t: SparseTensor) {
        if t.is_zero() {
            return;
        }
        match self.parts.get_mut(&kp) {
            Some(cur) => {
                *cur = cur.add(&t);
                if cur.is_zero() {
                    self.parts.remove(&kp);
                }
            }
            None => {
                self.parts.insert(kp, t);
            }
        }
    }

    pub fn add(&self, o: &LElement) -> LElement {
        let mut out = self.clone();
        for (kp, t) in &o.parts {
            out.insert(*kp, t.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LElement {
        let mut out = LElement::default();
        for (kp, t) in &self.parts {
            out.insert(*kp, t.scale(c));
        }
        out
    }

    pub fn part(&self, k: usize, p: usize) -> Option<&SparseTensor> {
        self.parts.get(&(k, p))
    }
}

fn module(shift: Shift, p: usize) -> Module {
    match shift {
        Shift::One => Module::Wedge(p),
        Shift::Two => Module::Sym(p),
    }
}

pub fn pol_bg(g: &LieAlgebra, shift: Shift) -> Result<WeightGradedDGLA> {
    pol_bg_window(g, shift, Window::default_for(shift))
}

pub fn pol_bg_window(g: &LieAlgebra, shift: Shift, window: Window) -> Result<WeightGradedDGLA> {
    if window.max_degree > MAX_WINDOW || window.max_weight > MAX_WINDOW {
        return Err(Error::Size(format!(
            "window (degree {}, weight {}) exceeds the supported {MAX_WINDOW}",
            window.max_degree, window.max_weight
        )));
    }
    let n = g.dim();
    let mut slices = Vec::new();
    let mut total = 0;
    for p in 2..=window.max_weight {
        for k in 0..=window.max_degree.min(n) {
            let basis = cochain_basis(n, k, module(shift, p));
            if basis.is_empty() {
                continue;
            }
            total += basis.len();
            if total > MAX_BASIS {
                return Err(Error::Size(format!("Pol(B{}, {}) window has more than {MAX_BASIS} basis elements", g.name(), shift.n())));
            }
            slices.push(Slice { ce_degree: k, weight: p, degree: degree_of(shift, k, p), basis });
        }
    }
    Ok(WeightGradedDGLA { g: g.clone(), shift, window, slices })
}

fn degree_of(shift: Shift, k: usize, p: usize) -> i64 {
    let n = shift.n() as i64;
    k as i64 + n * p as i64 - (n + 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureCheck {
    pub d_squared: bool,
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub weight_additivity: bool,
    pub witness: Option<String>,
}

impl StructureCheck {
    pub fn pass(&self) -> bool {
        self.d_squared && self.antisymmetry && self.jacobi && self.weight_additivity
    }
}

impl WeightGradedDGLA {
    pub fn degree(&self, k: usize, p: usize) -> i64 {
        degree_of(self.shift, k, p)
    }

    pub fn basis_len(&self) -> usize {
        self.slices.iter().map(|s| s.basis.len()).sum()
    }

    fn in_window(&self, k: usize, p: usize) -> bool {
        k <= self.window.max_degree && (2..=self.window.max_weight).contains(&p)
    }

    pub fn slice_shape(&self, k: usize, p: usize) -> SparseTensor {
        CECochain::zero(self.g.dim(), k, module(self.shift, p)).tensor
    }

    pub fn basis_element(&self, k: usize, p: usize, key: &[usize]) -> LElement {
        let mut t = self.slice_shape(k, p);
        t.add_at(key, Scalar::one());
        let mut out = LElement::default();
        out.insert((k, p), t);
        out
    }

    /// Reads a tensor whose slot signature fixes its (k, p).
    pub fn element_from_tensor(&self, t: &SparseTensor) -> Result<LElement> {
        let e = BigBracketElement::from_tensor(t, self.shift)?;
        self.from_big(&e)
    }

    pub fn mc_from_qlb(&self, q: &QuasiLieBialgebra) -> Result<MCElement> {
        if self.shift != Shift::One {
            return Err(Error::Input("quasi-Lie bialgebras are MC elements of Pol(Bg, 1)".into()));
        }
        Ok(self.element_from_tensor(&q.delta)?.add(&self.element_from_tensor(&q.phi)?))
    }

    fn to_big(&self, x: &LElement) -> Result<BigBracketElement> {
        let mut out = BigBracketElement::zero(self.g.dim(), self.shift);
        for t in x.parts.values() {
            out = out.add(&BigBracketElement::from_tensor(t, self.shift)?);
        }
        Ok(out)
    }

    fn from_big(&self, e: &BigBracketElement) -> Result<LElement> {
        let mut out = LElement::default();
        for (k, p) in e.bidegrees() {
            if p > self.window.max_weight {
                continue;
            }
            if !self.in_window(k, p) {
                return Err(Error::Size(format!("component (CE degree {k}, weight {p}) lies outside the window")));
            }
            out.insert((k, p), e.component(k, p));
        }
        Ok(out)
    }

    pub fn l_degrees(&self, x: &LElement) -> Vec<i64> {
        let mut d: Vec<i64> = x.parts.keys().map(|&(k, p)| self.degree(k, p)).collect();
        d.dedup();
        d
    }

    pub fn differential(&self, x: &LElement) -> Result<LElement> {
        let mut out = LElement::default();
        for (&(k, p), t) in &x.parts {
            let c = CECochain::new(k, module(self.shift, p), t.clone())?;
            let d = ce_differential(&self.g, &c)?.tensor;
            if d.is_zero() {
                continue;
            }
            if k + 1 > self.window.max_degree {
                return Err(Error::Size(format!("d leaves the window at CE degree {}", k + 1)));
            }
            out.insert((k + 1, p), d);
        }
        Ok(out)
    }

    pub fn bracket(&self, a: &LElement, b: &LElement) -> Result<LElement> {
        let r = self.to_big(a)?.bracket(&self.to_big(b)?)?;
        self.from_big(&r)
    }

    /// Matrix of d from slice (k, p) to (k+1, p), in the cochain bases.
    pub fn differential_matrix(&self, k: usize, p: usize) -> Result<Vec<Vec<Rat>>> {
        differential_matrix(&self.g, k, module(self.shift, p))
    }

    pub fn check_d_squared(&self) -> Result<bool> {
        for s in &self.slices {
            let (k, p) = (s.ce_degree, s.weight);
            if k + 2 > self.g.dim() {
                continue;
            }
            let d1 = self.differential_matrix(k, p)?;
            let d2 = self.differential_matrix(k + 1, p)?;
            for row in &d2 {
                for j in 0..s.basis.len() {
                    let v: Rat = row.iter().zip(&d1).map(|(a, r)| a * &r[j]).sum();
                    if v != Rat::default() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Exhaustive over basis pairs and triples whose brackets stay inside
    /// the window; `limit` bounds the number of basis elements visited.
    pub fn check_structure(&self, limit: usize) -> Result<StructureCheck> {
        if self.basis_len() > limit {
            return Err(Error::Size(format!("{} basis elements exceed the structure-check limit {limit}", self.basis_len())));
        }
        let d_squared = self.check_d_squared()?;
        let mut basis: Vec<(usize, usize, LElement)> = Vec::new();
        for s in &self.slices {
            for key in &s.basis {
                basis.push((s.ce_degree, s.weight, self.basis_element(s.ce_degree, s.weight, key)));
            }
        }
        let (kmax, wmax) = (self.window.max_degree, self.window.max_weight);
        let sign = |a: i64, b: i64| if (a * b).rem_euclid(2) == 0 { Scalar::one() } else { Scalar::from(-1) };
        let mut witness = None;
        let mut antisymmetry = true;
        let mut weight_additivity = true;
        let mut pair_cache: BTreeMap<(usize, usize), LElement> = BTreeMap::new();
        for (i, (ka, pa, a)) in basis.iter().enumerate() {
            for (j, (kb, pb, b)) in basis.iter().enumerate() {
                if ka + kb > kmax + 1 {
                    continue;
                }
                let ab = self.bracket(a, b)?;
                if ab.parts.keys().any(|&(k, p)| p != pa + pb - 1 || k + 1 != ka + kb) {
                    weight_additivity = false;
                    witness.get_or_insert(format!("bracket of basis elements {i} and {j} has the wrong bidegree"));
                }
                if j <= i {
                    let ba = self.bracket(b, a)?;
                    let s = sign(self.degree(*ka, *pa), self.degree(*kb, *pb));
                    if ab.add(&ba.scale(&s)) != LElement::default() {
                        antisymmetry = false;
                        witness.get_or_insert(format!("graded antisymmetry fails on basis elements {i}, {j}"));
                    }
                }
                pair_cache.insert((i, j), ab);
            }
        }
        let mut jacobi = true;
        'outer: for (i, (ka, pa, a)) in basis.iter().enumerate() {
            for (j, (kb, pb, b)) in basis.iter().enumerate() {
                for (l, (kc, pc, c)) in basis.iter().enumerate() {
                    if pa + pb + pc - 2 > wmax || ka + kb + kc > kmax + 2 {
                        continue;
                    }
                    let (Some(ab), Some(ac), Some(bc)) = (pair_cache.get(&(i, j)), pair_cache.get(&(i, l)), pair_cache.get(&(j, l))) else {
                        continue;
                    };
                    let lhs = self.bracket(a, bc)?;
                    let s = sign(self.degree(*ka, *pa), self.degree(*kb, *pb));
                    let rhs = self.bracket(ab, c)?.add(&self.bracket(b, ac)?.scale(&s));
                    if lhs != rhs {
                        jacobi = false;
                        witness.get_or_insert(format!("Jacobi fails on basis elements {i}, {j}, {l}"));
                        break 'outer;
                    }
                }
            }
        }
        Ok(StructureCheck { d_squared, antisymmetry, jacobi, weight_additivity, witness })
    }

    pub fn to_json(&self) -> Result<Value> {
        let labels = self.g.basis();
        let n = self.shift.n();
        let fmt_key = |k: usize, key: &Key| -> String {
            let lower: Vec<String> = key[..k].iter().map(|&i| format!("{}^", labels[i])).collect();
            let upper: Vec<&str> = key[k..].iter().map(|&i| labels[i].as_str()).collect();
            format!("{} | {}", lower.join(" "), upper.join(" "))
        };
        let slices: Vec<Value> = self
            .slices
            .iter()
            .map(|s| {
                json!({
                    "ce_degree": s.ce_degree,
                    "weight": s.weight,
                    "degree": s.degree,
                    "basis": s.basis.iter().map(|b| fmt_key(s.ce_degree, b)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut diffs = Vec::new();
        for s in &self.slices {
            let (k, p) = (s.ce_degree, s.weight);
            if !self.slices.iter().any(|t| t.ce_degree == k + 1 && t.weight == p) {
                continue;
            }
            let m = self.differential_matrix(k, p)?;
            let entries: Vec<Value> = m
                .iter()
                .enumerate()
                .flat_map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, v)| **v != Rat::default())
                        .map(move |(c, v)| json!([r, c, fmt_rat(v)]))
                })
                .collect();
            diffs.push(json!({ "source": [k, p], "target": [k + 1, p], "rows": m.len(), "cols": s.basis.len(), "entries": entries }));
        }
        let pairing_sign = if n == 1 { 1 } else { -1 };
        Ok(json!({
            "algebra": self.g.name(),
            "labels": labels,
            "shift": n,
            "window": self.window,
            "mc_degree_before_shift": n + 2,
            "slices": slices,
            "differential": diffs,
            "bracket": {
                "kind": "biderivation extension of the generator pairing",
                "pairing": { "covector_vector": 1, "vector_covector": pairing_sign },
                "degree": 0,
                "weight": -1,
            },
        }))
    }
}

/// dx + ½[x, x].
pub fn mc_residual(l: &WeightGradedDGLA, x: &MCElement) -> Result<LElement> {
    for &(k, p) in x.parts.keys() {
        if l.degree(k, p) != 1 {
            return Err(Error::Input(format!("component (CE degree {k}, weight {p}) has degree {} instead of 1", l.degree(k, p))));
        }
        if p < 2 {
            return Err(Error::Input("MC elements live in weights ≥ 2".into()));
        }
    }
    Ok(l.differential(x)?.add(&l.bracket(x, x)?.scale(&Scalar::frac(1, 2))))
}

/// α(t) = Σ alpha[i] tⁱ driven by the degree-0 element λ.
#[derive(Clone, Debug)]
pub struct GaugePath {
    pub lambda: LElement,
    pub alpha: Vec<LElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeReport {
    pub pass: bool,
    pub starts_at_x: bool,
    pub ends_at_y: bool,
    /// dα/dt + dλ + [α, λ] ≡ 0
    pub ode: bool,
    pub mc_along_path: bool,
    /// lowest power of t where the ODE or MC identity fails
    pub failing_order: Option<usize>,
}

pub fn gauge_verify(l: &WeightGradedDGLA, x: &MCElement, y: &MCElement, path: &GaugePath) -> Result<GaugeReport> {
    let deg = path.alpha.len();
    if deg > l.window.max_weight + 1 {
        return Err(Error::Size(format!("path of t-degree {} exceeds the weight cutoff", deg.saturating_sub(1))));
    }
    let zero = LElement::default();
    let a = |i: usize| path.alpha.get(i).unwrap_or(&zero);
    let starts_at_x = a(0) == x;
    let end = path.alpha.iter().fold(LElement::default(), |s, t| s.add(t));
    let ends_at_y = &end == y;
    let dl = l.differential(&path.lambda)?;
    let mut failing = None;
    let mut ode = true;
    for m in 0..deg.max(1) {
        let mut c = a(m + 1).scale(&Scalar::from((m + 1) as i64)).add(&l.bracket(a(m), &path.lambda)?);
        if m == 0 {
            c = c.add(&dl);
        }
        if !c.is_zero() {
            ode = false;
            failing = Some(failing.map_or(m, |f: usize| f.min(m)));
            break;
        }
    }
    let mut mc = true;
    for m in 0..(2 * deg).max(1) {
        let mut c = if m < deg { l.differential(a(m))? } else { LElement::default() };
        for i in 0..=m {
            if i < deg && m - i < deg {
                c = c.add(&l.bracket(a(i), a(m - i))?.scale(&Scalar::frac(1, 2)));
            }
        }
        if !c.is_zero() {
            mc = false;
            failing = Some(failing.map_or(m, |f: usize| f.min(m)));
            break;
        }
    }
    Ok(GaugeReport { pass: starts_at_x && ends_at_y && ode && mc, starts_at_x, ends_at_y, ode, mc_along_path: mc, failing_order: failing })
}

/// The path realizing the twist of q by λ: the gauge element is −λ, and
/// δ(t) = δ₀ + t dλ, φ(t) = φ₀ + t[δ₀, λ] + t²/2 [dλ, λ].
pub fn twist_path(l: &WeightGradedDGLA, q: &QuasiLieBialgebra, lambda: &SparseTensor) -> Result<GaugePath> {
    let x = l.mc_from_qlb(q)?;
    let lam = l.element_from_tensor(lambda)?;
    let dl = l.differential(&lam)?;
    let delta0 = l.element_from_tensor(&q.delta)?;
    let a1 = dl.add(&l.bracket(&delta0, &lam)?);
    let a2 = l.bracket(&dl, &lam)?.scale(&Scalar::frac(1, 2));
    Ok(GaugePath { lambda: lam.scale(&Scalar::from(-1)), alpha: vec![x, a1, a2] })
}
