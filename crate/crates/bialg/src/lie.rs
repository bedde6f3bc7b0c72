use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Rat, Scalar};
use crate::tensor::{Key, SlotGroup, SparseTensor, Symmetry, Variance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Field {
    Rational,
    Ratfun { vars: Vec<String> },
}

impl Field {
    pub fn vars(&self) -> &[String] {
        match self {
            Field::Rational => &[],
            Field::Ratfun { vars } => vars,
        }
    }
}

type Bracket = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    field: Field,
    table: Vec<Vec<Bracket>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieCheck {
    pub pass: bool,
    pub antisymmetry: bool,
    pub jacobi: bool,
    /// Basis labels of the first failing pair or triple, plus the output label.
    pub witness: Option<Vec<String>>,
    pub residual: Option<String>,
}

impl LieAlgebra {
    /// `brackets` lists [x_i, x_j] for any ordered pairs; an unlisted reverse
    /// pair is filled in by antisymmetry.
    pub fn new(name: &str, basis: Vec<String>, field: Field, brackets: Vec<(usize, usize, Bracket)>) -> Result<Self> {
        let n = basis.len();
        if basis.iter().unique().count() != n {
            return Err(Error::Input("duplicate basis labels".into()));
        }
        let mut given: BTreeMap<(usize, usize), Bracket> = BTreeMap::new();
        for (i, j, b) in brackets {
            if i >= n || j >= n || b.iter().any(|(k, _)| *k >= n) {
                return Err(Error::Input(format!("bracket index out of range in [{i},{j}]")));
            }
            if given.insert((i, j), b).is_some() {
                return Err(Error::Input(format!("bracket [{},{}] listed twice", basis[i], basis[j])));
            }
        }
        let mut table = vec![vec![Vec::new(); n]; n];
        for (&(i, j), b) in &given {
            table[i][j] = normalize(b);
            if i != j && !given.contains_key(&(j, i)) {
                table[j][i] = b.iter().map(|(k, v)| (*k, -v)).collect();
                table[j][i] = normalize(&table[j][i]);
            }
        }
        Ok(LieAlgebra { name: name.to_string(), basis, field, table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn indices(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::Input(format!("unknown basis label {l:?}"))))
            .collect()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.table[i][j].iter().find(|(c, _)| *c == k).map(|(_, v)| v.clone()).unwrap_or_default()
    }

    pub fn is_rational(&self) -> bool {
        self.table.iter().flatten().flatten().all(|(_, v)| v.is_constant())
    }

    /// Listed brackets [x_i, x_j] with i < j, nonzero only.
    pub fn upper_brackets(&self) -> Vec<(usize, usize, Bracket)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.table[i][j].is_empty() {
                    out.push((i, j, self.table[i][j].clone()));
                }
            }
        }
        out
    }

    pub fn bracket_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, f) in &self.table[i][j] {
                    out[*k] = &out[*k] + &(&c * f);
                }
            }
        }
        out
    }

    pub fn check(&self) -> LieCheck {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let s = &self.f(i, j, k) + &self.f(j, i, k);
                    if !s.is_zero() {
                        return LieCheck {
                            pass: false,
                            antisymmetry: false,
                            jacobi: false,
                            witness: Some(vec![self.basis[i].clone(), self.basis[j].clone(), self.basis[k].clone()]),
                            residual: Some(s.fmt_with(self.field.vars())),
                        };
                    }
                }
            }
        }
        for (i, j, k) in (0..n).tuple_combinations() {
            let mut acc = vec![Scalar::zero(); n];
            for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                for (m, f1) in &self.table[a][b] {
                    for (l, f2) in &self.table[*m][c] {
                        acc[*l] = &acc[*l] + &(f1 * f2);
                    }
                }
            }
            if let Some(l) = acc.iter().position(|v| !v.is_zero()) {
                return LieCheck {
                    pass: false,
                    antisymmetry: true,
                    jacobi: false,
                    witness: Some(vec![self.basis[i].clone(), self.basis[j].clone(), self.basis[k].clone(), self.basis[l].clone()]),
                    residual: Some(acc[l].fmt_with(self.field.vars())),
                };
            }
        }
        LieCheck { pass: true, antisymmetry: true, jacobi: true, witness: None, residual: None }
    }

    /// Adjoint action of basis element `a` on every slot of `t`: upper slots by
    /// ad, lower slots by the coadjoint action.
    pub fn act(&self, a: usize, t: &SparseTensor) -> SparseTensor {
        let plain = t.to_plain();
        let var = plain.variances();
        let mut out = SparseTensor::zeros(t.dim(), plain.groups().to_vec());
        for (k, v) in plain.entries() {
            for s in 0..k.len() {
                match var[s] {
                    Variance::Upper => {
                        for (c, f) in &self.table[a][k[s]] {
                            let mut nk = k.clone();
                            nk[s] = *c;
                            out.add_at(&nk, f * v);
                        }
                    }
                    Variance::Lower => {
                        // (ξ·α)(y) = −α([ξ,y]): e^{k_s} picks up −f^{k_s}_{a b} e^b
                        for b in 0..self.dim() {
                            let f = self.f(a, b, k[s]);
                            if !f.is_zero() {
                                let mut nk = k.clone();
                                nk[s] = b;
                                out.add_at(&nk, -(&f * v));
                            }
                        }
                    }
                }
            }
        }
        restrict(&out, t.groups())
    }
}

fn normalize(b: &[(usize, Scalar)]) -> Bracket {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, v) in b {
        let e = m.entry(*k).or_default();
        *e = &*e + v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Reads a plain tensor known to carry the symmetry of `groups`.
pub(crate) fn restrict(plain: &SparseTensor, groups: &[SlotGroup]) -> SparseTensor {
    let mut out = SparseTensor::zeros(plain.dim(), groups.to_vec());
    for (k, v) in plain.entries() {
        if let Some((1, ck)) = out.canonicalize(k) {
            if &ck == k {
                out.set(k, v.clone());
            }
        }
    }
    out
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::new(&format!("abelian{n}"), labels("x", n), Field::Rational, vec![]).expect("valid")
}

pub fn sl2() -> LieAlgebra {
    simply_laced("sl2", &[vec![2]]).expect("A1 Cartan matrix")
}

pub fn sl3() -> LieAlgebra {
    simply_laced("sl3", &[vec![2, -1], vec![-1, 2]]).expect("A2 Cartan matrix")
}

/// [x, y] = z.
pub fn heisenberg3() -> LieAlgebra {
    let s = |v: &str| v.to_string();
    LieAlgebra::new("heisenberg3", vec![s("x"), s("y"), s("z")], Field::Rational, vec![(0, 1, vec![(2, Scalar::one())])])
        .expect("valid")
}

pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra> {
    if a.field != b.field {
        return Err(Error::Input("direct sum of algebras over different fields".into()));
    }
    let clash = a.basis.iter().any(|x| b.basis.contains(x));
    let rename = |alg: &LieAlgebra, tag: &str| -> Vec<String> {
        if clash {
            alg.basis.iter().map(|x| format!("{x}.{tag}")).collect()
        } else {
            alg.basis.clone()
        }
    };
    let mut basis = rename(a, "1");
    basis.extend(rename(b, "2"));
    let off = a.dim();
    let mut br = a.upper_brackets();
    for (i, j, v) in b.upper_brackets() {
        br.push((i + off, j + off, v.into_iter().map(|(k, c)| (k + off, c)).collect()));
    }
    LieAlgebra::new(&format!("{}+{}", a.name, b.name), basis, a.field.clone(), br)
}

/// Chevalley basis of a simply-laced algebra from its Cartan matrix, built on
/// the root lattice with a bimultiplicative sign cocycle. Basis order:
/// positive root vectors e_α, then f_α, then the simple coroots h_i.
pub fn simply_laced(name: &str, cartan: &[Vec<i64>]) -> Result<LieAlgebra> {
    let r = cartan.len();
    for i in 0..r {
        if cartan[i].len() != r || cartan[i][i] != 2 {
            return Err(Error::Input("malformed Cartan matrix".into()));
        }
        for j in 0..r {
            if cartan[i][j] != cartan[j][i] || (i != j && !(cartan[i][j] == 0 || cartan[i][j] == -1)) {
                return Err(Error::Input("only simply-laced Cartan matrices are supported".into()));
            }
        }
    }
    let form = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += a[i] * cartan[i][j] * b[j];
            }
        }
        s
    };
    let unit = |i: usize| -> Vec<i64> { (0..r).map(|j| (i == j) as i64).collect() };
    // positive roots by height
    let mut pos: Vec<Vec<i64>> = (0..r).map(unit).collect();
    let mut frontier = pos.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for i in 0..r {
                let mut down = a.clone();
                down[i] -= 1;
                let p = if down.iter().all(|&x| x >= 0) && pos.contains(&down) { 1 } else { 0 };
                let q = p - form(a, &unit(i));
                if q >= 1 {
                    let mut up = a.clone();
                    up[i] += 1;
                    if !pos.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        pos.extend(next.iter().cloned());
        frontier = next;
    }
    pos.sort_by_key(|a| (a.iter().sum::<i64>(), a.iter().map(|x| -x).collect::<Vec<_>>()));
    let np = pos.len();
    let eps_simple = |i: usize, j: usize| -> i64 {
        if i == j || (i < j && cartan[i][j] % 2 != 0) {
            -1
        } else {
            1
        }
    };
    let eps = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 1;
        for i in 0..r {
            for j in 0..r {
                if eps_simple(i, j) == -1 && (a[i] * b[j]).rem_euclid(2) == 1 {
                    s = -s;
                }
            }
        }
        s
    };
    // E_α for α ∈ ±pos; basis element e_α = E_α, f_α = −E_{−α}
    let all: Vec<Vec<i64>> = pos.iter().cloned().chain(pos.iter().map(|a| a.iter().map(|x| -x).collect())).collect();
    let root_index = |a: &[i64]| all.iter().position(|b| b.as_slice() == a);
    let basis_sign = |idx: usize| -> i64 { if idx < np { 1 } else { -1 } };
    let label = |a: &[i64]| -> String {
        a.iter().enumerate().filter(|(_, &c)| c != 0).flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c.unsigned_abs() as usize)).map(|i| i.to_string()).collect::<String>()
    };
    let mut basis: Vec<String> = Vec::new();
    if r == 1 {
        basis.extend(["e".to_string(), "f".to_string(), "h".to_string()]);
    } else {
        basis.extend(pos.iter().map(|a| format!("e{}", label(a))));
        basis.extend(pos.iter().map(|a| format!("f{}", label(a))));
        basis.extend((1..=r).map(|i| format!("h{i}")));
    }
    let hoff = 2 * np;
    let mut br: Vec<(usize, usize, Bracket)> = Vec::new();
    let coroot = |a: &[i64]| -> Bracket { (0..r).filter(|&i| a[i] != 0).map(|i| (hoff + i, Scalar::from(a[i]))).collect() };
    for x in 0..all.len() {
        for y in x + 1..all.len() {
            let (a, b) = (&all[x], &all[y]);
            let sum: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
            let sxy = basis_sign(x) * basis_sign(y);
            if sum.iter().all(|&c| c == 0) {
                // [E_α, E_{−α}] = −α
                let v: Bracket = coroot(a).into_iter().map(|(k, c)| (k, -(&c * &Scalar::from(sxy)))).collect();
                br.push((x, y, v));
            } else if let Some(z) = root_index(&sum) {
                let c = eps(a, b) * sxy * basis_sign(z);
                br.push((x, y, vec![(z, Scalar::from(c))]));
            }
        }
        for i in 0..r {
            // [h_i, E_α] = (α_i|α) E_α
            let c = form(&unit(i), &all[x]);
            if c != 0 {
                br.push((hoff + i, x, vec![(x, Scalar::from(c))]));
            }
        }
    }
    LieAlgebra::new(name, basis, Field::Rational, br)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Module {
    Trivial,
    Wedge(usize),
    Sym(usize),
    Tensor(usize),
}

impl Module {
    pub fn groups(&self) -> Vec<SlotGroup> {
        match *self {
            Module::Trivial => vec![],
            Module::Wedge(p) => vec![SlotGroup::upper(p, Symmetry::Anti)],
            Module::Sym(p) => vec![SlotGroup::upper(p, Symmetry::Sym)],
            Module::Tensor(p) => vec![SlotGroup::upper(p, Symmetry::None)],
        }
    }

    pub fn basis(&self, n: usize) -> Vec<Key> {
        match *self {
            Module::Trivial => vec![vec![]],
            Module::Wedge(p) => (0..n).combinations(p).collect(),
            Module::Sym(p) => (0..n).combinations_with_replacement(p).collect(),
            Module::Tensor(0) => vec![vec![]],
            Module::Tensor(p) => (0..p).map(|_| 0..n).multi_cartesian_product().collect(),
        }
    }

    pub fn parse(s: &str) -> Result<Module> {
        match s {
            "trivial" => Ok(Module::Trivial),
            "sym2" => Ok(Module::Sym(2)),
            "wedge2" => Ok(Module::Wedge(2)),
            "wedge3" => Ok(Module::Wedge(3)),
            "tensor2" => Ok(Module::Tensor(2)),
            _ => Err(Error::Input(format!("unknown module {s:?}; expected trivial|sym2|wedge2|wedge3|tensor2"))),
        }
    }
}

/// A k-cochain of g with values in a tensor module: k antisymmetric covector
/// slots followed by the module's slots.
#[derive(Clone, Debug, PartialEq)]
pub struct CECochain {
    pub degree: usize,
    pub module: Module,
    pub tensor: SparseTensor,
}

impl CECochain {
    pub fn zero(dim: usize, degree: usize, module: Module) -> Self {
        CECochain { degree, module, tensor: SparseTensor::zeros(dim, Self::groups(degree, module)) }
    }

    pub fn groups(degree: usize, module: Module) -> Vec<SlotGroup> {
        let mut g = vec![SlotGroup::lower(degree, Symmetry::Anti)];
        g.extend(module.groups());
        g
    }

    pub fn new(degree: usize, module: Module, tensor: SparseTensor) -> Result<Self> {
        let expect = SparseTensor::zeros(tensor.dim(), Self::groups(degree, module));
        if !expect.same_shape(&tensor) {
            return Err(Error::Input("cochain tensor does not match degree/module".into()));
        }
        Ok(CECochain { degree, module, tensor })
    }

    /// Values on one ordered lower tuple, as a module element.
    fn slices(&self) -> BTreeMap<Key, SparseTensor> {
        let mut out: BTreeMap<Key, SparseTensor> = BTreeMap::new();
        let k = self.degree;
        for (key, v) in self.tensor.entries() {
            let t = out
                .entry(key[..k].to_vec())
                .or_insert_with(|| SparseTensor::zeros(self.tensor.dim(), self.module.groups()));
            t.add_at(&key[k..], v.clone());
        }
        out
    }
}

/// d = −(standard alternating-sum differential), so (dx)(ξ) = −ξ·x on C⁰.
pub fn ce_differential(g: &LieAlgebra, x: &CECochain) -> Result<CECochain> {
    let n = g.dim();
    if x.tensor.dim() != n {
        return Err(Error::Input("cochain dimension does not match the algebra".into()));
    }
    let k = x.degree;
    let slices = x.slices();
    let mut out = CECochain::zero(n, k + 1, x.module);
    if slices.is_empty() || k + 1 > n {
        return Ok(out);
    }
    let mgroups = x.module.groups();
    let read = |lower: &[usize]| -> Option<(i32, &SparseTensor)> {
        let mut l = lower.to_vec();
        let s = crate::tensor::sort_anti(&mut l);
        if s == 0 {
            return None;
        }
        slices.get(&l).map(|t| (s, t))
    };
    for target in (0..n).combinations(k + 1) {
        let mut acc = SparseTensor::zeros(n, mgroups.clone());
        for s in 0..=k {
            let rest: Vec<usize> = target.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, &v)| v).collect();
            if let Some((sg, m)) = read(&rest) {
                let sign = if (s % 2 == 0) == (sg > 0) { 1 } else { -1 };
                let term = g.act(target[s], m);
                acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
        }
        for s in 0..=k {
            for t in s + 1..=k {
                let rest: Vec<usize> = target.iter().enumerate().filter(|(i, _)| *i != s && *i != t).map(|(_, &v)| v).collect();
                for (c, f) in g.bracket(target[s], target[t]) {
                    let mut lower = vec![*c];
                    lower.extend_from_slice(&rest);
                    if let Some((sg, m)) = read(&lower) {
                        let sign = if (s + t) % 2 == 0 { sg } else { -sg };
                        let coef = if sign > 0 { f.clone() } else { -f };
                        acc = acc.add(&m.scale(&coef));
                    }
                }
            }
        }
        for (mk, v) in acc.entries() {
            let mut key = target.clone();
            key.extend_from_slice(mk);
            out.tensor.add_at(&key, -v);
        }
    }
    Ok(out)
}

fn require_rational(g: &LieAlgebra) -> Result<()> {
    if g.is_rational() {
        Ok(())
    } else {
        Err(Error::Input("exact linear algebra is only available over the rationals".into()))
    }
}

fn to_rat(s: &Scalar) -> Rat {
    s.as_rat().cloned().expect("rational scalar")
}

/// Basis of the g-invariant elements of a tensor module.
pub fn invariants(g: &LieAlgebra, module: Module) -> Result<Vec<SparseTensor>> {
    require_rational(g)?;
    let n = g.dim();
    let basis = module.basis(n);
    let groups = module.groups();
    let unit = |key: &Key| {
        let mut t = SparseTensor::zeros(n, groups.clone());
        t.add_at(key, Scalar::one());
        t
    };
    let mut rows: BTreeMap<(usize, Key), Vec<Rat>> = BTreeMap::new();
    for (j, b) in basis.iter().enumerate() {
        let u = unit(b);
        for a in 0..n {
            for (k, v) in g.act(a, &u).entries() {
                rows.entry((a, k.clone())).or_insert_with(|| vec![Rat::default(); basis.len()])[j] = to_rat(v);
            }
        }
    }
    let m: Vec<Vec<Rat>> = rows.into_values().collect();
    Ok(linalg::nullspace(&m, basis.len())
        .into_iter()
        .map(|v| {
            let mut t = SparseTensor::zeros(n, groups.clone());
            for (b, c) in basis.iter().zip(v) {
                t.add_at(b, Scalar::Rat(c));
            }
            t
        })
        .collect())
}

pub fn cochain_basis(n: usize, k: usize, module: Module) -> Vec<Key> {
    let mb = module.basis(n);
    let mut out = Vec::new();
    for l in (0..n).combinations(k) {
        for m in &mb {
            let mut key = l.clone();
            key.extend_from_slice(m);
            out.push(key);
        }
    }
    out
}

/// Matrix of d: C^k → C^{k+1} in the canonical cochain bases (rows = targets).
pub fn differential_matrix(g: &LieAlgebra, k: usize, module: Module) -> Result<Vec<Vec<Rat>>> {
    require_rational(g)?;
    let n = g.dim();
    let src = cochain_basis(n, k, module);
    let tgt = cochain_basis(n, k + 1, module);
    let index: BTreeMap<&Key, usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = vec![vec![Rat::default(); src.len()]; tgt.len()];
    for (j, key) in src.iter().enumerate() {
        let mut c = CECochain::zero(n, k, module);
        c.tensor.add_at(key, Scalar::one());
        for (tk, v) in ce_differential(g, &c)?.tensor.entries() {
            m[index[tk]][j] = to_rat(v);
        }
    }
    Ok(m)
}

pub fn cohomology_dim(g: &LieAlgebra, module: Module, k: usize) -> Result<usize> {
    let n = g.dim();
    let dim_k = cochain_basis(n, k, module).len();
    let rank_out = if k < n { linalg::rank(&differential_matrix(g, k, module)?, dim_k) } else { 0 };
    let rank_in = if k > 0 {
        let prev = cochain_basis(n, k - 1, module).len();
        linalg::rank(&differential_matrix(g, k - 1, module)?, prev)
    } else {
        0
    };
    Ok(dim_k - rank_out - rank_in)
}

/// g = h ⊕ m with h a subalgebra and m a chosen complement. Block entries are
/// in local indices: [e_i, ẽ_a] = A^k_{ia} e_k + B^b_{ia} ẽ_b and
/// [ẽ_a, ẽ_b] = C^k_{ab} e_k + D^c_{ab} ẽ_c.
#[derive(Clone, Debug)]
pub struct SplitSubalgebra {
    pub g: LieAlgebra,
    pub h: Vec<usize>,
    pub m: Vec<usize>,
    pub fh: Vec<Vec<Vec<Scalar>>>,
    pub a: Vec<Vec<Vec<Scalar>>>,
    pub b: Vec<Vec<Vec<Scalar>>>,
    pub c: Vec<Vec<Vec<Scalar>>>,
    pub d: Vec<Vec<Vec<Scalar>>>,
}

fn block(g: &LieAlgebra, out: &[usize], left: &[usize], right: &[usize]) -> Vec<Vec<Vec<Scalar>>> {
    out.iter()
        .map(|&k| left.iter().map(|&i| right.iter().map(|&j| g.f(i, j, k)).collect()).collect())
        .collect()
}

pub fn split_subalgebra(g: &LieAlgebra, h: &[usize], m: &[usize]) -> Result<SplitSubalgebra> {
    let n = g.dim();
    let mut seen = vec![false; n];
    for &i in h.iter().chain(m) {
        if i >= n || seen[i] {
            return Err(Error::Input("h and m indices must partition the basis".into()));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Input("h and m indices must partition the basis".into()));
    }
    for (&i, &j) in h.iter().tuple_combinations() {
        if let Some((k, _)) = g.bracket(i, j).iter().find(|(k, _)| m.contains(k)) {
            return Err(Error::Input(format!(
                "h is not a subalgebra: [{}, {}] has a {} component",
                g.basis()[i],
                g.basis()[j],
                g.basis()[*k]
            )));
        }
    }
    Ok(SplitSubalgebra {
        g: g.clone(),
        h: h.to_vec(),
        m: m.to_vec(),
        fh: block(g, h, h, h),
        a: block(g, h, h, m),
        b: block(g, m, h, m),
        c: block(g, h, m, m),
        d: block(g, m, m, m),
    })
}

impl SplitSubalgebra {
    pub fn by_labels(g: &LieAlgebra, h: &[&str]) -> Result<Self> {
        let hi = g.indices(h)?;
        let mi: Vec<usize> = (0..g.dim()).filter(|i| !hi.contains(i)).collect();
        split_subalgebra(g, &hi, &mi)
    }

    /// h as a Lie algebra in its own right.
    pub fn subalgebra(&self) -> LieAlgebra {
        let nh = self.h.len();
        let mut br = Vec::new();
        for i in 0..nh {
            for j in i + 1..nh {
                let v: Bracket = (0..nh).map(|k| (k, self.fh[k][i][j].clone())).filter(|(_, c)| !c.is_zero()).collect();
                if !v.is_empty() {
                    br.push((i, j, v));
                }
            }
        }
        let basis = self.h.iter().map(|&i| self.g.basis()[i].clone()).collect();
        LieAlgebra::new(&format!("{}|h", self.g.name()), basis, self.g.field().clone(), br).expect("subalgebra of a valid algebra")
    }

    /// Rebuilds the ambient structure constants from the blocks.
    pub fn reassemble(&self) -> Vec<Vec<Vec<Scalar>>> {
        let n = self.g.dim();
        let mut t = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let (h, m) = (&self.h, &self.m);
        for (ii, &i) in h.iter().enumerate() {
            for (jj, &j) in h.iter().enumerate() {
                for (kk, &k) in h.iter().enumerate() {
                    t[i][j][k] = self.fh[kk][ii][jj].clone();
                }
            }
            for (aa, &a) in m.iter().enumerate() {
                for (kk, &k) in h.iter().enumerate() {
                    t[i][a][k] = self.a[kk][ii][aa].clone();
                    t[a][i][k] = -&self.a[kk][ii][aa];
                }
                for (bb, &b) in m.iter().enumerate() {
                    t[i][a][b] = self.b[bb][ii][aa].clone();
                    t[a][i][b] = -&self.b[bb][ii][aa];
                }
            }
        }
        for (aa, &a) in m.iter().enumerate() {
            for (bb, &b) in m.iter().enumerate() {
                for (kk, &k) in h.iter().enumerate() {
                    t[a][b][k] = self.c[kk][aa][bb].clone();
                }
                for (cc, &c) in m.iter().enumerate() {
                    t[a][b][c] = self.d[cc][aa][bb].clone();
                }
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = sl2();
        let [e, f, h] = [0, 1, 2];
        assert_eq!(g.bracket(e, f), &[(h, Scalar::one())]);
        assert_eq!(g.bracket(h, e), &[(e, Scalar::from(2))]);
        assert_eq!(g.bracket(h, f), &[(f, Scalar::from(-2))]);
        assert!(g.check().pass);
    }

    #[test]
    fn sl3_is_eight_dimensional_and_lie() {
        let g = sl3();
        assert_eq!(g.dim(), 8);
        assert_eq!(g.basis(), &["e1", "e2", "e12", "f1", "f2", "f12", "h1", "h2"]);
        assert!(g.check().pass);
        // [e_i, f_i] = h_i and [h_i, e_j] = a_ij e_j
        assert_eq!(g.bracket(0, 3), &[(6, Scalar::one())]);
        assert_eq!(g.bracket(6, 1), &[(1, Scalar::from(-1))]);
    }

    #[test]
    fn mutated_sl2_fails_jacobi() {
        let s = |v: &str| v.to_string();
        let g = LieAlgebra::new(
            "bad",
            vec![s("e"), s("f"), s("h")],
            Field::Rational,
            vec![(0, 1, vec![(0, Scalar::one())]), (2, 0, vec![(0, Scalar::from(2))]), (2, 1, vec![(1, Scalar::from(-2))])],
        )
        .unwrap();
        let r = g.check();
        assert!(!r.pass && r.antisymmetry && !r.jacobi);
        let w = r.witness.unwrap();
        assert_eq!(&w[..3], &["e", "f", "h"]);
    }

    #[test]
    fn ce_on_c0_matches_convention() {
        let g = sl2();
        let mut x = CECochain::zero(3, 0, Module::Wedge(1));
        x.tensor.add_at(&[2], Scalar::one());
        let dx = ce_differential(&g, &x).unwrap();
        // (dh)(e) = −[e,h] = 2e, (dh)(f) = −2f
        assert_eq!(dx.tensor.get(&[0, 0]), Scalar::from(2));
        assert_eq!(dx.tensor.get(&[1, 1]), Scalar::from(-2));
        assert_eq!(dx.tensor.support(), 2);
    }

    #[test]
    fn split_errors() {
        let g = sl2();
        assert!(split_subalgebra(&g, &[1, 0], &[2]).is_err());
        assert!(split_subalgebra(&g, &[0, 2], &[2]).is_err());
        let s = split_subalgebra(&g, &[0, 2], &[1]).unwrap();
        assert!(s.d[0][0][0].is_zero());
    }
}
