use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    Anti,
    Sym,
}

/// Upper slots hold vectors of g, lower slots hold covectors (g*).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotGroup {
    pub len: usize,
    pub symmetry: Symmetry,
    pub variance: Variance,
}

impl SlotGroup {
    pub fn upper(len: usize, symmetry: Symmetry) -> Self {
        SlotGroup { len, symmetry, variance: Variance::Upper }
    }

    pub fn lower(len: usize, symmetry: Symmetry) -> Self {
        SlotGroup { len, symmetry, variance: Variance::Lower }
    }
}

pub type Key = Vec<usize>;

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Sorts `idx` in place; returns the sign for an antisymmetric group, or 0 on a repeat.
pub fn sort_anti(idx: &mut [usize]) -> i32 {
    let s = perm_sign(idx);
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseTensor {
    dim: usize,
    groups: Vec<SlotGroup>,
    entries: BTreeMap<Key, Scalar>,
}

impl SparseTensor {
    pub fn zeros(dim: usize, groups: Vec<SlotGroup>) -> Self {
        let groups = groups.into_iter().filter(|g| g.len > 0).collect();
        SparseTensor { dim, groups, entries: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, v: Scalar) -> Self {
        let mut t = SparseTensor::zeros(dim, vec![]);
        t.add_at(&[], v);
        t
    }

    pub fn multivector(dim: usize, p: usize) -> Self {
        SparseTensor::zeros(dim, vec![SlotGroup::upper(p, Symmetry::Anti)])
    }

    pub fn symmetric(dim: usize, p: usize) -> Self {
        SparseTensor::zeros(dim, vec![SlotGroup::upper(p, Symmetry::Sym)])
    }

    /// g^{⊗p} with no symmetry.
    pub fn plain(dim: usize, p: usize) -> Self {
        SparseTensor::zeros(dim, vec![SlotGroup::upper(p, Symmetry::None)])
    }

    /// Maps g -> ∧²g, stored with one covector slot first.
    pub fn cobracket(dim: usize) -> Self {
        SparseTensor::zeros(dim, vec![SlotGroup::lower(1, Symmetry::Anti), SlotGroup::upper(2, Symmetry::Anti)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[SlotGroup] {
        &self.groups
    }

    pub fn arity(&self) -> usize {
        self.groups.iter().map(|g| g.len).sum()
    }

    pub fn same_shape(&self, o: &SparseTensor) -> bool {
        self.dim == o.dim && self.groups == o.groups
    }

    pub fn variances(&self) -> Vec<Variance> {
        self.groups.iter().flat_map(|g| std::iter::repeat_n(g.variance, g.len)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.entries.iter()
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical representative of an index tuple and the sign relating them.
    pub fn canonicalize(&self, idx: &[usize]) -> Option<(i32, Key)> {
        assert_eq!(idx.len(), self.arity(), "index arity mismatch");
        let mut key = idx.to_vec();
        let mut sign = 1;
        let mut off = 0;
        for g in &self.groups {
            let part = &mut key[off..off + g.len];
            match g.symmetry {
                Symmetry::None => {}
                Symmetry::Sym => part.sort_unstable(),
                Symmetry::Anti => {
                    let s = sort_anti(part);
                    if s == 0 {
                        return None;
                    }
                    sign *= s;
                }
            }
            off += g.len;
        }
        Some((sign, key))
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        match self.canonicalize(idx) {
            Some((s, k)) => match self.entries.get(&k) {
                Some(v) if s < 0 => -v,
                Some(v) => v.clone(),
                None => Scalar::zero(),
            },
            None => Scalar::zero(),
        }
    }

    /// Adds `v` to the component at `idx` (and, through the symmetry, to every
    /// component in its orbit).
    pub fn add_at(&mut self, idx: &[usize], v: Scalar) {
        if v.is_zero() {
            return;
        }
        debug_assert!(idx.iter().all(|&i| i < self.dim));
        let Some((s, k)) = self.canonicalize(idx) else { return };
        let v = if s < 0 { -v } else { v };
        match self.entries.get_mut(&k) {
            Some(cur) => {
                let nv = &*cur + &v;
                if nv.is_zero() {
                    self.entries.remove(&k);
                } else {
                    *cur = nv;
                }
            }
            None => {
                self.entries.insert(k, v);
            }
        }
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let Some((s, k)) = self.canonicalize(idx) else {
            return;
        };
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, if s < 0 { -v } else { v });
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseTensor {
        let mut out = SparseTensor::zeros(self.dim, self.groups.clone());
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.entries {
            let nv = v * c;
            if !nv.is_zero() {
                out.entries.insert(k.clone(), nv);
            }
        }
        out
    }

    pub fn neg(&self) -> SparseTensor {
        SparseTensor {
            dim: self.dim,
            groups: self.groups.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn add(&self, o: &SparseTensor) -> SparseTensor {
        assert!(self.same_shape(o), "tensor shape mismatch");
        let mut out = self.clone();
        for (k, v) in &o.entries {
            out.add_at(k, v.clone());
        }
        out
    }

    pub fn sub(&self, o: &SparseTensor) -> SparseTensor {
        self.add(&o.neg())
    }

    pub fn map_values<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> SparseTensor {
        let mut out = SparseTensor::zeros(self.dim, self.groups.clone());
        for (k, v) in &self.entries {
            let nv = f(v);
            if !nv.is_zero() {
                out.entries.insert(k.clone(), nv);
            }
        }
        out
    }

    pub fn all_constant(&self) -> bool {
        self.entries.values().all(|v| v.is_constant())
    }

    /// Regroups the same components under new slot groups, e.g. to split a
    /// plain tensor into lower/upper parts. Values are read componentwise.
    pub fn with_groups(&self, groups: Vec<SlotGroup>) -> Result<SparseTensor> {
        let target = SparseTensor::zeros(self.dim, groups);
        if target.arity() != self.arity() {
            return Err(Error::Input("regrouping changes the arity".into()));
        }
        let plain = self.to_plain();
        let mut out = target;
        for (k, v) in &plain.entries {
            if let Some((1, ck)) = out.canonicalize(k) {
                if &ck == k {
                    out.entries.insert(ck, v.clone());
                }
            }
        }
        if out.to_plain().entries != plain.entries {
            return Err(Error::Input("components do not have the requested symmetry".into()));
        }
        Ok(out)
    }

    /// Every component written out, one slot group of length arity with no symmetry.
    pub fn to_plain(&self) -> SparseTensor {
        let var = self.variances();
        let mut groups: Vec<SlotGroup> = Vec::new();
        for v in var {
            match groups.last_mut() {
                Some(g) if g.variance == v => g.len += 1,
                _ => groups.push(SlotGroup { len: 1, symmetry: Symmetry::None, variance: v }),
            }
        }
        let mut out = SparseTensor::zeros(self.dim, groups);
        for (k, v) in &self.entries {
            for (s, idx) in self.orbit(k) {
                out.entries.insert(idx, if s < 0 { -v } else { v.clone() });
            }
        }
        out
    }

    /// All tuples represented by a canonical key, with signs.
    pub fn orbit(&self, key: &[usize]) -> Vec<(i32, Key)> {
        let mut parts: Vec<Vec<(i32, Key)>> = Vec::new();
        let mut off = 0;
        for g in &self.groups {
            let part = &key[off..off + g.len];
            off += g.len;
            parts.push(match g.symmetry {
                Symmetry::None => vec![(1, part.to_vec())],
                Symmetry::Anti => (0..g.len)
                    .permutations(g.len)
                    .map(|p| (perm_sign(&p), p.iter().map(|&i| part[i]).collect()))
                    .collect(),
                Symmetry::Sym => (0..g.len)
                    .permutations(g.len)
                    .map(|p| p.iter().map(|&i| part[i]).collect::<Key>())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .map(|k| (1, k))
                    .collect(),
            });
        }
        parts.into_iter().fold(vec![(1, Vec::new())], |acc, part| {
            let mut out = Vec::with_capacity(acc.len() * part.len());
            for (s, k) in &acc {
                for (s2, k2) in &part {
                    let mut nk = k.clone();
                    nk.extend_from_slice(k2);
                    out.push((s * s2, nk));
                }
            }
            out
        })
    }

    /// Plain tensor with slots permuted: output slot i carries input slot perm[i].
    pub fn permute(&self, perm: &[usize]) -> SparseTensor {
        let plain = self.to_plain();
        assert_eq!(perm.len(), plain.arity());
        let var = plain.variances();
        let newvar: Vec<Variance> = perm.iter().map(|&p| var[p]).collect();
        let mut groups: Vec<SlotGroup> = Vec::new();
        for v in newvar {
            match groups.last_mut() {
                Some(g) if g.variance == v => g.len += 1,
                _ => groups.push(SlotGroup { len: 1, symmetry: Symmetry::None, variance: v }),
            }
        }
        let mut out = SparseTensor::zeros(self.dim, groups);
        for (k, v) in &plain.entries {
            let nk: Key = perm.iter().map(|&p| k[p]).collect();
            out.entries.insert(nk, v.clone());
        }
        out
    }

    /// Outer product; groups are concatenated.
    pub fn outer(&self, o: &SparseTensor) -> SparseTensor {
        assert_eq!(self.dim, o.dim);
        let mut groups = self.groups.clone();
        groups.extend_from_slice(&o.groups);
        let mut out = SparseTensor::zeros(self.dim, groups);
        for (a, va) in &self.entries {
            for (b, vb) in &o.entries {
                let mut k = a.clone();
                k.extend_from_slice(b);
                out.entries.insert(k, va * vb);
            }
        }
        out
    }

    /// Trace over each (lower, upper) slot pair. The result is plain.
    pub fn contract(&self, pairs: &[(usize, usize)]) -> Result<SparseTensor> {
        let var = self.variances();
        let mut used = BTreeSet::new();
        for &(a, b) in pairs {
            if a >= var.len() || b >= var.len() {
                return Err(Error::Input(format!("slot pair ({a},{b}) out of range")));
            }
            if var[a] != Variance::Lower || var[b] != Variance::Upper {
                return Err(Error::Input(format!("slot pair ({a},{b}) is not (covariant, contravariant)")));
            }
            if !used.insert(a) || !used.insert(b) {
                return Err(Error::Input("slot used twice in contraction".into()));
            }
        }
        let keep: Vec<usize> = (0..var.len()).filter(|s| !used.contains(s)).collect();
        let mut groups: Vec<SlotGroup> = Vec::new();
        for &s in &keep {
            match groups.last_mut() {
                Some(g) if g.variance == var[s] => g.len += 1,
                _ => groups.push(SlotGroup { len: 1, symmetry: Symmetry::None, variance: var[s] }),
            }
        }
        let mut out = SparseTensor::zeros(self.dim, groups);
        for (k, v) in &self.to_plain().entries {
            if pairs.iter().all(|&(a, b)| k[a] == k[b]) {
                let nk: Key = keep.iter().map(|&s| k[s]).collect();
                out.add_at(&nk, v.clone());
            }
        }
        Ok(out)
    }

    /// Reads a plain tensor back into the given symmetric storage, checking
    /// that no information is lost.
    pub fn compress(&self, groups: Vec<SlotGroup>) -> Result<SparseTensor> {
        self.with_groups(groups)
    }
}

pub fn is_multivector(t: &SparseTensor) -> bool {
    match t.groups() {
        [] => true,
        [g] => g.variance == Variance::Upper && g.symmetry == Symmetry::Anti,
        _ => false,
    }
}

fn mv_degree(t: &SparseTensor) -> Result<usize> {
    if !is_multivector(t) {
        return Err(Error::Input("expected a multivector".into()));
    }
    Ok(t.arity())
}

pub fn wedge(a: &SparseTensor, b: &SparseTensor) -> Result<SparseTensor> {
    let p = mv_degree(a)?;
    let q = mv_degree(b)?;
    if a.dim() != b.dim() {
        return Err(Error::Input(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    let mut out = SparseTensor::multivector(a.dim(), p + q);
    for (ka, va) in a.entries() {
        for (kb, vb) in b.entries() {
            let mut k = ka.clone();
            k.extend_from_slice(kb);
            out.add_at(&k, va * vb);
        }
    }
    Ok(out)
}

/// x₁∧…∧x_p ↦ Σ_σ sgn(σ) x_σ(1)⊗…⊗x_σ(p).
pub fn embed_wedge(l: &SparseTensor) -> Result<SparseTensor> {
    mv_degree(l)?;
    Ok(l.to_plain())
}

/// Σ_σ sgn(σ) σ(T) over all slots of an upper tensor, as a multivector.
pub fn antisymmetrize(t: &SparseTensor) -> SparseTensor {
    let p = t.arity();
    let mut out = SparseTensor::multivector(t.dim(), p);
    let plain = t.to_plain();
    for (k, v) in plain.entries() {
        let mut sorted = k.clone();
        let s = sort_anti(&mut sorted);
        if s != 0 {
            out.add_at(&sorted, if s < 0 { -v } else { v.clone() });
        }
    }
    out
}

pub fn symmetric_part(t: &SparseTensor) -> Result<SparseTensor> {
    if t.arity() != 2 {
        return Err(Error::Input("symmetric part needs a 2-tensor".into()));
    }
    let plain = t.to_plain();
    let tt = plain.permute(&[1, 0]);
    plain.add(&tt).scale(&Scalar::frac(1, 2)).compress(vec![SlotGroup::upper(2, Symmetry::Sym)])
}

pub fn is_totally_antisymmetric(t: &SparseTensor) -> bool {
    let plain = t.to_plain();
    let p = plain.arity();
    for i in 0..p {
        for j in i + 1..p {
            let mut perm: Vec<usize> = (0..p).collect();
            perm.swap(i, j);
            if plain.permute(&perm) != plain.neg() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(dim: usize, entries: &[(&[usize], i64)]) -> SparseTensor {
        let p = entries.first().map(|e| e.0.len()).unwrap_or(0);
        let mut t = SparseTensor::multivector(dim, p);
        for (k, v) in entries {
            t.add_at(k, Scalar::from(*v));
        }
        t
    }

    #[test]
    fn canonical_reads() {
        let t = mv(3, &[(&[1, 0], 1)]);
        assert_eq!(t.get(&[0, 1]), Scalar::from(-1));
        assert_eq!(t.get(&[1, 0]), Scalar::from(1));
        assert_eq!(t.get(&[1, 1]), Scalar::zero());
        let mut s = SparseTensor::symmetric(3, 2);
        s.add_at(&[2, 0], Scalar::from(5));
        assert_eq!(s.get(&[0, 2]), s.get(&[2, 0]));
        assert_eq!(s.support(), 1);
    }

    #[test]
    fn wedge_rules() {
        let e = mv(3, &[(&[0], 1)]);
        let f = mv(3, &[(&[1], 1)]);
        let h = mv(3, &[(&[2], 1)]);
        assert!(wedge(&e, &e).unwrap().is_zero());
        assert_eq!(wedge(&e, &f).unwrap(), wedge(&f, &e).unwrap().neg());
        let top = wedge(&wedge(&e, &f).unwrap(), &h).unwrap();
        assert_eq!(top.support(), 1);
        assert_eq!(top.get(&[0, 1, 2]), Scalar::one());
        let bad = mv(4, &[(&[0], 1)]);
        assert!(wedge(&e, &bad).is_err());
    }

    #[test]
    fn embed_small_cases() {
        let ef = mv(3, &[(&[0, 1], 1)]);
        let p = embed_wedge(&ef).unwrap();
        assert_eq!(p.support(), 2);
        assert_eq!(p.get(&[0, 1]), Scalar::one());
        assert_eq!(p.get(&[1, 0]), Scalar::from(-1));
        assert!(embed_wedge(&SparseTensor::multivector(3, 2)).unwrap().is_zero());
        let top = mv(3, &[(&[0, 1, 2], 1)]);
        let p3 = embed_wedge(&top).unwrap();
        assert_eq!(p3.support(), 6);
        for perm in (0..3).permutations(3) {
            assert_eq!(p3.get(&perm), Scalar::from(perm_sign(&perm) as i64));
        }
    }

    #[test]
    fn contraction() {
        let n = 4;
        let mut id = SparseTensor::zeros(n, vec![SlotGroup::upper(1, Symmetry::None), SlotGroup::lower(1, Symmetry::None)]);
        for i in 0..n {
            id.add_at(&[i, i], Scalar::one());
        }
        let tr = id.contract(&[(1, 0)]).unwrap();
        assert_eq!(tr.get(&[]), Scalar::from(n as i64));
        let mut pair = SparseTensor::zeros(n, vec![SlotGroup::lower(1, Symmetry::None), SlotGroup::upper(1, Symmetry::None)]);
        pair.add_at(&[2, 3], Scalar::one());
        assert!(pair.contract(&[(0, 1)]).unwrap().is_zero());
        assert!(id.contract(&[(0, 1)]).is_err());
    }

    #[test]
    fn antisymmetrize_of_antisymmetric_is_factorial_multiple() {
        let top = mv(3, &[(&[0, 1, 2], 1)]);
        let alt = antisymmetrize(&embed_wedge(&top).unwrap());
        assert_eq!(alt, top.scale(&Scalar::from(6)));
    }
}
