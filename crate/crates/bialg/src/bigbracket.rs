use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::Scalar;
use crate::tensor::{sort_anti, SlotGroup, SparseTensor, Symmetry, Variance};

/// Polyvectors on Bg: C•(g, Sym(g[-n])) as a graded-commutative algebra on
/// covector generators e^i (odd, CE degree 1) and vector generators e_i
/// (degree n), with the Poisson bracket of degree −(n+1) given by pairing
/// e^i with e_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Shift {
    pub fn from_int(n: usize) -> Result<Shift> {
        match n {
            1 => Ok(Shift::One),
            2 => Ok(Shift::Two),
            _ => Err(Error::Input(format!("shift must be 1 or 2, got {n}"))),
        }
    }

    pub fn n(self) -> usize {
        match self {
            Shift::One => 1,
            Shift::Two => 2,
        }
    }

    fn upper_odd(self) -> bool {
        self == Shift::One
    }

    pub fn upper_symmetry(self) -> Symmetry {
        if self.upper_odd() {
            Symmetry::Anti
        } else {
            Symmetry::Sym
        }
    }
}

/// (covector indices, increasing; vector indices, increasing or nondecreasing)
pub type Monomial = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug, PartialEq)]
pub struct BigBracketElement {
    shift: Shift,
    dim: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// ∏ m! over the multiplicities of a sorted index list.
fn multiplicity_factor(idx: &[usize]) -> i64 {
    let mut out = 1;
    let mut run = 1;
    for w in idx.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            out *= factorial(run);
            run = 1;
        }
    }
    if !idx.is_empty() {
        out *= factorial(run);
    }
    out
}

impl BigBracketElement {
    pub fn zero(dim: usize, shift: Shift) -> Self {
        BigBracketElement { shift, dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize, shift: Shift) -> Self {
        let mut z = Self::zero(dim, shift);
        z.terms.insert((vec![], vec![]), Scalar::one());
        z
    }

    pub fn covector(dim: usize, shift: Shift, i: usize) -> Self {
        let mut z = Self::zero(dim, shift);
        z.terms.insert((vec![i], vec![]), Scalar::one());
        z
    }

    pub fn vector(dim: usize, shift: Shift, i: usize) -> Self {
        let mut z = Self::zero(dim, shift);
        z.terms.insert((vec![], vec![i]), Scalar::one());
        z
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn upper_group(&self, p: usize) -> SlotGroup {
        SlotGroup::upper(p, self.shift.upper_symmetry())
    }

    /// Shape of the (k, p) component as a tensor.
    pub fn component_groups(shift: Shift, k: usize, p: usize) -> Vec<SlotGroup> {
        vec![SlotGroup::lower(k, Symmetry::Anti), SlotGroup::upper(p, shift.upper_symmetry())]
    }

    /// Reads a tensor whose components are those of a (k, p) element: tensor
    /// components equal polynomial coefficients up to the multiplicities of
    /// repeated even generators.
    pub fn from_tensor(t: &SparseTensor, shift: Shift) -> Result<Self> {
        let (k, p) = split_shape(t, shift)?;
        let mut out = Self::zero(t.dim(), shift);
        for (key, v) in t.entries() {
            let lower = key[..k].to_vec();
            let upper = key[k..k + p].to_vec();
            let m = multiplicity_factor(&upper);
            let c = if m == 1 { v.clone() } else { v * &Scalar::frac(1, m) };
            out.add_term(lower, upper, c);
        }
        Ok(out)
    }

    pub fn component(&self, k: usize, p: usize) -> SparseTensor {
        let mut t = SparseTensor::zeros(self.dim, Self::component_groups(self.shift, k, p));
        for ((l, u), v) in &self.terms {
            if l.len() == k && u.len() == p {
                let m = multiplicity_factor(u);
                let mut key = l.clone();
                key.extend_from_slice(u);
                t.add_at(&key, if m == 1 { v.clone() } else { v * &Scalar::from(m) });
            }
        }
        t
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut d: Vec<(usize, usize)> = self.terms.keys().map(|(l, u)| (l.len(), u.len())).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn multivector(&self, p: usize) -> SparseTensor {
        let mut t = SparseTensor::zeros(self.dim, vec![self.upper_group(p)]);
        for (key, v) in self.component(0, p).entries() {
            t.add_at(key, v.clone());
        }
        t
    }

    fn add_term(&mut self, lower: Vec<usize>, upper: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (lower, upper);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let nv = &*v + &c;
                if nv.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = nv;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.shift != o.shift {
            return Err(Error::Input("big bracket operands have different shifts".into()));
        }
        if self.dim != o.dim {
            return Err(Error::Input("big bracket operands live on different algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.shift == o.shift && self.dim == o.dim, "incompatible polyvectors");
        let mut out = self.clone();
        for ((l, u), v) in &o.terms {
            out.add_term(l.clone(), u.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim, self.shift);
        for ((l, u), v) in &self.terms {
            out.add_term(l.clone(), u.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from(-1)))
    }

    /// Keeps only the given bidegree.
    pub fn part(&self, k: usize, p: usize) -> Self {
        Self {
            shift: self.shift,
            dim: self.dim,
            terms: self.terms.iter().filter(|((l, u), _)| l.len() == k && u.len() == p).map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    /// e^{I} e_{J} · e^{K} e_{L}, returned as (sign, monomial) or None if it vanishes.
    fn mono_mul(&self, a: (&[usize], &[usize]), b: (&[usize], &[usize])) -> Option<(i32, Monomial)> {
        let mut sign = 1;
        if self.shift.upper_odd() && (a.1.len() * b.0.len()) % 2 == 1 {
            sign = -sign;
        }
        let mut lower: Vec<usize> = a.0.iter().chain(b.0).copied().collect();
        let s = sort_anti(&mut lower);
        if s == 0 {
            return None;
        }
        sign *= s;
        let mut upper: Vec<usize> = a.1.iter().chain(b.1).copied().collect();
        if self.shift.upper_odd() {
            let s = sort_anti(&mut upper);
            if s == 0 {
                return None;
            }
            sign *= s;
        } else {
            upper.sort_unstable();
        }
        Some((sign, (lower, upper)))
    }

    /// Graded-commutative product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = Self::zero(self.dim, self.shift);
        for ((l1, u1), v1) in &self.terms {
            for ((l2, u2), v2) in &o.terms {
                if let Some((s, (l, u))) = self.mono_mul((l1, u1), (l2, u2)) {
                    let c = v1 * v2;
                    out.add_term(l, u, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// {F, G} = Σ F ∂←_a ω^{ab} ∂→_b G with {e^i, e_j} = δ^i_j.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let odd = self.shift.upper_odd();
        // {e_j, e^i} = −(−1)^n δ
        let omega_ul: i32 = if odd { 1 } else { -1 };
        let mut out = Self::zero(self.dim, self.shift);
        for ((l1, u1), v1) in &self.terms {
            let (k1, p1) = (l1.len(), u1.len());
            for ((l2, u2), v2) in &o.terms {
                let k2 = l2.len();
                let coef = v1 * v2;
                // covector of the left factor against a vector of the right one
                for (q, &i) in l1.iter().enumerate() {
                    let right = (k1 - 1 - q) + if odd { p1 } else { 0 };
                    let mut sign: i32 = if right % 2 == 0 { 1 } else { -1 };
                    let mut mult = 1;
                    let mut rest_u2 = u2.clone();
                    if odd {
                        let Some(r) = u2.iter().position(|&x| x == i) else { continue };
                        if (k2 + r) % 2 == 1 {
                            sign = -sign;
                        }
                        rest_u2.remove(r);
                    } else {
                        let m = u2.iter().filter(|&&x| x == i).count();
                        if m == 0 {
                            continue;
                        }
                        mult = m as i64;
                        let r = u2.iter().position(|&x| x == i).unwrap();
                        rest_u2.remove(r);
                    }
                    let mut rest_l1 = l1.clone();
                    rest_l1.remove(q);
                    if let Some((s, (l, u))) = self.mono_mul((&rest_l1, u1), (l2, &rest_u2)) {
                        let c = &coef * &Scalar::from(mult * (sign * s) as i64);
                        out.add_term(l, u, c);
                    }
                }
                // vector of the left factor against a covector of the right one
                let mut done = Vec::new();
                for (q, &i) in u1.iter().enumerate() {
                    let mut sign = omega_ul;
                    let mut mult = 1;
                    if odd {
                        if (p1 - 1 - q) % 2 == 1 {
                            sign = -sign;
                        }
                    } else {
                        if done.contains(&i) {
                            continue;
                        }
                        done.push(i);
                        mult = u1.iter().filter(|&&x| x == i).count() as i64;
                    }
                    let Some(r) = l2.iter().position(|&x| x == i) else { continue };
                    if r % 2 == 1 {
                        sign = -sign;
                    }
                    let mut rest_u1 = u1.clone();
                    rest_u1.remove(q);
                    let mut rest_l2 = l2.clone();
                    rest_l2.remove(r);
                    if let Some((s, (l, u))) = self.mono_mul((l1, &rest_u1), (&rest_l2, u2)) {
                        let c = &coef * &Scalar::from(mult * (sign * s) as i64);
                        out.add_term(l, u, c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sets every coefficient through `f` (used to differentiate or evaluate).
    pub fn map_values<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Self {
        let mut out = Self::zero(self.dim, self.shift);
        for ((l, u), v) in &self.terms {
            out.add_term(l.clone(), u.clone(), f(v));
        }
        out
    }
}

fn split_shape(t: &SparseTensor, shift: Shift) -> Result<(usize, usize)> {
    let mut k = 0;
    let mut p = 0;
    let mut seen_upper = false;
    for g in t.groups() {
        match g.variance {
            Variance::Lower => {
                if seen_upper || k > 0 || !(g.symmetry == Symmetry::Anti || g.len == 1) {
                    return Err(Error::Input("covector slots must form one antisymmetric group in front".into()));
                }
                k = g.len;
            }
            Variance::Upper => {
                if seen_upper || !(g.symmetry == shift.upper_symmetry() || g.len == 1) {
                    return Err(Error::Input(format!(
                        "vector slots must form one {:?} group for shift {}",
                        shift.upper_symmetry(),
                        shift.n()
                    )));
                }
                seen_upper = true;
                p = g.len;
            }
        }
    }
    Ok((k, p))
}

/// μ = ½ Σ f^k_{ij} e^i e^j e_k; its bracket {μ, ·} is the CE differential.
pub fn structure_element(g: &LieAlgebra, shift: Shift) -> BigBracketElement {
    let mut out = BigBracketElement::zero(g.dim(), shift);
    for (i, j, br) in g.upper_brackets() {
        for (k, f) in br {
            out.add_term(vec![i, j], vec![k], f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_pairings() {
        for shift in [Shift::One, Shift::Two] {
            let a = BigBracketElement::covector(3, shift, 1);
            let b = BigBracketElement::vector(3, shift, 1);
            let c = BigBracketElement::vector(3, shift, 2);
            assert_eq!(a.bracket(&b).unwrap(), BigBracketElement::one(3, shift));
            assert!(a.bracket(&c).unwrap().is_zero());
            assert!(b.bracket(&c).unwrap().is_zero());
            assert!(a.bracket(&BigBracketElement::covector(3, shift, 1)).unwrap().is_zero());
        }
        let b = BigBracketElement::vector(3, Shift::Two, 0);
        let a = BigBracketElement::covector(3, Shift::Two, 0);
        assert_eq!(b.bracket(&a).unwrap(), BigBracketElement::one(3, Shift::Two).scale(&Scalar::from(-1)));
    }

    #[test]
    fn even_generators_square() {
        let x = BigBracketElement::vector(2, Shift::Two, 0);
        let xx = x.mul(&x).unwrap();
        let a = BigBracketElement::covector(2, Shift::Two, 0);
        assert_eq!(a.bracket(&xx).unwrap(), x.scale(&Scalar::from(2)));
        let y = BigBracketElement::vector(2, Shift::One, 0);
        assert!(y.mul(&y).unwrap().is_zero());
    }

    #[test]
    fn tensor_round_trip_with_multiplicities() {
        let mut c = SparseTensor::symmetric(3, 2);
        c.add_at(&[0, 1], Scalar::one());
        c.add_at(&[2, 2], Scalar::frac(1, 2));
        let e = BigBracketElement::from_tensor(&c, Shift::Two).unwrap();
        assert_eq!(e.component(0, 2), c);
        assert!(BigBracketElement::from_tensor(&c, Shift::One).is_err());
    }
}
