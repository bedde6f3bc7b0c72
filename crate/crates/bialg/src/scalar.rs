use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exponent vector with trailing zeros trimmed. Vec's lexicographic order on
/// trimmed vectors is the lex monomial order with x0 > x1 > ...
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
    }
    out
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() && b[a.len()..].iter().any(|&e| e > 0) {
        return None;
    }
    let mut out = a.to_vec();
    for (i, &e) in b.iter().enumerate() {
        if out[i] < e {
            return None;
        }
        out[i] -= e;
    }
    Some(trim(out))
}

fn mono_gcd(a: &[u32], b: &[u32]) -> Monomial {
    trim(a.iter().zip(b.iter()).map(|(x, y)| *x.min(y)).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        let mut p = Poly::zero();
        p.terms.insert(m, Rat::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(trim(m), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars()];
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    fn mul_mono(&self, m: &[u32], c: &Rat) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (mono_mul(k, m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Rat::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(trim(m2), c * int(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(Rat::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact multivariate division; `None` when a nonzero remainder is left.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = mono_div(m, lm)?;
            let qc = c / lc;
            rem = &rem - &d.mul_mono(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Vec::new() };
        it.fold(first.clone(), |g, m| mono_gcd(&g, m))
    }

    fn div_monomial(&self, m: &[u32]) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (mono_div(k, m).expect("monomial divides"), v.clone())).collect(),
        }
    }

    fn univariate_coeffs(&self, var: usize) -> Vec<Rat> {
        let deg = self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0)).max().unwrap_or(0);
        let mut out = vec![Rat::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            out[m.get(var).copied().unwrap_or(0) as usize] += c;
        }
        out
    }

    fn from_univariate(coeffs: &[Rat], var: usize) -> Poly {
        Poly::from_terms(coeffs.iter().enumerate().map(|(e, c)| {
            let mut m = vec![0; var + 1];
            m[var] = e as u32;
            (m, c.clone())
        }))
    }

    fn make_monic(&self) -> Poly {
        match self.leading() {
            Some((_, lc)) => self.scale(&(Rat::one() / lc)),
            None => Poly::zero(),
        }
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = vars.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            if factors.is_empty() {
                s.push_str(&fmt_rat(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&fmt_rat(&a));
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn univariate_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    fn strip(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    let mut a = strip(a.to_vec());
    let mut b = strip(b.to_vec());
    while !b.is_empty() {
        let mut r = a.clone();
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let q = r.last().unwrap() / &lb;
            for (i, c) in b.iter().enumerate() {
                r[i + shift] -= &q * c;
            }
            r.pop();
            r = strip(r);
        }
        a = b;
        b = r;
    }
    a
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(mono_mul(a, b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

/// num/den with den monic in lex order. Common monomial factors and rational
/// content are always removed; polynomial gcds are cancelled when both sides
/// live in one variable or one side divides the other.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::constant(Rat::one()) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFun { num, den: Poly::constant(Rat::one()) };
        }
        let g = mono_gcd(&num.monomial_content(), &den.monomial_content());
        let (mut num, mut den) = if g.is_empty() { (num, den) } else { (num.div_monomial(&g), den.div_monomial(&g)) };
        if den.as_constant().is_none() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Poly::constant(Rat::one());
            } else if let Some(q) = den.div_exact(&num) {
                den = q;
                num = Poly::constant(Rat::one());
            } else {
                let vn = num.support_vars();
                let vd = den.support_vars();
                if vd.len() == 1 && (vn.is_empty() || vn == vd) {
                    let v = vd[0];
                    let gc = univariate_gcd(&num.univariate_coeffs(v), &den.univariate_coeffs(v));
                    if gc.len() > 1 {
                        let gp = Poly::from_univariate(&gc, v);
                        num = num.div_exact(&gp).expect("gcd divides numerator");
                        den = den.div_exact(&gp).expect("gcd divides denominator");
                    }
                }
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = Rat::one() / lc;
        RatFun { num: num.scale(&inv), den: den.make_monic() }
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn derivative(&self, var: usize) -> RatFun {
        let n = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        Self::reduce(n, &self.den * &self.den)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, o: &Self) -> bool {
        (&self.num * &o.den) == (&o.num * &self.den)
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Rat),
    Fun(RatFun),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rat(int(n))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rat::one())
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(rat(n, d))
    }

    pub fn var(i: usize) -> Self {
        Scalar::Fun(RatFun::from_poly(Poly::var(i)))
    }

    pub fn from_fun(f: RatFun) -> Self {
        if let (Some(n), Some(d)) = (f.num.as_constant(), f.den.as_constant()) {
            return Scalar::Rat(n / d);
        }
        Scalar::Fun(f)
    }

    fn as_fun(&self) -> RatFun {
        match self {
            Scalar::Rat(r) => RatFun::from_poly(Poly::constant(r.clone())),
            Scalar::Fun(f) => f.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.num.is_zero(),
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Fun(_) => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        if o.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a / b),
            _ => {
                let a = self.as_fun();
                let b = o.as_fun();
                Scalar::from_fun(RatFun::reduce(&a.num * &b.den, &a.den * &b.num))
            }
        })
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * self;
        }
        if e < 0 {
            Scalar::one().checked_div(&acc)
        } else {
            Ok(acc)
        }
    }

    pub fn derivative(&self, var: usize) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::zero(),
            Scalar::Fun(f) => Scalar::from_fun(f.derivative(var)),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        match self {
            Scalar::Rat(r) => Some(r.clone()),
            Scalar::Fun(f) => f.eval(point),
        }
    }

    /// Denominator polynomial, if any.
    pub fn denominator(&self) -> Option<&Poly> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Fun(f) if f.den.as_constant().is_none() => Some(&f.den),
            Scalar::Fun(_) => None,
        }
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        match self {
            Scalar::Rat(r) => fmt_rat(r),
            Scalar::Fun(f) => {
                let n = f.num.fmt_with(vars);
                if f.den.as_constant().is_some_and(|c| c.is_one()) {
                    n
                } else {
                    format!("({})/({})", n, f.den.fmt_with(vars))
                }
            }
        }
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            _ => self.as_fun() == o.as_fun(),
        }
    }
}

impl Eq for Scalar {}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $rat:expr, $fun:expr) => {
        impl $tr for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat($rat(a, b)),
                    _ => Scalar::from_fun($fun(&self.as_fun(), &o.as_fun())),
                }
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}

scalar_binop!(Add, add, |a: &Rat, b: &Rat| a + b, |a: &RatFun, b: &RatFun| {
    if a.den == b.den {
        RatFun::reduce(&a.num + &b.num, a.den.clone())
    } else {
        RatFun::reduce(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den)
    }
});
scalar_binop!(Sub, sub, |a: &Rat, b: &Rat| a - b, |a: &RatFun, b: &RatFun| {
    if a.den == b.den {
        RatFun::reduce(&a.num - &b.num, a.den.clone())
    } else {
        RatFun::reduce(&(&a.num * &b.den) - &(&b.num * &a.den), &a.den * &b.den)
    }
});
scalar_binop!(Mul, mul, |a: &Rat, b: &Rat| a * b, |a: &RatFun, b: &RatFun| {
    RatFun::reduce(&a.num * &b.num, &a.den * &b.den)
});

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Fun(f) => Scalar::Fun(RatFun { num: -&f.num, den: f.den.clone() }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        it.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

/// Parses coefficient strings: rationals, declared variables, + - * / ^int and parentheses.
pub fn parse_scalar(src: &str, vars: &[String]) -> Result<Scalar> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, vars, src };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: i32 = self.src[start..self.pos].parse().map_err(|_| self.err("expected integer exponent"))?;
            return base.pow(if neg { -e } else { e }).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos < self.s.len() && self.s[self.pos] == b'.' {
                    return Err(self.err("decimal literals are not exact; write a fraction"));
                }
                let n: BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
                Ok(Scalar::Rat(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Scalar::var(i)),
                    None => Err(Error::Parse(format!("undeclared variable {name:?} in {:?}", self.src))),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_scalar("1/2", &[]).unwrap(), Scalar::frac(1, 2));
        assert_eq!(parse_scalar("-3/6", &[]).unwrap(), Scalar::frac(-1, 2));
        assert_eq!(parse_scalar("2^-2 + (1 - 3)", &[]).unwrap(), Scalar::frac(-7, 4));
        assert!(parse_scalar("0.5", &[]).is_err());
        assert!(parse_scalar("1/0", &[]).is_err());
        assert!(parse_scalar("y", &v(&["x"])).is_err());
    }

    #[test]
    fn ratfun_arithmetic_cancels() {
        let vars = v(&["x", "y"]);
        let a = parse_scalar("(x^2 - 1)/(x - 1)", &vars).unwrap();
        let b = parse_scalar("x + 1", &vars).unwrap();
        assert_eq!(a, b);
        let c = parse_scalar("1/x - 1/x", &vars).unwrap();
        assert!(c.is_zero() && c.is_constant());
        let d = parse_scalar("x*y/(y*x)", &vars).unwrap();
        assert_eq!(d, Scalar::one());
        assert!(d.is_constant());
    }

    #[test]
    fn quotient_rule() {
        let vars = v(&["x"]);
        let f = parse_scalar("1/x", &vars).unwrap();
        assert_eq!(f.derivative(0), parse_scalar("-1/x^2", &vars).unwrap());
        let g = parse_scalar("x^2", &vars).unwrap();
        assert_eq!(g.derivative(0), parse_scalar("2*x", &vars).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let vars = v(&["x", "y"]);
        for s in ["3/4", "-2*x^2*y + 1/3", "(x + 1)/(x^2 - y)", "-1/(x^2)"] {
            let a = parse_scalar(s, &vars).unwrap();
            let b = parse_scalar(&a.fmt_with(&vars), &vars).unwrap();
            assert_eq!(a, b, "{s}");
        }
    }
}
