//! Exact multivariate polynomials over the rationals.
//!
//! Every scalar in the kernel (λ, s, t, ℓ, μ_k, ...) lives in a [`ParamRing`]:
//! an ordered list of symbol names fixed at creation. Polynomials store dense
//! exponent vectors against that order and never hold a zero coefficient, so
//! two equal polynomials always have identical term maps.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Arbitrary precision rational.
pub type Rat = BigRational;

/// Dense exponent vector, one slot per ring symbol.
pub type Exps = SmallVec<[u16; 8]>;

/// Shorthand for the integer `n` as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `7`, `-3/4` and the like.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational number: `{s}`") };
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as `a` or `a/b`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingInner {
    symbols: Vec<String>,
}

/// An ordered set of parameter symbols. Cheap to clone.
#[derive(Clone)]
pub struct ParamRing(Arc<RingInner>);

impl PartialEq for ParamRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }
}
impl Eq for ParamRing {}

impl fmt::Debug for ParamRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamRing{:?}", self.0.symbols)
    }
}

impl ParamRing {
    /// Creates a ring over the given symbols. Names must be unique identifiers.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            let ok = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Parse { pos: 0, msg: format!("bad symbol name `{s}`") });
            }
            if out.contains(&s) {
                return Err(Error::DuplicateSymbol(s));
            }
            out.push(s);
        }
        if out.len() > u16::MAX as usize {
            return Err(Error::InvalidParams("too many symbols".into()));
        }
        Ok(ParamRing(Arc::new(RingInner { symbols: out })))
    }

    /// The ring with no symbols (plain rationals).
    pub fn empty() -> Self {
        ParamRing(Arc::new(RingInner { symbols: Vec::new() }))
    }

    pub fn symbols(&self) -> &[String] {
        &self.0.symbols
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.symbols.iter().position(|s| s == name)
    }

    /// A ring with `more` appended after the existing symbols.
    pub fn extend<I, S>(&self, more: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let all: Vec<String> = self
            .symbols()
            .iter()
            .cloned()
            .chain(more.into_iter().map(Into::into))
            .collect();
        ParamRing::new(all)
    }

    pub fn zero(&self) -> ParamPoly {
        ParamPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> ParamPoly {
        self.constant(Rat::one())
    }

    pub fn constant(&self, c: Rat) -> ParamPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(self.zero_exps(), c);
        }
        ParamPoly { ring: self.clone(), terms }
    }

    pub fn int(&self, n: i64) -> ParamPoly {
        self.constant(rat(n))
    }

    /// The polynomial consisting of one symbol.
    pub fn var(&self, name: &str) -> Result<ParamPoly> {
        let i = self.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(self.var_at(i))
    }

    pub fn var_at(&self, i: usize) -> ParamPoly {
        let mut e = self.zero_exps();
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        ParamPoly { ring: self.clone(), terms }
    }

    pub(crate) fn zero_exps(&self) -> Exps {
        SmallVec::from_elem(0, self.len())
    }

    /// Parses an expression such as `lambda^2 - 1/4*s*t + (s - t)/2`.
    pub fn parse(&self, text: &str) -> Result<ParamPoly> {
        let mut p = Parser { ring: self, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

/// Exact polynomial with rational coefficients over a [`ParamRing`].
#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    ring: ParamRing,
    terms: BTreeMap<Exps, Rat>,
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Binary operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; rejects operands from different rings.
pub fn poly_arith(a: &ParamPoly, b: &ParamPoly, op: PolyOp) -> Result<ParamPoly> {
    a.check_ring(&b.ring)?;
    Ok(match op {
        PolyOp::Add => a.add_unchecked(b, false),
        PolyOp::Sub => a.add_unchecked(b, true),
        PolyOp::Mul => a.mul_unchecked(b),
    })
}

/// Exact evaluation at a full rational assignment.
pub fn poly_eval(p: &ParamPoly, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
    p.eval(assignment)
}

impl ParamPoly {
    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub(crate) fn from_terms(ring: ParamRing, terms: BTreeMap<Exps, Rat>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        ParamPoly { ring, terms }
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    /// Degree in one symbol.
    pub fn degree_in(&self, sym: usize) -> u32 {
        self.terms.keys().map(|e| e[sym] as u32).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &ParamRing) -> Result<()> {
        if self.ring != *other {
            return Err(Error::RingMismatch(
                self.ring.symbols().join(","),
                other.symbols().join(","),
            ));
        }
        Ok(())
    }

    fn add_unchecked(&self, b: &ParamPoly, negate: bool) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &b.terms {
            if negate {
                out.add_term(e, &-c);
            } else {
                out.add_term(e, c);
            }
        }
        out
    }

    fn mul_unchecked(&self, b: &ParamPoly) -> ParamPoly {
        let mut out = BTreeMap::<Exps, Rat>::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &b.terms {
                let e: Exps = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match out.entry(e) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                }
            }
        }
        ParamPoly { ring: self.ring.clone(), terms: out }
    }

    /// In-place `self += c * x^e`.
    pub(crate) fn add_term(&mut self, e: &Exps, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(e);
                }
            }
            None => {
                self.terms.insert(e.clone(), c.clone());
            }
        }
    }

    /// In-place `self += k * other`.
    pub fn add_scaled(&mut self, other: &ParamPoly, k: &Rat) {
        assert!(self.ring == other.ring, "parameter ring mismatch");
        if k.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e, &(c * k));
        }
    }

    pub fn scale(&self, k: &Rat) -> ParamPoly {
        if k.is_zero() {
            return self.ring.zero();
        }
        ParamPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut out = self.ring.one();
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// Exact value at a rational point. Symbols absent from `p` need no value.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        let syms = self.ring.symbols();
        let mut vals: Vec<Option<&Rat>> = Vec::with_capacity(syms.len());
        for s in syms {
            vals.push(assignment.get(s));
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = vals[i].ok_or_else(|| Error::MissingSymbol(syms[i].clone()))?;
                t *= num_traits::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces symbols by polynomials of a (possibly different) target ring.
    /// Symbols not in `map` are carried over by name and must exist in `target`.
    pub fn substitute(&self, map: &BTreeMap<String, ParamPoly>, target: &ParamRing) -> Result<ParamPoly> {
        for v in map.values() {
            v.check_ring(target)?;
        }
        let syms = self.ring.symbols();
        let mut images: Vec<ParamPoly> = Vec::with_capacity(syms.len());
        for s in syms {
            match map.get(s) {
                Some(p) => images.push(p.clone()),
                None => images.push(target.var(s)?),
            }
        }
        let mut cache: Vec<Vec<ParamPoly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut out = target.zero();
        for (e, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().mul_unchecked(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul_unchecked(&cache[i][k as usize]);
            }
            out = out.add_unchecked(&t, false);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a ring containing all symbols it uses.
    pub fn embed(&self, target: &ParamRing) -> Result<ParamPoly> {
        if self.ring == *target {
            return Ok(self.clone());
        }
        let idx: Vec<Option<usize>> = self.ring.symbols().iter().map(|s| target.index_of(s)).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = target.zero_exps();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = idx[i].ok_or_else(|| Error::UnknownSymbol(self.ring.symbols()[i].clone()))?;
                f[j] = k;
            }
            terms.insert(f, c.clone());
        }
        Ok(ParamPoly { ring: target.clone(), terms })
    }

    /// Names of the symbols that actually occur.
    pub fn support(&self) -> Vec<String> {
        let syms = self.ring.symbols();
        (0..syms.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| syms[i].clone())
            .collect()
    }

    /// Coefficient list in one symbol: `self = Σ_k out[k] * sym^k`.
    pub fn coefficients_in(&self, sym: usize) -> Vec<ParamPoly> {
        let d = self.degree_in(sym) as usize;
        let mut out = vec![self.ring.zero(); d + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[sym] as usize;
            f[sym] = 0;
            out[k].add_term(&f, c);
        }
        out
    }

    /// Approximate value; used only for display.
    pub fn to_f64(&self) -> Option<f64> {
        self.constant_value().and_then(|c| c.to_f64())
    }
}

fn lex_desc(a: &Exps, b: &Exps) -> Ordering {
    b.cmp(a)
}

impl fmt::Display for ParamPoly {
    /// Canonical rendering: terms in descending lexicographic order of their
    /// exponent vectors (symbol order of the ring), e.g.
    /// `lambda^2 - 2*lambda - 1/4*s^2 + 1/2*s*t - 1/4*t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by(|a, b| lex_desc(a, b));
        let syms = self.ring.symbols();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(syms[i].clone()),
                    _ => factors.push(format!("{}^{}", syms[i], k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&ParamPoly> for &ParamPoly {
            type Output = ParamPoly;
            /// Panics on a ring mismatch; use [`poly_arith`] for a checked variant.
            fn $m(self, rhs: &ParamPoly) -> ParamPoly {
                assert!(self.ring == rhs.ring, "parameter ring mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: &ParamPoly) -> ParamPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<ParamPoly> for &ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &ParamPoly, b: &ParamPoly| a.add_unchecked(b, false));
forward_binop!(Sub, sub, |a: &ParamPoly, b: &ParamPoly| a.add_unchecked(b, true));
forward_binop!(Mul, mul, |a: &ParamPoly, b: &ParamPoly| a.mul_unchecked(b));

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&-Rat::one())
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

struct Parser<'a> {
    ring: &'a ParamRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ParamPoly> {
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

    fn term(&mut self) -> Result<ParamPoly> {
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
                    let k = d.constant_value().ok_or_else(|| self.err("division by a non-constant"))?;
                    if k.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&k.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ParamPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<ParamPoly> {
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

    fn atom(&mut self) -> Result<ParamPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(self.ring.constant(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.ring.var(name)
            }
            _ => Err(self.err("expected a number, symbol or `(`")),
        }
    }
}
