//! PBW normal ordering in U(gl_N) relative to a zone-tagged ordered basis.
//!
//! A basis is a list of rational combinations of the matrix units E_ij. Its
//! structure constants come from the gl_N bracket
//! `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`, re-expressed in the basis, so
//! subalgebras such as sp_n or an Iwasawa-ordered gl_N need no separate tables.
//!
//! Monomials are run-length encoded `(generator, power)` lists with strictly
//! increasing generator indices. Products are computed by multiplying
//! monomials by one generator at a time; those normal forms involve only
//! rational structure constants and are memoized per basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Zero};
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{GlMat, SpanSolver};
use crate::params::{Exps, ParamPoly, ParamRing, Rat};

/// Role of a generator in the reductions of module `reduce`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Zone {
    /// Leftmost block (𝔫 of an Iwasawa basis, 𝔫̄ of a Verma basis).
    NilpotentLeft,
    /// Middle abelian block (𝔞).
    AbelianMid,
    /// Rightmost block, peeled by a character (𝔨, or 𝔫 for Verma reduction).
    CompactRight,
    /// No reduction role.
    Plain,
}

impl Zone {
    fn rank(self) -> u8 {
        match self {
            Zone::NilpotentLeft => 0,
            Zone::AbelianMid | Zone::Plain => 1,
            Zone::CompactRight => 2,
        }
    }
}

/// One basis element: a named rational combination of matrix units.
#[derive(Debug, Clone)]
pub struct BasisGenerator {
    pub name: String,
    pub matrix: GlMat,
    pub zone: Zone,
}

impl BasisGenerator {
    pub fn new(name: impl Into<String>, matrix: GlMat, zone: Zone) -> Self {
        BasisGenerator { name: name.into(), matrix, zone }
    }
}

/// Run-length monomial: `(generator index, power)` with increasing indices.
pub type Mono = SmallVec<[(u16, u16); 6]>;

type RatTerms = Vec<(Mono, Rat)>;
type Comb = Vec<(u16, Rat)>;

/// Ordered, zone-tagged basis of a subalgebra of gl_N.
pub struct OrderedBasis {
    id: String,
    n: usize,
    gens: Vec<BasisGenerator>,
    brackets: Vec<Vec<Comb>>,
    solver: SpanSolver,
    rcache: DashMap<(Mono, u16), Arc<RatTerms>, FxBuildHasher>,
    lcache: DashMap<(u16, Mono), Arc<RatTerms>, FxBuildHasher>,
}

impl fmt::Debug for OrderedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        write!(f, "OrderedBasis({}: {:?})", self.id, names)
    }
}

impl OrderedBasis {
    /// Builds a basis, checking zone order, linear independence and closure
    /// under the bracket.
    pub fn new(id: impl Into<String>, n: usize, gens: Vec<BasisGenerator>) -> Result<Arc<Self>> {
        let id = id.into();
        if gens.len() > u16::MAX as usize {
            return Err(Error::InvalidBasis("too many generators".into()));
        }
        for w in gens.windows(2) {
            if w[0].zone.rank() > w[1].zone.rank() {
                return Err(Error::InvalidBasis(format!(
                    "{id}: zone order violated at `{}` ({:?}) before `{}` ({:?})",
                    w[0].name, w[0].zone, w[1].name, w[1].zone
                )));
            }
        }
        for g in &gens {
            if g.matrix.n != n {
                return Err(Error::InvalidBasis(format!("{id}: `{}` is not {n}x{n}", g.name)));
            }
        }
        let family: Vec<Vec<Rat>> = gens.iter().map(|g| g.matrix.to_vec()).collect();
        let solver = SpanSolver::new(&family)
            .map_err(|r| Error::InvalidBasis(format!("{id}: generators dependent (rank {r} of {})", gens.len())))?;
        let mut brackets = vec![vec![Vec::new(); gens.len()]; gens.len()];
        for a in 0..gens.len() {
            for b in 0..a {
                let m = gens[a].matrix.bracket(&gens[b].matrix);
                let c = solve_comb(&solver, &m).ok_or_else(|| {
                    Error::InvalidBasis(format!(
                        "{id}: [{}, {}] leaves the span",
                        gens[a].name, gens[b].name
                    ))
                })?;
                let neg: Comb = c.iter().map(|(i, r)| (*i, -r.clone())).collect();
                brackets[a][b] = c;
                brackets[b][a] = neg;
            }
        }
        Ok(Arc::new(OrderedBasis {
            id,
            n,
            gens,
            brackets,
            solver,
            rcache: DashMap::with_hasher(FxBuildHasher),
            lcache: DashMap::with_hasher(FxBuildHasher),
        }))
    }

    /// E_11, E_12, …, E_NN in lexicographic order, all zone `Plain`.
    pub fn gl(n: usize) -> Arc<Self> {
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                gens.push(BasisGenerator::new(format!("E{}{}", i + 1, j + 1), GlMat::unit(n, i, j), Zone::Plain));
            }
        }
        Self::new(format!("gl{n}:E"), n, gens).expect("gl_N basis is valid")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Matrix size N.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[BasisGenerator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &BasisGenerator {
        &self.gens[i]
    }

    pub fn zone(&self, i: usize) -> Zone {
        self.gens[i].zone
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Indices of all generators in a zone.
    pub fn zone_indices(&self, z: Zone) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.gens[i].zone == z).collect()
    }

    /// Coordinates of a matrix in this basis.
    pub fn express(&self, m: &GlMat) -> Result<Vec<(u16, Rat)>> {
        if m.n != self.n {
            return Err(Error::NotInSpan { basis: self.id.clone(), what: format!("{m:?} has wrong size") });
        }
        solve_comb(&self.solver, m)
            .ok_or_else(|| Error::NotInSpan { basis: self.id.clone(), what: format!("{m:?}") })
    }

    /// Structure constants: `[g_a, g_b]` as a combination of generators.
    pub fn bracket_of(&self, a: usize, b: usize) -> &[(u16, Rat)] {
        &self.brackets[a][b]
    }

    /// Number of memoized monomial-times-generator normal forms.
    pub fn cache_size(&self) -> usize {
        self.rcache.len() + self.lcache.len()
    }

    /// Normal form of `m · g`.
    fn rmul(&self, m: &Mono, g: u16) -> Arc<RatTerms> {
        match m.last() {
            None => return Arc::new(vec![(smallvec::smallvec![(g, 1)], Rat::one())]),
            Some(&(y, _)) if y <= g => {
                let mut out = m.clone();
                push_factor(&mut out, g);
                return Arc::new(vec![(out, Rat::one())]);
            }
            _ => {}
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.rcache.get(&key) {
            return hit.clone();
        }
        // m = m'·y with y > g:  m'·y·g = (m'·g)·y + m'·[y, g].
        let mut head = m.clone();
        let y = pop_last_factor(&mut head);
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        for (mono, c) in self.rmul(&head, g).iter() {
            for (mono2, c2) in self.rmul(mono, y).iter() {
                add_rat(&mut acc, mono2, &(c * c2));
            }
        }
        for (h, c) in &self.brackets[y as usize][g as usize] {
            for (mono, c2) in self.rmul(&head, *h).iter() {
                add_rat(&mut acc, mono, &(c * c2));
            }
        }
        let out = Arc::new(finish_rat(acc));
        self.rcache.insert(key, out.clone());
        out
    }

    /// Normal form of `g · m`.
    fn lmul(&self, g: u16, m: &Mono) -> Arc<RatTerms> {
        match m.first() {
            None => return Arc::new(vec![(smallvec::smallvec![(g, 1)], Rat::one())]),
            Some(&(y, _)) if g <= y => {
                let mut out = m.clone();
                if out[0].0 == g {
                    out[0].1 += 1;
                } else {
                    out.insert(0, (g, 1));
                }
                return Arc::new(vec![(out, Rat::one())]);
            }
            _ => {}
        }
        let key = (g, m.clone());
        if let Some(hit) = self.lcache.get(&key) {
            return hit.clone();
        }
        // m = y·m' with y < g:  g·y·m' = y·(g·m') + [g, y]·m'.
        let mut tail = m.clone();
        let y = pop_first_factor(&mut tail);
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        for (mono, c) in self.lmul(g, &tail).iter() {
            for (mono2, c2) in self.lmul(y, mono).iter() {
                add_rat(&mut acc, mono2, &(c * c2));
            }
        }
        for (h, c) in &self.brackets[g as usize][y as usize] {
            for (mono, c2) in self.lmul(*h, &tail).iter() {
                add_rat(&mut acc, mono, &(c * c2));
            }
        }
        let out = Arc::new(finish_rat(acc));
        self.lcache.insert(key, out.clone());
        out
    }

    /// Normal form of the product of two normal-ordered monomials.
    fn mono_mul(&self, a: &Mono, b: &Mono) -> RatTerms {
        if b.is_empty() {
            return vec![(a.clone(), Rat::one())];
        }
        if a.is_empty() {
            return vec![(b.clone(), Rat::one())];
        }
        if a.last().unwrap().0 <= b.first().unwrap().0 {
            let mut out = a.clone();
            for &(g, p) in b {
                for _ in 0..p {
                    push_factor(&mut out, g);
                }
            }
            return vec![(out, Rat::one())];
        }
        let mut cur: FxHashMap<Mono, Rat> = FxHashMap::default();
        cur.insert(a.clone(), Rat::one());
        for &(g, p) in b {
            for _ in 0..p {
                let mut next: FxHashMap<Mono, Rat> = FxHashMap::default();
                for (m, c) in &cur {
                    for (m2, c2) in self.rmul(m, g).iter() {
                        add_rat(&mut next, m2, &(c * c2));
                    }
                }
                cur = next;
            }
        }
        finish_rat(cur)
    }
}

fn solve_comb(solver: &SpanSolver, m: &GlMat) -> Option<Comb> {
    let c = solver.solve(&m.to_vec())?;
    Some(
        c.into_iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(i, r)| (i as u16, r))
            .collect(),
    )
}

fn push_factor(m: &mut Mono, g: u16) {
    match m.last_mut() {
        Some((y, p)) if *y == g => *p += 1,
        _ => m.push((g, 1)),
    }
}

fn pop_last_factor(m: &mut Mono) -> u16 {
    let (y, p) = m.last_mut().expect("nonempty monomial");
    let y = *y;
    if *p == 1 {
        m.pop();
    } else {
        *p -= 1;
    }
    y
}

fn pop_first_factor(m: &mut Mono) -> u16 {
    let y = m[0].0;
    if m[0].1 == 1 {
        m.remove(0);
    } else {
        m[0].1 -= 1;
    }
    y
}

fn add_rat(acc: &mut FxHashMap<Mono, Rat>, m: &Mono, c: &Rat) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(v) => *v += c,
        None => {
            acc.insert(m.clone(), c.clone());
        }
    }
}

fn finish_rat(acc: FxHashMap<Mono, Rat>) -> RatTerms {
    let mut v: RatTerms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Total degree of a monomial.
pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&(_, p)| p as u32).sum()
}

/// Flat accumulator keyed by (monomial, parameter exponents); avoids
/// rebuilding coefficient polynomials in the hot product loops.
pub(crate) struct Accumulator {
    ring: ParamRing,
    map: FxHashMap<(Mono, Exps), Rat>,
}

impl Accumulator {
    pub(crate) fn new(ring: &ParamRing) -> Self {
        Accumulator { ring: ring.clone(), map: FxHashMap::default() }
    }

    pub(crate) fn add(&mut self, m: &Mono, poly: &ParamPoly, k: &Rat) {
        if k.is_zero() {
            return;
        }
        for (e, c) in poly.terms() {
            let v = c * k;
            match self.map.get_mut(&(m.clone(), e.clone())) {
                Some(x) => *x += v,
                None => {
                    self.map.insert((m.clone(), e.clone()), v);
                }
            }
        }
    }

    pub(crate) fn finish(self, basis: &Arc<OrderedBasis>) -> EnvElement {
        let mut grouped: BTreeMap<Mono, BTreeMap<Exps, Rat>> = BTreeMap::new();
        for ((m, e), c) in self.map {
            if !c.is_zero() {
                grouped.entry(m).or_default().insert(e, c);
            }
        }
        let terms = grouped
            .into_iter()
            .map(|(m, t)| (m, ParamPoly::from_terms(self.ring.clone(), t)))
            .collect();
        EnvElement { basis: basis.clone(), ring: self.ring, terms }
    }
}

/// Element of U(g): PBW-ordered monomials with parameter-polynomial coefficients.
#[derive(Clone)]
pub struct EnvElement {
    basis: Arc<OrderedBasis>,
    ring: ParamRing,
    terms: BTreeMap<Mono, ParamPoly>,
}

impl PartialEq for EnvElement {
    fn eq(&self, other: &Self) -> bool {
        self.basis.id == other.basis.id && self.ring == other.ring && self.terms == other.terms
    }
}

impl fmt::Debug for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let word: Vec<String> = m
                    .iter()
                    .map(|&(g, p)| {
                        let name = &self.basis.gens[g as usize].name;
                        if p == 1 {
                            name.clone()
                        } else {
                            format!("{name}^{p}")
                        }
                    })
                    .collect();
                if word.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", word.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Word-level normal ordering of a sequence of generator indices.
pub fn normal_order(word: &[usize], basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Result<EnvElement> {
    let mut cur: FxHashMap<Mono, Rat> = FxHashMap::default();
    cur.insert(Mono::new(), Rat::one());
    for &g in word {
        if g >= basis.len() {
            return Err(Error::InvalidGenerator(g));
        }
        let mut next: FxHashMap<Mono, Rat> = FxHashMap::default();
        for (m, c) in &cur {
            for (m2, c2) in basis.rmul(m, g as u16).iter() {
                add_rat(&mut next, m2, &(c * c2));
            }
        }
        cur = next;
    }
    let mut out = EnvElement::zero(basis, ring);
    for (m, c) in cur {
        if !c.is_zero() {
            out.terms.insert(m, ring.constant(c));
        }
    }
    Ok(out)
}

impl EnvElement {
    pub fn zero(basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Self {
        EnvElement { basis: basis.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Self {
        Self::scalar(basis, ring.one())
    }

    pub fn scalar(basis: &Arc<OrderedBasis>, c: ParamPoly) -> Self {
        let ring = c.ring().clone();
        let mut out = Self::zero(basis, &ring);
        if !c.is_zero() {
            out.terms.insert(Mono::new(), c);
        }
        out
    }

    /// The degree-one element given by generator `i`.
    pub fn generator(basis: &Arc<OrderedBasis>, ring: &ParamRing, i: usize) -> Result<Self> {
        if i >= basis.len() {
            return Err(Error::InvalidGenerator(i));
        }
        let mut out = Self::zero(basis, ring);
        out.terms.insert(smallvec::smallvec![(i as u16, 1)], ring.one());
        Ok(out)
    }

    /// A gl_N matrix viewed as a degree-one element of this basis.
    pub fn from_matrix(basis: &Arc<OrderedBasis>, ring: &ParamRing, m: &GlMat) -> Result<Self> {
        let mut out = Self::zero(basis, ring);
        for (i, c) in basis.express(m)? {
            out.terms.insert(smallvec::smallvec![(i, 1)], ring.constant(c));
        }
        Ok(out)
    }

    /// The matrix unit E_ij (1-based indices, as in the paper).
    pub fn e(basis: &Arc<OrderedBasis>, ring: &ParamRing, i: usize, j: usize) -> Result<Self> {
        Self::from_matrix(basis, ring, &GlMat::unit(basis.n, i - 1, j - 1))
    }

    pub(crate) fn from_parts(basis: &Arc<OrderedBasis>, ring: &ParamRing, terms: BTreeMap<Mono, ParamPoly>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        EnvElement { basis: basis.clone(), ring: ring.clone(), terms }
    }

    pub fn basis(&self) -> &Arc<OrderedBasis> {
        &self.basis
    }

    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Mono) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar value if the element has degree ≤ 0.
    pub fn scalar_value(&self) -> Option<ParamPoly> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => self.terms.get(&Mono::new()).cloned(),
            _ => None,
        }
    }

    /// Filtration degree (order); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).max()
    }

    /// Terms sorted by degree, then lexicographically.
    pub fn sorted_terms(&self) -> Vec<(&Mono, &ParamPoly)> {
        let mut v: Vec<(&Mono, &ParamPoly)> = self.terms.iter().collect();
        v.sort_by(|a, b| mono_degree(a.0).cmp(&mono_degree(b.0)).then_with(|| a.0.cmp(b.0)));
        v
    }

    fn check_compat(&self, other: &EnvElement) -> Result<()> {
        if !Arc::ptr_eq(&self.basis, &other.basis) && self.basis.id != other.basis.id {
            return Err(Error::BasisMismatch(self.basis.id.clone(), other.basis.id.clone()));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.symbols().join(","), other.ring.symbols().join(",")));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c, &Rat::one());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c, &-Rat::one());
        }
        Ok(out)
    }

    /// Panicking shorthands for elements known to share a basis.
    pub fn add(&self, other: &EnvElement) -> EnvElement {
        self.try_add(other).expect("compatible elements")
    }

    pub fn sub(&self, other: &EnvElement) -> EnvElement {
        self.try_sub(other).expect("compatible elements")
    }

    pub fn neg(&self) -> EnvElement {
        self.scale_rat(&-Rat::one())
    }

    pub(crate) fn add_term(&mut self, m: &Mono, c: &ParamPoly, k: &Rat) {
        if k.is_zero() || c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                v.add_scaled(c, k);
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.scale(k));
            }
        }
    }

    pub fn scale_rat(&self, k: &Rat) -> EnvElement {
        if k.is_zero() {
            return Self::zero(&self.basis, &self.ring);
        }
        EnvElement {
            basis: self.basis.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(k))).collect(),
        }
    }

    /// Multiplication by a central parameter polynomial.
    pub fn scale(&self, c: &ParamPoly) -> EnvElement {
        assert!(*c.ring() == self.ring, "parameter ring mismatch");
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        EnvElement { basis: self.basis.clone(), ring: self.ring.clone(), terms }
    }

    /// Adds a scalar.
    pub fn add_scalar(&self, c: &ParamPoly) -> EnvElement {
        let mut out = self.clone();
        out.add_term(&Mono::new(), c, &Rat::one());
        out
    }

    /// Normal-ordered product.
    pub fn try_mul(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compat(other)?;
        if let Some(gens) = other.linear_generators() {
            return Ok(self.mul_linear_right(&gens));
        }
        if let Some(gens) = self.linear_generators() {
            return Ok(other.mul_linear_left(&gens));
        }
        let mut acc = Accumulator::new(&self.ring);
        for (mb, cb) in &other.terms {
            for (ma, ca) in &self.terms {
                let c = ca * cb;
                for (m, r) in self.basis.mono_mul(ma, mb) {
                    acc.add(&m, &c, &r);
                }
            }
        }
        Ok(acc.finish(&self.basis))
    }

    pub fn mul(&self, other: &EnvElement) -> EnvElement {
        self.try_mul(other).expect("compatible elements")
    }

    /// `self·other − other·self`.
    pub fn try_commutator(&self, other: &EnvElement) -> Result<EnvElement> {
        Ok(self.try_mul(other)?.sub(&other.try_mul(self)?))
    }

    pub fn commutator(&self, other: &EnvElement) -> EnvElement {
        self.try_commutator(other).expect("compatible elements")
    }

    pub fn pow(&self, k: u32) -> EnvElement {
        let mut out = Self::one(&self.basis, &self.ring);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// If the element is `Σ c_g g + c_0` (degree ≤ 1), its parts.
    pub(crate) fn linear_generators(&self) -> Option<Vec<(Option<u16>, ParamPoly)>> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            match m.as_slice() {
                [] => out.push((None, c.clone())),
                [(g, 1)] => out.push((Some(*g), c.clone())),
                _ => return None,
            }
        }
        Some(out)
    }

    /// `self · (Σ c_g g + c_0)`.
    fn mul_linear_right(&self, gens: &[(Option<u16>, ParamPoly)]) -> EnvElement {
        let mut acc = Accumulator::new(&self.ring);
        for (g, cg) in gens {
            for (m, c) in &self.terms {
                let cc = c * cg;
                match g {
                    None => acc.add(m, &cc, &Rat::one()),
                    Some(g) => {
                        for (m2, r) in self.basis.rmul(m, *g).iter() {
                            acc.add(m2, &cc, r);
                        }
                    }
                }
            }
        }
        acc.finish(&self.basis)
    }

    /// `(Σ c_g g + c_0) · self`.
    fn mul_linear_left(&self, gens: &[(Option<u16>, ParamPoly)]) -> EnvElement {
        let mut acc = Accumulator::new(&self.ring);
        for (g, cg) in gens {
            for (m, c) in &self.terms {
                let cc = c * cg;
                match g {
                    None => acc.add(m, &cc, &Rat::one()),
                    Some(g) => {
                        for (m2, r) in self.basis.lmul(*g, m).iter() {
                            acc.add(m2, &cc, r);
                        }
                    }
                }
            }
        }
        acc.finish(&self.basis)
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Mono) -> bool) -> EnvElement {
        EnvElement {
            basis: self.basis.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Maps coefficients into another parameter ring.
    pub fn map_coefficients(&self, ring: &ParamRing, mut f: impl FnMut(&ParamPoly) -> Result<ParamPoly>) -> Result<EnvElement> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Ok(EnvElement { basis: self.basis.clone(), ring: ring.clone(), terms })
    }

    /// Re-expresses the element in another basis of (a superalgebra of) the same span.
    pub fn change_basis(&self, target: &Arc<OrderedBasis>) -> Result<EnvElement> {
        if Arc::ptr_eq(&self.basis, target) {
            return Ok(self.clone());
        }
        if target.n != self.basis.n {
            return Err(Error::BasisMismatch(self.basis.id.clone(), target.id.clone()));
        }
        let mut images: Vec<Option<EnvElement>> = vec![None; self.basis.len()];
        let mut out = EnvElement::zero(target, &self.ring);
        for (m, c) in &self.terms {
            let mut prod = EnvElement::scalar(target, c.clone());
            for &(g, p) in m {
                let g = g as usize;
                if images[g].is_none() {
                    images[g] = Some(EnvElement::from_matrix(target, &self.ring, &self.basis.gens[g].matrix)?);
                }
                let img = images[g].as_ref().unwrap();
                for _ in 0..p {
                    prod = prod.mul(img);
                }
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// The top-degree symbol as a map from sorted generator multisets to coefficients.
    pub fn symbol(&self) -> BTreeMap<Mono, ParamPoly> {
        let Some(d) = self.order() else {
            return BTreeMap::new();
        };
        self.terms
            .iter()
            .filter(|(m, _)| mono_degree(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    pub fn to_json(&self) -> EnvElementJson {
        EnvElementJson {
            basis_id: self.basis.id.clone(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    coeff: c.to_string(),
                    monomial: m.iter().map(|&(g, p)| [g as u32, p as u32]).collect(),
                })
                .collect(),
        }
    }

    /// Parses the JSON form against a known basis and parameter ring.
    pub fn from_json(json: &EnvElementJson, basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Result<EnvElement> {
        if json.basis_id != basis.id {
            return Err(Error::BasisMismatch(json.basis_id.clone(), basis.id.clone()));
        }
        let mut out = EnvElement::zero(basis, ring);
        for t in &json.terms {
            let c = ring.parse(&t.coeff)?;
            let mut m = Mono::new();
            for &[g, p] in &t.monomial {
                if g as usize >= basis.len() {
                    return Err(Error::InvalidGenerator(g as usize));
                }
                if p == 0 || m.last().is_some_and(|&(h, _)| h as u32 >= g) {
                    return Err(Error::Data(format!("monomial {:?} is not normal-ordered", t.monomial)));
                }
                m.push((g as u16, p as u16));
            }
            out.add_term(&m, &c, &Rat::one());
        }
        Ok(out)
    }
}

/// Serialized [`EnvElement`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvElementJson {
    #[serde(rename = "basisId")]
    pub basis_id: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<[u32; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rat;

    fn gl2_reversed() -> Arc<OrderedBasis> {
        // E21 < E11 < E22 < E12
        let g = |i, j| BasisGenerator::new(format!("E{}{}", i + 1, j + 1), GlMat::unit(2, i, j), Zone::Plain);
        OrderedBasis::new("gl2:rev", 2, vec![g(1, 0), g(0, 0), g(1, 1), g(0, 1)]).unwrap()
    }

    #[test]
    fn swap_produces_commutator() {
        let b = gl2_reversed();
        let r = ParamRing::empty();
        let u = normal_order(&[3, 0], &b, &r).unwrap();
        let expect = normal_order(&[0, 3], &b, &r)
            .unwrap()
            .add(&EnvElement::e(&b, &r, 1, 1).unwrap())
            .sub(&EnvElement::e(&b, &r, 2, 2).unwrap());
        assert_eq!(u, expect);
    }

    #[test]
    fn squares_stay_put() {
        let b = OrderedBasis::gl(2);
        let r = ParamRing::empty();
        let u = normal_order(&[0, 0], &b, &r).unwrap();
        assert_eq!(u.num_terms(), 1);
        assert_eq!(u.terms().next().unwrap().0.as_slice(), &[(0u16, 2u16)]);
    }

    #[test]
    fn weight_of_e12() {
        let b = OrderedBasis::gl(2);
        let r = ParamRing::empty();
        let e = |i, j| EnvElement::e(&b, &r, i, j).unwrap();
        let h = e(1, 1).add(&e(2, 2));
        assert!(h.commutator(&e(1, 2)).is_zero());
        let h = e(1, 1).sub(&e(2, 2));
        assert_eq!(h.commutator(&e(1, 2)), e(1, 2).scale_rat(&rat(2)));
    }

    #[test]
    fn dependent_basis_rejected() {
        let g = |i, j| BasisGenerator::new("x", GlMat::unit(2, i, j), Zone::Plain);
        assert!(OrderedBasis::new("bad", 2, vec![g(0, 0), g(0, 0)]).is_err());
        let not_closed = vec![g(0, 1), g(1, 0)];
        assert!(OrderedBasis::new("bad", 2, not_closed).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let b = OrderedBasis::gl(2);
        let r = ParamRing::new(["s"]).unwrap();
        let u = normal_order(&[3, 1, 2], &b, &r).unwrap().scale(&r.parse("s + 1/2").unwrap());
        let j = u.to_json();
        assert_eq!(EnvElement::from_json(&j, &b, &r).unwrap(), u);
    }
}
