//! Classical complex Lie algebras inside gl_N, the three catalog real forms
//! and the static Satake degree table.

use std::collections::BTreeMap;
use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, GlMat, SpanSolver};
use crate::params::{fmt_rat, rat, ratio, ParamPoly, ParamRing, Rat};
use crate::pbw::{BasisGenerator, EnvElement, OrderedBasis, Zone};

/// Kinds of classical complex Lie algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// gl_n, N = n.
    Gl,
    /// o_{2n+1}, N = 2n+1.
    OOdd,
    /// sp_n, N = 2n.
    Sp,
    /// o_{2n}, N = 2n.
    OEven,
}

impl AlgebraKind {
    pub fn matrix_size(self, n: usize) -> usize {
        match self {
            AlgebraKind::Gl => n,
            AlgebraKind::OOdd => 2 * n + 1,
            AlgebraKind::Sp | AlgebraKind::OEven => 2 * n,
        }
    }

    /// δ_g of the Θ̄ minimal polynomial.
    pub fn delta(self) -> i64 {
        match self {
            AlgebraKind::Sp => 1,
            AlgebraKind::Gl | AlgebraKind::OOdd => 0,
            AlgebraKind::OEven => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(AlgebraKind::Gl),
            "o_odd" | "oodd" | "b" => Ok(AlgebraKind::OOdd),
            "sp" | "c" => Ok(AlgebraKind::Sp),
            "o_even" | "oeven" | "d" => Ok(AlgebraKind::OEven),
            _ => Err(Error::InvalidParams(format!("unknown algebra kind `{s}`"))),
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::Gl => "gl",
            AlgebraKind::OOdd => "o_odd",
            AlgebraKind::Sp => "sp",
            AlgebraKind::OEven => "o_even",
        };
        f.write_str(s)
    }
}

/// The involution σ with g = gl_N^σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    /// gl_n itself; F_ij = E_ij.
    Identity,
    /// X ↦ −Ĩ ᵗX Ĩ.
    Orthogonal,
    /// X ↦ −J̃⁻¹ ᵗX J̃ = J̃ ᵗX J̃, the automorphism whose fixed points are sp_n.
    Symplectic,
}

impl Involution {
    pub fn apply(self, x: &GlMat) -> GlMat {
        let n = x.n;
        match self {
            Involution::Identity => x.clone(),
            Involution::Orthogonal => {
                // (Ĩ ᵗX Ĩ)_{ab} = X_{N+1-b, N+1-a}
                GlMat::from_entries(n, x.entries().map(|(&(i, j), c)| ((n - 1 - j, n - 1 - i), -c.clone())))
            }
            Involution::Symplectic => {
                let h = n / 2;
                let jt = antidiag_j(h);
                jt.mul(&x.transpose()).mul(&jt)
            }
        }
    }
}

/// J̃_n = ((0, Ĩ_n), (−Ĩ_n, 0)).
fn antidiag_j(h: usize) -> GlMat {
    let mut m = GlMat::zero(2 * h);
    for i in 0..h {
        m.add_entry(i, 2 * h - 1 - i, &Rat::one());
        m.add_entry(h + i, h - 1 - i, &-Rat::one());
    }
    m
}

/// A classical complex Lie algebra realized inside gl_N.
#[derive(Debug, Clone)]
pub struct AlgebraData {
    pub kind: AlgebraKind,
    pub n: usize,
    pub big_n: usize,
    pub sigma: Involution,
    /// F_ij as matrices, row-major N×N.
    pub f_matrices: Vec<GlMat>,
    /// Plain basis of g chosen among the F_ij.
    pub basis: Arc<OrderedBasis>,
    /// Verma ordering n̄ | a | n with n = g ∩ strictly lower triangular.
    pub verma: Arc<OrderedBasis>,
}

impl AlgebraData {
    pub fn f(&self, i: usize, j: usize) -> &GlMat {
        &self.f_matrices[i * self.big_n + j]
    }

    /// The matrix 𝔽 of degree-one elements in the given basis.
    pub fn f_elements(&self, basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Result<Vec<EnvElement>> {
        self.f_matrices.iter().map(|m| EnvElement::from_matrix(basis, ring, m)).collect()
    }

    /// Index in `verma` of the Cartan generator F_i (1-based i ≤ n).
    pub fn verma_cartan_index(&self, i: usize) -> usize {
        self.verma.index_of(&format!("F{i}{i}")).expect("Cartan generator present")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Builds gl_n, o_{2n+1}, sp_n or o_{2n} through its involution.
pub fn build_algebra(kind: AlgebraKind, n: usize) -> Result<AlgebraData> {
    if n == 0 {
        return Err(Error::InvalidParams("rank must be at least 1".into()));
    }
    let big_n = kind.matrix_size(n);
    let sigma = match kind {
        AlgebraKind::Gl => Involution::Identity,
        AlgebraKind::OOdd | AlgebraKind::OEven => Involution::Orthogonal,
        AlgebraKind::Sp => Involution::Symplectic,
    };
    let mut f_matrices = Vec::with_capacity(big_n * big_n);
    for i in 0..big_n {
        for j in 0..big_n {
            let e = GlMat::unit(big_n, i, j);
            f_matrices.push(if kind == AlgebraKind::Gl { e } else { e.add(&sigma.apply(&e)) });
        }
    }
    let name = |i: usize, j: usize| format!("F{}{}", i + 1, j + 1);
    // Greedy independent subsets, by triangular part.
    let pick = |pred: &dyn Fn(usize, usize) -> bool, zone: Zone| -> Vec<BasisGenerator> {
        let mut chosen: Vec<Vec<Rat>> = Vec::new();
        let mut out = Vec::new();
        for i in 0..big_n {
            for j in 0..big_n {
                if !pred(i, j) {
                    continue;
                }
                let m = &f_matrices[i * big_n + j];
                if m.is_zero() {
                    continue;
                }
                let mut trial = chosen.clone();
                trial.push(m.to_vec());
                if SpanSolver::new(&trial).is_ok() {
                    chosen = trial;
                    out.push(BasisGenerator::new(name(i, j), m.clone(), zone));
                }
            }
        }
        out
    };
    let nbar = pick(&|i, j| i < j, Zone::NilpotentLeft);
    let cartan = pick(&|i, j| i == j, Zone::AbelianMid);
    let nil = pick(&|i, j| i > j, Zone::CompactRight);
    let id = format!("{kind}{n}");
    let verma: Vec<BasisGenerator> = nbar.iter().chain(&cartan).chain(&nil).cloned().collect();
    let plain: Vec<BasisGenerator> = verma
        .iter()
        .map(|g| BasisGenerator::new(g.name.clone(), g.matrix.clone(), Zone::Plain))
        .collect();
    let basis = OrderedBasis::new(format!("{id}:F"), big_n, plain)?;
    let verma = OrderedBasis::new(format!("{id}:verma"), big_n, verma)?;
    Ok(AlgebraData { kind, n, big_n, sigma, f_matrices, basis, verma })
}

/// Joint eigenspace decomposition of `space` under ad(h) for commuting
/// semisimple `hs`, with eigenvalues drawn from `candidates`.
pub fn joint_eigenspaces(space: &[GlMat], hs: &[GlMat], candidates: &[Rat]) -> Result<Vec<(Vec<Rat>, Vec<GlMat>)>> {
    let mut parts: Vec<(Vec<Rat>, Vec<GlMat>)> = vec![(Vec::new(), space.to_vec())];
    for h in hs {
        let mut next = Vec::new();
        for (prefix, sub) in &parts {
            let images: Vec<GlMat> = sub.iter().map(|x| h.bracket(x)).collect();
            let mut found = 0;
            for c in candidates {
                let n2 = sub.first().map_or(0, |x| x.n * x.n);
                // Σ x_k (ad h − c) s_k = 0
                let cols: Vec<Vec<Rat>> = sub
                    .iter()
                    .zip(&images)
                    .map(|(s, hs)| hs.sub(&s.scale(c)).to_vec())
                    .collect();
                let rows: Vec<Vec<Rat>> = (0..n2).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
                let ker = kernel(&rows, sub.len());
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let vecs: Vec<GlMat> = ker
                    .iter()
                    .map(|x| {
                        let mut m = GlMat::zero(sub[0].n);
                        for (k, coef) in x.iter().enumerate() {
                            if !coef.is_zero() {
                                m = m.add(&sub[k].scale(coef));
                            }
                        }
                        m
                    })
                    .collect();
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push((p, vecs));
            }
            if found != sub.len() {
                return Err(Error::InvalidBasis("ad-action not diagonalizable over the candidate eigenvalues".into()));
            }
        }
        parts = next;
    }
    Ok(parts)
}

fn lex_sign(v: &[Rat]) -> i32 {
    for x in v {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

/// A positive restricted root with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Root {
    /// Coordinates in the basis e_1, …, e_r dual to the 𝔞 generators.
    pub vector: Vec<i64>,
    pub mult: usize,
}

/// Restricted root system with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedRootSystem {
    pub label: String,
    pub rank: usize,
    pub positive: Vec<Root>,
    pub simple: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RestrictedRootSystem {
    /// Builds the system from positive roots; simple roots are the positive
    /// roots that are not sums of two positive roots.
    pub fn new(label: impl Into<String>, rank: usize, mut positive: Vec<Root>) -> Self {
        positive.sort_by(|a, b| b.vector.cmp(&a.vector));
        let set: Vec<&Vec<i64>> = positive.iter().map(|r| &r.vector).collect();
        let simple = positive
            .iter()
            .filter(|r| {
                !set.iter().any(|a| {
                    let d: Vec<i64> = r.vector.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                    set.contains(&&d)
                })
            })
            .map(|r| r.vector.clone())
            .collect();
        RestrictedRootSystem { label: label.into(), rank, positive, simple }
    }

    /// m_α, 0 if α is not a positive root.
    pub fn multiplicity(&self, v: &[i64]) -> usize {
        self.positive.iter().find(|r| r.vector == v).map_or(0, |r| r.mult)
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.multiplicity(v) > 0 || self.multiplicity(&neg) > 0
    }

    /// Σ_o⁺: positive roots α with α/2 not a root.
    pub fn indivisible(&self) -> Vec<&Root> {
        self.positive
            .iter()
            .filter(|r| {
                if r.vector.iter().any(|x| x % 2 != 0) {
                    return true;
                }
                let half: Vec<i64> = r.vector.iter().map(|x| x / 2).collect();
                !self.is_root(&half)
            })
            .collect()
    }

    /// m_{2α} for the root α (0 when 2α is not a root).
    pub fn double_mult(&self, v: &[i64]) -> usize {
        let d: Vec<i64> = v.iter().map(|x| 2 * x).collect();
        self.multiplicity(&d)
    }

    /// m_{α/2} (0 when α/2 is not a root).
    pub fn half_mult(&self, v: &[i64]) -> usize {
        if v.iter().any(|x| x % 2 != 0) {
            return 0;
        }
        let h: Vec<i64> = v.iter().map(|x| x / 2).collect();
        self.multiplicity(&h)
    }

    /// ρ = ½ Σ m_α α.
    pub fn rho(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.rank];
        for r in &self.positive {
            for (o, x) in out.iter_mut().zip(&r.vector) {
                *o += rat(x * r.mult as i64);
            }
        }
        out.into_iter().map(|x| x / rat(2)).collect()
    }

    /// λ_α = 2⟨λ,α⟩/⟨α,α⟩ with the standard inner product on e-coordinates.
    pub fn coroot_pairing(&self, lambda: &[Rat], alpha: &[i64]) -> Rat {
        let num: Rat = lambda.iter().zip(alpha).map(|(l, a)| l * rat(*a)).sum();
        num * rat(2) / rat(dot(alpha, alpha))
    }

    /// Positive roots grouped by squared length, longest class first.
    pub fn length_classes(&self) -> Vec<(i64, Vec<&Root>)> {
        let mut m: BTreeMap<i64, Vec<&Root>> = BTreeMap::new();
        for r in &self.positive {
            m.entry(dot(&r.vector, &r.vector)).or_default().push(r);
        }
        m.into_iter().rev().collect()
    }

    /// Closure of ±positive roots under all root reflections.
    pub fn weyl_closed(&self) -> bool {
        let all: Vec<Vec<i64>> = self
            .positive
            .iter()
            .flat_map(|r| [r.vector.clone(), r.vector.iter().map(|x| -x).collect()])
            .collect();
        for a in &all {
            let aa = dot(a, a);
            for b in &all {
                let k = 2 * dot(a, b);
                if k % aa != 0 {
                    return false;
                }
                let img: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - (k / aa) * y).collect();
                if !all.contains(&img) {
                    return false;
                }
                let mb = self.multiplicity(b).max(self.multiplicity(&b.iter().map(|x| -x).collect::<Vec<_>>()));
                let mi = self.multiplicity(&img).max(self.multiplicity(&img.iter().map(|x| -x).collect::<Vec<_>>()));
                if mb != mi {
                    return false;
                }
            }
        }
        true
    }
}

/// The catalog real forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RealForm {
    Upq { p: usize, q: usize },
    Spnr { n: usize },
    Glnr { n: usize },
}

impl fmt::Display for RealForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealForm::Upq { p, q } => write!(f, "UPQ({p},{q})"),
            RealForm::Spnr { n } => write!(f, "SPNR({n})"),
            RealForm::Glnr { n } => write!(f, "GLNR({n})"),
        }
    }
}

/// One-dimensional character of 𝔨 as a diagonal weight functional
/// χ(X) = Σ_a w_a X_aa; valid on 𝔨 because the weights are constant on the
/// simple blocks of 𝔨.
#[derive(Debug, Clone, PartialEq)]
pub struct KCharacter {
    pub weights: Vec<ParamPoly>,
}

impl KCharacter {
    pub fn zero(ring: &ParamRing, n: usize) -> Self {
        KCharacter { weights: vec![ring.zero(); n] }
    }

    pub fn ring(&self) -> &ParamRing {
        self.weights[0].ring()
    }

    pub fn eval(&self, x: &GlMat) -> ParamPoly {
        let mut out = self.ring().zero();
        for (&(i, j), c) in x.entries() {
            if i == j {
                out.add_scaled(&self.weights[i], c);
            }
        }
        out
    }

    pub fn negate(&self) -> Self {
        KCharacter { weights: self.weights.iter().map(|w| -w).collect() }
    }

    pub fn embed(&self, ring: &ParamRing) -> Result<Self> {
        Ok(KCharacter { weights: self.weights.iter().map(|w| w.embed(ring)).collect::<Result<_>>()? })
    }
}

/// Catalog record for a real form.
#[derive(Debug, Clone)]
pub struct RealFormData {
    pub form: RealForm,
    pub complex_kind: AlgebraKind,
    pub complex_rank: usize,
    /// 𝔫 | 𝔞 | 𝔨.
    pub iwasawa: Arc<OrderedBasis>,
    /// 𝔭 (plain) | 𝔨.
    pub cartan: Arc<OrderedBasis>,
    /// 𝔫̄ | Cartan | 𝔫 of the complexification.
    pub verma: Arc<OrderedBasis>,
    /// 𝔞 generators (matrices) dual to e_1, …, e_r.
    pub a_matrices: Vec<GlMat>,
    /// 𝔨 basis matrices.
    pub k_matrices: Vec<GlMat>,
    /// The paper's generator matrix (𝔼 for UPQ/GLNR, ((K,P),(Q,−ᵗK)) for SPNR).
    pub matrix: Vec<GlMat>,
    pub roots: RestrictedRootSystem,
    pub rho: Vec<Rat>,
}

impl RealFormData {
    pub fn big_n(&self) -> usize {
        self.iwasawa.n()
    }

    pub fn rank(&self) -> usize {
        self.a_matrices.len()
    }

    /// Parameter symbols of the 𝔨-character template.
    pub fn character_symbols(&self) -> Vec<&'static str> {
        match self.form {
            RealForm::Upq { .. } => vec!["s", "t"],
            RealForm::Spnr { .. } => vec!["ell"],
            RealForm::Glnr { .. } => vec![],
        }
    }

    /// Template character (τ_{s,t} for UPQ, K_ij ↦ ℓδ_ij for SPNR, 0 for GLNR)
    /// over a ring containing the template symbols.
    pub fn k_character(&self, ring: &ParamRing) -> Result<KCharacter> {
        let big_n = self.big_n();
        Ok(match self.form {
            RealForm::Upq { p, .. } => {
                let s = ring.var("s")?;
                let t = ring.var("t")?;
                KCharacter { weights: (0..big_n).map(|a| if a < p { s.clone() } else { t.clone() }).collect() }
            }
            RealForm::Spnr { n } => {
                let l = ring.var("ell")?;
                KCharacter { weights: (0..big_n).map(|a| if a < n { l.clone() } else { -&l }).collect() }
            }
            RealForm::Glnr { .. } => KCharacter::zero(ring, big_n),
        })
    }

    /// χ_ℓ as used by γ_ℓ. For UPQ this is τ_{s,t} with s = qℓ/(p+q),
    /// t = −pℓ/(p+q), the extension of the traceless character that kills the
    /// centre of gl_{p+q}.
    pub fn chi_ell(&self, ring: &ParamRing, ell: &ParamPoly) -> Result<KCharacter> {
        let big_n = self.big_n();
        Ok(match self.form {
            RealForm::Upq { p, q } => {
                let s = ell.scale(&ratio(q as i64, (p + q) as i64));
                let t = ell.scale(&ratio(-(p as i64), (p + q) as i64));
                KCharacter { weights: (0..big_n).map(|a| if a < p { s.clone() } else { t.clone() }).collect() }
            }
            RealForm::Spnr { n } => {
                KCharacter { weights: (0..big_n).map(|a| if a < n { ell.clone() } else { -ell }).collect() }
            }
            RealForm::Glnr { .. } => KCharacter::zero(ring, big_n),
        })
    }

    /// Indices of the 𝔞 generators in `iwasawa`, in e-order.
    pub fn a_indices(&self) -> Vec<usize> {
        self.iwasawa.zone_indices(Zone::AbelianMid)
    }
}

fn half() -> Rat {
    ratio(1, 2)
}

/// Builds the catalog record; zone spans and ρ are checked here.
pub fn build_realform(form: RealForm) -> Result<RealFormData> {
    match form {
        RealForm::Upq { p, q } => {
            if q == 0 || q > p {
                return Err(Error::InvalidParams(format!("UPQ needs 1 ≤ q ≤ p, got p={p}, q={q}")));
            }
            build_upq(p, q)
        }
        RealForm::Spnr { n } => {
            if n == 0 {
                return Err(Error::InvalidParams("SPNR needs n ≥ 1".into()));
            }
            build_spnr(n)
        }
        RealForm::Glnr { n } => {
            if n < 2 {
                return Err(Error::InvalidParams("GLNR needs n ≥ 2".into()));
            }
            build_glnr(n)
        }
    }
}

fn unit(n: usize, i: usize, j: usize) -> GlMat {
    GlMat::unit(n, i, j)
}

/// Sum of ±E terms with 1-based indices.
fn comb(n: usize, terms: &[(i64, usize, usize)]) -> GlMat {
    GlMat::from_entries(n, terms.iter().map(|&(c, i, j)| ((i - 1, j - 1), rat(c))))
}

fn build_upq(p: usize, q: usize) -> Result<RealFormData> {
    let big_n = p + q;
    let bar = |i: usize| p + q + 1 - i;
    let mut nil = Vec::new();
    for i in 1..=q {
        let (ib, _) = (bar(i), ());
        nil.push(BasisGenerator::new(
            format!("Y{i}"),
            comb(big_n, &[(-1, i, i), (1, i, ib), (-1, ib, i), (1, ib, ib)]),
            Zone::NilpotentLeft,
        ));
    }
    for i in 1..=q {
        for k in q + 1..=p {
            nil.push(BasisGenerator::new(
                format!("Y{i},{k}"),
                comb(big_n, &[(1, i, k), (1, bar(i), k)]),
                Zone::NilpotentLeft,
            ));
            nil.push(BasisGenerator::new(
                format!("Y{k},{i}"),
                comb(big_n, &[(1, k, i), (-1, k, bar(i))]),
                Zone::NilpotentLeft,
            ));
        }
    }
    for i in 1..=q {
        for j in 1..=q {
            if i == j {
                continue;
            }
            let (ib, jb) = (bar(i), bar(j));
            nil.push(BasisGenerator::new(
                format!("Y{i},{j},+"),
                comb(big_n, &[(1, i, j), (1, ib, j), (-1, i, jb), (-1, ib, jb)]),
                Zone::NilpotentLeft,
            ));
            if i < j {
                nil.push(BasisGenerator::new(
                    format!("Y{i},{j},1"),
                    comb(big_n, &[(1, i, j), (1, ib, j), (1, i, jb), (1, ib, jb)]),
                    Zone::NilpotentLeft,
                ));
                nil.push(BasisGenerator::new(
                    format!("Y{i},{j},2"),
                    comb(big_n, &[(1, j, i), (-1, jb, i), (-1, j, ib), (1, jb, ib)]),
                    Zone::NilpotentLeft,
                ));
            }
        }
    }
    let a_matrices: Vec<GlMat> = (1..=q).map(|i| comb(big_n, &[(1, i, bar(i)), (1, bar(i), i)])).collect();
    let a_gens: Vec<BasisGenerator> = a_matrices
        .iter()
        .enumerate()
        .map(|(k, m)| BasisGenerator::new(format!("E{}", k + 1), m.clone(), Zone::AbelianMid))
        .collect();
    let mut k_gens = Vec::new();
    let mut p_gens = Vec::new();
    for a in 1..=big_n {
        for b in 1..=big_n {
            let name = format!("E{a},{b}");
            if (a <= p) == (b <= p) {
                k_gens.push(BasisGenerator::new(name, unit(big_n, a - 1, b - 1), Zone::CompactRight));
            } else {
                p_gens.push(BasisGenerator::new(name, unit(big_n, a - 1, b - 1), Zone::Plain));
            }
        }
    }
    let id = format!("upq{p},{q}");
    let matrix: Vec<GlMat> = (0..big_n).flat_map(|i| (0..big_n).map(move |j| unit(big_n, i, j))).collect();
    assemble(
        RealForm::Upq { p, q },
        AlgebraKind::Gl,
        big_n,
        &id,
        nil,
        a_gens,
        k_gens,
        p_gens,
        a_matrices,
        matrix,
        gl_verma(big_n, &id)?,
        upq_label(p, q),
        (1..=q).map(|i| rat((p + q + 1 - 2 * i) as i64)).collect(),
    )
}

fn upq_label(p: usize, q: usize) -> String {
    if p == q {
        format!("C_{q}")
    } else {
        format!("BC_{q}^{{{},2,1}}", 2 * (p - q))
    }
}

fn gl_verma(n: usize, id: &str) -> Result<Arc<OrderedBasis>> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(BasisGenerator::new(format!("E{},{}", i + 1, j + 1), unit(n, i, j), Zone::NilpotentLeft));
        }
    }
    for i in 0..n {
        gens.push(BasisGenerator::new(format!("E{},{}", i + 1, i + 1), unit(n, i, i), Zone::AbelianMid));
    }
    for i in 0..n {
        for j in 0..i {
            gens.push(BasisGenerator::new(format!("E{},{}", i + 1, j + 1), unit(n, i, j), Zone::CompactRight));
        }
    }
    OrderedBasis::new(format!("{id}:verma"), n, gens)
}

/// K_ij, P_ij, Q_ij of the symplectic realization with form ((0,I),(−I,0)), 1-based.
pub fn sp_kpq(n: usize) -> (Vec<GlMat>, Vec<GlMat>, Vec<GlMat>) {
    let big = 2 * n;
    let h = half();
    let mut k = Vec::new();
    let mut pm = Vec::new();
    let mut qm = Vec::new();
    for i in 0..n {
        for j in 0..n {
            k.push(unit(big, i, j).sub(&unit(big, j + n, i + n)).scale(&h));
            pm.push(unit(big, i, j + n).add(&unit(big, j, i + n)).scale(&h));
            qm.push(unit(big, i + n, j).add(&unit(big, j + n, i)).scale(&h));
        }
    }
    (k, pm, qm)
}

fn build_spnr(n: usize) -> Result<RealFormData> {
    let big = 2 * n;
    let (k, pm, qm) = sp_kpq(n);
    let a_matrices: Vec<GlMat> = (0..n).map(|i| unit(big, i, i + n).add(&unit(big, i + n, i))).collect();
    // g = span(K, P, Q)
    let mut g_span: Vec<GlMat> = Vec::new();
    let mut k_gens = Vec::new();
    let mut p_gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            k_gens.push(BasisGenerator::new(format!("K{},{}", i + 1, j + 1), k[i * n + j].clone(), Zone::CompactRight));
            g_span.push(k[i * n + j].clone());
        }
    }
    for i in 0..n {
        for j in i..n {
            p_gens.push(BasisGenerator::new(format!("P{},{}", i + 1, j + 1), pm[i * n + j].clone(), Zone::Plain));
            p_gens.push(BasisGenerator::new(format!("Q{},{}", i + 1, j + 1), qm[i * n + j].clone(), Zone::Plain));
            g_span.push(pm[i * n + j].clone());
            g_span.push(qm[i * n + j].clone());
        }
    }
    let nil = positive_root_generators(&g_span, &a_matrices, "N")?;
    let a_gens: Vec<BasisGenerator> = a_matrices
        .iter()
        .enumerate()
        .map(|(i, m)| BasisGenerator::new(format!("A{}", i + 1), m.clone(), Zone::AbelianMid))
        .collect();
    // 𝔽 = ((K, P), (Q, −ᵗK))
    let mut matrix = vec![GlMat::zero(big); big * big];
    for i in 0..n {
        for j in 0..n {
            matrix[i * big + j] = k[i * n + j].clone();
            matrix[i * big + j + n] = pm[i * n + j].clone();
            matrix[(i + n) * big + j] = qm[i * n + j].clone();
            matrix[(i + n) * big + j + n] = k[j * n + i].scale(&-Rat::one());
        }
    }
    // Verma ordering from the diagonal Cartan, n = lex-negative root spaces.
    let hs: Vec<GlMat> = (0..n).map(|i| k[i * n + i].scale(&rat(2))).collect();
    let verma = triangular_basis(&format!("spnr{n}:verma"), big, &g_span, &hs)?;
    assemble(
        RealForm::Spnr { n },
        AlgebraKind::Sp,
        n,
        &format!("spnr{n}"),
        nil,
        a_gens,
        k_gens,
        p_gens,
        a_matrices,
        matrix,
        verma,
        format!("C_{n}"),
        (1..=n).map(|i| rat((n + 1 - i) as i64)).collect(),
    )
}

fn build_glnr(n: usize) -> Result<RealFormData> {
    let h = half();
    let mut nil = Vec::new();
    let mut k_gens = Vec::new();
    let mut p_gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            nil.push(BasisGenerator::new(format!("E{},{}", i + 1, j + 1), unit(n, i, j), Zone::NilpotentLeft));
        }
    }
    let a_matrices: Vec<GlMat> = (0..n).map(|i| unit(n, i, i)).collect();
    let a_gens = a_matrices
        .iter()
        .enumerate()
        .map(|(i, m)| BasisGenerator::new(format!("E{},{}", i + 1, i + 1), m.clone(), Zone::AbelianMid))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            k_gens.push(BasisGenerator::new(
                format!("K{},{}", i + 1, j + 1),
                unit(n, i, j).sub(&unit(n, j, i)).scale(&h),
                Zone::CompactRight,
            ));
        }
    }
    for i in 0..n {
        for j in i..n {
            p_gens.push(BasisGenerator::new(
                format!("P{},{}", i + 1, j + 1),
                unit(n, i, j).add(&unit(n, j, i)).scale(&h),
                Zone::Plain,
            ));
        }
    }
    let id = format!("glnr{n}");
    let matrix: Vec<GlMat> = (0..n).flat_map(|i| (0..n).map(move |j| unit(n, i, j))).collect();
    assemble(
        RealForm::Glnr { n },
        AlgebraKind::Gl,
        n,
        &id,
        nil,
        a_gens,
        k_gens,
        p_gens,
        a_matrices,
        matrix,
        gl_verma(n, &id)?,
        format!("A_{}", n - 1),
        (1..=n).map(|i| ratio(n as i64 + 1 - 2 * i as i64, 2)).collect(),
    )
}

/// Generators of ⊕_{α lex-positive} g_α for the action of `hs`.
fn positive_root_generators(g_span: &[GlMat], hs: &[GlMat], prefix: &str) -> Result<Vec<BasisGenerator>> {
    let cands: Vec<Rat> = (-2..=2).map(rat).collect();
    let parts = joint_eigenspaces(g_span, hs, &cands)?;
    let mut out = Vec::new();
    let mut sorted: Vec<_> = parts.into_iter().filter(|(a, _)| lex_sign(a) > 0).collect();
    sorted.sort_by(|a, b| b.0.cmp(&a.0));
    for (alpha, vecs) in sorted {
        let tag: Vec<String> = alpha.iter().map(fmt_rat).collect();
        for (k, v) in vecs.into_iter().enumerate() {
            out.push(BasisGenerator::new(format!("{prefix}[{}]#{}", tag.join(","), k + 1), v, Zone::NilpotentLeft));
        }
    }
    Ok(out)
}

/// Verma ordering (𝔫̄ | 𝔥 | 𝔫) from a diagonal Cartan basis, 𝔫 = lex-negative.
fn triangular_basis(id: &str, big_n: usize, g_span: &[GlMat], hs: &[GlMat]) -> Result<Arc<OrderedBasis>> {
    let mut cands: Vec<Rat> = Vec::new();
    for h in hs {
        for a in 0..big_n {
            for b in 0..big_n {
                let d = h.get(a, a) - h.get(b, b);
                if !cands.contains(&d) {
                    cands.push(d);
                }
            }
        }
    }
    let parts = joint_eigenspaces(g_span, hs, &cands)?;
    let mut nbar = Vec::new();
    let mut nil = Vec::new();
    let mut zero = Vec::new();
    for (alpha, vecs) in parts {
        let tag: Vec<String> = alpha.iter().map(fmt_rat).collect();
        let sign = lex_sign(&alpha);
        for (k, v) in vecs.into_iter().enumerate() {
            let name = format!("X[{}]#{}", tag.join(","), k + 1);
            match sign {
                1 => nbar.push(BasisGenerator::new(name, v, Zone::NilpotentLeft)),
                -1 => nil.push(BasisGenerator::new(name, v, Zone::CompactRight)),
                _ => zero.push(v),
            }
        }
    }
    if zero.len() != hs.len() {
        return Err(Error::InvalidBasis(format!("{id}: Cartan is not self-centralizing")));
    }
    let cartan = hs
        .iter()
        .enumerate()
        .map(|(i, h)| BasisGenerator::new(format!("H{}", i + 1), h.clone(), Zone::AbelianMid));
    let gens: Vec<BasisGenerator> = nbar.into_iter().chain(cartan).chain(nil).collect();
    OrderedBasis::new(id, big_n, gens)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    form: RealForm,
    complex_kind: AlgebraKind,
    complex_rank: usize,
    id: &str,
    nil: Vec<BasisGenerator>,
    a_gens: Vec<BasisGenerator>,
    k_gens: Vec<BasisGenerator>,
    p_gens: Vec<BasisGenerator>,
    a_matrices: Vec<GlMat>,
    matrix: Vec<GlMat>,
    verma: Arc<OrderedBasis>,
    label: String,
    rho_formula: Vec<Rat>,
) -> Result<RealFormData> {
    let big_n = a_matrices[0].n;
    let k_matrices: Vec<GlMat> = k_gens.iter().map(|g| g.matrix.clone()).collect();
    let nil_m: Vec<GlMat> = nil.iter().map(|g| g.matrix.clone()).collect();
    let p_m: Vec<GlMat> = p_gens.iter().map(|g| g.matrix.clone()).collect();
    let iw: Vec<BasisGenerator> = nil.into_iter().chain(a_gens).chain(k_gens.clone()).collect();
    let iwasawa = OrderedBasis::new(format!("{id}:iwasawa"), big_n, iw)?;
    let cartan = OrderedBasis::new(format!("{id}:cartan"), big_n, p_gens.into_iter().chain(k_gens).collect())?;
    if iwasawa.len() != cartan.len() {
        return Err(Error::InvalidBasis(format!("{id}: Iwasawa and Cartan dimensions differ")));
    }
    // Triangular structure: [𝔞, 𝔫] ⊆ 𝔫, [𝔫, 𝔫] ⊆ 𝔫, [𝔞, 𝔞] = 0, [𝔨, 𝔨] ⊆ 𝔨.
    let in_span = |fam: &[GlMat], x: &GlMat| -> bool {
        if x.is_zero() {
            return true;
        }
        let v: Vec<Vec<Rat>> = fam.iter().map(|m| m.to_vec()).collect();
        SpanSolver::new(&v).map(|s| s.solve(&x.to_vec()).is_some()).unwrap_or(false)
    };
    for a in &a_matrices {
        for b in &a_matrices {
            if !a.bracket(b).is_zero() {
                return Err(Error::InvalidBasis(format!("{id}: 𝔞 not abelian")));
            }
        }
        for x in &nil_m {
            if !in_span(&nil_m, &a.bracket(x)) {
                return Err(Error::InvalidBasis(format!("{id}: [𝔞, 𝔫] ⊄ 𝔫")));
            }
        }
        if !in_span(&p_m, a) {
            return Err(Error::InvalidBasis(format!("{id}: 𝔞 ⊄ 𝔭")));
        }
    }
    for x in &nil_m {
        for y in &nil_m {
            if !in_span(&nil_m, &x.bracket(y)) {
                return Err(Error::InvalidBasis(format!("{id}: 𝔫 not a subalgebra")));
            }
        }
    }
    for x in &k_matrices {
        for y in &k_matrices {
            if !in_span(&k_matrices, &x.bracket(y)) {
                return Err(Error::InvalidBasis(format!("{id}: 𝔨 not a subalgebra")));
            }
        }
    }
    let roots = restricted_roots(&label, &nil_m, &a_matrices)?;
    let rho = roots.rho();
    if rho != rho_formula {
        return Err(Error::InvalidBasis(format!(
            "{id}: ρ from roots {:?} differs from catalog {:?}",
            rho.iter().map(fmt_rat).collect::<Vec<_>>(),
            rho_formula.iter().map(fmt_rat).collect::<Vec<_>>()
        )));
    }
    Ok(RealFormData {
        form,
        complex_kind,
        complex_rank,
        iwasawa,
        cartan,
        verma,
        a_matrices,
        k_matrices,
        matrix,
        roots,
        rho,
    })
}

/// Multiplicities of the positive restricted roots read off 𝔫.
fn restricted_roots(label: &str, nil: &[GlMat], a: &[GlMat]) -> Result<RestrictedRootSystem> {
    let cands: Vec<Rat> = (-2..=2).map(rat).collect();
    let parts = joint_eigenspaces(nil, a, &cands)?;
    let mut roots = Vec::new();
    for (alpha, vecs) in parts {
        if lex_sign(&alpha) <= 0 {
            return Err(Error::InvalidBasis(format!("{label}: 𝔫 contains a non-positive weight")));
        }
        let v: Vec<i64> = alpha.iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
        roots.push(Root { vector: v, mult: vecs.len() });
    }
    Ok(RestrictedRootSystem::new(label, a.len(), roots))
}

/// Cached [`build_realform`].
pub fn realform(form: RealForm) -> Result<Arc<RealFormData>> {
    static CACHE: OnceLock<Mutex<HashMap<RealForm, Arc<RealFormData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().unwrap().get(&form) {
        return Ok(d.clone());
    }
    let d = Arc::new(build_realform(form)?);
    Ok(cache.lock().unwrap().entry(form).or_insert(d).clone())
}

/// Cached [`build_algebra`].
pub fn algebra(kind: AlgebraKind, n: usize) -> Result<Arc<AlgebraData>> {
    static CACHE: OnceLock<Mutex<HashMap<(AlgebraKind, usize), Arc<AlgebraData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().unwrap().get(&(kind, n)) {
        return Ok(d.clone());
    }
    let d = Arc::new(build_algebra(kind, n)?);
    Ok(cache.lock().unwrap().entry((kind, n)).or_insert(d).clone())
}

/// Resolves the bases produced by this module from their ids, e.g.
/// `gl3:E`, `sp2:verma`, `upq2,1:iwasawa`, `glnr3:cartan`.
pub fn basis_by_id(id: &str) -> Result<Arc<OrderedBasis>> {
    let bad = || Error::UnknownSymbol(format!("basis id {id}"));
    let (head, tail) = id.split_once(':').ok_or_else(bad)?;
    let split_num = |prefix: &str| -> Option<&str> { head.strip_prefix(prefix) };
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if let Some(rest) = split_num("upq") {
        let (p, q) = rest.split_once(',').ok_or_else(bad)?;
        let d = realform(RealForm::Upq { p: num(p)?, q: num(q)? })?;
        return pick_form_basis(&d, tail).ok_or_else(bad);
    }
    if let Some(rest) = split_num("spnr") {
        let d = realform(RealForm::Spnr { n: num(rest)? })?;
        return pick_form_basis(&d, tail).ok_or_else(bad);
    }
    if let Some(rest) = split_num("glnr") {
        let d = realform(RealForm::Glnr { n: num(rest)? })?;
        return pick_form_basis(&d, tail).ok_or_else(bad);
    }
    if tail == "E" {
        if let Some(rest) = split_num("gl") {
            return Ok(OrderedBasis::gl(num(rest)?));
        }
    }
    for kind in [AlgebraKind::OOdd, AlgebraKind::OEven, AlgebraKind::Sp, AlgebraKind::Gl] {
        if let Some(rest) = split_num(&kind.to_string()) {
            let a = algebra(kind, num(rest)?)?;
            return match tail {
                "F" => Ok(a.basis.clone()),
                "verma" => Ok(a.verma.clone()),
                _ => Err(bad()),
            };
        }
    }
    Err(bad())
}

fn pick_form_basis(d: &RealFormData, tail: &str) -> Option<Arc<OrderedBasis>> {
    match tail {
        "iwasawa" => Some(d.iwasawa.clone()),
        "cartan" => Some(d.cartan.clone()),
        "verma" => Some(d.verma.clone()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Satake degree table

/// Node colour in a Satake diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub color: Color,
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub shilov: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternItem {
    Repeat { repeat: String, items: Vec<PatternItem> },
    Node(NodeSpec),
}

/// Arrow (diagram involution) pattern of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arrows {
    None,
    /// Node i ↔ node r+1−i on a type A diagram.
    Mirror,
    /// The two fork nodes of a type D diagram.
    Forks,
    /// Explicit pairs (1-based), for exceptional rows.
    Pairs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexType {
    pub series: char,
    pub rank: String,
}

/// One row of the checked-in table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRow {
    pub label: String,
    #[serde(rename = "restrictedType")]
    pub restricted_type: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    #[serde(default)]
    pub complex: Option<ComplexType>,
    pub arrows: Arrows,
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
    pub nodes: Vec<PatternItem>,
}

impl DiagramRow {
    pub fn is_classical(&self) -> bool {
        self.complex.is_some()
    }

    /// Short name before the colon, e.g. `A_n^1`.
    pub fn short(&self) -> &str {
        self.label.split(':').next().unwrap_or(&self.label)
    }

    /// Expands the node pattern at the given parameter values (parameters
    /// default to their minimum).
    pub fn expand(&self, values: &BTreeMap<String, i64>) -> Result<ExpandedDiagram> {
        let mut env = BTreeMap::new();
        for (k, min) in &self.params {
            let v = values.get(k).copied().unwrap_or(*min);
            if v < *min {
                return Err(Error::InvalidParams(format!("{}: {k} = {v} below minimum {min}", self.label)));
            }
            env.insert(k.clone(), v);
        }
        for k in values.keys() {
            if !self.params.contains_key(k) {
                return Err(Error::InvalidParams(format!("{}: no parameter `{k}`", self.label)));
            }
        }
        let mut nodes = Vec::new();
        expand_items(&self.nodes, &env, &mut nodes)?;
        let r = nodes.len();
        let mut partner = vec![None; r];
        match self.arrows {
            Arrows::None => {}
            Arrows::Mirror => {
                for (i, p) in partner.iter_mut().enumerate() {
                    let j = r - 1 - i;
                    if j != i {
                        *p = Some(j);
                    }
                }
            }
            Arrows::Forks => {
                partner[r - 2] = Some(r - 1);
                partner[r - 1] = Some(r - 2);
            }
            Arrows::Pairs => {
                for [a, b] in &self.pairs {
                    partner[a - 1] = Some(b - 1);
                    partner[b - 1] = Some(a - 1);
                }
            }
        }
        let complex = match &self.complex {
            Some(c) => {
                let rank = eval_expr(&c.rank, &env)?;
                if rank as usize != r {
                    return Err(Error::Data(format!("{}: pattern has {r} nodes, rank {rank}", self.label)));
                }
                Some((c.series, r))
            }
            None => None,
        };
        Ok(ExpandedDiagram { label: self.label.clone(), nodes, partner, complex })
    }
}

fn expand_items(items: &[PatternItem], env: &BTreeMap<String, i64>, out: &mut Vec<NodeSpec>) -> Result<()> {
    for it in items {
        match it {
            PatternItem::Node(n) => out.push(n.clone()),
            PatternItem::Repeat { repeat, items } => {
                let k = eval_expr(repeat, env)?;
                for _ in 0..k.max(0) {
                    expand_items(items, env, out)?;
                }
            }
        }
    }
    Ok(())
}

/// Evaluates linear expressions like `2n-1`, `n+m`, `m`.
fn eval_expr(s: &str, env: &BTreeMap<String, i64>) -> Result<i64> {
    let mut total = 0i64;
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    let flush = |total: &mut i64, sign: i64, coef: Option<i64>| {
        if let Some(c) = coef {
            *total += sign * c;
        }
    };
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '+' | '-' => {
                flush(&mut total, sign, coef);
                coef = None;
                sign = if ch == '-' { -1 } else { 1 };
            }
            '0'..='9' => {
                let d = ch.to_digit(10).unwrap() as i64;
                coef = Some(coef.unwrap_or(0) * 10 + d);
            }
            '*' => {}
            c if c.is_ascii_alphabetic() => {
                let v = *env
                    .get(&c.to_string())
                    .ok_or_else(|| Error::Data(format!("unknown parameter `{c}` in `{s}`")))?;
                coef = Some(coef.unwrap_or(1) * v);
            }
            _ => return Err(Error::Data(format!("bad expression `{s}`"))),
        }
    }
    flush(&mut total, sign, coef);
    Ok(total)
}

/// A diagram row at concrete parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedDiagram {
    pub label: String,
    pub nodes: Vec<NodeSpec>,
    /// Arrow partner (0-based).
    pub partner: Vec<Option<usize>>,
    /// Complex series and rank for classical rows.
    pub complex: Option<(char, usize)>,
}

impl ExpandedDiagram {
    pub fn degrees(&self) -> Vec<Option<u32>> {
        self.nodes.iter().map(|n| n.degree).collect()
    }
}

/// The checked-in Satake table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub rows: Vec<DiagramRow>,
}

impl DegreeTable {
    /// Finds a row by full label, by the part before the colon, or by the part
    /// after it; ambiguous short names are rejected.
    pub fn find(&self, label: &str) -> Result<&DiagramRow> {
        if let Some(r) = self.rows.iter().find(|r| r.label == label) {
            return Ok(r);
        }
        let hits: Vec<&DiagramRow> = self
            .rows
            .iter()
            .filter(|r| r.short() == label || r.label.split(':').nth(1) == Some(label))
            .collect();
        match hits.as_slice() {
            [one] => Ok(one),
            [] => Err(Error::UnknownDiagram(label.to_string())),
            _ => Err(Error::UnknownDiagram(format!("{label} (ambiguous)"))),
        }
    }
}

/// The table shipped in `data/satake.json`.
pub fn satake_table() -> &'static DegreeTable {
    static TABLE: OnceLock<DegreeTable> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(include_str!("../data/satake.json")).expect("valid Satake table"))
}

/// Degree printed at a node (1-based index over the printed nodes).
pub fn degree_table_lookup(label: &str, params: &BTreeMap<String, i64>, node: usize) -> Result<u32> {
    let row = satake_table().find(label)?;
    let d = row.expand(params)?;
    let spec = d
        .nodes
        .get(node.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParams(format!("{label}: node {node} out of range 1..={}", d.nodes.len())))?;
    spec.degree
        .ok_or_else(|| Error::InvalidParams(format!("{label}: node {node} carries no degree")))
}

/// Shilov (dotted) flag of a node.
pub fn shilov_flag(label: &str, params: &BTreeMap<String, i64>, node: usize) -> Result<bool> {
    let row = satake_table().find(label)?;
    let d = row.expand(params)?;
    d.nodes
        .get(node.wrapping_sub(1))
        .map(|n| n.shilov)
        .ok_or_else(|| Error::InvalidParams(format!("{label}: node {node} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_is_involution() {
        for (kind, n) in [(AlgebraKind::OEven, 2), (AlgebraKind::OOdd, 2), (AlgebraKind::Sp, 2)] {
            let a = build_algebra(kind, n).unwrap();
            for i in 0..a.big_n {
                for j in 0..a.big_n {
                    let e = GlMat::unit(a.big_n, i, j);
                    assert_eq!(a.sigma.apply(&a.sigma.apply(&e)), e);
                }
            }
        }
    }

    #[test]
    fn expression_eval() {
        let env: BTreeMap<String, i64> = [("n".to_string(), 4), ("m".to_string(), 2)].into();
        assert_eq!(eval_expr("2n-1", &env).unwrap(), 7);
        assert_eq!(eval_expr("n+m", &env).unwrap(), 6);
        assert_eq!(eval_expr("2*n+m-1", &env).unwrap(), 9);
        assert_eq!(eval_expr("3", &env).unwrap(), 3);
    }

    #[test]
    fn dimensions() {
        let sp = build_algebra(AlgebraKind::Sp, 2).unwrap();
        assert_eq!(sp.dim(), 10);
        let o5 = build_algebra(AlgebraKind::OOdd, 2).unwrap();
        assert_eq!(o5.dim(), 10);
        let o4 = build_algebra(AlgebraKind::OEven, 2).unwrap();
        assert_eq!(o4.dim(), 6);
    }

    #[test]
    fn catalog_forms_build() {
        let forms = [
            RealForm::Upq { p: 2, q: 1 },
            RealForm::Upq { p: 2, q: 2 },
            RealForm::Upq { p: 3, q: 2 },
            RealForm::Spnr { n: 1 },
            RealForm::Spnr { n: 3 },
            RealForm::Glnr { n: 2 },
            RealForm::Glnr { n: 4 },
        ];
        for f in forms {
            let d = build_realform(f).unwrap();
            assert!(d.roots.weyl_closed(), "{f}");
            assert_eq!(d.verma.len(), d.iwasawa.len());
        }
        let d = build_realform(RealForm::Upq { p: 3, q: 2 }).unwrap();
        assert_eq!(d.iwasawa.zone_indices(Zone::NilpotentLeft).len(), 2 * (2 * 3 - 1));
        assert_eq!(d.roots.multiplicity(&[1, 0]), 2);
        assert_eq!(d.roots.multiplicity(&[2, 0]), 1);
        assert_eq!(d.roots.multiplicity(&[1, -1]), 2);
    }

    #[test]
    fn table_parses_and_expands() {
        let t = satake_table();
        for row in &t.rows {
            let d = row.expand(&BTreeMap::new()).unwrap();
            assert!(!d.nodes.is_empty(), "{}", row.label);
        }
        let p: BTreeMap<String, i64> = [("n".to_string(), 4)].into();
        let d = t.find("A_n^1").unwrap().expand(&p).unwrap();
        assert_eq!(d.degrees(), vec![Some(2); 4]);
        assert!(t.find("E_7^1").is_err());
        assert_eq!(degree_table_lookup("EVIII", &BTreeMap::new(), 3).unwrap(), 16);
    }
}
