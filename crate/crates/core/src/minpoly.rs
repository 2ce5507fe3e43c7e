//! Block data Θ, the minimal polynomials q_Θ / q_Θ̄ and boundary degrees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liedata::{satake_table, AlgebraKind, ExpandedDiagram, RealForm, RealFormData};
use crate::linalg::GlMat;
use crate::params::{rat, ParamPoly, ParamRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    Theta,
    ThetaBar,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Theta => "THETA",
            Variant::ThetaBar => "THETA_BAR",
        })
    }
}

/// Θ = {n_1 < ⋯ < n_L = n} with the parabolic character λ_1, …, λ_L.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaData {
    pub kind: AlgebraKind,
    pub blocks: Vec<usize>,
    pub char_values: Vec<ParamPoly>,
    pub variant: Variant,
}

impl ThetaData {
    pub fn new(kind: AlgebraKind, blocks: Vec<usize>, char_values: Vec<ParamPoly>, variant: Variant) -> Result<Self> {
        if blocks.is_empty() || blocks[0] == 0 || blocks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(format!("blocks must be strictly increasing positive integers, got {blocks:?}")));
        }
        if char_values.len() != blocks.len() {
            return Err(Error::InvalidParams(format!(
                "{} character values for {} blocks",
                char_values.len(),
                blocks.len()
            )));
        }
        if variant == Variant::ThetaBar {
            if kind == AlgebraKind::Gl {
                return Err(Error::InvalidParams("q_Θ̄ is defined for o and sp only".into()));
            }
            if !char_values.last().unwrap().is_zero() {
                return Err(Error::InvalidParams("THETA_BAR requires λ_L = 0".into()));
            }
        }
        Ok(ThetaData { kind, blocks, char_values, variant })
    }

    /// Fresh symbols λ_1…λ_L (λ_L = 0 for THETA_BAR) in their own ring.
    pub fn symbolic(kind: AlgebraKind, blocks: Vec<usize>, variant: Variant) -> Result<Self> {
        let l = blocks.len();
        let free = if variant == Variant::ThetaBar { l.saturating_sub(1) } else { l };
        let ring = ParamRing::new((1..=free).map(|j| format!("lambda{j}")))?;
        let mut vals: Vec<ParamPoly> = (0..free).map(|j| ring.var_at(j)).collect();
        if variant == Variant::ThetaBar {
            vals.push(ring.zero());
        }
        Self::new(kind, blocks, vals, variant)
    }

    pub fn n(&self) -> usize {
        *self.blocks.last().unwrap()
    }

    /// L, the number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ring(&self) -> &ParamRing {
        self.char_values[0].ring()
    }

    /// n_j with n_0 = 0 (j ≤ L).
    pub fn block_end(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.blocks[j - 1]
        }
    }

    /// ι_Θ(i) for 1 ≤ i ≤ n.
    pub fn iota(&self, i: usize) -> usize {
        self.blocks.iter().position(|&b| i <= b).map(|p| p + 1).expect("index within n")
    }

    /// Coefficient h_i of F_i in H_Θ (or H_Θ̄).
    pub fn h_coeff(&self, i: usize) -> usize {
        let l = self.len();
        let top = if self.variant == Variant::Theta { l + 1 } else { l };
        top - self.iota(i)
    }

    /// H_Θ = Σ_k Σ_{i ≤ n_k} F_i as a matrix, given the F_i of the algebra.
    pub fn h_theta(&self, f_diag: impl Fn(usize) -> GlMat) -> GlMat {
        let mut h = f_diag(1).scale(&rat(0));
        for i in 1..=self.n() {
            let c = self.h_coeff(i);
            if c > 0 {
                h = h.add(&f_diag(i).scale(&rat(c as i64)));
            }
        }
        h
    }

    /// λ on a diagonal matrix X: Σ_{i ≤ n} X_ii λ_{ι(i)}.
    pub fn character_on(&self, x: &GlMat) -> ParamPoly {
        let mut out = self.ring().zero();
        for i in 1..=self.n() {
            let c = x.get(i - 1, i - 1);
            out.add_scaled(&self.char_values[self.iota(i) - 1], &c);
        }
        out
    }

    /// Degree of the minimal polynomial for this kind and variant.
    pub fn expected_degree(&self) -> usize {
        let l = self.len();
        match (self.variant, self.kind) {
            (Variant::ThetaBar, _) => 2 * (l - 1) + 1,
            (Variant::Theta, AlgebraKind::Gl) => l,
            (Variant::Theta, AlgebraKind::OOdd) => 2 * l + 1,
            (Variant::Theta, _) => 2 * l,
        }
    }
}

/// Monic univariate polynomial ∏(x − r) with ParamPoly roots.
#[derive(Debug, Clone, PartialEq)]
pub struct MinPoly {
    ring: ParamRing,
    roots: Vec<ParamPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPolyJson {
    pub degree: usize,
    pub roots: Vec<String>,
    /// Ascending powers of x.
    pub coefficients: Vec<String>,
}

impl MinPoly {
    pub fn from_roots(ring: &ParamRing, roots: Vec<ParamPoly>) -> Result<Self> {
        let roots = roots.iter().map(|r| r.embed(ring)).collect::<Result<_>>()?;
        Ok(MinPoly { ring: ring.clone(), roots })
    }

    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub fn roots(&self) -> &[ParamPoly] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Expanded coefficients, ascending.
    pub fn coefficients(&self) -> Vec<ParamPoly> {
        let mut c = vec![self.ring.one()];
        for r in &self.roots {
            let mut next = vec![self.ring.zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] - &(a * r);
            }
            c = next;
        }
        c
    }

    /// (x − r) · self.
    pub fn times_linear(&self, root: &ParamPoly) -> Result<MinPoly> {
        let mut roots = vec![root.embed(&self.ring)?];
        roots.extend(self.roots.iter().cloned());
        Ok(MinPoly { ring: self.ring.clone(), roots })
    }

    pub fn eval(&self, x: &ParamPoly) -> ParamPoly {
        let mut out = self.ring.one();
        for r in &self.roots {
            out = &out * &(x - r);
        }
        out
    }

    pub fn embed(&self, ring: &ParamRing) -> Result<MinPoly> {
        MinPoly::from_roots(ring, self.roots.clone())
    }

    pub fn to_json(&self) -> MinPolyJson {
        MinPolyJson {
            degree: self.degree(),
            roots: self.roots.iter().map(|r| r.to_string()).collect(),
            coefficients: self.coefficients().iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return f.write_str("1");
        }
        for r in &self.roots {
            if r.is_zero() {
                write!(f, "(x)")?;
            } else {
                write!(f, "(x - ({r}))")?;
            }
        }
        Ok(())
    }
}

/// q_Θ(g; x, λ) or q_Θ̄(g; x, λ).
pub fn minimal_polynomial(theta: &ThetaData) -> Result<MinPoly> {
    let ring = theta.ring().clone();
    let n = theta.n() as i64;
    let l = theta.len();
    let lam = &theta.char_values;
    let nb = |j: usize| theta.block_end(j) as i64;
    let mut roots = Vec::new();
    let pair = |roots: &mut Vec<ParamPoly>, j: usize, shift: i64| {
        // (x − λ_j − n_{j−1})(x + λ_j + n_j − 2n − shift)
        roots.push(&lam[j - 1] + &ring.int(nb(j - 1)));
        roots.push(&(-&lam[j - 1]) + &ring.int(2 * n + shift - nb(j)));
    };
    match theta.variant {
        Variant::Theta => match theta.kind {
            AlgebraKind::Gl => {
                for j in 1..=l {
                    roots.push(&lam[j - 1] + &ring.int(nb(j - 1)));
                }
            }
            AlgebraKind::OOdd => {
                roots.push(ring.int(n));
                for j in 1..=l {
                    pair(&mut roots, j, 0);
                }
            }
            AlgebraKind::Sp => {
                for j in 1..=l {
                    pair(&mut roots, j, 1);
                }
            }
            AlgebraKind::OEven => {
                for j in 1..=l {
                    pair(&mut roots, j, -1);
                }
            }
        },
        Variant::ThetaBar => {
            if !lam[l - 1].is_zero() {
                return Err(Error::InvalidParams("THETA_BAR requires λ_L = 0".into()));
            }
            roots.push(ring.int(nb(l - 1)));
            for j in 1..l {
                pair(&mut roots, j, theta.kind.delta());
            }
        }
    }
    MinPoly::from_roots(&ring, roots)
}

/// Degree and complexified Θ attached to removing one node.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDegree {
    pub degree: usize,
    pub theta: ThetaData,
}

/// The complexified Θ obtained by removing the printed node `node` (1-based)
/// of a classical diagram, together with its arrow partner.
pub fn diagram_boundary_degree(diag: &ExpandedDiagram, node: usize) -> Result<BoundaryDegree> {
    let (series, r) = diag
        .complex
        .ok_or_else(|| Error::Unsupported(format!("{}: exceptional rows carry data only", diag.label)))?;
    if node == 0 || node > diag.nodes.len() {
        return Err(Error::InvalidParams(format!("{}: node {node} out of range", diag.label)));
    }
    let mut set: Vec<usize> = vec![node];
    if let Some(p) = diag.partner[node - 1] {
        set.push(p + 1);
    }
    set.sort_unstable();
    let (kind, blocks, variant) = match series {
        'A' => {
            set.push(r + 1);
            (AlgebraKind::Gl, set, Variant::Theta)
        }
        'B' | 'C' | 'D' => {
            let kind = match series {
                'B' => AlgebraKind::OOdd,
                'C' => AlgebraKind::Sp,
                _ => AlgebraKind::OEven,
            };
            if series == 'D' && set == [r - 1] {
                // outer automorphism exchanges the two forks
                set = vec![r];
            }
            if series == 'D' && set == [r - 1, r] {
                (kind, set, Variant::ThetaBar)
            } else if set.contains(&r) {
                (kind, set, Variant::Theta)
            } else {
                set.push(r);
                (kind, set, Variant::ThetaBar)
            }
        }
        other => return Err(Error::Data(format!("unknown series {other}"))),
    };
    let theta = ThetaData::symbolic(kind, blocks, variant)?;
    let degree = minimal_polynomial(&theta)?.degree();
    Ok(BoundaryDegree { degree, theta })
}

/// Satake row label and parameters of a catalog form, and the printed node
/// of the restricted simple root `node`.
fn catalog_row(form: RealForm) -> (&'static str, BTreeMap<String, i64>) {
    let p = |k: &str, v: usize| (k.to_string(), v as i64);
    match form {
        RealForm::Upq { p: pp, q } if pp == q => ("C_n^{2,1}:SU(n,n)", [p("n", q)].into()),
        RealForm::Upq { p: pp, q } => ("BC_n^{2m,2,1}:SU(n+m,n)", [p("n", q), p("m", pp - q)].into()),
        RealForm::Spnr { n } => ("C_n^{1,1}:Sp(n,R)", [p("n", n)].into()),
        RealForm::Glnr { n } => ("A_n^1:SL(n+1,R)", [p("n", n - 1)].into()),
    }
}

/// Boundary degree for removing the restricted simple root `node` (1-based,
/// in the order e_1 − e_2, …, last) of a catalog form.
pub fn boundary_degree(form: &RealFormData, node: usize) -> Result<BoundaryDegree> {
    let rank = match form.form {
        RealForm::Glnr { n } => n - 1,
        _ => form.rank(),
    };
    if node == 0 || node > rank {
        return Err(Error::InvalidParams(format!("{}: node {node} out of range 1..={rank}", form.form)));
    }
    let (label, params) = catalog_row(form.form);
    let diag = satake_table().find(label)?.expand(&params)?;
    diagram_boundary_degree(&diag, node)
}

/// λ-schedule of the U(p,q) theorem and the polynomials f, f̃.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule {
    pub lambdas: Vec<ParamPoly>,
    pub f: MinPoly,
    pub f_tilde: MinPoly,
}

fn check_upq_blocks(p: usize, q: usize, blocks: &[usize]) -> Result<()> {
    if q == 0 || q > p {
        return Err(Error::InvalidParams(format!("need 1 ≤ q ≤ p, got p={p}, q={q}")));
    }
    if blocks.is_empty() || blocks[0] == 0 || blocks.windows(2).any(|w| w[0] >= w[1]) || *blocks.last().unwrap() != q {
        return Err(Error::InvalidParams(format!("blocks must increase strictly and end at q={q}, got {blocks:?}")));
    }
    Ok(())
}

/// Which second-family λ values to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScheduleVariant {
    /// μ_k − (s+t)/2 − p − q + n_k; reduces to the Shilov factor at L = 1.
    #[default]
    Standard,
    /// μ_k − (s+t)/2 − p + n_k, kept to exhibit that the ideal is then proper.
    ShiftedByQ,
}

/// λ_k = −μ_k − (s+t)/2 − n_{k−1} (k ≤ L), λ_{2L+1−k} = μ_k − (s+t)/2 − p − q + n_k;
/// f = ∏(x + λ_k), f̃ = (x − s − q) f.
pub fn upq_lambda_schedule(
    p: usize,
    q: usize,
    blocks: &[usize],
    mu: &[ParamPoly],
    s: &ParamPoly,
    t: &ParamPoly,
) -> Result<LambdaSchedule> {
    upq_lambda_schedule_with(p, q, blocks, mu, s, t, ScheduleVariant::Standard)
}

pub fn upq_lambda_schedule_with(
    p: usize,
    q: usize,
    blocks: &[usize],
    mu: &[ParamPoly],
    s: &ParamPoly,
    t: &ParamPoly,
    variant: ScheduleVariant,
) -> Result<LambdaSchedule> {
    check_upq_blocks(p, q, blocks)?;
    let l = blocks.len();
    if mu.len() != l {
        return Err(Error::InvalidParams(format!("{} values of μ for {l} blocks", mu.len())));
    }
    let ring = s.ring().clone();
    let u = (s + t).scale(&crate::params::ratio(1, 2));
    let nb = |j: usize| if j == 0 { 0 } else { blocks[j - 1] as i64 };
    let mut lambdas = Vec::with_capacity(2 * l);
    for k in 1..=l {
        lambdas.push(&(&(-&mu[k - 1]) - &u) - &ring.int(nb(k - 1)));
    }
    for k in l + 1..=2 * l {
        let kk = 2 * l + 1 - k;
        let shift = match variant {
            ScheduleVariant::Standard => nb(kk) - (p + q) as i64,
            ScheduleVariant::ShiftedByQ => nb(kk) - p as i64,
        };
        lambdas.push(&(&mu[kk - 1] - &u) + &ring.int(shift));
    }
    let f = MinPoly::from_roots(&ring, lambdas.iter().map(|x| -x).collect())?;
    let f_tilde = f.times_linear(&(s + &ring.int(q as i64)))?;
    Ok(LambdaSchedule { lambdas, f, f_tilde })
}

/// The gl_{p+q} block data whose minimal polynomial is f (p = q) or f̃ (p > q).
pub fn upq_complex_theta(
    p: usize,
    q: usize,
    blocks: &[usize],
    mu: &[ParamPoly],
    s: &ParamPoly,
    t: &ParamPoly,
) -> Result<ThetaData> {
    check_upq_blocks(p, q, blocks)?;
    let l = blocks.len();
    let u = (s + t).scale(&crate::params::ratio(1, 2));
    let mut bl = blocks.to_vec();
    let mut vals: Vec<ParamPoly> = mu.iter().map(|m| m + &u).collect();
    if p > q {
        bl.push(p);
        vals.push(s.clone());
    }
    for k in (1..=l).rev() {
        let prev = if k == 1 { 0 } else { blocks[k - 2] };
        bl.push(p + q - prev);
        vals.push(&u - &mu[k - 1]);
    }
    ThetaData::new(AlgebraKind::Gl, bl, vals, Variant::Theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_two_blocks() {
        let th = ThetaData::symbolic(AlgebraKind::Gl, vec![1, 2], Variant::Theta).unwrap();
        let q = minimal_polynomial(&th).unwrap();
        let r = th.ring();
        assert_eq!(q.roots(), &[r.parse("lambda1").unwrap(), r.parse("lambda2 + 1").unwrap()]);
    }

    #[test]
    fn theta_bar_needs_zero() {
        let r = ParamRing::new(["a"]).unwrap();
        let e = ThetaData::new(AlgebraKind::Sp, vec![1, 2], vec![r.var("a").unwrap(), r.one()], Variant::ThetaBar);
        assert!(e.is_err());
    }

    #[test]
    fn coefficients_expand() {
        let r = ParamRing::new(["a"]).unwrap();
        let m = MinPoly::from_roots(&r, vec![r.var("a").unwrap(), r.int(1)]).unwrap();
        let c = m.coefficients();
        assert_eq!(c[2], r.one());
        assert_eq!(c[1], r.parse("-a - 1").unwrap());
        assert_eq!(c[0], r.parse("a").unwrap());
    }
}
