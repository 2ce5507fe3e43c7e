//! Matrices over U(g): polynomial evaluation, trace powers, central
//! eigenvalues through Verma reduction, and ideal generator sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liedata::{algebra, basis_by_id, AlgebraData, AlgebraKind, RealForm, RealFormData};
use crate::linalg::GlMat;
use crate::minpoly::{minimal_polynomial, upq_complex_theta, upq_lambda_schedule, MinPoly, MinPolyJson, ThetaData, Variant};
use crate::params::{ParamPoly, ParamRing, Rat};
use crate::pbw::{EnvElement, EnvElementJson, OrderedBasis, Zone};

/// Square matrix with entries in U(g), all over one basis and ring.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    n: usize,
    entries: Vec<EnvElement>,
}

impl OpMatrix {
    /// Row-major entries.
    pub fn new(n: usize, entries: Vec<EnvElement>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::InvalidParams(format!("{} entries for a {n}×{n} matrix", entries.len())));
        }
        let b = entries[0].basis().clone();
        let r = entries[0].ring().clone();
        for e in &entries {
            if e.basis().id() != b.id() {
                return Err(Error::BasisMismatch(e.basis().id().into(), b.id().into()));
            }
            if e.ring() != &r {
                return Err(Error::RingMismatch(e.ring().symbols().join(","), r.symbols().join(",")));
            }
        }
        Ok(OpMatrix { n, entries })
    }

    /// Degree-one matrix from gl_N matrices (row-major).
    pub fn from_matrices(basis: &Arc<OrderedBasis>, ring: &ParamRing, n: usize, mats: &[GlMat]) -> Result<Self> {
        let entries = mats.iter().map(|m| EnvElement::from_matrix(basis, ring, m)).collect::<Result<_>>()?;
        Self::new(n, entries)
    }

    /// 𝔼 = (E_ij) for a basis of gl_N.
    pub fn e_matrix(basis: &Arc<OrderedBasis>, ring: &ParamRing) -> Result<Self> {
        let n = basis.n();
        let mats: Vec<GlMat> = (0..n).flat_map(|i| (0..n).map(move |j| GlMat::unit(n, i, j))).collect();
        Self::from_matrices(basis, ring, n, &mats)
    }

    pub fn scalar(basis: &Arc<OrderedBasis>, c: &ParamPoly, n: usize) -> Self {
        let ring = c.ring();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { EnvElement::scalar(basis, c.clone()) } else { EnvElement::zero(basis, ring) })
            .collect();
        OpMatrix { n, entries }
    }

    pub fn identity(basis: &Arc<OrderedBasis>, ring: &ParamRing, n: usize) -> Self {
        Self::scalar(basis, &ring.one(), n)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &Arc<OrderedBasis> {
        self.entries[0].basis()
    }

    pub fn ring(&self) -> &ParamRing {
        self.entries[0].ring()
    }

    /// Entry (i, j), 0-based.
    pub fn get(&self, i: usize, j: usize) -> &EnvElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[EnvElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &OpMatrix) -> OpMatrix {
        OpMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &OpMatrix) -> OpMatrix {
        OpMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &ParamPoly) -> OpMatrix {
        OpMatrix { n: self.n, entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    /// self + c·I.
    pub fn add_scalar(&self, c: &ParamPoly) -> OpMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let k = i * self.n + i;
            out.entries[k] = out.entries[k].add_scalar(c);
        }
        out
    }

    /// Matrix product, entries computed in parallel.
    pub fn mul(&self, other: &OpMatrix) -> OpMatrix {
        self.mul_then(other, |e| e)
    }

    /// Matrix product with `post` applied to every entry of the result.
    pub fn mul_then(&self, other: &OpMatrix, post: impl Fn(EnvElement) -> EnvElement + Sync) -> OpMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut acc = EnvElement::zero(self.basis(), self.ring());
                for m in 0..n {
                    let a = self.get(i, m);
                    let b = other.get(m, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                post(acc)
            })
            .collect();
        OpMatrix { n, entries }
    }

    pub fn pow(&self, k: u32) -> OpMatrix {
        let mut out = OpMatrix::identity(self.basis(), self.ring(), self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> EnvElement {
        let mut t = EnvElement::zero(self.basis(), self.ring());
        for i in 0..self.n {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn transpose(&self) -> OpMatrix {
        let n = self.n;
        OpMatrix { n, entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    pub fn map(&self, f: impl Fn(&EnvElement) -> Result<EnvElement> + Sync + Send) -> Result<OpMatrix> {
        let entries = self.entries.par_iter().map(f).collect::<Result<Vec<_>>>()?;
        OpMatrix::new(self.n, entries)
    }

    /// Coefficients embedded into a larger ring.
    pub fn embed(&self, ring: &ParamRing) -> Result<OpMatrix> {
        self.map(|e| e.map_coefficients(ring, |c| c.embed(ring)))
    }

    pub fn change_basis(&self, target: &Arc<OrderedBasis>) -> Result<OpMatrix> {
        self.map(|e| e.change_basis(target))
    }
}

/// f(M) by Horner's rule on the expanded coefficients.
pub fn mat_eval_poly(f: &MinPoly, m: &OpMatrix) -> Result<OpMatrix> {
    let m = m.embed(f.ring())?;
    let coeffs = f.coefficients();
    let mut acc = OpMatrix::scalar(m.basis(), coeffs.last().unwrap(), m.size());
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(&m).add_scalar(c);
    }
    Ok(acc)
}

/// f(M) as Σ c_k M^k.
pub fn mat_eval_power_sum(f: &MinPoly, m: &OpMatrix) -> Result<OpMatrix> {
    let m = m.embed(f.ring())?;
    let mut acc = OpMatrix::scalar(m.basis(), &f.ring().zero(), m.size());
    let mut power = OpMatrix::identity(m.basis(), f.ring(), m.size());
    for c in f.coefficients() {
        acc = acc.add(&power.scale(&c));
        power = power.mul(&m);
    }
    Ok(acc)
}

/// f(M) as the factored product ∏ (M − r_j), with `post` applied after every
/// right multiplication.
pub fn mat_eval_factored(
    f: &MinPoly,
    m: &OpMatrix,
    post: impl Fn(EnvElement) -> EnvElement + Sync,
) -> Result<OpMatrix> {
    let m = m.embed(f.ring())?;
    let mut acc = OpMatrix::identity(m.basis(), f.ring(), m.size());
    for r in f.roots() {
        let factor = m.add_scalar(&-r);
        acc = acc.mul_then(&factor, &post);
    }
    Ok(acc)
}

/// tr M^j.
pub fn trace_power(m: &OpMatrix, j: u32) -> EnvElement {
    m.pow(j).trace()
}

/// λ(D) for central D: reduce in the Verma order, drop monomials ending in
/// an 𝔫-factor, evaluate the Cartan part at the highest weight. Leftover
/// 𝔫̄-monomials with nonzero value mean D is not central.
pub fn central_eigenvalue(d: &EnvElement, verma: &Arc<OrderedBasis>, weight: &BTreeMap<usize, ParamPoly>) -> Result<ParamPoly> {
    let d = d.change_basis(verma)?;
    let ring = weight
        .values()
        .next()
        .map(|w| w.ring().clone())
        .unwrap_or_else(|| d.ring().clone());
    let mut scalar = ring.zero();
    let mut leftover: BTreeMap<Vec<(u16, u16)>, ParamPoly> = BTreeMap::new();
    for (m, c) in d.terms() {
        if m.last().is_some_and(|&(g, _)| verma.zone(g as usize) == Zone::CompactRight) {
            continue;
        }
        let mut v = c.embed(&ring)?;
        let mut nbar = Vec::new();
        for &(g, p) in m {
            match verma.zone(g as usize) {
                Zone::NilpotentLeft => nbar.push((g, p)),
                _ => {
                    let w = weight
                        .get(&(g as usize))
                        .ok_or_else(|| Error::MissingSymbol(verma.generator(g as usize).name.clone()))?;
                    v = &v * &w.pow(p as u32);
                }
            }
        }
        if nbar.is_empty() {
            scalar = &scalar + &v;
        } else {
            let e = leftover.entry(nbar).or_insert_with(|| ring.zero());
            *e = &*e + &v;
        }
    }
    if let Some((m, _)) = leftover.iter().find(|(_, v)| !v.is_zero()) {
        let names: Vec<String> = m.iter().map(|&(g, _)| verma.generator(g as usize).name.clone()).collect();
        return Err(Error::NotCentral(format!("remainder with factors {}", names.join("*"))));
    }
    Ok(scalar)
}

/// Highest weight F_i ↦ λ_{ι(i)} on the Cartan generators of `alg.verma`.
pub fn theta_weight(alg: &AlgebraData, theta: &ThetaData) -> BTreeMap<usize, ParamPoly> {
    alg.verma
        .zone_indices(Zone::AbelianMid)
        .into_iter()
        .map(|g| (g, theta.character_on(&alg.verma.generator(g).matrix)))
        .collect()
}

/// Orders of the central generators Δ_j, and the kind's index set J.
fn central_indices(kind: AlgebraKind, theta: &ThetaData) -> (Vec<usize>, bool) {
    let l = theta.len();
    let n = theta.n();
    let bar = theta.variant == Variant::ThetaBar;
    match kind {
        AlgebraKind::Gl => ((1..l).collect(), false),
        AlgebraKind::OOdd => ((1..if bar { l } else { l + 1 }).collect(), false),
        AlgebraKind::Sp => ((1..l).collect(), false),
        AlgebraKind::OEven => {
            // Δ_n is the Pfaffian-type generator; only j < n is built here.
            let js: Vec<usize> = (1..l).filter(|&j| j < n).collect();
            (js, true)
        }
    }
}

/// One matrix entry of a generator matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorEntry {
    pub row: usize,
    pub col: usize,
    pub element: EnvElement,
}

/// Δ_j together with λ(Δ_j).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralGenerator {
    pub j: usize,
    pub order: usize,
    pub element: EnvElement,
    pub eigenvalue: ParamPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<RealForm>,
    pub blocks: Vec<usize>,
    pub variant: Variant,
    #[serde(rename = "charValues")]
    pub char_values: Vec<String>,
    #[serde(rename = "restrictColumns")]
    pub restrict_columns: bool,
    /// o_{2n}: the order-n generator is not part of the set.
    #[serde(rename = "deltaNOmitted")]
    pub delta_n_omitted: bool,
    pub polynomial: MinPolyJson,
}

/// Generators of I_Θ(λ), I_Θ̄(λ) or I⁰_Ξ(μ, s, t).
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub meta: GeneratorMeta,
    pub ring: ParamRing,
    pub basis: Arc<OrderedBasis>,
    pub entries: Vec<GeneratorEntry>,
    pub central: Vec<CentralGenerator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub element: EnvElementJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralJson {
    pub j: usize,
    pub order: usize,
    pub element: EnvElementJson,
    pub eigenvalue: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSetJson {
    pub metadata: GeneratorMeta,
    pub symbols: Vec<String>,
    #[serde(rename = "basisId")]
    pub basis_id: String,
    pub entries: Vec<EntryJson>,
    pub central: Vec<CentralJson>,
}

impl GeneratorSet {
    pub fn to_json(&self) -> GeneratorSetJson {
        GeneratorSetJson {
            metadata: self.meta.clone(),
            symbols: self.ring.symbols().to_vec(),
            basis_id: self.basis.id().to_string(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson { row: e.row, col: e.col, element: e.element.to_json() })
                .collect(),
            central: self
                .central
                .iter()
                .map(|c| CentralJson {
                    j: c.j,
                    order: c.order,
                    element: c.element.to_json(),
                    eigenvalue: c.eigenvalue.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &GeneratorSetJson) -> Result<Self> {
        let ring = ParamRing::new(json.symbols.iter().cloned())?;
        let basis = basis_by_id(&json.basis_id)?;
        let entries = json
            .entries
            .iter()
            .map(|e| {
                Ok(GeneratorEntry { row: e.row, col: e.col, element: EnvElement::from_json(&e.element, &basis, &ring)? })
            })
            .collect::<Result<_>>()?;
        let central = json
            .central
            .iter()
            .map(|c| {
                Ok(CentralGenerator {
                    j: c.j,
                    order: c.order,
                    element: EnvElement::from_json(&c.element, &basis, &ring)?,
                    eigenvalue: ring.parse(&c.eigenvalue)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(GeneratorSet { meta: json.metadata.clone(), ring, basis, entries, central })
    }

    /// Substitutes rational values for some symbols; the ring is kept.
    pub fn bind(&self, values: &BTreeMap<String, Rat>) -> Result<GeneratorSet> {
        for k in values.keys() {
            if self.ring.index_of(k).is_none() {
                return Err(Error::UnknownSymbol(k.clone()));
            }
        }
        let map: BTreeMap<String, ParamPoly> = values.iter().map(|(k, v)| (k.clone(), self.ring.constant(v.clone()))).collect();
        let sub = |x: &ParamPoly| x.substitute(&map, &self.ring);
        let sub_str = |x: &String| Ok(sub(&self.ring.parse(x)?)?.to_string());
        let mut out = self.clone();
        for e in &mut out.entries {
            e.element = e.element.map_coefficients(&self.ring, sub)?;
        }
        for c in &mut out.central {
            c.element = c.element.map_coefficients(&self.ring, sub)?;
            c.eigenvalue = sub(&c.eigenvalue)?;
        }
        out.meta.char_values = self.meta.char_values.iter().map(sub_str).collect::<Result<_>>()?;
        let roots = self.meta.polynomial.roots.iter().map(|r| sub(&self.ring.parse(r)?)).collect::<Result<_>>()?;
        out.meta.polynomial = MinPoly::from_roots(&self.ring, roots)?.to_json();
        Ok(out)
    }

    /// Δ_j − λ(Δ_j) for each central generator.
    pub fn central_differences(&self) -> Vec<EnvElement> {
        self.central.iter().map(|c| c.element.add_scalar(&-&c.eigenvalue)).collect()
    }
}

/// Options for [`ideal_generators`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdealOptions {
    /// Keep only the columns p < j ≤ p+q (the I⁰_Ξ shape); UPQ only.
    pub restrict_columns: bool,
}

/// Generators of I_Θ(λ) (or I_Θ̄(λ)) for a classical complex algebra:
/// entries of q_Θ(𝔽) and Δ_j − λ(Δ_j), j ∈ J.
pub fn ideal_generators(theta: &ThetaData, options: IdealOptions) -> Result<GeneratorSet> {
    if options.restrict_columns {
        return Err(Error::Unsupported("column restriction applies to UPQ generator sets".into()));
    }
    let alg = algebra(theta.kind, theta.n())?;
    let ring = theta.ring().clone();
    let q = minimal_polynomial(theta)?;
    let f = OpMatrix::from_matrices(&alg.verma, &ring, alg.big_n, &alg.f_matrices)?;
    let qf = mat_eval_poly(&q, &f)?;
    let entries = (0..alg.big_n * alg.big_n)
        .map(|k| GeneratorEntry { row: k / alg.big_n + 1, col: k % alg.big_n + 1, element: qf.entries()[k].clone() })
        .collect();
    let weight = theta_weight(&alg, theta);
    let (js, omitted) = central_indices(theta.kind, theta);
    let step = if theta.kind == AlgebraKind::Gl { 1 } else { 2 };
    let mut central = Vec::new();
    for j in js {
        let order = step * j;
        let d = trace_power(&f, order as u32);
        let ev = central_eigenvalue(&d, &alg.verma, &weight)?;
        central.push(CentralGenerator { j, order, element: d, eigenvalue: ev });
    }
    Ok(GeneratorSet {
        meta: GeneratorMeta {
            kind: theta.kind.to_string(),
            form: None,
            blocks: theta.blocks.clone(),
            variant: theta.variant,
            char_values: theta.char_values.iter().map(|c| c.to_string()).collect(),
            restrict_columns: false,
            delta_n_omitted: omitted,
            polynomial: q.to_json(),
        },
        ring,
        basis: alg.verma.clone(),
        entries,
        central,
    })
}

/// Symbol ring for UPQ generator sets: mu1..muL, s, t.
pub fn upq_ring(l: usize) -> Result<ParamRing> {
    ParamRing::new((1..=l).map(|k| format!("mu{k}")).chain(["s".to_string(), "t".to_string()]))
}

/// Which polynomial a UPQ generator matrix uses.
pub fn upq_polynomial(p: usize, q: usize, blocks: &[usize], ring: &ParamRing) -> Result<MinPoly> {
    let l = blocks.len();
    let mu: Vec<ParamPoly> = (1..=l).map(|k| ring.var(&format!("mu{k}"))).collect::<Result<_>>()?;
    let s = ring.var("s")?;
    let t = ring.var("t")?;
    let sched = upq_lambda_schedule(p, q, blocks, &mu, &s, &t)?;
    Ok(if p > q { sched.f_tilde } else { sched.f })
}

/// I⁰_Ξ(μ, s, t) (restricted) or I_Ξ / Ĩ_Ξ (full) for U(p,q) in the Iwasawa
/// basis, plus Δ_i − c_i (2 ≤ i ≤ L−1) with c_i from the complexified Θ.
pub fn upq_ideal_generators(form: &RealFormData, blocks: &[usize], options: IdealOptions) -> Result<GeneratorSet> {
    let RealForm::Upq { p, q } = form.form else {
        return Err(Error::InvalidParams(format!("{} is not a UPQ form", form.form)));
    };
    let l = blocks.len();
    let ring = upq_ring(l)?;
    let f = upq_polynomial(p, q, blocks, &ring)?;
    let e = OpMatrix::e_matrix(&form.iwasawa, &ring)?;
    let fe = mat_eval_poly(&f, &e)?;
    let big = p + q;
    let entries = (0..big * big)
        .filter(|k| !options.restrict_columns || k % big >= p)
        .map(|k| GeneratorEntry { row: k / big + 1, col: k % big + 1, element: fe.entries()[k].clone() })
        .collect();
    let mu: Vec<ParamPoly> = (1..=l).map(|k| ring.var(&format!("mu{k}"))).collect::<Result<_>>()?;
    let theta = upq_complex_theta(p, q, blocks, &mu, &ring.var("s")?, &ring.var("t")?)?;
    let gl = algebra(AlgebraKind::Gl, big)?;
    let weight = theta_weight(&gl, &theta);
    let mut central = Vec::new();
    for i in 2..l {
        let d = trace_power(&e, i as u32);
        let ev = central_eigenvalue(&d.change_basis(&gl.verma)?, &gl.verma, &weight)?;
        central.push(CentralGenerator { j: i, order: i, element: d, eigenvalue: ev });
    }
    Ok(GeneratorSet {
        meta: GeneratorMeta {
            kind: "gl".into(),
            form: Some(form.form),
            blocks: blocks.to_vec(),
            variant: Variant::Theta,
            char_values: theta.char_values.iter().map(|c| c.to_string()).collect(),
            restrict_columns: options.restrict_columns,
            delta_n_omitted: false,
            polynomial: f.to_json(),
        },
        ring,
        basis: form.iwasawa.clone(),
        entries,
        central,
    })
}

/// Σ_ν A_iν B_νj computed entrywise for a single entry.
pub fn entry_product(a: &OpMatrix, b: &OpMatrix, i: usize, j: usize) -> EnvElement {
    let mut acc = EnvElement::zero(a.basis(), a.ring());
    for m in 0..a.size() {
        acc = acc.add(&a.get(i, m).mul(b.get(m, j)));
    }
    acc
}

/// Rational scalar matrix c·I as a convenience for callers using Rat.
pub fn scalar_rat(basis: &Arc<OrderedBasis>, ring: &ParamRing, c: &Rat, n: usize) -> OpMatrix {
    OpMatrix::scalar(basis, &ring.constant(c.clone()), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rat;

    #[test]
    fn gl2_delta2_eigenvalue() {
        let alg = algebra(AlgebraKind::Gl, 2).unwrap();
        let ring = ParamRing::new(["a", "b"]).unwrap();
        let e = OpMatrix::from_matrices(&alg.verma, &ring, 2, &alg.f_matrices).unwrap();
        let d2 = trace_power(&e, 2);
        let w: BTreeMap<usize, ParamPoly> = [
            (alg.verma.index_of("F11").unwrap(), ring.var("a").unwrap()),
            (alg.verma.index_of("F22").unwrap(), ring.var("b").unwrap()),
        ]
        .into();
        let ev = central_eigenvalue(&d2, &alg.verma, &w).unwrap();
        // 𝔫 = lower triangular, as in the paper's triangular decomposition
        assert_eq!(ev, ring.parse("a^2 + b^2 - a + b").unwrap());
    }

    #[test]
    fn non_central_is_reported() {
        let alg = algebra(AlgebraKind::Gl, 2).unwrap();
        let ring = ParamRing::new(["a", "b"]).unwrap();
        let x = EnvElement::from_matrix(&alg.verma, &ring, &GlMat::unit(2, 0, 1)).unwrap();
        let w: BTreeMap<usize, ParamPoly> = alg.verma.zone_indices(Zone::AbelianMid).into_iter().map(|g| (g, ring.one())).collect();
        assert!(matches!(central_eigenvalue(&x, &alg.verma, &w), Err(Error::NotCentral(_))));
        let one = EnvElement::one(&alg.verma, &ring);
        assert_eq!(central_eigenvalue(&one, &alg.verma, &w).unwrap(), ring.one());
    }

    #[test]
    fn horner_matches_power_sum() {
        let alg = algebra(AlgebraKind::Sp, 1).unwrap();
        let ring = ParamRing::new(["a"]).unwrap();
        let f = OpMatrix::from_matrices(&alg.verma, &ring, 2, &alg.f_matrices).unwrap();
        let p = MinPoly::from_roots(&ring, vec![ring.var("a").unwrap(), ring.int(2), ring.constant(rat(1) / rat(2))]).unwrap();
        assert_eq!(mat_eval_poly(&p, &f).unwrap(), mat_eval_power_sum(&p, &f).unwrap());
        assert_eq!(mat_eval_poly(&p, &f).unwrap(), mat_eval_factored(&p, &f, |e| e).unwrap());
    }

    #[test]
    fn complex_theta_matches_schedule() {
        for (p, q, b) in [(1, 1, vec![1]), (2, 1, vec![1]), (3, 2, vec![1, 2]), (2, 2, vec![2])] {
            let ring = upq_ring(b.len()).unwrap();
            let mu: Vec<ParamPoly> = (1..=b.len()).map(|k| ring.var(&format!("mu{k}")).unwrap()).collect();
            let (s, t) = (ring.var("s").unwrap(), ring.var("t").unwrap());
            let th = upq_complex_theta(p, q, &b, &mu, &s, &t).unwrap();
            let got = minimal_polynomial(&th).unwrap();
            assert_eq!(got.coefficients(), upq_polynomial(p, q, &b, &ring).unwrap().coefficients());
        }
    }
}
