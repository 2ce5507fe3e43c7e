//! e- and c-functions as products of Gamma factors with affine arguments.
//!
//! Zero and pole decisions are made on the exact rational arguments; floats
//! only carry the displayed value.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::liedata::RestrictedRootSystem;
use crate::params::{ratio, ParamPoly, ParamRing, Rat};

/// Where a Gamma factor sits in the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Numerator,
    Denominator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactor {
    pub side: Side,
    pub arg: ParamPoly,
    /// The root the factor belongs to.
    pub root: Vec<i64>,
}

/// C · 2^{two_exponent} · ∏ Γ(arg)^{±1}, arguments affine in
/// lambda1..lambdaR and ell.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaProduct {
    pub ring: ParamRing,
    pub factors: Vec<GammaFactor>,
    pub two_exponent: ParamPoly,
    pub constant: String,
}

/// A Gamma factor whose argument is a nonpositive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub root: Vec<i64>,
    pub side: Side,
    /// The exact argument, printed as a rational.
    pub arg: String,
}

/// A product evaluated at a rational point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Reciprocal-Gamma zeros (denominator factors at poles of Γ).
    pub zeros: Vec<Certificate>,
    /// Gamma poles in the numerator.
    pub poles: Vec<Certificate>,
    /// ln|value| and sign over the regular factors, constant excluded.
    pub log_abs: f64,
    pub sign: f64,
}

fn is_gamma_pole(x: &Rat) -> bool {
    x.is_integer() && !x.is_positive()
}

fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// (ln|Γ(x)|, sign Γ(x)) for x off the poles.
fn log_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    // reflection: Γ(x)Γ(1−x) = π / sin(πx)
    let s = (PI * x).sin();
    (PI.ln() - s.abs().ln() - ln_gamma(1.0 - x), s.signum())
}

pub fn lambda_ring(rank: usize) -> Result<ParamRing> {
    ParamRing::new((1..=rank).map(|i| format!("lambda{i}")).chain(["ell".to_string()]))
}

fn point(ring: &ParamRing, lambda: &[Rat], ell: &Rat) -> BTreeMap<String, Rat> {
    let mut m: BTreeMap<String, Rat> =
        lambda.iter().enumerate().map(|(i, x)| (format!("lambda{}", i + 1), x.clone())).collect();
    if ring.index_of("ell").is_some() {
        m.insert("ell".into(), ell.clone());
    }
    m
}

/// λ_α = 2⟨λ,α⟩/⟨α,α⟩ as an affine form.
fn lambda_alpha(ring: &ParamRing, alpha: &[i64]) -> Result<ParamPoly> {
    let norm: i64 = alpha.iter().map(|a| a * a).sum();
    let mut out = ring.zero();
    for (i, a) in alpha.iter().enumerate() {
        if *a != 0 {
            out = &out + &ring.var(&format!("lambda{}", i + 1))?.scale(&ratio(2 * a, norm));
        }
    }
    Ok(out)
}

impl GammaProduct {
    fn new(ring: &ParamRing) -> Self {
        GammaProduct { ring: ring.clone(), factors: vec![], two_exponent: ring.zero(), constant: "C".into() }
    }

    fn push(&mut self, side: Side, arg: ParamPoly, root: &[i64]) {
        self.factors.push(GammaFactor { side, arg, root: root.to_vec() });
    }

    /// Exact arguments at the point, in factor order.
    pub fn arguments(&self, lambda: &[Rat], ell: &Rat) -> Result<Vec<Rat>> {
        let pt = point(&self.ring, lambda, ell);
        self.factors.iter().map(|f| f.arg.eval(&pt)).collect()
    }

    pub fn eval(&self, lambda: &[Rat], ell: &Rat) -> Result<Evaluation> {
        let pt = point(&self.ring, lambda, ell);
        let mut ev = Evaluation { zeros: vec![], poles: vec![], log_abs: 0.0, sign: 1.0 };
        for f in &self.factors {
            let x = f.arg.eval(&pt)?;
            if is_gamma_pole(&x) {
                let cert = Certificate { root: f.root.clone(), side: f.side, arg: x.to_string() };
                match f.side {
                    Side::Denominator => ev.zeros.push(cert),
                    Side::Numerator => ev.poles.push(cert),
                }
                continue;
            }
            let (lg, sg) = log_gamma_signed(to_f64(&x));
            match f.side {
                Side::Numerator => ev.log_abs += lg,
                Side::Denominator => ev.log_abs -= lg,
            }
            ev.sign *= sg;
        }
        ev.log_abs += to_f64(&self.two_exponent.eval(&pt)?) * std::f64::consts::LN_2;
        Ok(ev)
    }

    /// Direct product of Γ values in reverse factor order, constant
    /// excluded; a second evaluation order for the log-sum in `eval`.
    pub fn eval_direct(&self, lambda: &[Rat], ell: &Rat) -> Result<f64> {
        let pt = point(&self.ring, lambda, ell);
        let mut v = 2f64.powf(to_f64(&self.two_exponent.eval(&pt)?));
        for f in self.factors.iter().rev() {
            let g = gamma(to_f64(&f.arg.eval(&pt)?));
            match f.side {
                Side::Numerator => v *= g,
                Side::Denominator => v /= g,
            }
        }
        Ok(v)
    }

    /// The product with ℓ replaced by −ℓ.
    pub fn flip_ell(&self) -> Result<GammaProduct> {
        let mut map = BTreeMap::new();
        map.insert("ell".to_string(), -&self.ring.var("ell")?);
        let mut out = self.clone();
        for f in &mut out.factors {
            f.arg = f.arg.substitute(&map, &self.ring)?;
        }
        out.two_exponent = out.two_exponent.substitute(&map, &self.ring)?;
        Ok(out)
    }
}

/// ∏_{α ∈ Σ_o⁺} {Γ(λ_α/4 + m_α/4 + 1/2) Γ(λ_α/4 + m_α/4 + m_{2α}/2)}⁻¹.
pub fn e_product(rs: &RestrictedRootSystem) -> Result<GammaProduct> {
    let ring = lambda_ring(rs.rank)?;
    let mut g = GammaProduct::new(&ring);
    for r in rs.indivisible() {
        push_e_alpha(&mut g, rs, &r.vector)?;
    }
    Ok(g)
}

fn push_e_alpha(g: &mut GammaProduct, rs: &RestrictedRootSystem, alpha: &[i64]) -> Result<()> {
    let ring = g.ring.clone();
    let m = rs.multiplicity(alpha) as i64;
    let m2 = rs.double_mult(alpha) as i64;
    let base = &lambda_alpha(&ring, alpha)?.scale(&ratio(1, 4)) + &ring.constant(ratio(m, 4));
    g.push(Side::Denominator, &base + &ring.constant(ratio(1, 2)), alpha);
    g.push(Side::Denominator, &base + &ring.constant(ratio(m2, 2)), alpha);
    Ok(())
}

/// e(λ) · ∏_{α ∈ Σ_o⁺} 2^{−λ_α/2} Γ(λ_α/2), times C.
pub fn c_product(rs: &RestrictedRootSystem) -> Result<GammaProduct> {
    let mut g = e_product(rs)?;
    let ring = g.ring.clone();
    for r in rs.indivisible() {
        let half = lambda_alpha(&ring, &r.vector)?.scale(&ratio(1, 2));
        g.two_exponent = &g.two_exponent - &half;
        g.push(Side::Numerator, half, &r.vector);
    }
    Ok(g)
}

/// The two longest length classes; a third class is rejected.
fn two_classes(rs: &RestrictedRootSystem) -> Result<Vec<Vec<Vec<i64>>>> {
    let classes = rs.length_classes();
    if classes.len() > 2 {
        return Err(Error::Unsupported(format!(
            "{}: {} root lengths; the line-bundle product covers two",
            rs.label,
            classes.len()
        )));
    }
    Ok(classes.into_iter().map(|(_, rs)| rs.into_iter().map(|r| r.vector.clone()).collect()).collect())
}

/// e(λ, ℓ): long roots contribute {Γ(λ_α/2 + m_{α/2}/4 + (1±ℓ)/2)}⁻¹, the
/// second class contributes e_α(λ).
pub fn e_product_line_bundle(rs: &RestrictedRootSystem) -> Result<GammaProduct> {
    let classes = two_classes(rs)?;
    let ring = lambda_ring(rs.rank)?;
    let ell = ring.var("ell")?;
    let mut g = GammaProduct::new(&ring);
    for alpha in &classes[0] {
        let mh = rs.half_mult(alpha) as i64;
        let base = &lambda_alpha(&ring, alpha)?.scale(&ratio(1, 2)) + &ring.constant(ratio(mh, 4));
        let one = ring.one();
        g.push(Side::Denominator, &base + &(&one + &ell).scale(&ratio(1, 2)), alpha);
        g.push(Side::Denominator, &base + &(&one - &ell).scale(&ratio(1, 2)), alpha);
    }
    if let Some(second) = classes.get(1) {
        for alpha in second {
            push_e_alpha(&mut g, rs, alpha)?;
        }
    }
    Ok(g)
}

/// C e(λ,ℓ) ∏_{k=1,2} ∏_{|α|=|β_k|} 2^{−λ_α/k} Γ(λ_α/k).
pub fn c_product_line_bundle(rs: &RestrictedRootSystem) -> Result<GammaProduct> {
    let classes = two_classes(rs)?;
    let mut g = e_product_line_bundle(rs)?;
    let ring = g.ring.clone();
    for (k, class) in classes.iter().enumerate() {
        for alpha in class {
            let a = lambda_alpha(&ring, alpha)?.scale(&ratio(1, k as i64 + 1));
            g.two_exponent = &g.two_exponent - &a;
            g.push(Side::Numerator, a, alpha);
        }
    }
    Ok(g)
}

/// e at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EValue {
    pub zero: bool,
    /// First vanishing factor's root, if any.
    #[serde(rename = "witnessRoot")]
    pub witness_root: Option<Vec<i64>>,
    pub certificates: Vec<Certificate>,
    pub value: f64,
}

/// c at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CValue {
    pub defined: bool,
    pub value: Option<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    pub poles: Vec<Certificate>,
}

fn e_value(g: &GammaProduct, lambda: &[Rat], ell: &Rat) -> Result<EValue> {
    let ev = g.eval(lambda, ell)?;
    let zero = !ev.zeros.is_empty();
    Ok(EValue {
        zero,
        witness_root: ev.zeros.first().map(|c| c.root.clone()),
        value: if zero { 0.0 } else { ev.sign * ev.log_abs.exp() },
        certificates: ev.zeros,
    })
}

/// Normalized c: C is fixed by the value 1 at ρ (with ℓ = 0).
#[derive(Debug, Clone)]
pub struct CFunction {
    pub product: GammaProduct,
    pub rho: Vec<Rat>,
    /// −ln|product(ρ)| and the sign making c(ρ) = 1.
    log_c: f64,
    sign_c: f64,
}

impl CFunction {
    pub fn new(product: GammaProduct, rho: Vec<Rat>) -> Result<Self> {
        let ev = product.eval(&rho, &Rat::zero())?;
        if !ev.poles.is_empty() || !ev.zeros.is_empty() {
            return Err(Error::InvalidParams(format!("c has a zero or pole at ρ = {rho:?}")));
        }
        Ok(CFunction { product, rho, log_c: -ev.log_abs, sign_c: ev.sign })
    }

    pub fn constant(&self) -> f64 {
        self.sign_c * self.log_c.exp()
    }

    pub fn at(&self, lambda: &[Rat], ell: &Rat) -> Result<CValue> {
        let ev = self.product.eval(lambda, ell)?;
        let c = self.constant();
        if !ev.poles.is_empty() {
            return Ok(CValue { defined: false, value: None, c, poles: ev.poles });
        }
        let value = if ev.zeros.is_empty() { self.sign_c * ev.sign * (ev.log_abs + self.log_c).exp() } else { 0.0 };
        Ok(CValue { defined: true, value: Some(value), c, poles: vec![] })
    }

    /// C times the direct Γ product, for comparing evaluation orders.
    pub fn at_direct(&self, lambda: &[Rat], ell: &Rat) -> Result<f64> {
        Ok(self.constant() * self.product.eval_direct(lambda, ell)?)
    }
}

fn check_rank(rs: &RestrictedRootSystem, lambda: &[Rat]) -> Result<()> {
    if lambda.len() != rs.rank {
        return Err(Error::InvalidParams(format!("λ has {} coordinates, rank is {}", lambda.len(), rs.rank)));
    }
    Ok(())
}

pub fn e_function(rs: &RestrictedRootSystem, lambda: &[Rat]) -> Result<EValue> {
    check_rank(rs, lambda)?;
    e_value(&e_product(rs)?, lambda, &Rat::zero())
}

pub fn c_function(rs: &RestrictedRootSystem, lambda: &[Rat]) -> Result<CValue> {
    check_rank(rs, lambda)?;
    CFunction::new(c_product(rs)?, rs.rho())?.at(lambda, &Rat::zero())
}

/// e(λ,ℓ) and c(λ,ℓ), with C fixed at ℓ = 0.
pub fn e_c_line_bundle(rs: &RestrictedRootSystem, lambda: &[Rat], ell: &Rat) -> Result<(EValue, CValue)> {
    check_rank(rs, lambda)?;
    let e = e_value(&e_product_line_bundle(rs)?, lambda, ell)?;
    let c = CFunction::new(c_product_line_bundle(rs)?, rs.rho())?.at(lambda, ell)?;
    Ok((e, c))
}

/// The CLI record.
pub fn cfun_json(e: &EValue, c: &CValue) -> serde_json::Value {
    serde_json::json!({
        "e": {"zero": e.zero, "witnessRoot": e.witness_root, "value": e.value, "certificates": e.certificates},
        "c": {"defined": c.defined, "value": c.value, "C": c.c, "poles": c.poles},
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{realform, RealForm};
    use crate::params::rat;

    #[test]
    fn glnr2_zero_at_first_factor() {
        let form = realform(RealForm::Glnr { n: 2 }).unwrap();
        let rs = &form.roots;
        // λ_α = −m_α − 2 for α = e1 − e2, m_α = 1: λ = (−3/2, 3/2)
        let e = e_function(rs, &[ratio(-3, 2), ratio(3, 2)]).unwrap();
        assert!(e.zero);
        assert_eq!(e.witness_root, Some(vec![1, -1]));
    }

    #[test]
    fn normalized_at_rho() {
        let form = realform(RealForm::Upq { p: 2, q: 1 }).unwrap();
        let c = c_function(&form.roots, &form.roots.rho()).unwrap();
        assert!((c.value.unwrap() - 1.0).abs() < 1e-12);
        assert!(!e_function(&form.roots, &form.roots.rho()).unwrap().zero);
    }

    #[test]
    fn pole_at_zero_coroot() {
        let form = realform(RealForm::Glnr { n: 2 }).unwrap();
        let c = c_function(&form.roots, &[rat(1), rat(1)]).unwrap();
        assert!(!c.defined);
        assert_eq!(c.poles[0].arg, "0");
    }
}
