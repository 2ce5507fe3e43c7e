//! Reductions modulo left ideals of the shape 𝔫U(g) + Σ U(g)(X − χ(X)),
//! the maps γ and γ_ℓ, and the verification drivers for the identities of
//! the U(p,q), Sp(n,R) and GL(n,R) examples.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::liedata::{algebra, joint_eigenspaces, AlgebraKind, realform, sp_kpq, KCharacter, RealForm, RealFormData};
use crate::linalg::GlMat;
use crate::matop::{central_eigenvalue, ideal_generators, mat_eval_poly, theta_weight, upq_ring, trace_power, GeneratorSet, IdealOptions, OpMatrix};
use crate::minpoly::{upq_lambda_schedule, upq_lambda_schedule_with, MinPoly, ScheduleVariant, ThetaData};
use crate::params::{rat, ratio, ParamPoly, ParamRing, Rat};
use crate::pbw::{BasisGenerator, EnvElement, Mono, OrderedBasis, Zone};

/// What to divide out, relative to a zone-tagged basis.
#[derive(Debug, Clone)]
pub struct ReductionSpec {
    pub form: Arc<RealFormData>,
    pub basis: Arc<OrderedBasis>,
    pub ring: ParamRing,
    /// Value of every COMPACT_RIGHT generator.
    pub k_assign: BTreeMap<usize, ParamPoly>,
    /// Values of 𝔞 generators, keyed by generator index.
    pub a_assign: Option<BTreeMap<usize, ParamPoly>>,
    /// Drop monomials with a leading NILPOTENT_LEFT factor.
    pub drop_nilpotent: bool,
    /// Apply H ↦ H + ρ(H) to the 𝔞 part.
    pub rho_shift: bool,
}

impl ReductionSpec {
    /// Iwasawa reduction mod 𝔫U(g) + Σ U(g)(X − χ(X)).
    pub fn iwasawa(form: &Arc<RealFormData>, chi: &KCharacter) -> Self {
        Self::with_basis(form, &form.iwasawa, chi, true)
    }

    /// Peel of trailing 𝔨 factors only, in the Cartan basis 𝔭 | 𝔨.
    pub fn k_peel(form: &Arc<RealFormData>, chi: &KCharacter) -> Self {
        Self::with_basis(form, &form.cartan, chi, false)
    }

    fn with_basis(form: &Arc<RealFormData>, basis: &Arc<OrderedBasis>, chi: &KCharacter, drop_nilpotent: bool) -> Self {
        let k_assign = basis
            .zone_indices(Zone::CompactRight)
            .into_iter()
            .map(|g| (g, chi.eval(&basis.generator(g).matrix)))
            .collect();
        ReductionSpec {
            form: form.clone(),
            basis: basis.clone(),
            ring: chi.ring().clone(),
            k_assign,
            a_assign: None,
            drop_nilpotent,
            rho_shift: false,
        }
    }

    /// Substitutes the 𝔞 generators, listed in e-order.
    pub fn with_a_values(mut self, values: &[ParamPoly]) -> Result<Self> {
        let idx = self.basis.zone_indices(Zone::AbelianMid);
        if idx.len() != values.len() {
            return Err(Error::InvalidParams(format!("{} 𝔞 values for rank {}", values.len(), idx.len())));
        }
        self.a_assign = Some(idx.into_iter().zip(values.iter().cloned()).collect());
        Ok(self)
    }

    pub fn with_rho_shift(mut self) -> Self {
        self.rho_shift = true;
        self
    }

    /// Symbols naming the 𝔞 generators in results.
    pub fn a_symbols(&self) -> Vec<String> {
        self.basis
            .zone_indices(Zone::AbelianMid)
            .into_iter()
            .map(|g| a_symbol(&self.basis.generator(g).name))
            .collect()
    }

    /// Drop and peel, leaving a normal-ordered representative.
    pub fn residue(&self, u: &EnvElement) -> Result<EnvElement> {
        let u = self.prepare(u)?;
        Ok(peel(&u, &self.k_assign, self.drop_nilpotent))
    }

    fn prepare(&self, u: &EnvElement) -> Result<EnvElement> {
        let u = if u.ring() == &self.ring { u.clone() } else { u.map_coefficients(&self.ring, |c| c.embed(&self.ring))? };
        if u.basis().id() == self.basis.id() {
            Ok(u)
        } else {
            u.change_basis(&self.basis)
        }
    }
}

fn a_symbol(name: &str) -> String {
    name.replace(',', "_")
}

/// Drops 𝔫-leading monomials (if asked) and replaces every trailing
/// COMPACT_RIGHT factor by its value. Generators are zone-sorted, so in a
/// normal-ordered monomial all such factors are trailing and one pass
/// reaches the fixpoint.
pub fn peel(u: &EnvElement, k_assign: &BTreeMap<usize, ParamPoly>, drop_nilpotent: bool) -> EnvElement {
    let basis = u.basis();
    let mut terms: BTreeMap<Mono, ParamPoly> = BTreeMap::new();
    for (m, c) in u.terms() {
        if drop_nilpotent && m.first().is_some_and(|&(g, _)| basis.zone(g as usize) == Zone::NilpotentLeft) {
            continue;
        }
        let mut cut = m.len();
        while cut > 0 && basis.zone(m[cut - 1].0 as usize) == Zone::CompactRight {
            cut -= 1;
        }
        let mut coeff = c.clone();
        for &(g, p) in &m[cut..] {
            let v = &k_assign[&(g as usize)];
            if v.is_zero() {
                coeff = u.ring().zero();
                break;
            }
            coeff = &coeff * &v.pow(p as u32);
        }
        if coeff.is_zero() {
            continue;
        }
        let head: Mono = m[..cut].iter().copied().collect();
        let slot = terms.entry(head).or_insert_with(|| u.ring().zero());
        *slot = &*slot + &coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    EnvElement::from_parts(basis, u.ring(), terms)
}

/// Keeps only the monomials without a leading NILPOTENT_LEFT factor.
pub fn drop_nilpotent(u: &EnvElement) -> EnvElement {
    let basis = u.basis().clone();
    u.filter_terms(|m| !m.first().is_some_and(|&(g, _)| basis.zone(g as usize) == Zone::NilpotentLeft))
}

/// Element of the commutative algebra U(𝔞), as a polynomial in the 𝔞
/// symbols over an extension of the parameter ring.
#[derive(Debug, Clone, PartialEq)]
pub struct AElement {
    pub a_symbols: Vec<String>,
    pub poly: ParamPoly,
}

impl AElement {
    pub fn ring(&self) -> &ParamRing {
        self.poly.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Value when no 𝔞 symbol occurs, in the given parameter ring.
    pub fn scalar(&self, ring: &ParamRing) -> Option<ParamPoly> {
        self.poly.embed(ring).ok()
    }

    /// Substitutes values for the 𝔞 symbols (given in e-order).
    pub fn evaluate(&self, values: &[ParamPoly], target: &ParamRing) -> Result<ParamPoly> {
        let map: BTreeMap<String, ParamPoly> = self.a_symbols.iter().cloned().zip(values.iter().cloned()).collect();
        let mut full = map;
        for s in target.symbols() {
            if !full.contains_key(s) && self.ring().index_of(s).is_some() {
                full.insert(s.clone(), target.var(s)?);
            }
        }
        self.poly.substitute(&full, target)
    }
}

impl std::fmt::Display for AElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Projection to U(𝔞) along the ideal described by `spec`.
pub fn reduce_iwasawa(u: &EnvElement, spec: &ReductionSpec) -> Result<AElement> {
    let r = spec.residue(u)?;
    to_a_element(&r, spec)
}

fn to_a_element(r: &EnvElement, spec: &ReductionSpec) -> Result<AElement> {
    let a_idx = spec.basis.zone_indices(Zone::AbelianMid);
    let a_symbols = spec.a_symbols();
    let ext = spec.ring.extend(a_symbols.iter().cloned())?;
    let vars: Vec<ParamPoly> = a_symbols
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let v = ext.var(name)?;
            Ok(if spec.rho_shift { &v + &ext.constant(spec.form.rho[k].clone()) } else { v })
        })
        .collect::<Result<_>>()?;
    let mut values: BTreeMap<usize, ParamPoly> = BTreeMap::new();
    for (k, &g) in a_idx.iter().enumerate() {
        let v = match &spec.a_assign {
            Some(map) => match map.get(&g) {
                Some(x) => x.embed(&ext)?,
                None => vars[k].clone(),
            },
            None => vars[k].clone(),
        };
        values.insert(g, v);
    }
    let mut out = ext.zero();
    for (m, c) in r.terms() {
        let mut t = c.embed(&ext)?;
        for &(g, p) in m {
            let v = values.get(&(g as usize)).ok_or_else(|| {
                Error::Unsupported(format!("factor `{}` survives the reduction", spec.basis.generator(g as usize).name))
            })?;
            t = &t * &v.pow(p as u32);
        }
        out = &out + &t;
    }
    Ok(AElement { a_symbols, poly: out })
}

/// γ(D): reduction with the zero 𝔨-character followed by the ρ-shift.
pub fn gamma(d: &EnvElement, form: &Arc<RealFormData>) -> Result<AElement> {
    let chi = KCharacter::zero(d.ring(), form.big_n());
    reduce_iwasawa(d, &ReductionSpec::iwasawa(form, &chi).with_rho_shift())
}

/// γ_ℓ(D): reduction modulo Σ U(g)(X + χ_ℓ(X)) followed by the same
/// ρ-shift as γ, so that γ_0 = γ.
pub fn gamma_ell(d: &EnvElement, form: &Arc<RealFormData>, ell: &ParamPoly) -> Result<AElement> {
    let chi = form.chi_ell(d.ring(), ell)?.negate();
    reduce_iwasawa(d, &ReductionSpec::iwasawa(form, &chi).with_rho_shift())
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub residue: String,
    pub pass: bool,
}

impl CheckLine {
    fn zero(label: impl Into<String>, residue: &impl std::fmt::Display, is_zero: bool) -> Self {
        CheckLine { label: label.into(), residue: residue.to_string(), pass: is_zero }
    }
}

/// Verification report; `wall_ms` is kept out of the JSON unless asked for,
/// so reports are reproducible byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub case: String,
    pub parameters: Value,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(rename = "wallMs", skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl Report {
    fn new(case: impl Into<String>, parameters: Value, checks: Vec<CheckLine>, notes: Vec<String>, start: Instant) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            case: case.into(),
            parameters,
            checks,
            pass,
            notes,
            wall_ms: None,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }

    /// Same report with the wall time included in the JSON.
    pub fn timed(mut self) -> Self {
        self.wall_ms = Some(self.elapsed_ms);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Reduces every entry of a generator set; PASS iff all residues vanish.
pub fn verify_membership_zero(gens: &GeneratorSet, spec: &ReductionSpec) -> Result<Report> {
    let start = Instant::now();
    let checks = gens
        .entries
        .par_iter()
        .map(|e| {
            let r = reduce_iwasawa(&e.element, spec)?;
            Ok(CheckLine::zero(format!("({},{})", e.row, e.col), &r, r.is_zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = json!({ "basisId": gens.basis.id(), "entries": gens.entries.len(), "metadata": gens.meta });
    Ok(Report::new("membership", params, checks, vec![], start))
}

// U(p,q)

/// Options for the U(p,q) theorem driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpqTheoremOptions {
    /// Shift λ_1 by +1 (soundness control; the check should FAIL).
    pub perturb: bool,
    /// Use f instead of f̃ when p > q.
    pub plain_f: bool,
    /// Override the default column choice (restricted iff p > q).
    pub restrict_columns: Option<bool>,
    /// Second-family λ values.
    pub schedule: ScheduleVariant,
}

fn upq_form(p: usize, q: usize) -> Result<Arc<RealFormData>> {
    realform(RealForm::Upq { p, q })
}

fn mu_values(ring: &ParamRing, l: usize) -> Result<Vec<ParamPoly>> {
    (1..=l).map(|k| ring.var(&format!("mu{k}"))).collect()
}

/// E_i = 2μ_k for n_{k−1} < i ≤ n_k.
fn upq_a_values(ring: &ParamRing, blocks: &[usize]) -> Result<Vec<ParamPoly>> {
    let mu = mu_values(ring, blocks.len())?;
    let mut out = Vec::new();
    let mut prev = 0;
    for (k, &nk) in blocks.iter().enumerate() {
        for _ in prev..nk {
            out.push(mu[k].scale(&rat(2)));
        }
        prev = nk;
    }
    Ok(out)
}

/// Residues of f(𝔼)_{ab} modulo 𝔫U(g) + Σ U(g)(X − τ_{s,t}(X)), with the
/// 𝔞 part left symbolic. f is split as g·h; the left factor is built with
/// the 𝔫-drop and the right factor with the 𝔨-peel, which is exact because
/// 𝔫U(g) is a right ideal and Σ U(g)(X − τ(X)) a left ideal.
pub fn upq_reduced_entries(
    form: &Arc<RealFormData>,
    ring: &ParamRing,
    roots: &[ParamPoly],
    entries: &[(usize, usize)],
) -> Result<Vec<AElement>> {
    let chi = form.k_character(ring)?;
    let spec = ReductionSpec::iwasawa(form, &chi);
    let e = OpMatrix::e_matrix(&form.iwasawa, ring)?;
    let big = e.size();
    let half = roots.len().div_ceil(2);
    let mut left = OpMatrix::identity(&form.iwasawa, ring, big);
    for r in &roots[..half] {
        left = left.mul_then(&e.add_scalar(&-r), |x| drop_nilpotent(&x));
    }
    let mut right = OpMatrix::identity(&form.iwasawa, ring, big);
    for r in roots[half..].iter().rev() {
        right = e.add_scalar(&-r).mul_then(&right, |x| peel(&x, &spec.k_assign, false));
    }
    entries
        .par_iter()
        .map(|&(a, b)| {
            let mut acc = EnvElement::zero(&form.iwasawa, ring);
            for w in 0..big {
                let (x, y) = (left.get(a, w), right.get(w, b));
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = acc.add(&peel(&x.mul(y), &spec.k_assign, true));
            }
            to_a_element(&acc, &spec)
        })
        .collect()
}

/// Theorem check: every entry of the generator matrix (columns p < j for
/// p > q, all columns for p = q) reduces to 0 once E_i = 2μ_k.
pub fn upq_theorem(p: usize, q: usize, blocks: &[usize], options: UpqTheoremOptions) -> Result<Report> {
    let start = Instant::now();
    let form = upq_form(p, q)?;
    let ring = upq_ring(blocks.len())?;
    let sched = upq_lambda_schedule_with(
        p,
        q,
        blocks,
        &mu_values(&ring, blocks.len())?,
        &ring.var("s")?,
        &ring.var("t")?,
        options.schedule,
    )?;
    let tilde = !(options.plain_f || p == q);
    let poly = if tilde { sched.f_tilde } else { sched.f };
    let mut roots = poly.roots().to_vec();
    if options.perturb {
        // x + λ_1 with λ_1 + 1; f̃ carries its extra root first
        let k = usize::from(tilde);
        roots[k] = &roots[k] - &ring.one();
    }
    let restrict = options.restrict_columns.unwrap_or(p > q);
    let big = p + q;
    let entries: Vec<(usize, usize)> =
        (0..big).flat_map(|a| (0..big).map(move |b| (a, b))).filter(|&(_, b)| !restrict || b >= p).collect();
    let residues = upq_reduced_entries(&form, &ring, &roots, &entries)?;
    let a_vals = upq_a_values(&ring, blocks)?;
    let checks = entries
        .iter()
        .zip(&residues)
        .map(|(&(a, b), r)| {
            let v = r.evaluate(&a_vals, &ring)?;
            Ok(CheckLine::zero(format!("({},{})", a + 1, b + 1), &v, v.is_zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = json!({
        "p": p, "q": q, "blocks": blocks,
        "polynomial": if options.plain_f || p == q { "f" } else { "f~" },
        "roots": roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "restrictColumns": restrict,
        "perturbed": options.perturb,
        "schedule": match options.schedule {
            ScheduleVariant::Standard => "standard",
            ScheduleVariant::ShiftedByQ => "shifted-by-q",
        },
    });
    let case = format!("upq-theorem {p},{q};{blocks:?}{}", if options.perturb { " perturbed" } else { "" });
    Ok(Report::new(case, params, checks, vec![], start))
}

/// Values of the scalar recursion at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionStep {
    /// F_{i,i}, F_{i,ī}, F_{ī,i}, F_{ī,ī} for i = 1..q.
    pub ii: Vec<ParamPoly>,
    pub i_ibar: Vec<ParamPoly>,
    pub ibar_i: Vec<ParamPoly>,
    pub ibar_ibar: Vec<ParamPoly>,
    /// F_{k,k} for k = q+1..p.
    pub kk: Vec<ParamPoly>,
}

impl RecursionStep {
    fn identity(ring: &ParamRing, p: usize, q: usize) -> Self {
        RecursionStep {
            ii: vec![ring.one(); q],
            i_ibar: vec![ring.zero(); q],
            ibar_i: vec![ring.zero(); q],
            ibar_ibar: vec![ring.one(); q],
            kk: vec![ring.one(); p - q],
        }
    }

    pub fn plus(&self, i: usize) -> ParamPoly {
        &self.ibar_ibar[i] + &self.i_ibar[i]
    }

    pub fn minus(&self, i: usize) -> ParamPoly {
        &self.ibar_ibar[i] - &self.i_ibar[i]
    }

    /// Entries as (row, col) 1-based pairs.
    pub fn entries(&self, p: usize, q: usize) -> Vec<((usize, usize), ParamPoly)> {
        let bar = |i: usize| p + q + 1 - i;
        let mut out = Vec::new();
        for i in 1..=q {
            out.push(((i, i), self.ii[i - 1].clone()));
            out.push(((i, bar(i)), self.i_ibar[i - 1].clone()));
            out.push(((bar(i), i), self.ibar_i[i - 1].clone()));
            out.push(((bar(i), bar(i)), self.ibar_ibar[i - 1].clone()));
        }
        for k in q + 1..=p {
            out.push(((k, k), self.kk[k - q - 1].clone()));
        }
        out
    }
}

/// F̃ = 𝔼·F on the five index patterns, modulo the Iwasawa ideal.
fn recursion_tilde(f: &RecursionStep, e: &[ParamPoly], s: &ParamPoly, t: &ParamPoly, p: usize, q: usize) -> RecursionStep {
    let ring = s.ring();
    let c = |n: usize| ring.int(n as i64);
    let half = ratio(1, 2);
    let diag_sum = f.ii.iter().chain(&f.kk).fold(ring.zero(), |a, b| &a + b);
    let ibar_i_sum = f.ibar_i.iter().fold(ring.zero(), |a, b| &a + b);
    let ibar_ibar_sum = f.ibar_ibar.iter().fold(ring.zero(), |a, b| &a + b);
    let nu = |v: usize| if v <= q { &f.ii[v - 1] } else { &f.kk[v - q - 1] };
    let mut out = RecursionStep { ii: vec![], i_ibar: vec![], ibar_i: vec![], ibar_ibar: vec![], kk: vec![] };
    for i in 1..=q {
        let x = i - 1;
        let ep = (&(&e[x] + s) - t).scale(&half);
        let em = (&(&e[x] - s) + t).scale(&half);
        // F̃_{i,i}
        let mut v = s * &f.ii[x];
        v = &v + &(&(&ep - &c(q)) * &f.ibar_i[x]);
        v = &v - &(&diag_sum - &f.ii[x].scale(&rat(p as i64)));
        for j in 0..x {
            v = &v - &(&f.ibar_i[j] - &f.ibar_i[x]);
        }
        out.ii.push(v);
        // F̃_{i,ī}
        let mut v = &(&c(p) + s) * &f.i_ibar[x];
        v = &v + &(&ep * &f.ibar_ibar[x]);
        for j in i..q {
            v = &v + &(&f.ibar_ibar[j] - &f.ibar_ibar[x]);
        }
        out.i_ibar.push(v);
        // F̃_{ī,i}
        let mut v = &(&c(q) + t) * &f.ibar_i[x];
        v = &v + &(&em * &f.ii[x]);
        for w in i + 1..=p {
            v = &v + &(nu(w) - &f.ii[x]);
        }
        out.ibar_i.push(v);
        // F̃_{ī,ī}
        let mut v = t * &f.ibar_ibar[x];
        v = &v + &(&(&em - &c(p)) * &f.i_ibar[x]);
        v = &v - &(&ibar_ibar_sum - &f.ibar_ibar[x].scale(&rat(q as i64)));
        for j in 0..x {
            v = &v - &(&f.i_ibar[j] - &f.i_ibar[x]);
        }
        out.ibar_ibar.push(v);
    }
    for k in 0..p - q {
        let mut v = s * &f.kk[k];
        v = &v - &ibar_i_sum;
        v = &v - &(&diag_sum - &f.kk[k].scale(&rat(p as i64)));
        out.kk.push(v);
    }
    out
}

fn recursion_step(f: &RecursionStep, lambda: &ParamPoly, e: &[ParamPoly], s: &ParamPoly, t: &ParamPoly, p: usize, q: usize) -> RecursionStep {
    let ft = recursion_tilde(f, e, s, t, p, q);
    let comb = |a: &[ParamPoly], b: &[ParamPoly]| a.iter().zip(b).map(|(x, y)| x + &(lambda * y)).collect::<Vec<_>>();
    RecursionStep {
        ii: comb(&ft.ii, &f.ii),
        i_ibar: comb(&ft.i_ibar, &f.i_ibar),
        ibar_i: comb(&ft.ibar_i, &f.ibar_i),
        ibar_ibar: comb(&ft.ibar_ibar, &f.ibar_ibar),
        kk: comb(&ft.kk, &f.kk),
    }
}

/// Runs the five recurrences from F⁰ = 1 through the given λ's.
pub fn upq_recursion_table(p: usize, q: usize, lambdas: &[ParamPoly], e: &[ParamPoly], s: &ParamPoly, t: &ParamPoly) -> Vec<RecursionStep> {
    let mut table = vec![RecursionStep::identity(s.ring(), p, q)];
    for lam in lambdas {
        let next = recursion_step(table.last().unwrap(), lam, e, s, t, p, q);
        table.push(next);
    }
    table
}

/// The printed recurrences for F_{±i}^m, run on their own from F⁰_{±i} = 1.
pub fn upq_pm_recursion(p: usize, q: usize, lambdas: &[ParamPoly], e: &[ParamPoly], s: &ParamPoly, t: &ParamPoly) -> Vec<(Vec<ParamPoly>, Vec<ParamPoly>)> {
    let ring = s.ring();
    let half = ratio(1, 2);
    let mut plus = vec![ring.one(); q];
    let mut minus = vec![ring.one(); q];
    let mut out = vec![(plus.clone(), minus.clone())];
    for lam in lambdas {
        let mut np = Vec::with_capacity(q);
        let mut nm = Vec::with_capacity(q);
        for x in 0..q {
            let ept = (&(&e[x] + s) + t).scale(&half);
            let mut v = &(lam + &ept) * &plus[x];
            for j in 0..x {
                v = &v - &(&plus[j] - &plus[x]);
            }
            np.push(v);
            let mut w = &(&(lam + &ring.int(p as i64)) - &ept) * &minus[x];
            w = &w - &(&(&(&ring.int(p as i64) + s) - t) * &plus[x]);
            for j in x + 1..q {
                w = &w - &(&minus[j] - &minus[x]);
            }
            nm.push(w);
        }
        plus = np;
        minus = nm;
        out.push((plus.clone(), minus.clone()));
    }
    out
}

/// Report of the scalar recursion oracle.
#[derive(Debug, Clone, Serialize)]
pub struct RecursionReport {
    pub p: usize,
    pub q: usize,
    pub blocks: Vec<usize>,
    /// Step m → entry label → value, with E_i = 2μ_k substituted.
    pub table: Vec<BTreeMap<String, String>>,
    pub vanishing: Vec<CheckLine>,
    /// Printed F_{+i} recurrence against F_{ī,ī} + F_{i,ī}.
    #[serde(rename = "pmConsistency")]
    pub pm_consistency: Vec<CheckLine>,
    /// Printed F_{−i} recurrence against F_{ī,ī} − F_{i,ī}. Informational:
    /// the printed coefficient carries −(s+t)/2 where the entrywise
    /// recurrences give +(s+t)/2, so these lines are not part of `pass`.
    #[serde(rename = "minusRecurrence")]
    pub minus_recurrence: Vec<CheckLine>,
    /// Recursion against the PBW pipeline, before 𝔞-substitution.
    #[serde(rename = "dualOracle", skip_serializing_if = "Vec::is_empty")]
    pub dual_oracle: Vec<CheckLine>,
    pub pass: bool,
}

fn entry_label(a: usize, b: usize) -> String {
    format!("F({a},{b})")
}

/// Runs the recursion with E_i = 2μ and checks the vanishing claims; with
/// `dual_oracle` also compares F^{2L} (symbolic E_i) against the PBW
/// reduction of f(𝔼).
pub fn upq_scalar_recursion(p: usize, q: usize, blocks: &[usize], dual_oracle: bool) -> Result<RecursionReport> {
    let l = blocks.len();
    let ring = upq_ring(l)?;
    let s = ring.var("s")?;
    let t = ring.var("t")?;
    let sched = upq_lambda_schedule(p, q, blocks, &mu_values(&ring, l)?, &s, &t)?;
    let e_vals = upq_a_values(&ring, blocks)?;
    let table = upq_recursion_table(p, q, &sched.lambdas, &e_vals, &s, &t);
    let n = |m: usize| if m == 0 { 0 } else { blocks[m - 1] };

    let mut vanishing = Vec::new();
    for (m, step) in table.iter().enumerate() {
        for i in 1..=q {
            if m >= l || (m >= 1 && i <= n(m)) {
                let v = step.plus(i - 1);
                vanishing.push(CheckLine::zero(format!("F_{i}^{m} = 0"), &v, v.is_zero()));
            }
            if m > l && i > n(2 * l - m) {
                let v = &step.i_ibar[i - 1];
                vanishing.push(CheckLine::zero(format!("F_({i},{})^{m} = 0", p + q + 1 - i), v, v.is_zero()));
            }
        }
    }
    let last = &table[2 * l];
    for ((a, b), v) in last.entries(p, q) {
        if b > p || p == q {
            vanishing.push(CheckLine::zero(format!("{}^{} = 0", entry_label(a, b), 2 * l), &v, v.is_zero()));
        }
    }
    let seeds = &table[1];
    let half = ratio(1, 2);
    for i in 0..q {
        let want = (&(&e_vals[i] + &s) - &t).scale(&half);
        let d = &seeds.i_ibar[i] - &want;
        vanishing.push(CheckLine::zero(format!("seed F_({},{})^1", i + 1, p + q - i), &d, d.is_zero()));
    }

    let pm = upq_pm_recursion(p, q, &sched.lambdas, &e_vals, &s, &t);
    let mut pm_consistency = Vec::new();
    let mut minus_recurrence = Vec::new();
    for (m, (plus, minus)) in pm.iter().enumerate() {
        for i in 0..q {
            let dp = &plus[i] - &table[m].plus(i);
            pm_consistency.push(CheckLine::zero(format!("F_{}^{m}", i + 1), &dp, dp.is_zero()));
            let dm = &minus[i] - &table[m].minus(i);
            minus_recurrence.push(CheckLine::zero(format!("F_-{}^{m}", i + 1), &dm, dm.is_zero()));
        }
    }

    let mut dual = Vec::new();
    if dual_oracle {
        let form = upq_form(p, q)?;
        let spec = ReductionSpec::iwasawa(&form, &form.k_character(&ring)?);
        let ext = ring.extend(spec.a_symbols())?;
        let e_sym: Vec<ParamPoly> = spec.a_symbols().iter().map(|x| ext.var(x)).collect::<Result<_>>()?;
        let lam: Vec<ParamPoly> = sched.lambdas.iter().map(|x| x.embed(&ext)).collect::<Result<_>>()?;
        let (se, te) = (s.embed(&ext)?, t.embed(&ext)?);
        let sym_table = upq_recursion_table(p, q, &lam, &e_sym, &se, &te);
        let want = sym_table[2 * l].entries(p, q);
        let idx: Vec<(usize, usize)> = want.iter().map(|&((a, b), _)| (a - 1, b - 1)).collect();
        let got = upq_reduced_entries(&form, &ring, sched.f.roots(), &idx)?;
        for (((a, b), w), g) in want.iter().zip(&got) {
            let d = &g.poly - w;
            dual.push(CheckLine::zero(format!("{} pipeline − recursion", entry_label(*a, *b)), &d, d.is_zero()));
        }
    }

    let table_json = table
        .iter()
        .map(|st| st.entries(p, q).into_iter().map(|((a, b), v)| (entry_label(a, b), v.to_string())).collect())
        .collect();
    let pass = vanishing.iter().chain(&pm_consistency).chain(&dual).all(|c| c.pass);
    Ok(RecursionReport {
        p,
        q,
        blocks: blocks.to_vec(),
        table: table_json,
        vanishing,
        pm_consistency,
        minus_recurrence,
        dual_oracle: dual,
        pass,
    })
}

/// Shilov example: (𝔼 − λ − (s+t)/2)(𝔼 + λ − p − (s+t)/2) modulo the
/// τ_{s,t} peel against the printed block matrix.
pub fn upq_shilov_identity(p: usize, q: usize) -> Result<Report> {
    let start = Instant::now();
    let form = upq_form(p, q)?;
    let ring = ParamRing::new(["lambda", "s", "t"])?;
    let (lam, s, t) = (ring.var("lambda")?, ring.var("s")?, ring.var("t")?);
    let spec = ReductionSpec::k_peel(&form, &form.k_character(&ring)?);
    let basis = &form.cartan;
    let u = (&s + &t).scale(&ratio(1, 2));
    let e = OpMatrix::e_matrix(basis, &ring)?;
    let left = e.add_scalar(&-&(&lam + &u));
    let right = e.add_scalar(&(&(&lam - &ring.int(p as i64)) - &u));
    let m = left.mul(&right);
    let v = (&s - &t).scale(&ratio(1, 2));
    let c = &(&lam + &v) * &(&(&lam - &ring.int(p as i64)) - &v);
    let big = p + q;
    let eij = |i: usize, j: usize| e.get(i, j).clone();
    let checks = (0..big * big)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / big, idx % big);
            let mut want = EnvElement::zero(basis, &ring);
            let top = i < p;
            match (top, j < p) {
                (true, true) => {
                    for k in p..big {
                        want = want.add(&eij(i, k).mul(&eij(k, j)));
                    }
                    if i == j {
                        want = want.add_scalar(&-&(&(&s - &t).scale(&rat(p as i64)) + &c));
                    }
                }
                (true, false) => {}
                (false, true) => want = eij(i, j).scale_rat(&rat(q as i64 - p as i64)),
                (false, false) => {
                    for k in 0..p {
                        want = want.add(&eij(i, k).mul(&eij(k, j)));
                    }
                    if i == j {
                        want = want.add_scalar(&-&c);
                    }
                }
            }
            let d = spec.residue(&m.get(i, j).sub(&want))?;
            Ok(CheckLine::zero(format!("({},{})", i + 1, j + 1), &d, d.is_zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(format!("upq-shilov {p},{q}"), json!({"p": p, "q": q}), checks, vec![], start))
}

/// Sp(n,R): the commutation identities and the block identity
/// (𝔽 − λ)(𝔽 + λ − (n+1)/2) ≡ diag(PQ − (n+1)ℓ, QP) − (λ+ℓ)(λ−ℓ−(n+1)/2).
pub fn hua_sp_system(n: usize) -> Result<Report> {
    let start = Instant::now();
    let form = realform(RealForm::Spnr { n })?;
    let ring = ParamRing::new(["lambda", "ell"])?;
    let (lam, ell) = (ring.var("lambda")?, ring.var("ell")?);
    let basis = &form.cartan;
    let (km, pm, qm) = sp_kpq(n);
    let el = |m: &GlMat| EnvElement::from_matrix(basis, &ring, m);
    let k: Vec<EnvElement> = km.iter().map(el).collect::<Result<_>>()?;
    let pe: Vec<EnvElement> = pm.iter().map(el).collect::<Result<_>>()?;
    let qe: Vec<EnvElement> = qm.iter().map(el).collect::<Result<_>>()?;
    let nn = ratio(n as i64 + 1, 2);
    let mut checks = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut d = pe[i * n + j].scale_rat(&-&nn);
            let mut dq = qe[i * n + j].scale_rat(&-&nn);
            for v in 0..n {
                d = d.add(&k[i * n + v].commutator(&pe[v * n + j]));
                dq = dq.add(&qe[v * n + j].commutator(&k[v * n + i]));
            }
            checks.push(CheckLine::zero(format!("[K,P]({},{})", i + 1, j + 1), &d, d.is_zero()));
            checks.push(CheckLine::zero(format!("[K,Q]({},{})", i + 1, j + 1), &dq, dq.is_zero()));
        }
    }
    let spec = ReductionSpec::k_peel(&form, &form.k_character(&ring)?);
    let f = OpMatrix::from_matrices(basis, &ring, 2 * n, &form.matrix)?;
    let nn_p = ring.constant(nn.clone());
    let m = f.add_scalar(&-&lam).mul(&f.add_scalar(&(&lam - &nn_p)));
    let c = &(&lam + &ell) * &(&(&lam - &ell) - &nn_p);
    let blocks = (0..4 * n * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / (2 * n), idx % (2 * n));
            let mut want = EnvElement::zero(basis, &ring);
            if (a < n) == (b < n) {
                let (i, j) = (a % n, b % n);
                for v in 0..n {
                    want = if a < n {
                        want.add(&pe[i * n + v].mul(&qe[v * n + j]))
                    } else {
                        want.add(&qe[i * n + v].mul(&pe[v * n + j]))
                    };
                }
                if a == b {
                    let mut shift = c.clone();
                    if a < n {
                        shift = &shift + &ell.scale(&rat(n as i64 + 1));
                    }
                    want = want.add_scalar(&-&shift);
                }
            }
            let d = spec.residue(&m.get(a, b).sub(&want))?;
            Ok(CheckLine::zero(format!("block({},{})", a + 1, b + 1), &d, d.is_zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    checks.extend(blocks);
    Ok(Report::new(format!("sp-hua {n}"), json!({"n": n}), checks, vec![], start))
}

/// GL(n,R) lemma: the exact identity for K·P^m and the three congruences
/// modulo U(g)𝔨, for m = 1..m_max.
pub fn gl_lemma_check(n: usize, m_max: u32) -> Result<Report> {
    let start = Instant::now();
    if n < 2 || m_max == 0 {
        return Err(Error::InvalidParams(format!("need n ≥ 2 and m ≥ 1, got n={n}, m={m_max}")));
    }
    let form = realform(RealForm::Glnr { n })?;
    let ring = ParamRing::empty();
    let basis = &form.cartan;
    let h = ratio(1, 2);
    let mut kmats = Vec::new();
    let mut pmats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            kmats.push(GlMat::unit(n, i, j).sub(&GlMat::unit(n, j, i)).scale(&h));
            pmats.push(GlMat::unit(n, i, j).add(&GlMat::unit(n, j, i)).scale(&h));
        }
    }
    let k = OpMatrix::from_matrices(basis, &ring, n, &kmats)?;
    let pm = OpMatrix::from_matrices(basis, &ring, n, &pmats)?;
    let e = OpMatrix::e_matrix(basis, &ring)?;
    let spec = ReductionSpec::k_peel(&form, &KCharacter::zero(&ring, n));
    let half_n = ring.constant(ratio(n as i64, 2));
    let e_shift = e.add_scalar(&-&half_n);
    let e_shift4 = e.add_scalar(&-&ring.constant(ratio(n as i64 - 1, 2)));
    let scalar_mat = |x: &EnvElement| {
        let zero = EnvElement::zero(basis, &ring);
        OpMatrix::new(n, (0..n * n).map(|t| if t / n == t % n { x.clone() } else { zero.clone() }).collect()).unwrap()
    };
    let times_right = |mat: &OpMatrix, x: &EnvElement| mat.map(|y| Ok(y.mul(x))).unwrap();

    // P^0 … P^{m_max+1}
    let mut powers = vec![OpMatrix::identity(basis, &ring, n)];
    for _ in 0..=m_max {
        let next = powers.last().unwrap().mul(&pm);
        powers.push(next);
    }
    let traces: Vec<EnvElement> = powers.iter().map(|x| x.trace()).collect();
    let mut e_pows = vec![OpMatrix::identity(basis, &ring, n)];
    let mut e4_pows = vec![OpMatrix::identity(basis, &ring, n)];
    for _ in 0..m_max {
        e_pows.push(e_pows.last().unwrap().mul(&e_shift));
        e4_pows.push(e4_pows.last().unwrap().mul(&e_shift4));
    }
    let mut checks = Vec::new();
    let peel_all = |d: &OpMatrix| -> Result<Vec<EnvElement>> { d.entries().par_iter().map(|x| spec.residue(x)).collect() };
    let record = |checks: &mut Vec<CheckLine>, label: String, resid: Vec<EnvElement>| {
        let bad: Vec<String> =
            resid.iter().enumerate().filter(|(_, r)| !r.is_zero()).map(|(t, r)| format!("({},{}): {r}", t / n + 1, t % n + 1)).collect();
        let text = if bad.is_empty() { "0".to_string() } else { bad.join("; ") };
        checks.push(CheckLine { label, residue: text, pass: bad.is_empty() });
    };
    for m in 1..=m_max as usize {
        let pmm = &powers[m];
        // K P^m = n/2 P^m − ½ tr(P^m) + Σ_ν (P^m)_{νj} K_{iν}
        let lhs = k.mul(pmm);
        let mut tail = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = EnvElement::zero(basis, &ring);
                for v in 0..n {
                    acc = acc.add(&pmm.get(v, j).mul(k.get(i, v)));
                }
                tail.push(acc);
            }
        }
        let rhs = pmm
            .scale(&half_n)
            .sub(&scalar_mat(&traces[m].scale_rat(&h)))
            .add(&OpMatrix::new(n, tail)?);
        let d = lhs.sub(&rhs);
        record(&mut checks, format!("gln1 m={m}"), d.entries().to_vec());
        // K P^m ≡ n/2 P^m − ½ tr(P^m) mod U(g)𝔨
        let d = lhs.sub(&pmm.scale(&half_n).sub(&scalar_mat(&traces[m].scale_rat(&h))));
        record(&mut checks, format!("gln1 mod k m={m}"), peel_all(&d)?);
        // (𝔼 − n/2) P^m ≡ P^{m+1} − ½ tr(P^m)
        let d = e_shift.mul(pmm).sub(&powers[m + 1]).add(&scalar_mat(&traces[m].scale_rat(&h)));
        record(&mut checks, format!("gln2 m={m}"), peel_all(&d)?);
        // P^m ≡ (𝔼 − n/2)^{m−1} 𝔼 + ½ Σ_{k=2}^m (𝔼 − n/2)^{m−k} tr(P^{k−1})
        let mut rhs = e_pows[m - 1].mul(&e);
        for kk in 2..=m {
            rhs = rhs.add(&times_right(&e_pows[m - kk], &traces[kk - 1]).scale(&ring.constant(h.clone())));
        }
        record(&mut checks, format!("gln3 m={m}"), peel_all(&pmm.sub(&rhs))?);
        // tr(P^m) ≡ tr((𝔼 − (n−1)/2)^{m−1} 𝔼)
        let d = traces[m].sub(&e4_pows[m - 1].mul(&e).trace());
        let r = spec.residue(&d)?;
        checks.push(CheckLine::zero(format!("gln4 m={m}"), &r, r.is_zero()));
    }
    Ok(Report::new(format!("gl-lemma {n}"), json!({"n": n, "m": m_max}), checks, vec![], start))
}

// Generalized Verma membership

/// Basis 𝔫̄_Θ | 𝔭_Θ adapted to a parabolic: generators with positive
/// ad(H_Θ)-eigenvalue are NILPOTENT_LEFT, the rest COMPACT_RIGHT.
pub fn parabolic_basis(theta: &ThetaData) -> Result<Arc<OrderedBasis>> {
    let alg = algebra(theta.kind, theta.n())?;
    let h = theta.h_theta(|i| alg.f(i - 1, i - 1).clone());
    let space: Vec<GlMat> = alg.basis.generators().iter().map(|g| g.matrix.clone()).collect();
    let bound = 2 * (theta.len() as i64 + 1);
    let candidates: Vec<Rat> = (-bound..=bound).map(rat).collect();
    let spaces = joint_eigenspaces(&space, &[h], &candidates)?;
    let mut left = Vec::new();
    let mut rest = Vec::new();
    for (ev, mats) in spaces {
        for m in mats {
            if ev[0] > rat(0) {
                left.push(m);
            } else {
                rest.push(m);
            }
        }
    }
    let gens: Vec<BasisGenerator> = left
        .into_iter()
        .enumerate()
        .map(|(k, m)| BasisGenerator::new(format!("N{k}"), m, Zone::NilpotentLeft))
        .chain(rest.into_iter().enumerate().map(|(k, m)| BasisGenerator::new(format!("B{k}"), m, Zone::CompactRight)))
        .collect();
    let vals: Vec<String> = theta.char_values.iter().map(|c| c.to_string()).collect();
    OrderedBasis::new(
        format!("{}{}:parabolic{:?}{:?}[{}]", theta.kind, theta.n(), theta.blocks, theta.variant, vals.join(";")),
        alg.big_n,
        gens,
    )
}

/// Checks that every entry of q_Θ(𝔽) and every Δ_j − λ(Δ_j) lies in the
/// left ideal Σ U(g)(X − λ(X)), X ∈ 𝔭_Θ, i.e. annihilates the generating
/// vector of the generalized Verma module.
pub fn verify_theta_membership(theta: &ThetaData) -> Result<Report> {
    theta_membership(theta, &ideal_generators(theta, IdealOptions::default())?)
}

fn theta_membership(theta: &ThetaData, gens: &GeneratorSet) -> Result<Report> {
    let start = Instant::now();
    let basis = parabolic_basis(theta)?;
    let k_assign: BTreeMap<usize, ParamPoly> = basis
        .zone_indices(Zone::CompactRight)
        .into_iter()
        .map(|g| (g, theta.character_on(&basis.generator(g).matrix)))
        .collect();
    let mut items: Vec<(String, EnvElement)> =
        gens.entries.iter().map(|e| (format!("q({},{})", e.row, e.col), e.element.clone())).collect();
    for (c, d) in gens.central.iter().zip(gens.central_differences()) {
        items.push((format!("Delta_{}", c.j), d));
    }
    let checks = items
        .par_iter()
        .map(|(label, x)| {
            let r = peel(&x.change_basis(&basis)?, &k_assign, false);
            Ok(CheckLine::zero(label.clone(), &r, r.is_zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = json!({"kind": theta.kind.to_string(), "blocks": theta.blocks, "variant": theta.variant});
    Ok(Report::new(format!("theta-membership {}{}", theta.kind, theta.n()), params, checks, vec![], start))
}

/// Reduces an exported generator set with the reduction its metadata names:
/// the U(p,q) Iwasawa reduction with E_i = 2μ_k, or the generalized Verma
/// peel for Θ data.
pub fn reduce_generator_set(gens: &GeneratorSet) -> Result<Report> {
    match gens.meta.form {
        Some(RealForm::Upq { p, q }) => {
            let spec = upq_theorem_spec(p, q, &gens.meta.blocks)?;
            if spec.ring != gens.ring {
                return Err(Error::RingMismatch(spec.ring.symbols().join(","), gens.ring.symbols().join(",")));
            }
            verify_membership_zero(gens, &spec)
        }
        Some(other) => Err(Error::Unsupported(format!("no reduction for {other} generator sets"))),
        None => {
            let kind = AlgebraKind::parse(&gens.meta.kind)?;
            let vals = gens.meta.char_values.iter().map(|v| gens.ring.parse(v)).collect::<Result<_>>()?;
            let theta = ThetaData::new(kind, gens.meta.blocks.clone(), vals, gens.meta.variant)?;
            theta_membership(&theta, gens)
        }
    }
}

/// λ(tr 𝔽^j) through the Verma reduction for a Θ; exposed for callers that
/// need eigenvalues without building the whole generator set.
pub fn theta_central_value(theta: &ThetaData, order: u32) -> Result<ParamPoly> {
    let alg = algebra(theta.kind, theta.n())?;
    let f = OpMatrix::from_matrices(&alg.verma, theta.ring(), alg.big_n, &alg.f_matrices)?;
    central_eigenvalue(&trace_power(&f, order), &alg.verma, &theta_weight(&alg, theta))
}

/// f(𝔼) for U(p,q) in full, for callers that want the unreduced matrix.
pub fn upq_generator_matrix(p: usize, q: usize, poly: &MinPoly) -> Result<OpMatrix> {
    let form = upq_form(p, q)?;
    let e = OpMatrix::e_matrix(&form.iwasawa, poly.ring())?;
    mat_eval_poly(poly, &e)
}

/// Iwasawa spec for U(p,q) with τ_{s,t} and E_i = 2μ_k, over `upq_ring(L)`.
pub fn upq_theorem_spec(p: usize, q: usize, blocks: &[usize]) -> Result<ReductionSpec> {
    let form = upq_form(p, q)?;
    let ring = upq_ring(blocks.len())?;
    ReductionSpec::iwasawa(&form, &form.k_character(&ring)?).with_a_values(&upq_a_values(&ring, blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iwasawa_basics() {
        let form = upq_form(2, 1).unwrap();
        let ring = ParamRing::new(["s", "t"]).unwrap();
        let spec = ReductionSpec::iwasawa(&form, &form.k_character(&ring).unwrap());
        let y = EnvElement::generator(&form.iwasawa, &ring, form.iwasawa.index_of("Y1").unwrap()).unwrap();
        assert!(reduce_iwasawa(&y, &spec).unwrap().is_zero());
        let e11 = EnvElement::e(&form.iwasawa, &ring, 1, 1).unwrap();
        assert_eq!(reduce_iwasawa(&e11, &spec).unwrap().poly, spec.ring.extend(["E1"]).unwrap().var("s").unwrap());
        // E_{1,3} = ½E_1 + ½Y_1 + ½(E_11 − E_33)
        let e13 = EnvElement::e(&form.iwasawa, &ring, 1, 3).unwrap();
        let r = reduce_iwasawa(&e13, &spec).unwrap();
        assert_eq!(r.poly, r.ring().parse("E1/2 + s/2 - t/2").unwrap());
    }

    #[test]
    fn shilov_small() {
        let r = upq_shilov_identity(1, 1).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn theorem_small_and_control() {
        assert!(upq_theorem(1, 1, &[1], UpqTheoremOptions::default()).unwrap().pass);
        let bad = upq_theorem(1, 1, &[1], UpqTheoremOptions { perturb: true, ..Default::default() }).unwrap();
        assert!(!bad.pass);
        let shifted =
            UpqTheoremOptions { schedule: ScheduleVariant::ShiftedByQ, ..Default::default() };
        assert!(!upq_theorem(1, 1, &[1], shifted).unwrap().pass);
    }

    #[test]
    fn recursion_small() {
        for (p, q, b) in [(1, 1, vec![1]), (2, 1, vec![1]), (2, 2, vec![2])] {
            let r = upq_scalar_recursion(p, q, &b, true).unwrap();
            assert!(r.pass, "{p},{q}: {:?}", r.vanishing.iter().chain(&r.dual_oracle).filter(|c| !c.pass).collect::<Vec<_>>());
        }
    }
}
